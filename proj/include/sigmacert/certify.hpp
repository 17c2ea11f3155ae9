#pragma once

// Certificates for class S membership, fixed characters, R_inf and R_chi_inf,
// with a replayable trace of computed, asserted and cited steps.

#include <optional>
#include <string>
#include <vector>

#include "sigmacert/characters.hpp"
#include "sigmacert/sigma.hpp"

namespace sigmacert {

inline constexpr const char* kToolName = "sigmacert";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kCertificateSchema = "sigmacert.certificate/1";

enum class Conclusion { Rinf, Rchi, RphiInf, ClassS, ClassSTilde, B1Equal, NotCertified };

std::string to_string(Conclusion c);
Conclusion conclusion_from_string(const std::string& s);

/// A premise that can be re-verified from its data alone.
struct Check {
    std::string id;
    std::string kind;
    Json data;
    bool passed = false;
};

struct Certificate;

/// kind: "computed", "asserted", "cited" or "imported".
struct TraceStep {
    std::string rule;
    std::string statement;
    std::string kind;
    std::vector<std::string> checks;
    std::vector<std::size_t> assertions;  // indices into Certificate::assertions
    std::vector<Certificate> premises;
};

struct Certificate {
    Conclusion conclusion = Conclusion::NotCertified;
    std::string reason;  // NotCertified only
    /// A computed fact contradicts a hypothesis (b1 mismatch).
    bool refuted = false;
    std::string subject;
    std::string operation;
    Json inputs;
    std::vector<TraceStep> trace;
    std::vector<Check> checks;
    Json witnesses = Json::object();
    std::vector<PropertyAssertion> assertions;
    std::vector<std::string> imported_facts;
    std::vector<std::string> conventions;
    std::optional<Character> witness_character;

    bool certified() const { return conclusion != Conclusion::NotCertified; }
};

Json to_json(const Certificate& c);

// ------------------------------------------------------------- operations

Certificate check_class_S(const GroupPtr& g);
/// Route A (all complement vertices) or Route B (isolated points).
Certificate fixed_character_pipeline(const GroupPtr& g);
/// Directly, or through the quotient of a CharacteristicQuotient descriptor.
Certificate certify_Rchi(const GroupPtr& g);
/// R_inf from an R_chi_inf certificate (a fixed character forces R_inf).
Certificate rinf_from_rchi(const Certificate& rchi);

/// G a FiniteExtension whose kernel has the inner certificate, or a product
/// G x H / G * H where the inner certificate is about G.
Certificate certify_Rinf_extension(const GroupPtr& g, const Certificate& inner);

struct SubgroupData {
    GroupPtr subgroup;
};

/// Explicit finite index subgroups (index verified structurally) and/or the
/// stability assertions carried by g.
Certificate check_b1_stability(const GroupPtr& g, const std::vector<SubgroupData>& subgroups = {});

/// H <= G and H_hat <= G_hat of finite index with H isomorphic to H_hat.
struct CommensurationData {
    GroupPtr group;
    GroupPtr subgroup;
    GroupPtr target;
    GroupPtr target_subgroup;
};

CommensurationData load_commensuration(const std::string& path);
Certificate certify_commensurable(const CommensurationData& data);

/// phi an endomorphism of the kernel of the extension e.
Certificate central_out_invariance(const GroupPtr& e, const Homomorphism& phi);

/// [G : H] when it follows from the descriptors (equal groups, extension kernel,
/// product with finite cofactors).
std::optional<Integer> structural_index(const GroupDescriptor& g, const GroupDescriptor& h);
/// Equal descriptors up to names.
bool same_group_description(const GroupDescriptor& a, const GroupDescriptor& b);

// ------------------------------------------------------------- replay

struct ReplayReport {
    bool checks_verified = true;
    bool identical = true;
    std::vector<std::string> failures;

    bool ok() const { return checks_verified && identical; }
};

/// Re-verifies every check from its data and re-derives the certificate from
/// its operation and inputs, comparing the serialization byte for byte.
ReplayReport replay(const Json& certificate);
/// Re-runs the operation recorded in a certificate.
Certificate rerun(const Json& certificate);

/// The witness character of an R_chi_inf certificate is fixed by phi.
bool witness_fixed_by(const Certificate& c, const Homomorphism& phi);

}  // namespace sigmacert
