#pragma once

// Sigma^1 complements from a rule table, plus non-certifying Cayley ball evidence.

#include <string>
#include <vector>

#include "sigmacert/characters.hpp"
#include "sigmacert/sphere.hpp"

namespace sigmacert {

/// Orientation of the single complement point of BS(1,n) and its relatives.
inline constexpr const char* kBsOrientation =
    "for t a t^-1 = a^n the Sigma^1 complement is the class with chi(t) = +1, chi(a) = 0";
/// Rational classes count as transcendental (all ratios of image elements are rational).
inline constexpr const char* kRationalTranscendental = "rational classes are treated as transcendental";

/// How a complement was obtained; coordinates are character coordinates of the group.
struct SigmaDerivation {
    SigmaSet complement;
    std::string rule;
    std::string statement;
    std::vector<std::string> conventions;
    std::vector<SigmaDerivation> premises;
};

SigmaDerivation sigma1_complement(const GroupDescriptor& g);

/// Restricts a kernel set to the sphere of F, in coordinates of F's basis.
SigmaSet restrict_to_fix(const SigmaSet& kernel_set, const FixSubspace& f);

Json to_json(const SigmaDerivation& d);

/// Connectivity statistics of the subgraph on {chi >= 0} inside a Cayley ball.
/// Never a premise of a certificate.
struct EvidenceReport {
    enum class Verdict { Connected, Disconnected, Inconclusive } verdict = Verdict::Inconclusive;
    std::string group;
    std::vector<std::string> generators;  // the ball depends on them
    QVector character;  // rational coordinates
    std::size_t radius = 0;
    std::size_t inner_radius = 0;
    std::size_t ball_size = 0;
    std::size_t nonnegative = 0;
    std::size_t components = 0;
    std::size_t inner_nonnegative = 0;
    std::size_t inner_reached = 0;
    Rational connected_fraction;
};

std::string to_string(EvidenceReport::Verdict v);

inline constexpr std::size_t kEvidenceMargin = 2;

/// Vertices of the inner ball (radius R - kEvidenceMargin) with chi >= 0 are checked for a path
/// to the identity inside the nonnegative part of the ball of radius R.
EvidenceReport ball_evidence(const GroupPtr& g, const Character& chi, std::size_t radius,
                             std::size_t vertex_budget = kDefaultVertexBudget);

Json to_json(const EvidenceReport& r);

}  // namespace sigmacert
