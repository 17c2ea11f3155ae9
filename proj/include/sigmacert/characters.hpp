#pragma once

// Characters G -> (R, +), their classes on the character sphere, image
// subgroups and the rigidity / transcendence decisions.

#include <optional>
#include <string>
#include <vector>

#include "sigmacert/group_io.hpp"
#include "sigmacert/groups.hpp"
#include "sigmacert/scalar.hpp"

namespace sigmacert {

AbelianStructure abelianization(const GroupDescriptor& g);

/// Rows form the HNF basis of {v in Z^gens : R v = 0}. A character with
/// coordinates w takes the values v = basis^T w on the generators.
IntMatrix character_basis(const GroupDescriptor& g);
std::size_t betti_number(const GroupDescriptor& g);

class Character {
public:
    const GroupPtr& group() const { return group_; }
    const FieldPtr& field() const { return field_; }
    const std::vector<Scalar>& values() const { return values_; }
    const std::vector<Scalar>& coordinates() const { return coordinates_; }

    bool is_trivial() const;
    bool is_rational() const;
    /// Coordinates when all are rational.
    std::optional<QVector> rational_coordinates() const;
    Scalar evaluate(const Word& w) const;
    Character scaled(const Scalar& s) const;

    friend bool operator==(const Character& a, const Character& b);

private:
    friend Character character_from_values(GroupPtr, std::vector<Scalar>);
    friend Character character_from_coordinates(GroupPtr, std::vector<Scalar>);
    GroupPtr group_;
    FieldPtr field_;
    std::vector<Scalar> values_;
    std::vector<Scalar> coordinates_;
};

/// Throws NotACharacter naming the first relator that does not vanish.
Character character_from_values(GroupPtr g, std::vector<Scalar> values);
Character character_from_coordinates(GroupPtr g, std::vector<Scalar> coordinates);
Character rational_character(GroupPtr g, const QVector& coordinates);

/// Rational b1(source) x b1(target) matrix sending coordinates of chi to those of chi o phi.
QMatrix pullback_matrix(const Homomorphism& phi);
Character pullback(const Character& chi, const Homomorphism& phi);

struct CharacterClass {
    Character representative;
    bool rational = false;
    std::optional<ZVector> integer_coordinates;
};

CharacterClass canonical_class_rep(const Character& chi);

/// Z-basis of Im(chi), canonical: HNF of the values flattened over the keys
/// (symbol monomial, power of theta), scaled back by the common denominator.
struct ImageSubgroup {
    std::vector<Scalar> basis;
    std::size_t rank() const { return basis.size(); }
    friend bool operator==(const ImageSubgroup& a, const ImageSubgroup& b) { return a.basis == b.basis; }
};

ImageSubgroup image_subgroup(const Character& chi);

enum class Decision { True, False, Unknown };
std::string to_string(Decision d);

struct RigidityResult {
    enum class Verdict { Rigid, NotRigid, Unknown } verdict = Verdict::Unknown;
    /// r != +-1 with r Im = Im, verified as an integral unimodular action on the image basis.
    std::optional<Scalar> witness;
    std::size_t multiplier_rank = 0;  // 0 when the multiplier ring was not computed
    std::string reason;
};

std::string to_string(RigidityResult::Verdict v);

RigidityResult is_rigid(const Character& chi);

struct TranscendenceResult {
    Decision value = Decision::Unknown;
    std::string reason;
};

TranscendenceResult is_transcendental(const Character& chi);

/// Multiplication by r as a rational matrix on the coordinates of `basis`
/// (column i = coordinates of r * basis[i]); nullopt if r*Im leaves the span.
std::optional<QMatrix> multiplier_action(const Scalar& r, const std::vector<Scalar>& basis);

/// Characters of the kernel H fixed by every transversal conjugation, in H coordinates.
struct FixSubspace {
    GroupPtr kernel;
    Subspace subspace;
};

FixSubspace fix_subspace(const GroupDescriptor& extension);

/// Inclusion of the kernel of a finite extension (its generators come first).
Homomorphism kernel_inclusion(const GroupPtr& extension);
/// b1(H) x b1(G): restriction of characters of G to the kernel H.
QMatrix restriction_matrix(const GroupPtr& extension);

// ------------------------------------------------------------- JSON

inline constexpr const char* kCharacterSchema = "sigmacert.character/1";

FieldPtr field_from_json(const Json& j, const std::string& location = "$");
Json to_json(const CoefficientField& f);
Scalar scalar_from_json(const Json& j, const FieldPtr& field, const std::string& location = "$");
Json scalar_to_json(const Scalar& s);

Character character_from_json(const Json& doc, const std::string& location = "$", const std::string& base_dir = {});
/// Uses `group` instead of the document's group entry (which may then be absent).
Character character_from_json(const Json& doc, GroupPtr group, const std::string& location = "$");
Json to_json(const Character& chi);
Character load_character(const std::string& path);

}  // namespace sigmacert
