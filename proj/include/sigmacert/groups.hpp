#pragma once

// Group descriptors, words, homomorphisms and per-family word problem solvers.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "sigmacert/zlinalg.hpp"

namespace sigmacert {

struct Letter {
    std::uint32_t gen = 0;
    int sign = 1;  // +1 or -1

    Letter inverse() const { return {gen, -sign}; }
    friend auto operator<=>(const Letter&, const Letter&) = default;
};

using Word = std::vector<Letter>;

Word inverse(const Word& w);
Word concat(const Word& a, const Word& b);
Word free_reduce(const Word& w);
Word power(const Word& w, long k);
Word commutator(const Word& a, const Word& b);
/// Exponent sum of each generator.
ZVector exponent_sums(const Word& w, std::size_t generator_count);

struct WordHash {
    std::size_t operator()(const Word& w) const noexcept;
};

// ------------------------------------------------------------- assertions

enum class AssertionKind {
    HomsTrivial,
    CommutatorContainsFiniteIndexInfiniteSimple,
    B1StableAllFiniteIndex,
    ClassTag,
    ThetaImageInner,
    CentralInOut,
    Characteristic,
    FreelyIndecomposable,
};

/// Families of the free/direct product constructions: divisible, torsion,
/// acyclic, higher-rank lattice.
enum class GroupClassTag { D, T, A, L };

/// A property the user vouches for. Never created by the library itself.
struct PropertyAssertion {
    AssertionKind kind = AssertionKind::HomsTrivial;
    std::vector<std::string> about;  // group names the assertion talks about
    std::optional<GroupClassTag> tag;
    std::string justification;
    std::string source = "user";

    friend bool operator==(const PropertyAssertion&, const PropertyAssertion&) = default;
};

std::string to_string(AssertionKind k);
AssertionKind assertion_kind_from_string(const std::string& s);
std::string to_string(GroupClassTag t);
GroupClassTag class_tag_from_string(const std::string& s);

// ------------------------------------------------------------- finite groups

/// Multiplication table; element 0 is the identity.
class FiniteGroupTable {
public:
    FiniteGroupTable(std::vector<std::string> elements, std::vector<std::vector<std::uint32_t>> table);

    std::size_t order() const { return elements_.size(); }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return table_[a][b]; }
    std::uint32_t inv(std::uint32_t a) const { return inverse_[a]; }
    const std::vector<std::string>& elements() const { return elements_; }
    const std::vector<std::vector<std::uint32_t>>& table() const { return table_; }
    std::optional<std::uint32_t> element_index(std::string_view name) const;
    bool is_abelian() const;

    friend bool operator==(const FiniteGroupTable& a, const FiniteGroupTable& b) { return a.table_ == b.table_; }

private:
    std::vector<std::string> elements_;
    std::vector<std::vector<std::uint32_t>> table_;
    std::vector<std::uint32_t> inverse_;
};

using FiniteTablePtr = std::shared_ptr<const FiniteGroupTable>;

// ------------------------------------------------------------- descriptors

class GroupDescriptor;
using GroupPtr = std::shared_ptr<const GroupDescriptor>;

namespace family {

struct FinitePresentation {
    std::vector<std::string> generators;
    std::vector<Word> relators;
};

struct FreeGroup {
    std::size_t rank = 0;
    std::vector<std::string> generators;
};

/// Z/f_1 + ... + Z/f_k with f_i = 0 meaning a copy of Z.
struct FinitelyGeneratedAbelian {
    ZVector factors;
    std::vector<std::string> generators;
};

/// <a, t | t a t^-1 = a^n>
struct BaumslagSolitar1n {
    Integer n;
};

/// <a, t_1..t_r | [t_i, t_j], t_i a t_i^-1 = a^(p_i^y_i)> for n = prod p_i^y_i.
struct GammaN {
    Integer n;
    std::vector<std::pair<Integer, unsigned>> factorization;
};

struct FiniteGroup {
    FiniteTablePtr table;
};

struct DirectProduct {
    std::vector<GroupPtr> factors;
};

struct FreeProduct {
    std::vector<GroupPtr> factors;
};

/// 1 -> H -> G -> K -> 1 with K finite. G is generated by the generators of H
/// together with one transversal letter s_q = nu(q) per non-identity q in K.
struct FiniteExtension {
    GroupPtr kernel;
    FiniteTablePtr quotient;
    /// Name of the letter nu(q), indexed by quotient element; entry 0 unused.
    std::vector<std::string> transversal;
    /// conjugation[q][h]: nu(q)^-1 h nu(q) as a word in kernel generators.
    std::vector<std::vector<Word>> conjugation;
    /// nu(q) nu(r) = nu(qr) c(q, r) with c(q, r) a kernel word; all q, r != 1.
    std::map<std::pair<std::uint32_t, std::uint32_t>, Word> cocycle;
};

struct CharacteristicQuotient {
    std::string ambient;
    GroupPtr quotient;
    std::string justification;
};

enum class BuiltinKind { ThompsonF, Lamplighter };

struct Builtin {
    BuiltinKind kind = BuiltinKind::ThompsonF;
    Integer parameter;  // lamp group order for Lamplighter
};

}  // namespace family

using FamilyVariant = std::variant<family::FinitePresentation, family::FreeGroup, family::FinitelyGeneratedAbelian,
                                   family::BaumslagSolitar1n, family::GammaN, family::FiniteGroup,
                                   family::DirectProduct, family::FreeProduct, family::FiniteExtension,
                                   family::CharacteristicQuotient, family::Builtin>;

class GroupDescriptor {
public:
    GroupDescriptor(std::string name, FamilyVariant family, std::vector<PropertyAssertion> assertions = {});

    const std::string& name() const { return name_; }
    const FamilyVariant& family() const { return family_; }
    std::string family_name() const;

    template <class T>
    const T* as() const {
        return std::get_if<T>(&family_);
    }

    const std::vector<std::string>& generators() const { return generators_; }
    std::size_t generator_count() const { return generators_.size(); }
    std::optional<std::uint32_t> generator_index(std::string_view name) const;

    const std::vector<Word>& relators() const { return relators_; }
    /// False when relators() is only a finite part of an infinite presentation
    /// (it still presents the abelianization correctly).
    bool presentation_complete() const { return presentation_complete_; }
    /// False when the relation matrix is not known (characteristic quotients).
    bool abelianization_known() const { return abelianization_known_; }

    const std::vector<PropertyAssertion>& assertions() const { return assertions_; }
    std::vector<PropertyAssertion> assertions_of_kind(AssertionKind k) const;

    std::string format_word(const Word& w) const;

private:
    std::string name_;
    FamilyVariant family_;
    std::vector<PropertyAssertion> assertions_;
    std::vector<std::string> generators_;
    std::vector<Word> relators_;
    bool presentation_complete_ = true;
    bool abelianization_known_ = true;
};

// Constructors validating the structural invariants of each family.
GroupPtr make_presentation(std::vector<std::string> generators, std::vector<Word> relators, std::string name = {});
GroupPtr make_free_group(std::size_t rank, std::vector<std::string> generators = {}, std::string name = {});
GroupPtr make_abelian(ZVector factors, std::vector<std::string> generators = {}, std::string name = {});
GroupPtr make_baumslag_solitar(const Integer& n, std::string name = {});
GroupPtr make_gamma(const Integer& n, std::string name = {});
GroupPtr make_finite(FiniteTablePtr table, std::string name = {});
GroupPtr make_direct_product(std::vector<GroupPtr> factors, std::string name = {});
GroupPtr make_free_product(std::vector<GroupPtr> factors, std::string name = {});
GroupPtr make_finite_extension(family::FiniteExtension ext, std::string name = {});
GroupPtr make_characteristic_quotient(std::string ambient, GroupPtr quotient, std::string justification);
GroupPtr make_thompson_f();
GroupPtr make_lamplighter(const Integer& n);
/// Same group, assertions replaced.
GroupPtr with_assertions(const GroupPtr& g, std::vector<PropertyAssertion> assertions);

/// Prime factorization by trial division.
std::vector<std::pair<Integer, unsigned>> factorize(const Integer& n);

/// Relators x generators matrix of exponent sums.
IntMatrix relation_matrix(const GroupDescriptor& g);

/// Offset of each factor's generators inside a product's generator list.
std::vector<std::size_t> factor_offsets(const std::vector<GroupPtr>& factors);

// ------------------------------------------------------------- word problems

class WordProblemSolver {
public:
    virtual ~WordProblemSolver() = default;
    virtual Word normal_form(const Word& w) const = 0;
    /// normal_form(nf + s) for a word already in normal form.
    virtual Word multiply(const Word& nf, Letter s) const;
};

using SolverPtr = std::shared_ptr<const WordProblemSolver>;

bool supports_normal_form(const GroupDescriptor& g);
/// Throws UnsupportedFamily for families without a word problem strategy.
SolverPtr word_problem(const GroupDescriptor& g);
Word normal_form(const Word& w, const GroupDescriptor& g);

struct CayleyBall {
    std::vector<std::string> generator_names;
    std::vector<Letter> letters;         // s and s^-1 for every generator
    std::vector<Word> vertices;          // normal forms, BFS order, vertices[0] = identity
    std::vector<std::size_t> length;     // word length of each vertex
    std::vector<std::vector<std::size_t>> neighbors;  // indices of g s inside the ball
    std::unordered_map<Word, std::size_t, WordHash> index;

    std::size_t size() const { return vertices.size(); }
    std::optional<std::size_t> index_of(const Word& nf) const;
};

inline constexpr std::size_t kDefaultVertexBudget = 200000;

/// One-relator presentation <x, y | x y x^-1 y^-k> up to rotation, inversion
/// and inverting generators: stable letter T = t_gen^t_sign acts by T a T^-1 = a^k.
struct BsShape {
    std::uint32_t t_gen = 0;
    int t_sign = 1;
    std::uint32_t a_gen = 0;
    Integer k;
};

std::optional<BsShape> recognize_bs_shape(const GroupDescriptor& g);

CayleyBall ball(const GroupDescriptor& g, std::size_t radius, std::size_t vertex_budget = kDefaultVertexBudget);

// ------------------------------------------------------------- homomorphisms

enum class ValidationLevel { Unvalidated, AbelianizedOnly, Exact };

std::string to_string(ValidationLevel v);

struct Homomorphism {
    GroupPtr source;
    GroupPtr target;
    std::vector<Word> images;  // one per source generator, in target generators
    ValidationLevel level = ValidationLevel::Unvalidated;
};

Word map_word(const Homomorphism& phi, const Word& w);
/// outer o inner.
Homomorphism compose(const Homomorphism& outer, const Homomorphism& inner);
Homomorphism identity_homomorphism(const GroupPtr& g);

/// Checks relator images; sets and returns phi.level. Throws NotAHomomorphism
/// when a relator image is provably nontrivial.
ValidationLevel validate_homomorphism(Homomorphism& phi);

/// Rational matrix of phi on exponent-sum vectors (target gens x source gens).
IntMatrix exponent_matrix(const Homomorphism& phi);

}  // namespace sigmacert
