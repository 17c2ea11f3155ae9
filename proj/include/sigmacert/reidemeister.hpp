#pragma once

// Reidemeister numbers: twisted classes sigma a phi(sigma)^-1 in finite groups,
// the cokernel formula on abelian groups and the fixed-character criterion.

#include <optional>
#include <string>
#include <vector>

#include "sigmacert/characters.hpp"

namespace sigmacert {

struct ReidemeisterResult {
    enum class Method { OrbitEnumeration, Cokernel, FixedCharacter } method = Method::OrbitEnumeration;
    std::optional<Integer> count;  // nullopt: infinite
    /// OrbitEnumeration: the full partition of the group into twisted classes.
    std::vector<std::vector<std::uint32_t>> classes;
    /// Cokernel: invariant factors of coker(phi - id), 0 for a free summand.
    ZVector cokernel;
    std::optional<Character> fixed_character;

    bool infinite() const { return !count.has_value(); }
};

std::string to_string(ReidemeisterResult::Method m);

/// phi given by the image of every element. Throws NotAHomomorphism when phi
/// is not an endomorphism of the table.
ReidemeisterResult twisted_classes_finite(const FiniteGroupTable& g, const std::vector<std::uint32_t>& phi);
/// phi an endomorphism of a FiniteGroup descriptor.
ReidemeisterResult twisted_classes_finite(const Homomorphism& phi);

/// Z/f_1 + ... + Z/f_n (f_i = 0 is a copy of Z) with phi(e_j) = column j of m.
/// Throws InvalidArgument when m does not respect the torsion orders.
ReidemeisterResult reidemeister_abelian(const ZVector& factors, const IntMatrix& m);
/// phi an endomorphism of a FinitelyGeneratedAbelian descriptor.
ReidemeisterResult reidemeister_abelian(const Homomorphism& phi);

/// Infinite with witness chi when chi o phi = chi exactly, nullopt otherwise.
/// phi must be an exactly validated endomorphism of the group of chi.
std::optional<ReidemeisterResult> fixed_character_criterion(const Character& chi, const Homomorphism& phi);

/// Number of ordinary conjugacy classes.
std::size_t conjugacy_class_count(const FiniteGroupTable& g);

Json to_json(const ReidemeisterResult& r, const GroupDescriptor* group = nullptr);

}  // namespace sigmacert
