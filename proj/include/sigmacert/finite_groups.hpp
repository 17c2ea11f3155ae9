#pragma once

// Small library of finite groups as multiplication tables. Element names are
// "e" for the identity and "g1", "g2", ... otherwise.

#include <string>
#include <vector>

#include "sigmacert/groups.hpp"

namespace sigmacert::finite {

/// Z/n with g_k = k.
FiniteTablePtr cyclic(unsigned n);
/// Dihedral group of order 2n.
FiniteTablePtr dihedral(unsigned n);
FiniteTablePtr symmetric(unsigned n);
FiniteTablePtr alternating(unsigned n);
FiniteTablePtr quaternion();
/// Dicyclic group of order 4n.
FiniteTablePtr dicyclic(unsigned n);
FiniteTablePtr sl2_f3();
FiniteTablePtr direct_product(const FiniteTablePtr& a, const FiniteTablePtr& b);

/// Closure of the given permutations (images of 0..n-1) under composition.
FiniteTablePtr from_permutations(const std::vector<std::vector<unsigned>>& generators);

/// "C5", "D4" (order 8), "S3", "A4", "Q8", "Dic3", "SL(2,3)", and products
/// joined by 'x' such as "C2xC4".
FiniteTablePtr named(const std::string& name);

struct Named {
    std::string name;
    FiniteTablePtr table;
};

/// Every group of the library up to the given order.
std::vector<Named> bundled(std::size_t max_order = 24);

}  // namespace sigmacert::finite
