#include "sigmacert/finite_groups.hpp"

#include <array>
#include <map>

#include "sigmacert/errors.hpp"

namespace sigmacert::finite {

namespace {

std::vector<std::string> element_names(std::size_t n) {
    std::vector<std::string> out{"e"};
    for (std::size_t i = 1; i < n; ++i) out.push_back("g" + std::to_string(i));
    return out;
}

// Enumerates the group generated by `gens` (identity first) and tabulates it.
template <class E, class Mul>
FiniteTablePtr close(const E& identity, const std::vector<E>& gens, Mul mul) {
    std::vector<E> elems{identity};
    std::map<E, std::uint32_t> index{{identity, 0}};
    for (std::size_t i = 0; i < elems.size(); ++i)
        for (const auto& g : gens) {
            E x = mul(elems[i], g);
            if (index.emplace(x, static_cast<std::uint32_t>(elems.size())).second) elems.push_back(x);
        }
    std::vector<std::vector<std::uint32_t>> table(elems.size(), std::vector<std::uint32_t>(elems.size()));
    for (std::size_t i = 0; i < elems.size(); ++i)
        for (std::size_t j = 0; j < elems.size(); ++j) table[i][j] = index.at(mul(elems[i], elems[j]));
    return std::make_shared<FiniteGroupTable>(element_names(elems.size()), std::move(table));
}

using Perm = std::vector<unsigned>;

Perm compose(const Perm& a, const Perm& b) {
    // apply a, then b
    Perm c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = b[a[i]];
    return c;
}

Perm identity_perm(unsigned n) {
    Perm p(n);
    for (unsigned i = 0; i < n; ++i) p[i] = i;
    return p;
}

}  // namespace

FiniteTablePtr from_permutations(const std::vector<std::vector<unsigned>>& generators) {
    if (generators.empty()) return cyclic(1);
    const auto n = static_cast<unsigned>(generators[0].size());
    for (const auto& g : generators) {
        std::vector<bool> seen(n, false);
        if (g.size() != n) throw InvalidArgument("permutations of different degrees");
        for (auto x : g) {
            if (x >= n || seen[x]) throw InvalidArgument("not a permutation");
            seen[x] = true;
        }
    }
    return close(identity_perm(n), generators, compose);
}

FiniteTablePtr cyclic(unsigned n) {
    if (n == 0) throw InvalidArgument("cyclic group order must be positive");
    std::vector<std::vector<std::uint32_t>> t(n, std::vector<std::uint32_t>(n));
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j) t[i][j] = (i + j) % n;
    return std::make_shared<FiniteGroupTable>(element_names(n), std::move(t));
}

FiniteTablePtr dihedral(unsigned n) {
    if (n == 0) throw InvalidArgument("dihedral group needs n >= 1");
    using E = std::pair<unsigned, unsigned>;  // r^k s^f
    auto mul = [n](const E& x, const E& y) {
        unsigned k = x.second ? (x.first + n - y.first) % n : (x.first + y.first) % n;
        return E{k, x.second ^ y.second};
    };
    return close(E{0, 0}, {E{1 % n, 0}, E{0, 1}}, mul);
}

FiniteTablePtr symmetric(unsigned n) {
    if (n == 0) throw InvalidArgument("symmetric group needs n >= 1");
    if (n == 1) return cyclic(1);
    Perm swap = identity_perm(n), cycle(n);
    std::swap(swap[0], swap[1]);
    for (unsigned i = 0; i < n; ++i) cycle[i] = (i + 1) % n;
    return from_permutations({swap, cycle});
}

FiniteTablePtr alternating(unsigned n) {
    if (n < 3) return cyclic(1);
    std::vector<Perm> gens;
    for (unsigned k = 2; k < n; ++k) {
        Perm p = identity_perm(n);
        p[0] = 1, p[1] = k, p[k] = 0;
        gens.push_back(p);
    }
    return from_permutations(gens);
}

FiniteTablePtr dicyclic(unsigned n) {
    if (n < 2) throw InvalidArgument("dicyclic group needs n >= 2");
    const unsigned m = 2 * n;
    using E = std::pair<unsigned, unsigned>;  // a^k x^f
    auto mul = [n, m](const E& x, const E& y) {
        if (!x.second) return E{(x.first + y.first) % m, y.second};
        if (!y.second) return E{(x.first + m - y.first) % m, 1};
        return E{(x.first + m - y.first + n) % m, 0};
    };
    return close(E{0, 0}, {E{1, 0}, E{0, 1}}, mul);
}

FiniteTablePtr quaternion() { return dicyclic(2); }

FiniteTablePtr sl2_f3() {
    using M = std::array<int, 4>;
    auto mul = [](const M& x, const M& y) {
        return M{(x[0] * y[0] + x[1] * y[2]) % 3, (x[0] * y[1] + x[1] * y[3]) % 3, (x[2] * y[0] + x[3] * y[2]) % 3,
                 (x[2] * y[1] + x[3] * y[3]) % 3};
    };
    return close(M{1, 0, 0, 1}, {M{1, 1, 0, 1}, M{0, 2, 1, 0}}, mul);
}

FiniteTablePtr direct_product(const FiniteTablePtr& a, const FiniteTablePtr& b) {
    const std::size_t na = a->order(), nb = b->order();
    std::vector<std::vector<std::uint32_t>> t(na * nb, std::vector<std::uint32_t>(na * nb));
    for (std::uint32_t x = 0; x < na * nb; ++x)
        for (std::uint32_t y = 0; y < na * nb; ++y)
            t[x][y] = static_cast<std::uint32_t>(a->mul(x / nb, y / nb) * nb + b->mul(x % nb, y % nb));
    return std::make_shared<FiniteGroupTable>(element_names(na * nb), std::move(t));
}

FiniteTablePtr named(const std::string& name) {
    if (auto x = name.find('x'); x != std::string::npos)
        return direct_product(named(name.substr(0, x)), named(name.substr(x + 1)));
    auto number = [&](std::size_t from) -> unsigned {
        try {
            std::size_t used = 0;
            int v = std::stoi(name.substr(from), &used);
            if (used + from != name.size() || v <= 0) throw 0;
            return static_cast<unsigned>(v);
        } catch (...) {
            throw ParseError("unknown finite group '" + name + "'");
        }
    };
    if (name == "Q8") return quaternion();
    if (name == "SL(2,3)") return sl2_f3();
    if (name.rfind("Dic", 0) == 0) return dicyclic(number(3));
    if (name.empty()) throw ParseError("empty finite group name");
    switch (name[0]) {
        case 'C': return cyclic(number(1));
        case 'D': return dihedral(number(1));
        case 'S': return symmetric(number(1));
        case 'A': return alternating(number(1));
        default: throw ParseError("unknown finite group '" + name + "'");
    }
}

std::vector<Named> bundled(std::size_t max_order) {
    std::vector<std::string> names;
    for (unsigned n = 1; n <= 24; ++n) names.push_back("C" + std::to_string(n));
    for (unsigned n = 2; n <= 12; ++n) names.push_back("D" + std::to_string(n));
    for (const char* s : {"S3", "S4", "A4", "Q8", "Dic3", "Dic5", "Dic6", "SL(2,3)", "C2xC2xC2", "C2xC4", "C3xC3",
                          "C2xC6", "C4xC4", "C2xC2xC4", "C2xS3", "C2xD4", "C2xQ8", "C3xS3", "C2xA4", "C3xQ8", "C2xC2xS3"})
        names.push_back(s);
    std::vector<Named> out;
    for (const auto& n : names) {
        auto t = named(n);
        if (t->order() <= max_order) out.push_back({n, t});
    }
    return out;
}

}  // namespace sigmacert::finite
