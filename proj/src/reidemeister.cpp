#include "sigmacert/reidemeister.hpp"

#include <numeric>

#include "sigmacert/errors.hpp"

namespace sigmacert {

namespace {

struct UnionFind {
    std::vector<std::uint32_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a), b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

std::uint32_t evaluate(const FiniteGroupTable& t, const Word& w) {
    std::uint32_t x = 0;
    for (const auto& l : w) {
        const std::uint32_t e = l.gen + 1;
        x = t.mul(x, l.sign > 0 ? e : t.inv(e));
    }
    return x;
}

void require_endomorphism(const Homomorphism& phi) {
    if (!phi.source || !phi.target || phi.source.get() != phi.target.get())
        throw InvalidArgument("Reidemeister numbers need an endomorphism (source and target must be the same group)");
}

}  // namespace

std::string to_string(ReidemeisterResult::Method m) {
    switch (m) {
        case ReidemeisterResult::Method::OrbitEnumeration: return "orbit-enumeration";
        case ReidemeisterResult::Method::Cokernel: return "cokernel";
        case ReidemeisterResult::Method::FixedCharacter: return "fixed-character";
    }
    return "orbit-enumeration";
}

ReidemeisterResult twisted_classes_finite(const FiniteGroupTable& g, const std::vector<std::uint32_t>& phi) {
    const std::size_t n = g.order();
    if (phi.size() != n) throw DimensionMismatch("endomorphism needs one image per group element");
    for (std::uint32_t x = 0; x < n; ++x) {
        if (phi[x] >= n) throw InvalidArgument("image index out of range");
        for (std::uint32_t y = 0; y < n; ++y)
            if (phi[g.mul(x, y)] != g.mul(phi[x], phi[y]))
                throw NotAHomomorphism("phi(" + g.elements()[x] + " " + g.elements()[y] + ") differs from phi(" +
                                       g.elements()[x] + ") phi(" + g.elements()[y] + ")");
    }
    UnionFind uf(n);
    for (std::uint32_t s = 0; s < n; ++s) {
        const std::uint32_t inv_phi = g.inv(phi[s]);
        for (std::uint32_t a = 0; a < n; ++a) uf.unite(a, g.mul(g.mul(s, a), inv_phi));
    }
    ReidemeisterResult r;
    r.method = ReidemeisterResult::Method::OrbitEnumeration;
    std::vector<std::int64_t> slot(n, -1);
    for (std::uint32_t a = 0; a < n; ++a) {
        const auto root = uf.find(a);
        if (slot[root] < 0) {
            slot[root] = static_cast<std::int64_t>(r.classes.size());
            r.classes.emplace_back();
        }
        r.classes[static_cast<std::size_t>(slot[root])].push_back(a);
    }
    r.count = Integer(static_cast<unsigned long>(r.classes.size()));
    return r;
}

ReidemeisterResult twisted_classes_finite(const Homomorphism& phi) {
    require_endomorphism(phi);
    const auto* f = phi.source->as<family::FiniteGroup>();
    if (!f) throw UnsupportedFamily("orbit enumeration needs a FiniteGroup, got " + phi.source->family_name());
    const auto& t = *f->table;
    if (phi.images.size() != phi.source->generator_count())
        throw DimensionMismatch("homomorphism needs one image per generator");
    std::vector<std::uint32_t> table(t.order(), 0);
    for (std::uint32_t x = 1; x < t.order(); ++x) table[x] = evaluate(t, phi.images[x - 1]);
    return twisted_classes_finite(t, table);
}

ReidemeisterResult reidemeister_abelian(const ZVector& factors, const IntMatrix& m) {
    const std::size_t n = factors.size();
    if (m.rows() != n || m.cols() != n) throw DimensionMismatch("endomorphism matrix must be square of the group's rank");
    // f_j e_j = 0 forces f_j m(i, j) = 0 in Z/f_i.
    for (std::size_t j = 0; j < n; ++j) {
        if (factors[j] == 0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const Integer image = factors[j] * m(i, j);
            if (factors[i] == 0 ? image != 0 : image % factors[i] != 0)
                throw InvalidArgument("matrix entry (" + std::to_string(i) + ", " + std::to_string(j) +
                                      ") is inconsistent with the torsion orders");
        }
    }
    IntMatrix presentation(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) presentation(i, j) = m(i, j) - (i == j ? 1 : 0);
        presentation(i, n + i) = factors[i];
    }
    const AbelianStructure coker = cokernel_structure(presentation);
    ReidemeisterResult r;
    r.method = ReidemeisterResult::Method::Cokernel;
    r.count = coker.order();
    r.cokernel = coker.torsion;
    r.cokernel.insert(r.cokernel.end(), coker.free_rank, Integer(0));
    return r;
}

ReidemeisterResult reidemeister_abelian(const Homomorphism& phi) {
    require_endomorphism(phi);
    const auto* a = phi.source->as<family::FinitelyGeneratedAbelian>();
    if (!a) throw UnsupportedFamily("the cokernel formula needs a FinitelyGeneratedAbelian group, got " +
                                    phi.source->family_name());
    return reidemeister_abelian(a->factors, exponent_matrix(phi));
}

std::optional<ReidemeisterResult> fixed_character_criterion(const Character& chi, const Homomorphism& phi) {
    require_endomorphism(phi);
    if (chi.group().get() != phi.source.get()) throw InvalidArgument("character and endomorphism act on different groups");
    if (phi.level != ValidationLevel::Exact)
        throw InvalidArgument("the fixed-character criterion needs an exactly validated endomorphism");
    if (chi.is_trivial()) throw InvalidArgument("the fixed-character criterion needs a nonzero character");
    if (!(pullback(chi, phi) == chi)) return std::nullopt;
    ReidemeisterResult r;
    r.method = ReidemeisterResult::Method::FixedCharacter;
    r.fixed_character = chi;
    return r;
}

std::size_t conjugacy_class_count(const FiniteGroupTable& g) {
    std::vector<std::uint32_t> id(g.order());
    std::iota(id.begin(), id.end(), 0u);
    return twisted_classes_finite(g, id).classes.size();
}

Json to_json(const ReidemeisterResult& r, const GroupDescriptor* group) {
    Json j;
    j["method"] = to_string(r.method);
    j["count"] = r.count ? Json(r.count->get_str()) : Json("infinite");
    if (r.method == ReidemeisterResult::Method::OrbitEnumeration) {
        const FiniteGroupTable* t = nullptr;
        if (group)
            if (const auto* f = group->as<family::FiniteGroup>()) t = f->table.get();
        j["classes"] = Json::array();
        for (const auto& c : r.classes) {
            Json cls = Json::array();
            for (auto x : c) cls.push_back(t ? Json(t->elements()[x]) : Json(x));
            j["classes"].push_back(cls);
        }
    }
    if (r.method == ReidemeisterResult::Method::Cokernel) j["cokernel"] = vector_to_json(r.cokernel);
    if (r.fixed_character) j["fixed_character"] = to_json(*r.fixed_character);
    return j;
}

}  // namespace sigmacert
