#include "sigmacert/sigma.hpp"

#include <numeric>

#include "sigmacert/errors.hpp"

namespace sigmacert {

namespace {

// Coordinates of the rational character with the given generator values.
QVector coords_of_values(const GroupPtr& g, const QVector& values) {
    std::vector<Scalar> vs(values.begin(), values.end());
    return *character_from_values(g, std::move(vs)).rational_coordinates();
}

SigmaDerivation leaf(SigmaSet s, std::string rule, std::string statement) {
    SigmaDerivation d;
    d.complement = std::move(s);
    d.rule = std::move(rule);
    d.statement = std::move(statement);
    return d;
}

SigmaDerivation unknown(std::size_t ambient, const std::string& why) {
    return leaf(SigmaSet::unknown(ambient, why), "unknown", why);
}

SigmaDerivation free_rank(std::size_t r) {
    if (r >= 2) return leaf(SigmaSet::whole(r), "free.rank_ge_2", "free groups of rank >= 2 have empty Sigma^1");
    return leaf(SigmaSet::empty(r), "abelian", "Sigma^1 of a finitely generated abelian group is the whole sphere");
}

GroupPtr borrow(const GroupDescriptor& g) {
    return GroupPtr(std::shared_ptr<const GroupDescriptor>{}, &g);
}

bool certainly_nontrivial(const GroupDescriptor& g) {
    if (g.abelianization_known() && betti_number(g) > 0) return true;
    if (const auto* f = g.as<family::FiniteGroup>()) return f->table->order() > 1;
    if (g.abelianization_known() && !abelianization(g).torsion.empty()) return true;
    if (!supports_normal_form(g)) return false;
    for (std::uint32_t i = 0; i < g.generator_count(); ++i)
        if (!normal_form(Word{{i, 1}}, g).empty()) return true;
    return false;
}

bool certainly_trivial(const GroupDescriptor& g) {
    if (g.generator_count() == 0) return true;
    if (const auto* f = g.as<family::FiniteGroup>()) return f->table->order() == 1;
    if (!supports_normal_form(g)) return false;
    for (std::uint32_t i = 0; i < g.generator_count(); ++i)
        if (!normal_form(Word{{i, 1}}, g).empty()) return false;
    return true;
}

SigmaDerivation presentation_rule(const GroupDescriptor& g, std::size_t b1) {
    if (g.relators().empty()) return free_rank(g.generator_count());
    if (auto shape = recognize_bs_shape(g)) {
        const Integer k = abs(shape->k);
        if (k == 1)
            return leaf(SigmaSet::empty(b1), "bs_shape.virtually_abelian",
                        "T a T^-1 = a^(+-1) presents a virtually abelian group, Sigma^1 is the whole sphere");
        if (k >= 2) {
            QVector values(g.generator_count());
            values[shape->t_gen] = shape->t_sign;
            auto d = leaf(SigmaSet::points(b1, {coords_of_values(borrow(g), values)}), "bs_shape.ascending",
                          "T a T^-1 = a^k with |k| >= 2 is an ascending HNN extension of Z; the complement is the "
                          "class with chi(T) = +1");
            d.conventions.push_back(kBsOrientation);
            return d;
        }
    }
    return unknown(b1, "no rule covers this presentation");
}

}  // namespace

SigmaDerivation sigma1_complement(const GroupDescriptor& g) {
    if (!g.abelianization_known())
        return unknown(0, "character sphere of " + g.name() + " is not known from its description");
    const std::size_t b1 = betti_number(g);
    if (b1 == 0) return leaf(SigmaSet::empty(0), "b1_zero", "the character sphere is empty");

    return std::visit(
        [&](const auto& f) -> SigmaDerivation {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, family::FreeGroup>) {
                return free_rank(f.rank);
            } else if constexpr (std::is_same_v<T, family::FinitelyGeneratedAbelian> ||
                                 std::is_same_v<T, family::FiniteGroup>) {
                return leaf(SigmaSet::empty(b1), "abelian",
                            "Sigma^1 of a finitely generated abelian group is the whole sphere");
            } else if constexpr (std::is_same_v<T, family::FinitePresentation>) {
                return presentation_rule(g, b1);
            } else if constexpr (std::is_same_v<T, family::BaumslagSolitar1n>) {
                auto d = leaf(SigmaSet::points(b1, {coords_of_values(borrow(g), {0, 1})}), "bs1n",
                              "Sigma^1(BS(1,n))^c is the single class with chi(t) = +1, chi(a) = 0");
                d.conventions.push_back(kBsOrientation);
                return d;
            } else if constexpr (std::is_same_v<T, family::GammaN>) {
                std::vector<QVector> pts;
                for (std::size_t i = 1; i < g.generator_count(); ++i) {
                    QVector values(g.generator_count());
                    values[i] = 1;
                    pts.push_back(coords_of_values(borrow(g), values));
                }
                auto d = leaf(SigmaSet::points(b1, pts), "gamma_n",
                              "Sigma^1(Gamma_n)^c consists of the r classes chi_i(t_j) = delta_ij, chi_i(a) = 0");
                d.conventions.push_back(kBsOrientation);
                return d;
            } else if constexpr (std::is_same_v<T, family::Builtin>) {
                if (f.kind == family::BuiltinKind::ThompsonF)
                    return leaf(SigmaSet::points(b1, {coords_of_values(borrow(g), {-1, 0}),
                                                      coords_of_values(borrow(g), {1, 1})}),
                                "thompson_f",
                                "Sigma^1(F)^c = {chi_0, chi_1}, the logarithmic slopes at 0 and 1: "
                                "chi_0 = (-1, 0), chi_1 = (1, 1) on (x0, x1)");
                return leaf(SigmaSet::whole(b1), "lamplighter",
                            "both classes of the lamplighter group lie outside Sigma^1");
            } else if constexpr (std::is_same_v<T, family::DirectProduct>) {
                SigmaDerivation d;
                d.rule = "direct_product";
                d.statement = "Sigma^1(G x H)^c = Sigma^1(G)^c * {} u {} * Sigma^1(H)^c";
                d.complement = SigmaSet::empty(0);
                for (const auto& factor : f.factors) {
                    auto sub = sigma1_complement(*factor);
                    d.complement = spherical_join_complement(d.complement, sub.complement);
                    d.premises.push_back(std::move(sub));
                }
                return d;
            } else if constexpr (std::is_same_v<T, family::FreeProduct>) {
                std::size_t nontrivial = 0, undecided = 0;
                const GroupDescriptor* only = nullptr;
                for (const auto& factor : f.factors) {
                    if (certainly_nontrivial(*factor)) {
                        ++nontrivial;
                        only = factor.get();
                    } else if (!certainly_trivial(*factor)) {
                        ++undecided;
                    }
                }
                if (nontrivial >= 2)
                    return leaf(SigmaSet::whole(b1), "free_product",
                                "a free product of two nontrivial groups has empty Sigma^1");
                if (nontrivial == 1 && undecided == 0) {
                    auto sub = sigma1_complement(*only);
                    SigmaDerivation d = leaf(sub.complement, "free_product.trivial_factors",
                                             "free factors that are trivial do not change the group");
                    d.premises.push_back(std::move(sub));
                    return d;
                }
                return unknown(b1, "cannot decide which free factors are trivial");
            } else if constexpr (std::is_same_v<T, family::FiniteExtension>) {
                auto sub = sigma1_complement(*f.kernel);
                if (sub.complement.is_unknown()) {
                    auto d = unknown(b1, "Sigma^1 of the kernel " + f.kernel->name() + " is unknown");
                    d.premises.push_back(std::move(sub));
                    return d;
                }
                const QMatrix r = restriction_matrix(borrow(g));
                const FixSubspace fix = fix_subspace(g);
                const Subspace im = Subspace::image(r);
                if (rank(r) != b1 || !(im.contains(fix.subspace) && fix.subspace.contains(im))) {
                    auto d = unknown(b1, "restriction to the kernel does not identify the sphere with Fix");
                    d.premises.push_back(std::move(sub));
                    return d;
                }
                SigmaDerivation d = leaf(preimage(sub.complement, r), "finite_index_restriction",
                                         "for H of finite index in G, [chi] lies in Sigma^1(G) iff [chi|H] lies "
                                         "in Sigma^1(H)");
                d.premises.push_back(std::move(sub));
                return d;
            } else {
                return unknown(b1, "no rule for " + g.family_name());
            }
        },
        g.family());
}

SigmaSet restrict_to_fix(const SigmaSet& kernel_set, const FixSubspace& f) {
    const auto basis = f.subspace.basis_vectors();
    if (basis.empty()) return SigmaSet::empty(0);
    QMatrix b(f.subspace.ambient(), basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j)
        for (std::size_t i = 0; i < basis[j].size(); ++i) b(i, j) = basis[j][i];
    return preimage(kernel_set, b);
}

Json to_json(const SigmaDerivation& d) {
    Json j;
    j["rule"] = d.rule;
    j["statement"] = d.statement;
    j["complement"] = to_json(d.complement);
    if (!d.conventions.empty()) j["conventions"] = d.conventions;
    if (!d.premises.empty()) {
        j["premises"] = Json::array();
        for (const auto& p : d.premises) j["premises"].push_back(to_json(p));
    }
    return j;
}

std::string to_string(EvidenceReport::Verdict v) {
    switch (v) {
        case EvidenceReport::Verdict::Connected: return "evidence-connected";
        case EvidenceReport::Verdict::Disconnected: return "evidence-disconnected";
        case EvidenceReport::Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

EvidenceReport ball_evidence(const GroupPtr& g, const Character& chi, std::size_t radius,
                             std::size_t vertex_budget) {
    if (chi.group().get() != g.get() && chi.group()->name() != g->name())
        throw InvalidArgument("character belongs to " + chi.group()->name() + ", not " + g->name());
    if (chi.is_trivial()) throw InvalidArgument("ball evidence needs a nonzero character");
    const CayleyBall b = ball(*g, radius, vertex_budget);

    EvidenceReport rep;
    rep.group = g->name();
    rep.generators = g->generators();
    if (auto q = chi.rational_coordinates()) rep.character = *q;
    rep.radius = radius;
    rep.inner_radius = radius > kEvidenceMargin ? radius - kEvidenceMargin : 0;
    rep.ball_size = b.size();

    std::vector<char> nonneg(b.size(), 0);
    for (std::size_t v = 0; v < b.size(); ++v) {
        nonneg[v] = chi.evaluate(b.vertices[v]).sign() >= 0;
        rep.nonnegative += nonneg[v];
    }

    // Components of the nonnegative subgraph.
    std::vector<std::size_t> comp(b.size(), SIZE_MAX);
    for (std::size_t s = 0; s < b.size(); ++s) {
        if (!nonneg[s] || comp[s] != SIZE_MAX) continue;
        std::vector<std::size_t> stack{s};
        comp[s] = rep.components;
        while (!stack.empty()) {
            const std::size_t v = stack.back();
            stack.pop_back();
            for (std::size_t w : b.neighbors[v])
                if (nonneg[w] && comp[w] == SIZE_MAX) {
                    comp[w] = rep.components;
                    stack.push_back(w);
                }
        }
        ++rep.components;
    }

    for (std::size_t v = 0; v < b.size(); ++v) {
        if (b.length[v] > rep.inner_radius || !nonneg[v]) continue;
        ++rep.inner_nonnegative;
        if (comp[v] == comp[0]) ++rep.inner_reached;
    }
    rep.connected_fraction = rep.inner_nonnegative ? Rational(rep.inner_reached, rep.inner_nonnegative) : Rational(0);
    rep.connected_fraction.canonicalize();
    if (rep.inner_nonnegative < 2) rep.verdict = EvidenceReport::Verdict::Inconclusive;
    else if (rep.inner_reached == rep.inner_nonnegative) rep.verdict = EvidenceReport::Verdict::Connected;
    else rep.verdict = EvidenceReport::Verdict::Disconnected;
    return rep;
}

Json to_json(const EvidenceReport& r) {
    Json j;
    j["schema"] = "sigmacert.evidence/1";
    j["kind"] = "evidence";
    j["certifying"] = false;
    j["group"] = r.group;
    j["generators"] = r.generators;
    j["character"] = vector_to_json(r.character);
    j["radius"] = r.radius;
    j["inner_radius"] = r.inner_radius;
    j["ball_size"] = r.ball_size;
    j["nonnegative_vertices"] = r.nonnegative;
    j["components"] = r.components;
    j["inner_nonnegative"] = r.inner_nonnegative;
    j["inner_connected"] = r.inner_reached;
    j["connected_fraction"] = rational_to_json(r.connected_fraction);
    j["verdict"] = to_string(r.verdict);
    return j;
}

}  // namespace sigmacert
