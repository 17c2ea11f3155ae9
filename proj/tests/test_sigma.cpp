#include <doctest.h>

#include <algorithm>
#include <random>

#include "sigmacert/errors.hpp"
#include "sigmacert/finite_groups.hpp"
#include "sigmacert/sigma.hpp"
#include "test_support.hpp"

using namespace sigmacert;

namespace {

QVector v(std::initializer_list<long> xs) {
    QVector out;
    for (long x : xs) out.push_back(x);
    return out;
}

GroupPtr data_group(const char* name) { return load_group(test_support::data_path(std::string("groups/") + name)); }

Character values_character(const GroupPtr& g, std::initializer_list<long> xs) {
    std::vector<Scalar> vals;
    for (long x : xs) vals.emplace_back(x);
    return character_from_values(g, vals);
}

// Every derivation node names a rule and states it.
void check_provenance(const SigmaDerivation& d) {
    CHECK_FALSE(d.rule.empty());
    CHECK_FALSE(d.statement.empty());
    for (const auto& p : d.premises) check_provenance(p);
}

}  // namespace

TEST_CASE("rule table on the documented groups") {
    // BS(1,2): relation row (a: 1 - 2, t: 0) so the character basis is e_t.
    auto bs = sigma1_complement(*data_group("bs12.json"));
    CHECK(bs.complement == SigmaSet::points(1, {v({1})}));
    CHECK(bs.rule == "bs1n");
    CHECK_FALSE(bs.conventions.empty());

    // Gamma_12: b1 = 2, coordinates are the t-values.
    auto g12 = sigma1_complement(*data_group("gamma12.json"));
    CHECK(g12.complement == SigmaSet::points(2, {v({1, 0}), v({0, 1})}));
    auto pts = isolated_points(g12.complement);
    CHECK(pts.size() == 2);
    CHECK(open_hemisphere_witness(pts).feasible);
    CHECK(sigma1_complement(*data_group("gamma30.json")).complement ==
          SigmaSet::points(3, {v({1, 0, 0}), v({0, 1, 0}), v({0, 0, 1})}));

    // Klein bottle as Z^2 by Z/2: Sigma^1 is all of S^0.
    auto klein_ext = sigma1_complement(*data_group("klein_ext.json"));
    CHECK(klein_ext.complement.ambient() == 1);
    CHECK(klein_ext.complement.is_empty());
    CHECK(klein_ext.rule == "finite_index_restriction");
    CHECK(sigma1_complement(*data_group("klein.json")).complement == SigmaSet::empty(1));

    auto w = sigma1_complement(*data_group("witness.json"));
    CHECK(w.complement.ambient() == 4);
    CHECK(w.complement.variant() == "Mixed");
    auto iso = isolated_points(w.complement);
    std::sort(iso.begin(), iso.end());
    CHECK(iso == std::vector<QVector>{v({0, 0, 0, 1}), v({0, 0, 1, 0})});
    CHECK(w.premises.size() == 3);

    CHECK(sigma1_complement(*make_thompson_f()).complement == SigmaSet::points(2, {v({-1, 0}), v({1, 1})}));
    CHECK(sigma1_complement(*data_group("lamplighter.json")).complement.is_whole_sphere());
    CHECK(sigma1_complement(*data_group("f2.json")).complement == SigmaSet::whole(2));
    CHECK(sigma1_complement(*make_free_group(1)).complement == SigmaSet::empty(1));
    CHECK(sigma1_complement(*make_abelian({0, 0, 3})).complement == SigmaSet::empty(2));
    CHECK(sigma1_complement(*make_finite(finite::symmetric(3))).complement == SigmaSet::empty(0));
    CHECK(sigma1_complement(*make_presentation({"x", "y"}, {})).complement == SigmaSet::whole(2));

    for (const char* name : {"bs12.json", "gamma12.json", "klein_ext.json", "witness.json", "lamplighter.json"})
        check_provenance(sigma1_complement(*data_group(name)));
}

TEST_CASE("free products and unsupported families") {
    auto z = make_abelian({0});
    CHECK(sigma1_complement(*make_free_product({z, z})).complement == SigmaSet::whole(2));
    CHECK(sigma1_complement(*make_free_product({z, make_finite(finite::cyclic(2))})).complement ==
          SigmaSet::whole(1));
    auto with_trivial = sigma1_complement(*make_free_product({data_group("bs12.json"), make_finite(finite::cyclic(1))}));
    CHECK(with_trivial.complement == SigmaSet::points(1, {v({1})}));

    auto quotient = make_characteristic_quotient("G", z, "vouched");
    CHECK(sigma1_complement(*quotient).complement.is_unknown());
    // x y x y^-1 x^-1 y^-1 is the trefoil: no rule.
    auto trefoil = make_presentation({"x", "y"}, {{{0, 1}, {1, 1}, {0, 1}, {1, -1}, {0, -1}, {1, -1}}});
    auto d = sigma1_complement(*trefoil);
    CHECK(d.complement.is_unknown());
    CHECK(d.rule == "unknown");
    // Unknown propagates through products.
    CHECK(sigma1_complement(*make_direct_product({trefoil, z})).complement.is_unknown());
}

TEST_CASE("one-relator Baumslag-Solitar shapes") {
    // t^-1 a t = a^3 read with T = t^-1.
    auto g = make_presentation({"a", "t"}, {{{1, -1}, {0, 1}, {1, 1}, {0, -1}, {0, -1}, {0, -1}}});
    auto d = sigma1_complement(*g);
    REQUIRE_FALSE(d.complement.is_unknown());
    auto pts = isolated_points(d.complement);
    REQUIRE(pts.size() == 1);
    // The complement character is negative on t.
    auto chi = rational_character(g, pts[0]);
    CHECK(chi.evaluate({{1, 1}}).sign() < 0);
    CHECK(chi.evaluate({{0, 1}}).sign() == 0);
}

TEST_CASE("restriction to fixed subspaces") {
    auto klein = data_group("klein_ext.json");
    auto fix = fix_subspace(*klein);
    CHECK(restrict_to_fix(SigmaSet::empty(2), fix) == SigmaSet::empty(1));
    CHECK(restrict_to_fix(SigmaSet::points(2, {v({1, 0})}), fix).is_empty());
    CHECK(restrict_to_fix(SigmaSet::points(2, {v({0, 1})}), fix).contains(v({1})));
    CHECK(restrict_to_fix(SigmaSet::unknown(2, "x"), fix).is_unknown());

    FixSubspace full{make_abelian({0, 0}), Subspace::whole(2)};
    for (const auto& s : {SigmaSet::empty(2), SigmaSet::whole(2), SigmaSet::points(2, {v({1, 0}), v({0, 1})}),
                          SigmaSet::empty(2).add_polytope(SphericalPolytope({v({1, 2}), v({2, -1})}))})
        CHECK(restrict_to_fix(s, full) == s);

    FixSubspace zero{make_abelian({0, 0}), Subspace(2)};
    CHECK(restrict_to_fix(SigmaSet::whole(2), zero) == SigmaSet::empty(0));
}

TEST_CASE("direct products agree with their presentation as a finite extension") {
    // BS(1,2) x Z x Z/2 as (BS(1,2) x Z) by Z/2 acting trivially.
    auto bs = data_group("bs12.json");
    auto kernel = make_direct_product({bs, make_abelian({0})});
    const std::size_t nk = kernel->generator_count();
    family::FiniteExtension ext;
    ext.kernel = kernel;
    ext.quotient = finite::cyclic(2);
    ext.transversal = {"", "s"};
    ext.conjugation.assign(2, {});
    for (std::uint32_t h = 0; h < nk; ++h) ext.conjugation[1].push_back(Word{{h, 1}});
    ext.cocycle[{1, 1}] = {};
    auto as_extension = sigma1_complement(*make_finite_extension(ext));
    auto as_product = sigma1_complement(*make_direct_product({bs, make_abelian({0}), make_finite(finite::cyclic(2))}));
    CHECK(as_extension.complement == as_product.complement);
    CHECK(as_extension.complement == SigmaSet::points(2, {v({1, 0})}));
}

TEST_CASE("factor consistency for BS(1,2) onto Z") {
    auto bs = data_group("bs12.json");
    auto z = make_abelian({0}, {"t"});
    Homomorphism kill_a{bs, z, {Word{}, Word{{0, 1}}}};
    validate_homomorphism(kill_a);
    const QMatrix m = pullback_matrix(kill_a);
    const SigmaSet sigma_bs = sigma1_complement(*bs).complement;
    const SigmaSet sigma_z = sigma1_complement(*z).complement;
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> d(-9, 9);
    int premise_held = 0;
    for (int i = 0; i < 60; ++i) {
        QVector chi{Rational(d(rng), 1 + (i % 4))};
        if (chi[0] == 0) continue;
        const QVector pulled = m.apply(chi);
        // [chi o phi] in Sigma^1(BS) implies [chi] in Sigma^1(Z).
        if (!sigma_bs.contains(pulled)) {
            ++premise_held;
            CHECK_FALSE(sigma_z.contains(chi));
        }
    }
    CHECK(premise_held > 10);
}

TEST_CASE("ball evidence examples") {
    auto bs = data_group("bs12.json");
    auto down = ball_evidence(bs, values_character(bs, {0, -1}), 6);
    CHECK(down.verdict == EvidenceReport::Verdict::Connected);
    CHECK(down.connected_fraction == 1);
    auto up = ball_evidence(bs, values_character(bs, {0, 1}), 6);
    CHECK(up.verdict == EvidenceReport::Verdict::Disconnected);
    CHECK(up.components > 1);

    auto f2 = data_group("f2.json");
    auto r = ball_evidence(f2, values_character(f2, {1, 0}), 5);
    CHECK(r.verdict == EvidenceReport::Verdict::Disconnected);
    CHECK(r.generators == std::vector<std::string>{"a", "b"});
    CHECK(r.ball_size == 1 + 4 * (1 + 3 + 9 + 27 + 81));

    // Deterministic.
    CHECK(to_json(ball_evidence(bs, values_character(bs, {0, 1}), 6)) == to_json(up));
    CHECK_THROWS_AS(ball_evidence(make_thompson_f(), values_character(make_thompson_f(), {1, 0}), 3),
                    UnsupportedFamily);
    CHECK_THROWS_AS(ball_evidence(f2, values_character(f2, {1, 0}), 40, 1000), BallTooLarge);
}

TEST_CASE("ball evidence at radius 6 never contradicts the rule table") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> d(-2, 2);
    int sigma_samples = 0, complement_samples = 0;

    auto run = [&](const GroupPtr& g, const QVector& coords) {
        const SigmaSet comp = sigma1_complement(*g).complement;
        REQUIRE_FALSE(comp.is_unknown());
        auto rep = ball_evidence(g, rational_character(g, coords), 6);
        CAPTURE(g->name());
        CAPTURE(coords);
        if (comp.contains(coords)) {
            CHECK(rep.verdict != EvidenceReport::Verdict::Connected);
            ++complement_samples;
        } else {
            CHECK(rep.verdict != EvidenceReport::Verdict::Disconnected);
            sigma_samples += rep.verdict == EvidenceReport::Verdict::Connected;
        }
    };
    auto random_coords = [&](std::size_t n) {
        QVector c(n);
        while (is_zero(c))
            for (auto& x : c) x = d(rng);
        return c;
    };

    auto bs = data_group("bs12.json");
    run(bs, v({1}));
    run(bs, v({-1}));
    auto g12 = data_group("gamma12.json");
    run(g12, v({1, 0}));
    run(g12, v({0, 1}));
    for (int i = 0; i < 14; ++i) run(g12, random_coords(2));
    auto f2 = data_group("f2.json");
    for (int i = 0; i < 4; ++i) run(f2, random_coords(2));
    auto z2 = data_group("z2.json");
    for (int i = 0; i < 8; ++i) run(z2, random_coords(2));
    auto klein = data_group("klein.json");
    run(klein, v({1}));
    run(klein, v({-1}));
    auto f2z = make_direct_product({f2, make_abelian({0})});
    // Balls of radius 6 only see classes well away from the subsphere chi(z) = 0.
    for (const auto& c : {v({1, 0, 2}), v({0, -1, 2}), v({1, 1, 3}), v({-1, 1, -3}), v({0, 0, 1})}) run(f2z, c);
    run(f2z, v({1, -1, 0}));

    CHECK(sigma_samples >= 20);
    CHECK(complement_samples >= 8);
}

TEST_CASE("derivation and evidence JSON") {
    auto j = to_json(sigma1_complement(*data_group("witness.json")));
    CHECK(j["rule"] == "direct_product");
    CHECK(j["premises"].size() == 3);
    CHECK(j["premises"][1]["conventions"][0] == kBsOrientation);
    CHECK(sigma_set_from_json(j["complement"]).variant() == "Mixed");

    auto bs = data_group("bs12.json");
    auto e = to_json(ball_evidence(bs, values_character(bs, {0, 1}), 6));
    CHECK(e["certifying"] == false);
    CHECK(e["verdict"] == "evidence-disconnected");
    CHECK(e["generators"] == Json::array({"a", "t"}));
}
