#include <doctest.h>

#include <algorithm>
#include <random>

#include "sigmacert/errors.hpp"
#include "sigmacert/sphere.hpp"

using namespace sigmacert;

namespace {

// Fourier-Motzkin on the homogeneous strict system p_i . f > 0.
bool fm_feasible(std::vector<QVector> ineq, std::size_t n) {
    for (std::size_t var = n; var-- > 0;) {
        std::vector<QVector> pos, neg, next;
        for (auto& a : ineq) {
            if (a[var] > 0) pos.push_back(a);
            else if (a[var] < 0) neg.push_back(a);
            else next.push_back(a);
        }
        for (const auto& p : pos)
            for (const auto& q : neg) next.push_back(add(scale(p, -q[var]), scale(q, p[var])));
        ineq.clear();
        for (auto& a : next) {
            a.resize(var);
            ineq.push_back(a);
        }
    }
    return ineq.empty();
}

QVector v(std::initializer_list<long> xs) {
    QVector out;
    for (long x : xs) out.push_back(x);
    return out;
}

QMatrix random_unimodular(std::mt19937_64& rng, std::size_t n) {
    QMatrix u = QMatrix::identity(n);
    std::uniform_int_distribution<std::size_t> idx(0, n - 1);
    std::uniform_int_distribution<int> f(-2, 2);
    for (int s = 0; s < 6; ++s) {
        std::size_t i = idx(rng), j = idx(rng);
        if (i == j) continue;
        const Rational c = f(rng);
        for (std::size_t k = 0; k < n; ++k) u(i, k) += c * u(j, k);
    }
    return u;
}

}  // namespace

TEST_CASE("open hemisphere examples") {
    auto r = open_hemisphere_witness({v({1, 0}), v({0, 1})});
    CHECK(r.feasible);
    CHECK(r.functional == v({1, 1}));

    auto s = open_hemisphere_witness({v({1, 0}), v({-1, 0})});
    CHECK_FALSE(s.feasible);
    CHECK(s.farkas == QVector{Rational(1, 2), Rational(1, 2)});

    CHECK_THROWS_AS(open_hemisphere_witness({v({1, 0}), v({0, 0})}), InvalidArgument);
    CHECK_THROWS_AS(open_hemisphere_witness({v({1, 0}), v({1})}), DimensionMismatch);

    // The sum candidate fails here but another functional works.
    auto t = open_hemisphere_witness({v({1, 0}), v({-1, 1}), v({-1, 2})});
    CHECK(t.feasible);
    CHECK(verify_hemisphere(t, {v({1, 0}), v({-1, 1}), v({-1, 2})}));
}

TEST_CASE("open hemisphere LP agrees with Fourier-Motzkin and carries exact witnesses") {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> dim(1, 4), cnt(1, 7), ent(-3, 3);
    int feasible = 0, infeasible = 0;
    for (int i = 0; i < 400; ++i) {
        const std::size_t n = dim(rng);
        std::vector<QVector> pts;
        const int k = cnt(rng);
        while (static_cast<int>(pts.size()) < k) {
            QVector p(n);
            for (auto& x : p) x = ent(rng);
            if (!is_zero(p)) pts.push_back(p);
        }
        auto r = open_hemisphere_witness(pts);
        CHECK(r.feasible == fm_feasible(pts, n));
        CHECK(verify_hemisphere(r, pts));
        (r.feasible ? feasible : infeasible)++;
    }
    CHECK(feasible > 50);
    CHECK(infeasible > 50);
}

TEST_CASE("nonnegative solutions and cone membership") {
    QMatrix a = QMatrix::from_rows({v({1, 1, 0}), v({0, 1, 1})}, 3);
    auto x = nonnegative_solution(a, v({2, 3}));
    REQUIRE(x);
    CHECK(a.apply(*x) == v({2, 3}));
    for (const auto& c : *x) CHECK(c >= 0);
    CHECK_FALSE(nonnegative_solution(a, v({-1, 0})));
    CHECK(in_cone(v({1, 1}), {v({1, 0}), v({0, 1})}));
    CHECK_FALSE(in_cone(v({-1, 1}), {v({1, 0}), v({0, 1})}));
}

TEST_CASE("spherical polytopes are canonical and minimal") {
    SphericalPolytope p({v({2, 0}), v({0, 3}), v({1, 1}), v({4, 0})});
    CHECK(p.vertices() == std::vector<QVector>{v({0, 1}), v({1, 0})});
    CHECK(p.is_minimal());
    CHECK(p.contains(v({5, 7})));
    CHECK_FALSE(p.contains(v({-1, 7})));
    CHECK_THROWS_AS(SphericalPolytope({v({1, 0}), v({-1, 0})}), InvalidArgument);

    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> ent(0, 4);
    for (int i = 0; i < 50; ++i) {
        std::vector<QVector> pts;
        for (int k = 0; k < 5; ++k) {
            QVector q{Rational(ent(rng)), Rational(ent(rng)), Rational(1 + ent(rng))};
            pts.push_back(q);
        }
        SphericalPolytope poly(pts);
        // Removing any vertex shrinks the cone.
        for (std::size_t r = 0; r < poly.vertices().size(); ++r) {
            auto rest = poly.vertices();
            rest.erase(rest.begin() + static_cast<long>(r));
            CHECK_FALSE(in_cone(poly.vertices()[r], rest));
        }
        for (const auto& q : pts) CHECK(poly.contains(q));
    }
}

TEST_CASE("spherical join of complements") {
    CHECK(spherical_join_complement(SigmaSet::empty(1), SigmaSet::empty(1)).is_empty());

    auto fz = spherical_join_complement(SigmaSet::whole(2), SigmaSet::empty(1));
    CHECK(fz.variant() == "Subsphere");
    CHECK(fz == SigmaSet::subsphere(Subspace::span(3, {v({1, 0, 0}), v({0, 1, 0})})));
    CHECK(fz.contains(v({3, -1, 0})));
    CHECK_FALSE(fz.contains(v({3, -1, 1})));

    auto bs = SigmaSet::points(1, {v({1})});
    auto two = spherical_join_complement(bs, bs);
    CHECK(two == SigmaSet::points(2, {v({1, 0}), v({0, 1})}));
    CHECK(isolated_points(two).size() == 2);

    auto witness = spherical_join_complement(SigmaSet::whole(2), two);
    CHECK(witness.variant() == "Mixed");
    CHECK(isolated_points(witness) == std::vector<QVector>{v({0, 0, 1, 0}), v({0, 0, 0, 1})});
    CHECK(isolated_points(SigmaSet::empty(3)).empty());
    CHECK(isolated_points(SigmaSet::whole(3)).empty());
    CHECK(isolated_points(SigmaSet::whole(1)).size() == 2);

    CHECK(spherical_join_complement(SigmaSet::unknown(2, "x"), bs).is_unknown());
    CHECK_THROWS_AS(isolated_points(SigmaSet::unknown(2, "x")), InvalidArgument);

    // Symmetry up to the coordinate swap.
    std::vector<SigmaSet> samples{SigmaSet::whole(2), two, SigmaSet::empty(2),
                                  SigmaSet::empty(2).add_polytope(SphericalPolytope({v({1, 2}), v({1, -1})}))};
    for (const auto& a : samples)
        for (const auto& b : {bs, SigmaSet::whole(1), SigmaSet::empty(1)}) {
            QMatrix swap(3, 3);
            swap(0, 1) = 1, swap(1, 2) = 1, swap(2, 0) = 1;  // (b, a1, a2) -> (a1, a2, b)
            CHECK(apply_linear_map(spherical_join_complement(b, a), swap) == spherical_join_complement(a, b));
        }
}

TEST_CASE("linear maps act on sigma sets") {
    auto two = SigmaSet::points(2, {v({1, 0}), v({0, 1})});
    CHECK(apply_linear_map(two, QMatrix::identity(2)) == two);
    auto swapped = apply_linear_map(two, QMatrix::from_rows({v({0, 1}), v({1, 0})}, 2));
    CHECK(swapped == two);
    auto perm = component_permutation(two, swapped);
    CHECK(perm == std::vector<std::optional<std::size_t>>{1, 0});

    auto poly = SigmaSet::empty(2).add_polytope(SphericalPolytope({v({1, 0}), v({0, 1})}));
    CHECK(apply_linear_map(poly, QMatrix::from_rows({v({2, 0}), v({0, 3})}, 2)) == poly);
    CHECK_THROWS_AS(apply_linear_map(two, QMatrix::from_rows({v({1, 1}), v({1, 1})}, 2)), SingularMap);

    std::mt19937_64 rng(9);
    auto mixed = SigmaSet::empty(3)
                     .add_polytope(SphericalPolytope({v({1, 0, 0}), v({1, 1, 0})}))
                     .add_polytope(SphericalPolytope({v({0, 0, -1})}));
    for (int i = 0; i < 20; ++i) {
        QMatrix m1 = random_unimodular(rng, 3), m2 = random_unimodular(rng, 3);
        CHECK(apply_linear_map(mixed, m1 * m2) == apply_linear_map(apply_linear_map(mixed, m2), m1));
    }
}

TEST_CASE("preimages restrict sets to subspaces") {
    auto two = SigmaSet::points(2, {v({1, 0}), v({0, 1})});
    CHECK(preimage(two, QMatrix::identity(2)) == two);
    // Point (1,0) is off the line spanned by (0,1).
    QMatrix line = QMatrix::from_rows({v({0}), v({1})}, 1);
    CHECK(preimage(SigmaSet::points(2, {v({1, 0})}), line).is_empty());
    CHECK(preimage(two, line) == SigmaSet::points(1, {v({1})}));
    CHECK(preimage(SigmaSet::empty(2), line).is_empty());
    CHECK(preimage(SigmaSet::whole(2), line).is_whole_sphere());

    auto cone = SigmaSet::empty(2).add_polytope(SphericalPolytope({v({1, 0}), v({0, 1})}));
    QMatrix diag = QMatrix::from_rows({v({1}), v({1})}, 1);
    CHECK(preimage(cone, diag) == SigmaSet::points(1, {v({1})}));
    auto rays = cone_intersect_subspace({v({1, 0, 0}), v({0, 1, 0}), v({0, 0, 1})},
                                        Subspace::span(3, {v({1, 1, 0}), v({0, 0, 1})}));
    std::sort(rays.begin(), rays.end());
    CHECK(rays == std::vector<QVector>{v({0, 0, 1}), v({1, 1, 0})});
    CHECK_THROWS_AS(preimage(two, QMatrix::from_rows({v({1, 2}), v({2, 4})}, 2)), InvalidArgument);
}

TEST_CASE("sigma set JSON round trip") {
    std::vector<SigmaSet> sets{SigmaSet::empty(2), SigmaSet::whole(3), SigmaSet::unknown(2, "no rule"),
                               spherical_join_complement(SigmaSet::whole(2), SigmaSet::points(2, {v({1, 0}), v({0, 1})})),
                               SigmaSet::empty(2).add_polytope(SphericalPolytope({v({1, 2}), v({3, -1})}))};
    for (const auto& s : sets) {
        Json j = to_json(s);
        CHECK(sigma_set_from_json(j) == s);
        CHECK(to_json(sigma_set_from_json(j)) == j);
    }
    CHECK_THROWS_AS(sigma_set_from_json(parse_json_text(R"({"ambient": 2, "components": [{"type": "blob"}]})")), ParseError);
}
