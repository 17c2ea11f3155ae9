#include <doctest.h>

#include <cmath>
#include <random>

#include "sigmacert/characters.hpp"
#include "sigmacert/errors.hpp"
#include "sigmacert/finite_groups.hpp"
#include "test_support.hpp"

using namespace sigmacert;

namespace {

FieldPtr sqrt2_field(std::vector<CoefficientField::Symbol> symbols = {}) {
    return CoefficientField::make("sqrt2", {-2, 0, 1}, {1, 2}, std::move(symbols));
}
FieldPtr cbrt2_field() { return CoefficientField::make("cbrt2", {-2, 0, 0, 1}, {1, 2}); }
FieldPtr pi_field() { return CoefficientField::make_transcendental({{"pi", std::nullopt}}); }

Scalar S(const std::string& text, const FieldPtr& f) { return parse_scalar(text, f); }

// |Hom(G, Z/m)| by brute force over all generator assignments.
long count_homs_brute(const GroupDescriptor& g, long m) {
    const std::size_t n = g.generator_count();
    std::vector<long> x(n, 0);
    long count = 0;
    while (true) {
        bool ok = true;
        for (const auto& r : g.relators()) {
            long s = 0;
            for (const auto& l : r) s += l.sign * x[l.gen];
            ok = ok && ((s % m) + m) % m == 0;
        }
        count += ok;
        std::size_t i = 0;
        while (i < n && x[i] == m - 1) x[i++] = 0;
        if (i == n) break;
        ++x[i];
    }
    return count;
}

long count_homs_formula(const AbelianStructure& a, long m) {
    long c = 1;
    for (std::size_t i = 0; i < a.free_rank; ++i) c *= m;
    for (const auto& t : a.torsion) c *= std::gcd(t.get_si(), m);
    return c;
}

IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n) {
    IntMatrix u = IntMatrix::identity(n);
    std::uniform_int_distribution<std::size_t> idx(0, n - 1);
    std::uniform_int_distribution<int> f(-2, 2);
    for (int s = 0; s < 6; ++s) {
        std::size_t i = idx(rng), j = idx(rng);
        if (i != j) u.add_row_multiple(i, j, f(rng));
        else if (f(rng) > 0) u.negate_row(i);
    }
    return u;
}

Homomorphism abelian_automorphism(const GroupPtr& g, const IntMatrix& u) {
    Homomorphism phi{g, g, {}, ValidationLevel::Unvalidated};
    for (std::size_t j = 0; j < u.cols(); ++j) {
        Word w;
        for (std::size_t i = 0; i < u.rows(); ++i) {
            long e = u(i, j).get_si();
            for (long k = 0; k < std::abs(e); ++k) w.push_back({static_cast<std::uint32_t>(i), e > 0 ? 1 : -1});
        }
        phi.images.push_back(w);
    }
    validate_homomorphism(phi);
    return phi;
}

// Random Nielsen automorphism of F_2.
Homomorphism nielsen(const GroupPtr& f2, std::mt19937_64& rng) {
    Word a{{0, 1}}, b{{1, 1}};
    std::uniform_int_distribution<int> move(0, 3);
    for (int s = 0; s < 4; ++s) {
        switch (move(rng)) {
            case 0: a = free_reduce(concat(a, b)); break;
            case 1: b = free_reduce(concat(b, inverse(a))); break;
            case 2: std::swap(a, b); break;
            default: a = inverse(a); break;
        }
    }
    Homomorphism phi{f2, f2, {a, b}, ValidationLevel::Unvalidated};
    validate_homomorphism(phi);
    return phi;
}

QVector random_rational_vector(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
    QVector v(n);
    bool zero = true;
    for (auto& x : v) {
        x = Rational(num(rng), den(rng));
        x.canonicalize();
        zero = zero && x == 0;
    }
    if (zero) v[0] = 1;
    return v;
}

}  // namespace

TEST_CASE("coefficient fields validate the minimal polynomial and interval") {
    CHECK(sturm_root_count({-2, 0, 1}, -2, 2) == 2);
    CHECK(sturm_root_count({-2, 0, 1}, 0, 2) == 1);
    CHECK(sturm_root_count({1, 0, 1}, -10, 10) == 0);
    CHECK(provably_irreducible({-2, 0, 1}));
    CHECK(provably_irreducible({-2, 0, 0, 1}));
    CHECK(provably_irreducible({1, 0, 0, 0, 1}));
    CHECK(provably_irreducible({-1, -1, 1}));
    CHECK_FALSE(provably_irreducible({-4, 0, 1}));
    CHECK_FALSE(provably_irreducible({-4, 0, 0, 0, 1}));  // (x^2-2)(x^2+2)
    CHECK_FALSE(provably_irreducible({0, -2, 0, 1}));

    CHECK_THROWS_AS(CoefficientField::make("r", {-4, 0, 1}, {1, 3}), InvalidArgument);
    CHECK_THROWS_AS(CoefficientField::make("r", {-2, 0, 1}, {-2, 2}), InvalidArgument);
    CHECK_THROWS_AS(CoefficientField::make("r", {-2, 0, 1}, {2, 3}), InvalidArgument);
    CHECK(sqrt2_field()->degree() == 2);
    CHECK(*sqrt2_field() == *sqrt2_field());
}

TEST_CASE("scalar arithmetic agrees with floating point evaluation") {
    auto f = sqrt2_field({{"pi", std::nullopt}});
    const double r2 = std::sqrt(2.0), pi = std::acos(-1.0);
    Scalar t = Scalar::theta(f), p = Scalar::symbol(f, 0);
    CHECK(t * t == Scalar(2));
    CHECK(std::abs((t * p + Scalar(Rational(3, 2))).approx() - (r2 * pi + 1.5)) < 1e-12);
    CHECK(S("(1 + sqrt2)^2", f) == S("3 + 2*sqrt2", f));
    CHECK(S("pi^-1*pi", f) == Scalar(1));
    CHECK(std::abs(S("pi^2 - 3*sqrt2*pi", f).approx() - (pi * pi - 3 * r2 * pi)) < 1e-10);
    auto inv = S("1 + sqrt2", f).inverse();
    REQUIRE(inv);
    CHECK(*inv == S("sqrt2 - 1", f));
    CHECK_FALSE(S("1 + pi", f).inverse());

    auto c = cbrt2_field();
    Scalar x = S("1 + cbrt2 + cbrt2^2", c);
    CHECK(std::abs(x.inverse()->approx() - 1 / (1 + std::cbrt(2.0) + std::cbrt(4.0))) < 1e-12);
}

TEST_CASE("scalar signs come from exact enclosures") {
    auto f = sqrt2_field({{"pi", std::nullopt}, {"e", std::nullopt}, {"x", std::nullopt}});
    CHECK(S("pi - 355/113", f).sign() == -1);
    CHECK(S("pi - 3.14159265", f).sign() == 1);
    CHECK(S("e - 2.718281828", f).sign() == 1);
    CHECK(S("e - 2.718281829", f).sign() == -1);
    CHECK(S("sqrt2 - 99/70", f).sign() == -1);
    CHECK(S("sqrt2 - 140/99", f).sign() == 1);
    CHECK(S("0", f).sign() == 0);
    CHECK_THROWS_AS(S("x", f).sign(), UndecidableSign);
    auto g = CoefficientField::make_transcendental({{"x", Interval{Rational(1, 3), Rational(1, 2)}}});
    CHECK(S("x - 1", g).sign() == -1);
    CHECK_THROWS_AS(S("x - 2/5", g).sign(), UndecidableSign);
}

TEST_CASE("scalar printing round-trips through the parser") {
    auto f = sqrt2_field({{"pi", std::nullopt}});
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> c(-5, 5), e(-2, 2);
    for (int i = 0; i < 200; ++i) {
        Scalar s(f);
        for (int k = 0; k < 3; ++k) {
            Scalar term = Scalar(f, Rational(c(rng), 1 + (c(rng) + 5) % 3));
            if (c(rng) > 0) term = term * Scalar::theta(f);
            const int pe = e(rng);
            for (int j = 0; j < std::abs(pe); ++j)
                term = term * (pe > 0 ? Scalar::symbol(f, 0) : *Scalar::symbol(f, 0).inverse());
            s += term;
        }
        CHECK(parse_scalar(s.to_string(), f) == s);
    }
    CHECK_THROWS_AS(parse_scalar("1 + y", f), ParseError);
    CHECK_THROWS_AS(parse_scalar("(1 + pi", f), ParseError);
    CHECK_THROWS_AS(parse_scalar("(1 + pi)^-1", f), ParseError);
}

TEST_CASE("abelianization of the documented groups") {
    auto bs = make_baumslag_solitar(2);
    auto a = abelianization(*bs);
    CHECK(a.free_rank == 1);
    CHECK(a.torsion.empty());

    auto gamma = make_gamma(12);
    CHECK(abelianization(*gamma).free_rank == 2);

    auto klein = load_group(test_support::data_path("groups/klein.json"));
    auto k = abelianization(*klein);
    CHECK(k.free_rank == 1);
    REQUIRE(k.torsion.size() == 1);
    CHECK(k.torsion[0] == 2);
    CHECK(abelianization(*load_group(test_support::data_path("groups/klein_ext.json"))).free_rank == 1);
    CHECK(abelianization(*load_group(test_support::data_path("groups/dinf_ext.json"))).free_rank == 0);
}

TEST_CASE("abelianization matches brute-force homomorphism counts into Z/m") {
    std::mt19937_64 rng(5);
    std::vector<GroupPtr> groups{make_baumslag_solitar(2), make_baumslag_solitar(3), make_gamma(12),
                                 load_group(test_support::data_path("groups/klein.json")),
                                 load_group(test_support::data_path("groups/klein_ext.json")), make_thompson_f(),
                                 make_lamplighter(2), make_finite(finite::symmetric(3))};
    for (int i = 0; i < 25; ++i) {
        const std::size_t n = 1 + i % 3;
        std::vector<Word> rels;
        for (int r = 0; r < 1 + i % 3; ++r) rels.push_back(test_support::random_word(rng, n, 6));
        std::vector<std::string> gens;
        for (std::size_t j = 0; j < n; ++j) gens.push_back("x" + std::to_string(j));
        groups.push_back(make_presentation(gens, rels));
    }
    for (const auto& g : groups) {
        if (g->generator_count() > 6) continue;
        const auto a = abelianization(*g);
        for (long m : {2, 3, 4, 6}) CHECK(count_homs_brute(*g, m) == count_homs_formula(a, m));
        CHECK(betti_number(*g) == a.free_rank);
    }
}

TEST_CASE("character_from_values validates relators") {
    auto bs = load_group(test_support::data_path("groups/bs12.json"));
    auto chi = character_from_values(bs, {Scalar(0), Scalar(1)});
    CHECK(chi.coordinates().size() == 1);
    CHECK(chi.coordinates()[0] == Scalar(1));
    try {
        character_from_values(bs, {Scalar(1), Scalar(0)});
        FAIL("expected NotACharacter");
    } catch (const NotACharacter& e) {
        CHECK(std::string(e.what()).find("relator") != std::string::npos);
    }
    CHECK_THROWS_AS(character_from_values(bs, {Scalar(1)}), DimensionMismatch);

    auto f = sqrt2_field({{"pi", std::nullopt}});
    auto z3 = make_abelian({0, 0, 0}, {"a", "b", "c"});
    auto psi = character_from_values(z3, {S("1", f), S("sqrt2", f), S("pi", f)});
    CHECK(psi.evaluate({{0, 2}, {1, 1}, {2, -1}}) == S("2 + sqrt2 - pi", f));
    CHECK_FALSE(psi.is_rational());

    // Torsion generators are forced to zero.
    auto zt = make_abelian({0, 3});
    CHECK_THROWS_AS(character_from_values(zt, {Scalar(1), Scalar(1)}), NotACharacter);
    CHECK(character_from_values(zt, {Scalar(5), Scalar(0)}).coordinates().size() == 1);

    // Relator vanishing on every coordinate-built character.
    std::mt19937_64 rng(3);
    for (const auto& g : {make_gamma(12), make_gamma(30), load_group(test_support::data_path("groups/klein_ext.json"))}) {
        for (int i = 0; i < 10; ++i) {
            auto c = rational_character(g, random_rational_vector(rng, betti_number(*g)));
            for (const auto& r : g->relators()) CHECK(c.evaluate(r).is_zero());
        }
    }
}

TEST_CASE("pullback") {
    auto klein = load_group(test_support::data_path("groups/klein.json"));
    auto chi = character_from_values(klein, {Scalar(0), Scalar(1)});
    CHECK(pullback(chi, identity_homomorphism(klein)) == chi);

    Homomorphism phi{klein, klein, {{{0, -1}}, {{1, 1}}}, ValidationLevel::Unvalidated};
    validate_homomorphism(phi);
    CHECK(pullback(chi, phi) == chi);

    auto bs = make_baumslag_solitar(2);
    CHECK_THROWS_AS(pullback(chi, identity_homomorphism(bs)), InvalidArgument);
}

TEST_CASE("pullback is contravariantly functorial and matches direct evaluation") {
    std::mt19937_64 rng(17);
    auto f = sqrt2_field();
    auto z2 = make_abelian({0, 0});
    auto f2 = make_free_group(2);
    for (int i = 0; i < 30; ++i) {
        const bool free = i % 2 == 1;
        GroupPtr g = free ? f2 : z2;
        Homomorphism phi = free ? nielsen(f2, rng) : abelian_automorphism(z2, random_unimodular(rng, 2));
        Homomorphism psi = free ? nielsen(f2, rng) : abelian_automorphism(z2, random_unimodular(rng, 2));
        std::uniform_int_distribution<int> c(-4, 4);
        auto chi = character_from_values(g, {Scalar(f, c(rng)) + Scalar(c(rng)) * Scalar::theta(f), Scalar(c(rng))});
        auto lhs = pullback(chi, compose(phi, psi));
        auto rhs = pullback(pullback(chi, phi), psi);
        CHECK(lhs == rhs);
        for (int k = 0; k < 5; ++k) {
            Word w = test_support::random_word(rng, 2, 8);
            CHECK(lhs.evaluate(w) == chi.evaluate(map_word(phi, map_word(psi, w))));
        }
        // Coordinate matrix agrees with the pulled-back character.
        QMatrix m = pullback_matrix(phi);
        auto pulled = pullback(chi, phi);
        for (std::size_t r = 0; r < m.rows(); ++r) {
            Scalar s(f);
            for (std::size_t j = 0; j < m.cols(); ++j) s += Scalar(m(r, j)) * chi.coordinates()[j];
            CHECK(s == pulled.coordinates()[r]);
        }
        if (phi.level == ValidationLevel::Exact) CHECK(image_subgroup(pulled) == image_subgroup(chi));
    }
}

TEST_CASE("canonical class representatives") {
    auto z2 = make_abelian({0, 0});
    auto c1 = canonical_class_rep(rational_character(z2, {2, 4}));
    CHECK(c1.rational);
    CHECK(*c1.integer_coordinates == ZVector{1, 2});
    CHECK(*canonical_class_rep(rational_character(z2, {-3, 0})).integer_coordinates == ZVector{-1, 0});

    auto f = sqrt2_field();
    auto c3 = canonical_class_rep(character_from_values(z2, {S("sqrt2", f), S("2*sqrt2", f)}));
    CHECK(c3.rational);
    CHECK(*c3.integer_coordinates == ZVector{1, 2});
    CHECK(c3.representative == rational_character(z2, {1, 2}));

    auto c4 = canonical_class_rep(character_from_values(z2, {S("-2", f), S("2*sqrt2", f)}));
    CHECK_FALSE(c4.rational);
    CHECK(c4.representative.coordinates()[0] == Scalar(-1));
    CHECK(c4.representative.coordinates()[1] == S("sqrt2", f));

    CHECK_THROWS_AS(canonical_class_rep(rational_character(z2, {0, 0})), InvalidArgument);
}

TEST_CASE("canonical representatives are invariant under positive rational scaling") {
    std::mt19937_64 rng(23);
    auto f = sqrt2_field({{"pi", std::nullopt}});
    auto z3 = make_abelian({0, 0, 0});
    std::uniform_int_distribution<int> c(-3, 3), d(1, 4);
    for (int i = 0; i < 60; ++i) {
        std::vector<Scalar> v;
        for (int k = 0; k < 3; ++k) {
            Scalar x = Scalar(f, c(rng));
            if (i % 3 >= 1) x += Scalar(c(rng)) * Scalar::theta(f);
            if (i % 3 == 2) x += Scalar(c(rng)) * Scalar::symbol(f, 0);
            v.push_back(x);
        }
        auto chi = character_from_values(z3, v);
        if (chi.is_trivial()) continue;
        Rational s(d(rng), d(rng));
        s.canonicalize();
        CHECK(canonical_class_rep(chi.scaled(Scalar(s))).representative == canonical_class_rep(chi).representative);
    }
}

TEST_CASE("image subgroups are canonical HNF bases") {
    auto f = sqrt2_field();
    auto z3 = make_abelian({0, 0, 0});
    auto a = image_subgroup(character_from_values(z3, {S("2", f), S("3", f), S("sqrt2", f)}));
    auto b = image_subgroup(character_from_values(z3, {S("1", f), S("sqrt2 + 5", f), S("0", f)}));
    CHECK(a == b);
    CHECK(a.rank() == 2);
    auto c = image_subgroup(character_from_values(z3, {S("2", f), S("4", f), S("2*sqrt2", f)}));
    CHECK(c.rank() == 2);
    CHECK_FALSE(a == c);
}

TEST_CASE("rigidity decisions") {
    auto z = make_abelian({0});
    auto z2 = make_abelian({0, 0});
    CHECK(is_rigid(rational_character(z, {1})).verdict == RigidityResult::Verdict::Rigid);

    auto cube = load_character(test_support::data_path("characters/z2_cbrt2.json"));
    auto rc = is_rigid(cube);
    CHECK(rc.verdict == RigidityResult::Verdict::Rigid);
    CHECK(rc.multiplier_rank == 1);

    auto root2 = load_character(test_support::data_path("characters/z2_sqrt2.json"));
    auto r2 = is_rigid(root2);
    REQUIRE(r2.verdict == RigidityResult::Verdict::NotRigid);
    REQUIRE(r2.witness);
    CHECK(*r2.witness == S("1 + sqrt2", root2.field()));
    // (1+sqrt2)*1 = 1 + sqrt2 and (1+sqrt2)*sqrt2 = 2 + sqrt2: integral, det(1 1; 2 1) = -1.
    auto act = multiplier_action(*r2.witness, {Scalar(root2.field(), 1), Scalar::theta(root2.field())});
    REQUIRE(act);
    CHECK(*act == QMatrix::from_rows({{1, 2}, {1, 1}}, 2));

    // Z + 2 sqrt2 Z has multiplier ring Z[sqrt8]; its units are powers of 3 + 2 sqrt2.
    auto f = root2.field();
    auto r8 = is_rigid(character_from_values(z2, {S("1", f), S("2*sqrt2", f)}));
    REQUIRE(r8.witness);
    CHECK(*r8.witness == S("3 + 2*sqrt2", f));

    auto f5 = CoefficientField::make("sqrt5", {-5, 0, 1}, {2, 3});
    auto gold = is_rigid(character_from_values(z2, {S("1", f5), S("1/2 + 1/2*sqrt5", f5)}));
    REQUIRE(gold.witness);
    CHECK(*gold.witness == S("1/2 + 1/2*sqrt5", f5));

    auto p = load_character(test_support::data_path("characters/z2_pi.json"));
    CHECK(is_rigid(p).verdict == RigidityResult::Verdict::Rigid);

    auto mixed = load_character(test_support::data_path("characters/z3_sqrt2_pi.json"));
    CHECK(is_rigid(mixed).verdict == RigidityResult::Verdict::Unknown);

    CHECK_THROWS_AS(is_rigid(rational_character(z2, {0, 0})), InvalidArgument);
}

TEST_CASE("rational characters are rigid through the multiplier ring as well") {
    std::mt19937_64 rng(29);
    auto z3 = make_abelian({0, 0, 0});
    for (int i = 0; i < 40; ++i) {
        auto chi = rational_character(z3, random_rational_vector(rng, 3));
        auto r = is_rigid(chi);
        CHECK(r.verdict == RigidityResult::Verdict::Rigid);
        CHECK(r.multiplier_rank == 1);
    }
    // A rational character written over Q(sqrt2) takes the multiplier-ring path.
    auto f = sqrt2_field();
    auto chi = character_from_values(z3, {S("3", f), S("5/2", f), S("0", f)});
    CHECK(is_rigid(chi).verdict == RigidityResult::Verdict::Rigid);
}

TEST_CASE("transcendence decisions") {
    auto z = make_abelian({0});
    CHECK(is_transcendental(rational_character(z, {3})).value == Decision::True);
    CHECK(is_transcendental(load_character(test_support::data_path("characters/z2_cbrt2.json"))).value ==
          Decision::False);
    CHECK(is_transcendental(load_character(test_support::data_path("characters/z2_pi.json"))).value == Decision::True);
    CHECK(is_transcendental(load_character(test_support::data_path("characters/z3_sqrt2_pi.json"))).value ==
          Decision::False);
    auto f = sqrt2_field({{"pi", std::nullopt}});
    auto z2 = make_abelian({0, 0});
    CHECK(is_transcendental(character_from_values(z2, {S("1", f), S("sqrt2*pi", f)})).value == Decision::Unknown);
    CHECK_THROWS_AS(is_transcendental(rational_character(z2, {0, 0})), InvalidArgument);
}

TEST_CASE("fix subspaces of finite extensions") {
    auto klein = load_group(test_support::data_path("groups/klein_ext.json"));
    auto fix = fix_subspace(*klein);
    CHECK(fix.subspace.dim() == 1);
    CHECK(fix.subspace == Subspace::span(2, {{0, 1}}));

    auto dinf = load_group(test_support::data_path("groups/dinf_ext.json"));
    CHECK(fix_subspace(*dinf).subspace.dim() == 0);

    family::FiniteExtension trivial{make_abelian({0, 0}), finite::cyclic(1), {""}, {{}}, {}};
    auto t = make_finite_extension(trivial);
    CHECK(fix_subspace(*t).subspace.dim() == 2);

    CHECK_THROWS_AS(fix_subspace(*make_abelian({0})), InvalidArgument);

    // Every basis vector satisfies phi(alpha_q(h)) = phi(h) for all stored conjugations.
    for (const auto& e : {klein, dinf, make_direct_product({klein, make_abelian({0})})}) {
        const auto* ext = e->as<family::FiniteExtension>();
        if (!ext) continue;
        for (const auto& v : fix_subspace(*e).subspace.basis_vectors()) {
            auto phi = rational_character(ext->kernel, v);
            for (std::size_t q = 1; q < ext->quotient->order(); ++q)
                for (std::size_t h = 0; h < ext->kernel->generator_count(); ++h)
                    CHECK(phi.evaluate(ext->conjugation[q][h]) == phi.evaluate({{static_cast<std::uint32_t>(h), 1}}));
        }
    }
}

TEST_CASE("restriction to the kernel lands in the fixed subspace") {
    auto klein = load_group(test_support::data_path("groups/klein_ext.json"));
    QMatrix r = restriction_matrix(klein);
    CHECK(r.rows() == 2);
    CHECK(r.cols() == 1);
    // G character with b = 1 has c = b^2 = 2 and a = 0.
    auto chi = character_from_values(klein, {Scalar(0), Scalar(2), Scalar(1)});
    auto restricted = pullback(chi, kernel_inclusion(klein));
    CHECK(restricted.coordinates()[0] == Scalar(0));
    CHECK(restricted.coordinates()[1] == Scalar(2));
    CHECK(fix_subspace(*klein).subspace.contains(r.col(0)));
}

TEST_CASE("character JSON round trip and errors") {
    for (const char* name : {"bs12_t.json", "z3_sqrt2_pi.json", "z2_sqrt2.json", "z2_cbrt2.json", "z2_pi.json",
                             "klein_b.json"}) {
        auto chi = load_character(test_support::data_path(std::string("characters/") + name));
        Json j = to_json(chi);
        auto back = character_from_json(j);
        CHECK(back == chi);
        CHECK(to_json(back) == j);
    }
    auto bs = load_character(test_support::data_path("characters/bs12_t.json"));
    CHECK(bs.values()[1] == Scalar(1));

    auto bad = [](const std::string& text) { return character_from_json(parse_json_text(text), "$", SIGMACERT_DATA_DIR); };
    const std::string z2 = R"("group": {"kind": "FinitelyGeneratedAbelian", "factors": [0, 0]})";
    CHECK_THROWS_AS(bad("{" + z2 + R"(, "values": {"a": 1, "q": 2}})"), ParseError);
    CHECK_THROWS_AS(bad("{" + z2 + R"(, "values": {"a": 1}})"), ParseError);
    CHECK_THROWS_AS(bad("{" + z2 + R"(, "values": {"a": "1 +", "b": 0}})"), ParseError);
    CHECK_THROWS_AS(bad("{" + z2 + R"(, "field": {"theta": {"name": "r", "minpoly": [-4, 0, 1], "interval": [1, 3]}}, "values": [1, 0]})"),
                    ParseError);
    CHECK_THROWS_AS(bad("{" + z2 + R"(, "values": [1, 0], "coordinates": [0, 1]})"), ParseError);
    CHECK_THROWS_AS(bad(R"({"group": {"ref": "groups/bs12.json"}, "values": [1, 0]})"), ParseError);
    try {
        bad("{" + z2 + R"(, "values": {"a": 1, "b": "2*y"}})");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.location() == "$.values.b");
    }
}
