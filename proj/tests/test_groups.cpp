#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "sigmacert/errors.hpp"
#include "sigmacert/finite_groups.hpp"
#include "sigmacert/group_io.hpp"
#include "sigmacert/groups.hpp"
#include "test_support.hpp"

using namespace sigmacert;

namespace {

Word w_(const GroupDescriptor& g, std::initializer_list<const char*> letters) {
    Json arr = Json::array();
    for (auto l : letters) arr.push_back(l);
    return parse_word(arr, g.generators());
}

// Faithful matrix model: each generator is an invertible rational matrix.
struct MatrixModel {
    std::vector<QMatrix> gens, invs;

    explicit MatrixModel(std::vector<QMatrix> g) : gens(std::move(g)) {
        for (const auto& m : gens) invs.push_back(*inverse(m));
    }
    std::vector<std::string> eval(const Word& w) const {
        QMatrix m = QMatrix::identity(gens[0].rows());
        for (const auto& l : w) m = m * (l.sign > 0 ? gens[l.gen] : invs[l.gen]);
        std::vector<std::string> key;
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) key.push_back(m(i, j).get_str());
        return key;
    }
};

QMatrix m2(long a, long b, long c, long d) { return QMatrix::from_rows({{a, b}, {c, d}}, 2); }

// a: x -> x + 1, t_i: x -> m_i x
MatrixModel affine_model(const std::vector<long>& multipliers) {
    std::vector<QMatrix> g{m2(1, 1, 0, 1)};
    for (long m : multipliers) g.push_back(m2(m, 0, 0, 1));
    return MatrixModel(g);
}

// Klein bottle deck group: a(x,y) = (x+1, y), b(x,y) = (-x, y+1).
MatrixModel klein_model() {
    return MatrixModel({QMatrix::from_rows({{1, 0, 1}, {0, 1, 0}, {0, 0, 1}}, 3),
                        QMatrix::from_rows({{-1, 0, 0}, {0, 1, 1}, {0, 0, 1}}, 3)});
}

std::size_t count_by_enumeration(const MatrixModel& model, std::size_t gens, std::size_t radius) {
    std::set<std::vector<std::string>> seen;
    std::vector<Word> layer{{}};
    seen.insert(model.eval({}));
    for (std::size_t r = 0; r < radius; ++r) {
        std::vector<Word> next;
        for (const auto& w : layer)
            for (std::uint32_t g = 0; g < gens; ++g)
                for (int s : {1, -1}) {
                    Word x = w;
                    x.push_back({g, s});
                    seen.insert(model.eval(x));
                    next.push_back(x);
                }
        layer = std::move(next);
    }
    return seen.size();
}

GroupPtr klein() { return make_presentation({"a", "b"}, {{{1, 1}, {0, 1}, {1, -1}, {0, 1}}}, "K"); }

}  // namespace

TEST_CASE("normal forms of the documented examples") {
    auto f2 = make_free_group(2);
    CHECK(normal_form(w_(*f2, {"a", "b", "a^-1", "a", "b"}), *f2) == w_(*f2, {"a", "b", "b"}));

    auto bs = make_baumslag_solitar(2);
    CHECK(normal_form(w_(*bs, {"t", "a", "t^-1"}), *bs) == w_(*bs, {"a^2"}));

    auto z2 = make_abelian({0, 0});
    CHECK(normal_form(w_(*z2, {"a", "b", "a^-1"}), *z2) == w_(*z2, {"b"}));

    CHECK_THROWS_AS(normal_form({}, *make_free_product({make_abelian({2}), make_abelian({3})})), UnsupportedFamily);
    CHECK_THROWS_AS(normal_form({}, *make_thompson_f()), UnsupportedFamily);
    CHECK_THROWS_AS(normal_form({}, *make_presentation({"x", "y"}, {{{0, 1}, {0, 1}, {1, 1}, {1, 1}, {1, 1}}})),
                    UnsupportedFamily);
}

TEST_CASE("normal forms agree with faithful models") {
    struct Case {
        GroupPtr g;
        MatrixModel model;
    };
    std::vector<Case> cases{{make_baumslag_solitar(2), affine_model({2})},
                            {make_baumslag_solitar(3), affine_model({3})},
                            {make_gamma(12), affine_model({4, 3})},
                            {make_gamma(30), affine_model({2, 3, 5})},
                            {klein(), klein_model()}};
    // BS(1,2) generators are (a, t), the affine model lists a first as well
    std::mt19937_64 rng(5);
    for (const auto& c : cases) {
        CAPTURE(c.g->name());
        std::map<std::vector<std::string>, Word> by_model;
        std::map<Word, std::vector<std::string>> by_nf;
        for (int i = 0; i < 3000; ++i) {
            Word w = test_support::random_word(rng, c.g->generator_count(), 7);
            Word nf = normal_form(w, *c.g);
            auto key = c.model.eval(w);
            REQUIRE(c.model.eval(nf) == key);  // normal form represents the same element
            auto [it, fresh] = by_model.emplace(key, nf);
            REQUIRE(it->second == nf);  // equal elements, equal normal forms
            auto [jt, fresh2] = by_nf.emplace(nf, key);
            REQUIRE(jt->second == key);  // equal normal forms, equal elements
            REQUIRE(normal_form(nf, *c.g) == nf);
        }
        CHECK(by_model.size() < 3000);  // some collisions were actually exercised
    }
}

TEST_CASE("normal form properties across supported families") {
    std::vector<GroupPtr> groups{make_free_group(2),
                                 make_abelian({0, 0}),
                                 make_abelian({3, 0}),
                                 make_baumslag_solitar(2),
                                 make_gamma(12),
                                 klein(),
                                 make_finite(finite::symmetric(3), "S3"),
                                 make_direct_product({make_baumslag_solitar(2), make_abelian({0})})};
    std::mt19937_64 rng(11);
    for (const auto& g : groups) {
        CAPTURE(g->name());
        for (int i = 0; i < 500; ++i) {
            Word u = test_support::random_word(rng, g->generator_count(), 8);
            Word v = test_support::random_word(rng, g->generator_count(), 8);
            Word nu = normal_form(u, *g), nv = normal_form(v, *g);
            REQUIRE(normal_form(nu, *g) == nu);
            REQUIRE(normal_form(concat(u, v), *g) == normal_form(concat(nu, nv), *g));
            REQUIRE(normal_form(concat(u, inverse(u)), *g).empty());
        }
    }
}

TEST_CASE("finite group normal forms match table evaluation") {
    auto t = finite::symmetric(3);
    auto g = make_finite(t);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        Word w = test_support::random_word(rng, g->generator_count(), 6);
        std::uint32_t x = 0;
        for (const auto& l : w) x = t->mul(x, l.sign > 0 ? l.gen + 1 : t->inv(l.gen + 1));
        Word nf = normal_form(w, *g);
        CHECK(nf == (x == 0 ? Word{} : Word{{x - 1, 1}}));
    }
}

TEST_CASE("balls") {
    SUBCASE("Z radius 2 is a path on 5 vertices") {
        auto b = ball(*make_abelian({0}), 2);
        CHECK(b.size() == 5);
        std::size_t edges = 0;
        for (const auto& n : b.neighbors) edges += n.size();
        CHECK(edges == 8);  // 4 undirected edges
    }
    SUBCASE("F2 radius 1") { CHECK(ball(*make_free_group(2), 1).size() == 5); }
    SUBCASE("BS(1,2) radius 3 matches enumeration in the affine model") {
        auto b = ball(*make_baumslag_solitar(2), 3);
        CHECK(b.size() == count_by_enumeration(affine_model({2}), 2, 3));
    }
    SUBCASE("larger balls against the models") {
        CHECK(ball(*make_baumslag_solitar(2), 6).size() == count_by_enumeration(affine_model({2}), 2, 6));
        CHECK(ball(*make_gamma(12), 4).size() == count_by_enumeration(affine_model({4, 3}), 3, 4));
        CHECK(ball(*klein(), 5).size() == count_by_enumeration(klein_model(), 2, 5));
    }
    SUBCASE("monotone in R and closed under inversion") {
        for (const auto& g : {make_baumslag_solitar(2), make_gamma(12), make_free_group(2)}) {
            std::size_t prev = 0;
            for (std::size_t r = 0; r <= 4; ++r) {
                auto b = ball(*g, r);
                CHECK(b.size() >= prev);
                prev = b.size();
                for (const auto& v : b.vertices) CHECK(b.index_of(normal_form(inverse(v), *g)).has_value());
                for (std::size_t v = 0; v < b.size(); ++v)
                    for (auto u : b.neighbors[v]) {
                        const auto& back = b.neighbors[u];
                        CHECK(std::find(back.begin(), back.end(), v) != back.end());
                    }
            }
        }
    }
    SUBCASE("budget") { CHECK_THROWS_AS(ball(*make_free_group(3), 8, 1000), BallTooLarge); }
}

TEST_CASE("validate_homomorphism") {
    auto z2 = make_abelian({0, 0});
    Homomorphism swap{z2, z2, {w_(*z2, {"b"}), w_(*z2, {"a"})}};
    CHECK(validate_homomorphism(swap) == ValidationLevel::Exact);
    CHECK(swap.level == ValidationLevel::Exact);

    auto k = klein();
    Homomorphism inv_a{k, k, {w_(*k, {"a^-1"}), w_(*k, {"b"})}};
    CHECK(validate_homomorphism(inv_a) == ValidationLevel::Exact);

    auto bs = make_baumslag_solitar(2);
    Homomorphism sq{bs, bs, {w_(*bs, {"a^2"}), w_(*bs, {"t"})}};
    CHECK(validate_homomorphism(sq) == ValidationLevel::Exact);

    Homomorphism bad{bs, bs, {w_(*bs, {"t"}), w_(*bs, {"t"})}};
    CHECK_THROWS_AS(validate_homomorphism(bad), NotAHomomorphism);

    // [a,b] dies in the abelianization of F2 but not in F2
    auto f2 = make_free_group(2);
    Homomorphism incl{z2, f2, {w_(*f2, {"a"}), w_(*f2, {"b"})}};
    CHECK_THROWS_AS(validate_homomorphism(incl), NotAHomomorphism);

    // no normal forms in the target: abelianized-only
    auto gen = make_presentation({"x", "y"}, {{{0, 1}, {0, 1}, {1, -1}, {1, -1}, {1, -1}}});
    Homomorphism id = identity_homomorphism(gen);
    id.level = ValidationLevel::Unvalidated;
    CHECK(validate_homomorphism(id) == ValidationLevel::AbelianizedOnly);

    Homomorphism short_images{z2, z2, {w_(*z2, {"a"})}};
    CHECK_THROWS_AS(validate_homomorphism(short_images), InvalidArgument);
}

TEST_CASE("exact validation implies relator images reduce to the identity") {
    auto z2 = make_abelian({0, 0});
    std::mt19937_64 rng(17);
    int exact = 0;
    for (int i = 0; i < 200; ++i) {
        Homomorphism phi{z2, z2, {test_support::random_word(rng, 2, 4), test_support::random_word(rng, 2, 4)}};
        if (validate_homomorphism(phi) == ValidationLevel::Exact) {
            ++exact;
            for (const auto& r : z2->relators()) CHECK(normal_form(map_word(phi, r), *z2).empty());
        }
    }
    CHECK(exact == 200);
}

TEST_CASE("composition of homomorphisms") {
    auto bs = make_baumslag_solitar(2);
    Homomorphism sq{bs, bs, {w_(*bs, {"a^2"}), w_(*bs, {"t"})}};
    Homomorphism conj{bs, bs, {w_(*bs, {"a"}), w_(*bs, {"a", "t", "a^-1"})}};
    auto c = compose(sq, conj);
    CHECK(validate_homomorphism(c) == ValidationLevel::Exact);
    Word x = w_(*bs, {"t", "a", "t^-1", "a"});
    CHECK(normal_form(map_word(c, x), *bs) == normal_form(map_word(sq, map_word(conj, x)), *bs));
}

TEST_CASE("parse_group") {
    SUBCASE("BS(1,2)") {
        auto g = parse_group(R"({"kind": "BaumslagSolitar1n", "n": 2})");
        REQUIRE(g->as<family::BaumslagSolitar1n>());
        CHECK(g->as<family::BaumslagSolitar1n>()->n == 2);
        CHECK(g->name() == "BS(1,2)");
    }
    SUBCASE("Gamma_12") {
        auto g = parse_group(R"({"kind": "GammaN", "n": 12})");
        const auto* f = g->as<family::GammaN>();
        REQUIRE(f);
        CHECK(f->factorization == std::vector<std::pair<Integer, unsigned>>{{2, 2}, {3, 1}});
        CHECK(g->generators() == std::vector<std::string>{"a", "t1", "t2"});
    }
    SUBCASE("Klein bottle presentation") {
        auto g = parse_group(R"({"kind": "FinitePresentation", "generators": ["a", "b"],
                                 "relators": [["b", "a", "b^-1", "a"]]})");
        CHECK(g->as<family::FinitePresentation>());
        CHECK(supports_normal_form(*g));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(parse_group(R"({"kind": "BaumslagSolitar1n", "n": 1})"), ParseError);
        CHECK_THROWS_AS(parse_group(R"({"kind": "GammaN", "n": 12, "factorization": [[2, 1], [3, 1]]})"), ParseError);
        try {
            parse_group("{\"kind\": \"FreeGroup\", \"rank\": }");
            FAIL("expected a syntax error");
        } catch (const ParseError& e) {
            CHECK(e.location() == "byte 31");
        }
        try {
            parse_group(R"({"kind": "FinitePresentation", "generators": ["a"], "relators": [["a", "z"]]})");
            FAIL("expected an unknown generator");
        } catch (const ParseError& e) {
            CHECK(e.location() == "$.relators[0][1]");
        }
        // conjugation a -> t is not an endomorphism of BS(1,2)
        CHECK_THROWS_AS(parse_group(R"({"kind": "FiniteExtension",
            "kernel": {"kind": "BaumslagSolitar1n", "n": 2},
            "quotient": {"library": "C2"}, "transversal": {"g1": "s"},
            "conjugation": {"s": {"a": ["t"], "t": ["t"]}},
            "cocycle": [{"q": "g1", "r": "g1", "word": []}]})"),
                        ParseError);
        // missing cocycle value
        CHECK_THROWS_AS(parse_group(R"({"kind": "FiniteExtension",
            "kernel": {"kind": "FinitelyGeneratedAbelian", "factors": [0]},
            "quotient": {"library": "C2"}, "transversal": {"g1": "s"},
            "conjugation": {"s": {"a": ["a^-1"]}}, "cocycle": []})"),
                        ParseError);
    }
}

TEST_CASE("descriptor round trip") {
    std::vector<GroupPtr> groups{
        make_free_group(2), make_abelian({0, 2}), make_baumslag_solitar(3), make_gamma(30),
        make_finite(finite::named("Q8")), make_direct_product({make_free_group(2), make_baumslag_solitar(2), make_baumslag_solitar(2)}),
        make_free_product({make_abelian({0}), make_abelian({2})}), make_thompson_f(), make_lamplighter(2),
        make_characteristic_quotient("G", make_baumslag_solitar(2), "kernel is characteristic"), klein(),
        load_group(test_support::data_path("groups/klein_ext.json"))};
    for (const auto& g : groups) {
        CAPTURE(g->name());
        Json j = to_json(*g);
        auto back = group_from_json(j);
        CHECK(to_json(*back) == j);
        CHECK(back->generators() == g->generators());
        CHECK(back->relators() == g->relators());
    }
}

TEST_CASE("direct product generator naming") {
    auto g = make_direct_product({make_free_group(2), make_baumslag_solitar(2), make_baumslag_solitar(2)});
    CHECK(g->generators() == std::vector<std::string>{"a_1", "b_1", "a_2", "t_2", "a_3", "t_3"});
    auto h = make_direct_product({make_free_group(1, {"x"}), make_baumslag_solitar(2)});
    CHECK(h->generators() == std::vector<std::string>{"x", "a", "t"});
}

TEST_CASE("finite group library") {
    CHECK(finite::symmetric(3)->order() == 6);
    CHECK_FALSE(finite::symmetric(3)->is_abelian());
    CHECK(finite::symmetric(4)->order() == 24);
    CHECK(finite::alternating(4)->order() == 12);
    CHECK(finite::quaternion()->order() == 8);
    CHECK(finite::dicyclic(3)->order() == 12);
    CHECK(finite::sl2_f3()->order() == 24);
    CHECK(finite::dihedral(2)->order() == 4);
    CHECK(finite::dihedral(2)->is_abelian());
    CHECK(finite::named("C2xC4")->order() == 8);
    CHECK_THROWS_AS(finite::named("Z9"), ParseError);
    for (const auto& [name, t] : finite::bundled()) CHECK(t->order() <= 24);

    // Q8 has a unique element of order 2; D4 has five
    auto involutions = [](const FiniteGroupTable& t) {
        int n = 0;
        for (std::uint32_t x = 1; x < t.order(); ++x) n += t.mul(x, x) == 0;
        return n;
    };
    CHECK(involutions(*finite::quaternion()) == 1);
    CHECK(involutions(*finite::dihedral(4)) == 5);

    CHECK_THROWS_AS(FiniteGroupTable({"e", "x"}, {{0, 1}, {1, 1}}), InvalidArgument);
}

TEST_CASE("abelianization relation matrices") {
    auto bs = make_baumslag_solitar(2);
    auto r = relation_matrix(*bs);
    CHECK(r == IntMatrix{{-1, 0}});
    CHECK_THROWS_AS(relation_matrix(*make_characteristic_quotient("G", bs, "j")), UnsupportedFamily);
}
