#include "sigmacert/certify.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <map>
#include <set>

#include "sigmacert/errors.hpp"
#include "sigmacert/reidemeister.hpp"

namespace sigmacert {

namespace {

constexpr const char* kCoordinateConvention =
    "characters are written in coordinates of the Hermite basis of Hom(G, Z) (integer kernel of the relation matrix)";
constexpr const char* kPrimitiveConvention =
    "the fixed character is the sum of the primitive integer representatives of the chosen vertex classes";

// ------------------------------------------------------------- JSON helpers

Json points_json(const std::vector<QVector>& pts) {
    Json a = Json::array();
    for (const auto& p : pts) a.push_back(vector_to_json(p));
    return a;
}

std::vector<QVector> points_from(const Json& j) {
    std::vector<QVector> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(vector_from_json(j[i], "$.points[" + std::to_string(i) + "]"));
    return out;
}

QVector sum_of_rays(const std::vector<QVector>& pts) {
    QVector s(pts.empty() ? 0 : pts[0].size());
    for (const auto& p : pts) s = add(s, canonical_ray(p));
    return s;
}

void strip_metadata(Json& j) {
    if (j.is_object()) {
        j.erase("name");
        j.erase("assertions");
        j.erase("schema");
        for (auto& [k, v] : j.items()) strip_metadata(v);
    } else if (j.is_array()) {
        for (auto& v : j) strip_metadata(v);
    }
}

std::string b1_text(const GroupDescriptor& g) { return "b1(" + g.name() + ")"; }

// ------------------------------------------------------------- check verifiers

using Verifier = std::function<bool(const Json& data, const GroupPtr& subject)>;

bool cones_meet(const std::vector<QVector>& v, const std::vector<QVector>& w) {
    // lambda, mu >= 0 with V lambda - W mu = 0 and sum lambda = 1.
    const std::size_t n = v[0].size();
    QMatrix a(n + 1, v.size() + w.size());
    QVector b(n + 1);
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t r = 0; r < n; ++r) a(r, i) = v[i][r];
        a(n, i) = 1;
    }
    for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t r = 0; r < n; ++r) a(r, v.size() + i) = -w[i][r];
    b[n] = 1;
    return nonnegative_solution(a, b).has_value();
}

const std::map<std::string, Verifier>& verifiers() {
    static const std::map<std::string, Verifier> table = {
        {"sigma_complement",
         [](const Json& d, const GroupPtr& g) { return g && to_json(sigma1_complement(*g).complement) == d["complement"]; }},
        {"complement_polytopal",
         [](const Json& d, const GroupPtr&) {
             const SigmaSet s = sigma_set_from_json(d["complement"]);
             if (s.is_unknown() || s.is_empty()) return false;
             return std::all_of(s.components().begin(), s.components().end(), [](const auto& c) {
                 return c.type == SigmaSet::Component::Type::Polytope;
             });
         }},
        {"open_hemisphere",
         [](const Json& d, const GroupPtr&) {
             const auto pts = points_from(d["points"]);
             const QVector f = vector_from_json(d["functional"]);
             return !pts.empty() && std::all_of(pts.begin(), pts.end(), [&](const QVector& p) {
                 return p.size() == f.size() && dot(f, p) > 0;
             });
         }},
        {"farkas",
         [](const Json& d, const GroupPtr&) {
             const auto pts = points_from(d["points"]);
             const QVector lambda = vector_from_json(d["multipliers"]);
             if (pts.empty() || lambda.size() != pts.size()) return false;
             QVector s(pts[0].size());
             Rational total = 0;
             for (std::size_t i = 0; i < pts.size(); ++i) {
                 if (lambda[i] < 0) return false;
                 total += lambda[i];
                 s = add(s, scale(pts[i], lambda[i]));
             }
             return total > 0 && is_zero(s);
         }},
        {"polytope_minimal",
         [](const Json& d, const GroupPtr&) {
             const auto vs = points_from(d["vertices"]);
             for (std::size_t i = 0; i < vs.size(); ++i) {
                 auto rest = vs;
                 rest.erase(rest.begin() + static_cast<long>(i));
                 if (!rest.empty() && in_cone(vs[i], rest)) return false;
             }
             return true;
         }},
        {"components_disjoint",
         [](const Json& d, const GroupPtr&) {
             std::vector<std::vector<QVector>> comps;
             for (const auto& c : d["components"]) comps.push_back(points_from(c));
             for (std::size_t i = 0; i < comps.size(); ++i)
                 for (std::size_t j = i + 1; j < comps.size(); ++j)
                     if (cones_meet(comps[i], comps[j])) return false;
             return true;
         }},
        {"isolated_points",
         [](const Json& d, const GroupPtr&) {
             auto got = isolated_points(sigma_set_from_json(d["complement"]));
             auto want = points_from(d["points"]);
             std::sort(got.begin(), got.end());
             std::sort(want.begin(), want.end());
             return got == want;
         }},
        {"primitive_sum",
         [](const Json& d, const GroupPtr&) {
             const auto pts = points_from(d["points"]);
             return !pts.empty() && sum_of_rays(pts) == vector_from_json(d["eta"]);
         }},
        {"eta_positive",
         [](const Json& d, const GroupPtr&) {
             const QVector f = vector_from_json(d["functional"]), eta = vector_from_json(d["eta"]);
             return f.size() == eta.size() && dot(f, eta) > 0;
         }},
        {"character",
         [](const Json& d, const GroupPtr& g) {
             if (!g) return false;
             const auto chi = rational_character(g, vector_from_json(d["coordinates"]));
             std::vector<Rational> values;
             for (const auto& v : chi.values()) values.push_back(*v.as_rational());
             return !chi.is_trivial() && vector_to_json(QVector(values.begin(), values.end())) == d["values"];
         }},
        {"betti",
         [](const Json& d, const GroupPtr&) {
             return Json(std::to_string(betti_number(*group_from_json(d["group"])))) == d["b1"];
         }},
        {"b1_equal", [](const Json& d, const GroupPtr&) { return d["left"]["b1"] == d["right"]["b1"]; }},
        {"finite_index",
         [](const Json& d, const GroupPtr&) {
             auto idx = structural_index(*group_from_json(d["group"]), *group_from_json(d["subgroup"]));
             return idx && Json(idx->get_str()) == d["index"];
         }},
        {"same_description",
         [](const Json& d, const GroupPtr&) {
             return same_group_description(*group_from_json(d["left"]), *group_from_json(d["right"]));
         }},
        {"fix_invariant",
         [](const Json& d, const GroupPtr&) {
             const std::size_t n = d["ambient"].get<std::size_t>();
             const QMatrix m = matrix_from_json(d["matrix"], n);
             return Subspace::span(n, points_from(d["basis"])).invariance_under(m).invariant;
         }},
        {"restriction",
         [](const Json& d, const GroupPtr&) {
             const QVector eta = vector_from_json(d["eta"]);
             const QMatrix r = matrix_from_json(d["matrix"], eta.size());
             return r.apply(eta) == vector_from_json(d["restricted"]);
         }},
        {"character_fixed",
         [](const Json& d, const GroupPtr&) {
             const QVector eta = vector_from_json(d["eta"]);
             return matrix_from_json(d["matrix"], eta.size()).apply(eta) == eta;
         }},
    };
    return table;
}

bool verify_check(const std::string& kind, const Json& data, const GroupPtr& subject) {
    const auto& t = verifiers();
    auto it = t.find(kind);
    if (it == t.end()) throw InvalidArgument("unknown check kind " + kind);
    try {
        return it->second(data, subject);
    } catch (const Error&) {
        return false;
    }
}

// ------------------------------------------------------------- builder

class Builder {
public:
    Builder(std::string operation, const GroupDescriptor& subject) {
        c_.operation = std::move(operation);
        c_.subject = subject.name();
    }

    Json& inputs() { return c_.inputs; }
    Json& witnesses() { return c_.witnesses; }
    void set_subject(GroupPtr g) { subject_ = std::move(g); }

    std::string check(const std::string& kind, Json data, bool* passed = nullptr) {
        Check k;
        k.id = "c" + std::to_string(c_.checks.size() + 1);
        k.kind = kind;
        k.passed = verify_check(kind, data, subject_);
        k.data = std::move(data);
        if (passed) *passed = k.passed;
        c_.checks.push_back(k);
        return k.id;
    }

    std::size_t assertion(const PropertyAssertion& a) {
        for (std::size_t i = 0; i < c_.assertions.size(); ++i)
            if (c_.assertions[i] == a) return i;
        c_.assertions.push_back(a);
        return c_.assertions.size() - 1;
    }

    void fact(const std::string& f) {
        if (std::find(c_.imported_facts.begin(), c_.imported_facts.end(), f) == c_.imported_facts.end())
            c_.imported_facts.push_back(f);
    }
    void convention(const std::string& s) {
        if (std::find(c_.conventions.begin(), c_.conventions.end(), s) == c_.conventions.end())
            c_.conventions.push_back(s);
    }

    TraceStep& step(std::string rule, std::string statement, std::string kind, std::vector<std::string> checks = {}) {
        TraceStep s;
        s.rule = std::move(rule);
        s.statement = std::move(statement);
        s.kind = std::move(kind);
        s.checks = std::move(checks);
        c_.trace.push_back(std::move(s));
        return c_.trace.back();
    }

    /// Nested certificate: its facts and conventions surface at this level too.
    void premise(TraceStep& s, const Certificate& inner) {
        for (const auto& f : inner.imported_facts) fact(f);
        for (const auto& v : inner.conventions) convention(v);
        for (const auto& a : inner.assertions) s.assertions.push_back(assertion(a));
        s.premises.push_back(inner);
    }

    Certificate done(Conclusion c) {
        c_.conclusion = c;
        return std::move(c_);
    }
    Certificate fail(std::string reason, bool refuted = false) {
        c_.conclusion = Conclusion::NotCertified;
        c_.reason = std::move(reason);
        c_.refuted = refuted;
        return std::move(c_);
    }
    Certificate& raw() { return c_; }

private:
    Certificate c_;
    GroupPtr subject_;
};

Json recipe(const Certificate& c) { return Json{{"operation", c.operation}, {"inputs", c.inputs}}; }

void collect_facts(const SigmaDerivation& d, Builder& b) {
    if (d.rule != "unknown" && d.rule != "b1_zero" && d.premises.empty()) b.fact(d.statement);
    if (!d.premises.empty() && d.rule != "free_product.trivial_factors") b.fact(d.statement);
    for (const auto& c : d.conventions) b.convention(c);
    for (const auto& p : d.premises) collect_facts(p, b);
}

/// Adds the rule-table step; returns the derivation.
SigmaDerivation sigma_step(Builder& b, const GroupDescriptor& g) {
    SigmaDerivation d = sigma1_complement(g);
    const std::string id = b.check("sigma_complement", Json{{"rule", d.rule}, {"complement", to_json(d.complement)}});
    b.step("sigma_rule_table", "Sigma^1(" + g.name() + ")^c from the rule " + d.rule, "imported", {id});
    collect_facts(d, b);
    b.convention(kCoordinateConvention);
    return d;
}

std::optional<PropertyAssertion> find_assertion(const GroupDescriptor& g, AssertionKind kind,
                                                const std::vector<std::string>& about = {}) {
    for (const auto& a : g.assertions_of_kind(kind)) {
        if (a.about.empty() || about.empty()) return a;
        bool match = a.about.size() >= about.size();
        for (std::size_t i = 0; match && i < about.size(); ++i) match = a.about[i] == about[i];
        if (match) return a;
    }
    return std::nullopt;
}

GroupPtr certificate_group(const Certificate& c) {
    if (c.inputs.is_object() && c.inputs.contains("group")) return group_from_json(c.inputs["group"]);
    return nullptr;
}

Json betti_data(const GroupDescriptor& g) {
    return Json{{"name", g.name()}, {"group", to_json(g)}, {"b1", std::to_string(betti_number(g))}};
}

bool is_rinf_kind(const Certificate& c) {
    return c.conclusion == Conclusion::Rinf || c.conclusion == Conclusion::Rchi;
}

// Torsion-class membership that follows from the descriptor.
bool structurally_torsion(const GroupDescriptor& h) {
    if (h.as<family::FiniteGroup>()) return true;
    if (const auto* a = h.as<family::FinitelyGeneratedAbelian>())
        return std::none_of(a->factors.begin(), a->factors.end(), [](const Integer& f) { return f == 0; });
    return false;
}

}  // namespace

// ------------------------------------------------------------- names

std::string to_string(Conclusion c) {
    switch (c) {
        case Conclusion::Rinf: return "R_inf";
        case Conclusion::Rchi: return "R_chi_inf";
        case Conclusion::RphiInf: return "R_phi_inf";
        case Conclusion::ClassS: return "class_S";
        case Conclusion::ClassSTilde: return "class_S_tilde";
        case Conclusion::B1Equal: return "b1_equal";
        case Conclusion::NotCertified: return "not_certified";
    }
    return "not_certified";
}

Conclusion conclusion_from_string(const std::string& s) {
    for (auto c : {Conclusion::Rinf, Conclusion::Rchi, Conclusion::RphiInf, Conclusion::ClassS, Conclusion::ClassSTilde,
                   Conclusion::B1Equal, Conclusion::NotCertified})
        if (to_string(c) == s) return c;
    throw ParseError("unknown conclusion " + s, "$.conclusion");
}

Json to_json(const Certificate& c) {
    Json j;
    j["schema"] = kCertificateSchema;
    j["tool"] = Json{{"name", kToolName}, {"version", kToolVersion}};
    j["operation"] = c.operation;
    j["subject"] = c.subject;
    j["conclusion"] = to_string(c.conclusion);
    if (!c.certified()) j["reason"] = c.reason;
    if (c.refuted) j["refuted"] = true;
    j["inputs"] = c.inputs;
    j["trace"] = Json::array();
    for (const auto& s : c.trace) {
        Json t;
        t["rule"] = s.rule;
        t["statement"] = s.statement;
        t["kind"] = s.kind;
        t["checks"] = s.checks;
        t["assertions"] = s.assertions;
        t["premises"] = Json::array();
        for (const auto& p : s.premises) t["premises"].push_back(to_json(p));
        j["trace"].push_back(t);
    }
    j["checks"] = Json::array();
    for (const auto& k : c.checks)
        j["checks"].push_back(Json{{"id", k.id}, {"kind", k.kind}, {"passed", k.passed}, {"data", k.data}});
    j["witnesses"] = c.witnesses;
    j["assertions"] = Json::array();
    for (const auto& a : c.assertions) j["assertions"].push_back(to_json(a));
    j["imported_facts"] = c.imported_facts;
    j["conventions"] = c.conventions;
    return j;
}

// ------------------------------------------------------------- structural facts

bool same_group_description(const GroupDescriptor& a, const GroupDescriptor& b) {
    Json ja = to_json(a), jb = to_json(b);
    strip_metadata(ja);
    strip_metadata(jb);
    return ja == jb;
}

std::optional<Integer> structural_index(const GroupDescriptor& g, const GroupDescriptor& h) {
    if (same_group_description(g, h)) return Integer(1);
    if (const auto* e = g.as<family::FiniteExtension>())
        if (same_group_description(*e->kernel, h)) return Integer(static_cast<unsigned long>(e->quotient->order()));
    if (const auto* p = g.as<family::DirectProduct>()) {
        std::optional<std::size_t> hit;
        Integer rest = 1;
        for (std::size_t i = 0; i < p->factors.size(); ++i) {
            const auto& f = *p->factors[i];
            if (!hit && same_group_description(f, h)) {
                hit = i;
                continue;
            }
            if (const auto* fin = f.as<family::FiniteGroup>()) rest *= static_cast<unsigned long>(fin->table->order());
            else if (structurally_torsion(f)) rest *= *abelianization(f).order();
            else return std::nullopt;
        }
        if (hit) return rest;
    }
    return std::nullopt;
}

// ------------------------------------------------------------- class S

Certificate check_class_S(const GroupPtr& g) {
    Builder b("check-class-s", *g);
    b.set_subject(g);
    b.inputs() = Json{{"group", to_json(*g)}};
    if (!g->abelianization_known()) return b.fail("the character sphere of " + g->name() + " is not known");

    const SigmaDerivation d = sigma_step(b, *g);
    if (d.complement.is_unknown()) return b.fail("sigma unknown: " + d.complement.unknown_reason());

    bool polytopal = false;
    const std::string pid = b.check("complement_polytopal", Json{{"complement", to_json(d.complement)}}, &polytopal);
    if (!polytopal) {
        if (d.complement.is_empty()) return b.fail("Sigma^1(" + g->name() + ")^c is empty");
        return b.fail("Sigma^1(" + g->name() + ")^c contains a great subsphere, which is not a finite spherical polytope");
    }

    const auto vertices = d.complement.vertices();
    const HemisphereResult h = open_hemisphere_witness(vertices);
    if (!h.feasible) {
        const std::string fid =
            b.check("farkas", Json{{"points", points_json(vertices)}, {"multipliers", vector_to_json(h.farkas)}});
        b.step("hemisphere_infeasible", "a nonnegative combination of the vertices vanishes", "computed", {fid});
        b.witnesses()["farkas"] = vector_to_json(h.farkas);
        return b.fail("complement vertices do not lie in an open hemisphere");
    }
    const std::string hid =
        b.check("open_hemisphere", Json{{"points", points_json(vertices)}, {"functional", vector_to_json(h.functional)}});
    b.witnesses()["hemisphere_functional"] = vector_to_json(h.functional);

    std::vector<std::string> poly_checks{pid};
    Json comps = Json::array();
    for (const auto& c : d.complement.components()) {
        poly_checks.push_back(b.check("polytope_minimal", Json{{"vertices", points_json(c.vertices)}}));
        comps.push_back(points_json(c.vertices));
    }
    bool disjoint = false;
    poly_checks.push_back(b.check("components_disjoint", Json{{"components", comps}}, &disjoint));
    if (!disjoint) return b.fail("complement polytopes meet, so components are not single polytopes");

    b.step("open_hemisphere", "the complement lies in the open hemisphere {f > 0}", "computed", {hid});
    b.step("finite_polytopes", "the components of the complement are finite spherical polytopes with minimal vertex sets",
           "computed", poly_checks);
    b.step("transcendental_vertices", "every vertex is a rational class", "imported");
    b.convention(kRationalTranscendental);
    b.fact(kRationalTranscendental);
    b.step("class_S", "G lies in class S: nonempty complement inside an open hemisphere whose components are finite "
                      "spherical polytopes with transcendental vertices", "cited");
    return b.done(Conclusion::ClassS);
}

// ------------------------------------------------------------- fixed characters

Certificate fixed_character_pipeline(const GroupPtr& g) {
    Builder b("fixed-character", *g);
    b.set_subject(g);
    b.inputs() = Json{{"group", to_json(*g)}};

    Certificate cls = check_class_S(g);
    std::vector<QVector> points;
    QVector functional;
    std::vector<std::string> route_checks;
    if (cls.certified()) {
        TraceStep& s = b.step("route_a.class_S", "G lies in class S", "computed");
        b.premise(s, cls);
        points = sigma1_complement(*g).complement.vertices();
        functional = vector_from_json(cls.witnesses["hemisphere_functional"]);
        route_checks.push_back(b.check("primitive_sum", Json{{"points", points_json(points)},
                                                             {"eta", vector_to_json(sum_of_rays(points))}}));
        b.step("route_a.average",
               "automorphisms act on Hom(G, Z) by unimodular maps preserving the complement, so they permute its "
               "vertex classes and their primitive integer representatives exactly; the sum eta of all of them is fixed",
               "cited", route_checks);
    } else {
        if (!g->abelianization_known()) return b.fail(cls.reason);
        const SigmaDerivation d = sigma_step(b, *g);
        if (d.complement.is_unknown()) return b.fail("sigma unknown: " + d.complement.unknown_reason());
        points = isolated_points(d.complement);
        const std::string iid = b.check("isolated_points", Json{{"complement", to_json(d.complement)},
                                                               {"points", points_json(points)}});
        if (points.empty())
            return b.fail(cls.reason + "; the complement has no isolated points, so no fixed character is exhibited "
                                       "(this does not decide R_inf)");
        const HemisphereResult h = open_hemisphere_witness(points);
        if (!h.feasible) {
            b.check("farkas", Json{{"points", points_json(points)}, {"multipliers", vector_to_json(h.farkas)}});
            return b.fail("isolated complement points do not lie in an open hemisphere");
        }
        functional = h.functional;
        route_checks = {iid, b.check("open_hemisphere", Json{{"points", points_json(points)},
                                                           {"functional", vector_to_json(functional)}})};
        b.witnesses()["hemisphere_functional"] = vector_to_json(functional);
        route_checks.push_back(b.check("primitive_sum", Json{{"points", points_json(points)},
                                                             {"eta", vector_to_json(sum_of_rays(points))}}));
        b.step("route_b.isolated_points",
               "the isolated points of Sigma^1(G)^c form a finite set that every automorphism permutes; the sum of "
               "their primitive integer representatives is fixed",
               "cited", route_checks);
        b.convention(kRationalTranscendental);
    }
    b.convention(kPrimitiveConvention);

    const QVector eta = sum_of_rays(points);
    bool positive = false;
    const std::string pid = b.check("eta_positive", Json{{"functional", vector_to_json(functional)},
                                                        {"eta", vector_to_json(eta)}}, &positive);
    if (!positive) return b.fail("the averaged character vanishes");
    const Character chi = rational_character(g, eta);
    Json values = Json::array();
    for (const auto& v : chi.values()) values.push_back(rational_to_json(*v.as_rational()));
    const std::string cid = b.check("character", Json{{"coordinates", vector_to_json(eta)}, {"values", values}});
    b.step("eta_nonzero", "f(eta) > 0 for the hemisphere functional f, so eta is a nonzero character", "computed",
           {pid, cid});
    b.step("fixed_character_rchi",
           "a nonzero character fixed by every automorphism gives property R_chi_inf", "cited");
    b.witnesses()["character"] = to_json(chi);
    b.raw().witness_character = chi;
    return b.done(Conclusion::Rchi);
}

Certificate certify_Rchi(const GroupPtr& g) {
    if (const auto* q = g->as<family::CharacteristicQuotient>()) {
        Builder b("certify-rchi", *g);
        b.inputs() = Json{{"group", to_json(*g)}};
        PropertyAssertion a;
        if (auto found = find_assertion(*g, AssertionKind::Characteristic)) {
            a = *found;
        } else if (!q->justification.empty()) {
            a.kind = AssertionKind::Characteristic;
            a.about = {q->ambient, q->quotient->name()};
            a.justification = q->justification;
        } else {
            return b.fail("missing characteristicness justification for the kernel of " + q->ambient + " -> " +
                          q->quotient->name());
        }
        Certificate inner = fixed_character_pipeline(q->quotient);
        TraceStep& s = b.step("class_S_tilde.quotient", "fixed character of the characteristic quotient", "computed");
        b.premise(s, inner);
        if (!inner.certified()) return b.fail("the quotient is not certified: " + inner.reason);
        TraceStep& lift = b.step("class_S_tilde.lift",
                                 "the kernel of G -> Q is characteristic, so every automorphism of G induces one of Q; "
                                 "a character of Q fixed by Aut(Q) composed with the projection is fixed by Aut(G)",
                                 "asserted");
        lift.assertions.push_back(b.assertion(a));
        b.witnesses()["quotient"] = q->quotient->name();
        b.witnesses()["quotient_character"] = inner.witnesses["character"];
        b.raw().witness_character = inner.witness_character;
        return b.done(Conclusion::Rchi);
    }
    Certificate c = fixed_character_pipeline(g);
    c.operation = "certify-rchi";
    return c;
}

Certificate rinf_from_rchi(const Certificate& rchi) {
    GroupPtr g = certificate_group(rchi);
    Builder b("rinf-from-rchi", g ? *g : *make_free_group(0, {}, rchi.subject));
    b.raw().subject = rchi.subject;
    b.inputs() = Json{{"certificate", recipe(rchi)}};
    TraceStep& s = b.step("rchi", "R_chi_inf certificate", "computed");
    b.premise(s, rchi);
    if (rchi.conclusion != Conclusion::Rchi) return b.fail("premise is not an R_chi_inf certificate");
    b.step("witness_implies_rinf",
           "a nonzero character chi with chi o phi = chi is constant on phi-twisted classes and takes infinitely many "
           "values, so R(phi) is infinite for every automorphism phi",
           "cited");
    b.witnesses()["character"] = rchi.witnesses.contains("character") ? rchi.witnesses["character"]
                                                                       : rchi.witnesses["quotient_character"];
    b.raw().witness_character = rchi.witness_character;
    return b.done(Conclusion::Rinf);
}

// ------------------------------------------------------------- R_inf for extensions

Certificate certify_Rinf_extension(const GroupPtr& g, const Certificate& inner) {
    Builder b("certify-rinf", *g);
    b.set_subject(g);
    b.inputs() = Json{{"group", to_json(*g)}, {"inner", recipe(inner)}};
    const GroupPtr inner_group = certificate_group(inner);

    if (const auto* e = g->as<family::FiniteExtension>()) {
        TraceStep& s = b.step("kernel_certificate", "certificate for the kernel " + e->kernel->name(), "computed");
        b.premise(s, inner);
        if (!inner_group || !same_group_description(*inner_group, *e->kernel))
            return b.fail("the inner certificate is not about the kernel " + e->kernel->name());
        if (!is_rinf_kind(inner))
            return b.fail("the kernel " + e->kernel->name() + " is not certified R_inf: " +
                          (inner.reason.empty() ? to_string(inner.conclusion) : inner.reason));
        const auto a = find_assertion(*g, AssertionKind::Characteristic, {e->kernel->name()});
        if (!a) return b.fail("missing characteristicness justification for the kernel " + e->kernel->name());
        const std::string iid = b.check("finite_index", Json{{"group", to_json(*g)},
                                                            {"subgroup", to_json(*e->kernel)},
                                                            {"index", std::to_string(e->quotient->order())}});
        TraceStep& c = b.step("characteristic_kernel", "the kernel is characteristic", "asserted", {iid});
        c.assertions.push_back(b.assertion(*a));
        b.step("finite_extension_rinf",
               "if a characteristic subgroup of finite index has R_inf then so does the whole group", "cited");
        return b.done(Conclusion::Rinf);
    }

    const std::vector<GroupPtr>* factors = nullptr;
    const bool free = g->as<family::FreeProduct>() != nullptr;
    if (const auto* p = g->as<family::DirectProduct>()) factors = &p->factors;
    if (const auto* p = g->as<family::FreeProduct>()) factors = &p->factors;
    if (!factors || factors->size() != 2)
        return b.fail("certify-rinf needs a finite extension or a product of two factors");

    TraceStep& s = b.step("factor_certificate", "R_inf certificate for the factor", "computed");
    b.premise(s, inner);
    std::size_t gi = 2;
    for (std::size_t i = 0; i < 2; ++i)
        if (inner_group && same_group_description(*inner_group, *(*factors)[i])) gi = i;
    if (gi == 2) return b.fail("the inner certificate is not about a factor of " + g->name());
    if (!is_rinf_kind(inner)) return b.fail("the factor is not certified R_inf: " + inner.reason);
    const GroupDescriptor& G = *(*factors)[gi];
    const GroupDescriptor& H = *(*factors)[1 - gi];

    auto lookup = [&](AssertionKind k, const std::vector<std::string>& about) {
        auto a = find_assertion(*g, k, about);
        return a ? a : find_assertion(H, k, about);
    };
    if (structurally_torsion(H)) {
        b.step("class_tag", H.name() + " is finite, hence a torsion group (class T)", "computed");
    } else if (auto tag = lookup(AssertionKind::ClassTag, {H.name()})) {
        TraceStep& t = b.step("class_tag", H.name() + " lies in D, T, A or L", "asserted");
        t.assertions.push_back(b.assertion(*tag));
    } else {
        return b.fail("no class D/T/A/L premise for " + H.name());
    }
    const auto homs = lookup(AssertionKind::HomsTrivial, {H.name(), G.name()});
    if (!homs) return b.fail("missing assertion that every homomorphism " + H.name() + " -> " + G.name() + " is trivial");
    TraceStep& h = b.step("homs_trivial", "every homomorphism " + H.name() + " -> " + G.name() + " is trivial", "asserted");
    h.assertions.push_back(b.assertion(*homs));
    if (free) {
        const auto ind = find_assertion(*g, AssertionKind::FreelyIndecomposable, {G.name()});
        if (!ind) return b.fail("missing assertion that " + G.name() + " is freely indecomposable");
        TraceStep& f = b.step("freely_indecomposable", G.name() + " is freely indecomposable", "asserted");
        f.assertions.push_back(b.assertion(*ind));
        b.step("characteristic_normal_closure",
               "the normal closure of H is invariant under the generators of Aut(G * H), hence characteristic, with "
               "quotient G",
               "cited");
    } else {
        b.step("characteristic_factor", "1 x H is characteristic in G x H with quotient G", "cited");
    }
    b.fact("R_inf passes from the quotient by a characteristic subgroup to the group");
    b.step("quotient_rinf", "a group with a characteristic subgroup whose quotient has R_inf has R_inf", "imported");
    return b.done(Conclusion::Rinf);
}

// ------------------------------------------------------------- b1 stability

Certificate check_b1_stability(const GroupPtr& g, const std::vector<SubgroupData>& subgroups) {
    Builder b("b1-stability", *g);
    b.set_subject(g);
    Json subs = Json::array();
    for (const auto& s : subgroups) subs.push_back(to_json(*s.subgroup));
    b.inputs() = Json{{"group", to_json(*g)}, {"subgroups", subs}};
    if (!g->abelianization_known()) return b.fail("b1(" + g->name() + ") is not known");

    std::vector<GroupPtr> list;
    if (const auto* e = g->as<family::FiniteExtension>()) list.push_back(e->kernel);
    for (const auto& s : subgroups) list.push_back(s.subgroup);

    const Json gdata = betti_data(*g);
    const std::string gid = b.check("betti", gdata);
    b.witnesses()["b1"] = gdata["b1"];
    std::vector<std::string> checks{gid};
    for (const auto& h : list) {
        const auto idx = structural_index(*g, *h);
        if (!idx) return b.fail("cannot verify that " + h->name() + " has finite index in " + g->name());
        checks.push_back(b.check("finite_index", Json{{"group", to_json(*g)}, {"subgroup", to_json(*h)},
                                                      {"index", idx->get_str()}}));
        const Json hdata = betti_data(*h);
        checks.push_back(b.check("betti", hdata));
        bool equal = false;
        checks.push_back(b.check("b1_equal", Json{{"left", Json{{"name", h->name()}, {"b1", hdata["b1"]}}},
                                                  {"right", Json{{"name", g->name()}, {"b1", gdata["b1"]}}}},
                                 &equal));
        if (!equal) {
            b.step("b1_mismatch", "a finite index subgroup with different b1", "computed", checks);
            b.witnesses()["subgroup"] = h->name();
            return b.fail("b1 mismatch: " + b1_text(*h) + " = " + hdata["b1"].get<std::string>() +
                              " != " + gdata["b1"].get<std::string>() + " = " + b1_text(*g),
                          true);
        }
    }
    if (!list.empty()) b.step("listed_subgroups", "b1 agrees on the listed finite index subgroups", "computed", checks);

    if (auto a = find_assertion(*g, AssertionKind::B1StableAllFiniteIndex)) {
        TraceStep& s = b.step("b1_stable", "b1(H) = b1(G) for every finite index subgroup H", "asserted");
        s.assertions.push_back(b.assertion(*a));
    } else if (auto a = find_assertion(*g, AssertionKind::CommutatorContainsFiniteIndexInfiniteSimple)) {
        TraceStep& s = b.step("simple_commutator",
                              "[G, G] contains an infinite simple subgroup of finite index in [G, G]", "asserted");
        s.assertions.push_back(b.assertion(*a));
        b.step("simple_commutator_b1",
               "then every finite index subgroup H contains that simple subgroup, so [G, G] <= H up to finite index "
               "and b1(H) = b1(G)",
               "cited");
    } else if (auto a = find_assertion(*g, AssertionKind::ThetaImageInner)) {
        TraceStep& s = b.step("theta_inner", "the action of the finite quotient is by inner automorphisms", "asserted");
        s.assertions.push_back(b.assertion(*a));
        b.step("theta_inner_b1", "inner actions leave Hom(H, R) pointwise fixed, so b1 does not drop", "cited");
    } else if (!list.empty()) {
        b.witnesses()["scope"] = "listed_subgroups";
        return b.done(Conclusion::B1Equal);
    } else {
        return b.fail("no premise for b1 stability of " + g->name());
    }
    b.witnesses()["scope"] = "all_finite_index";
    return b.done(Conclusion::B1Equal);
}

// ------------------------------------------------------------- commensurability

CommensurationData load_commensuration(const std::string& path) {
    const Json j = read_json_file(path);
    if (!j.is_object()) throw ParseError("expected an object", "$");
    if (j.contains("schema") && j["schema"] != "sigmacert.commensuration/1")
        throw ParseError("unsupported schema (expected sigmacert.commensuration/1)", "$.schema");
    const std::string base = std::filesystem::path(path).parent_path().string();
    auto get = [&](const char* key) {
        if (!j.contains(key)) throw ParseError(std::string("missing field ") + key, "$");
        return group_from_json(j[key], std::string("$.") + key, base);
    };
    return {get("group"), get("subgroup"), get("target"), get("target_subgroup")};
}

Certificate certify_commensurable(const CommensurationData& data) {
    Builder b("commensurable", *data.target);
    b.inputs() = Json{{"group", to_json(*data.group)},
                      {"subgroup", to_json(*data.subgroup)},
                      {"target", to_json(*data.target)},
                      {"target_subgroup", to_json(*data.target_subgroup)}};

    std::vector<std::string> index_checks;
    for (auto [big, small] : {std::pair{data.group, data.subgroup}, std::pair{data.target, data.target_subgroup}}) {
        const auto idx = structural_index(*big, *small);
        if (!idx) return b.fail("cannot verify that " + small->name() + " has finite index in " + big->name());
        index_checks.push_back(b.check("finite_index", Json{{"group", to_json(*big)}, {"subgroup", to_json(*small)},
                                                            {"index", idx->get_str()}}));
    }
    bool iso = false;
    index_checks.push_back(b.check("same_description", Json{{"left", to_json(*data.subgroup)},
                                                            {"right", to_json(*data.target_subgroup)}},
                                   &iso));
    if (!iso) return b.fail("cannot verify that " + data.subgroup->name() + " and " + data.target_subgroup->name() +
                            " are isomorphic");
    b.step("commensuration", "finite index subgroups H <= G and H_hat <= G_hat with H isomorphic to H_hat",
           "computed", index_checks);

    std::vector<std::string> bchecks;
    for (auto [big, small] : {std::pair{data.group, data.subgroup}, std::pair{data.target, data.target_subgroup}}) {
        if (!big->abelianization_known() || !small->abelianization_known())
            return b.fail("b1 of " + big->name() + " or " + small->name() + " is not known");
        const Json bd = betti_data(*big), sd = betti_data(*small);
        bchecks.push_back(b.check("betti", bd));
        bchecks.push_back(b.check("betti", sd));
        bool equal = false;
        bchecks.push_back(b.check("b1_equal", Json{{"left", Json{{"name", small->name()}, {"b1", sd["b1"]}}},
                                                   {"right", Json{{"name", big->name()}, {"b1", bd["b1"]}}}},
                                  &equal));
        if (!equal) {
            b.step("b1_mismatch", "b1 changes along a finite index inclusion", "computed", bchecks);
            return b.fail("b1 mismatch: " + b1_text(*small) + " = " + sd["b1"].get<std::string>() + " != " +
                              bd["b1"].get<std::string>() + " = " + b1_text(*big),
                          true);
        }
    }
    b.step("b1_values", "b1 agrees along both finite index inclusions", "computed", bchecks);

    Certificate cls = check_class_S(data.group);
    TraceStep& s1 = b.step("class_S", data.group->name() + " lies in class S", "computed");
    b.premise(s1, cls);
    if (!cls.certified()) return b.fail(data.group->name() + " is not certified in class S: " + cls.reason);
    Certificate stab = check_b1_stability(data.group);
    TraceStep& s2 = b.step("b1_stability", "b1 is constant on finite index subgroups of " + data.group->name(),
                           "computed");
    b.premise(s2, stab);
    if (!stab.certified() || stab.witnesses.value("scope", "") != "all_finite_index")
        return b.fail("b1 stability of " + data.group->name() + " is not established: " +
                      (stab.reason.empty() ? "only listed subgroups were checked" : stab.reason));

    b.step("core", "the normal core C_H of H in G has finite index; b1(C_H) = b1(G), so C_H lies in class S", "cited");
    b.step("transfer", "H has the Sigma invariants of G, so H and H_hat lie in class S", "cited");
    b.step("characteristic_intersection",
           "Gamma = intersection of phi(C_H_hat) over Aut(G_hat) is characteristic of finite index in G_hat and "
           "isomorphic to a finite index subgroup of H; it lies in class S and has R_chi_inf (not constructed)",
           "cited");
    b.step("finite_extension_rinf",
           "if a characteristic subgroup of finite index has R_inf then so does the whole group", "cited");
    return b.done(Conclusion::Rinf);
}

// ------------------------------------------------------------- central out

Certificate central_out_invariance(const GroupPtr& e, const Homomorphism& phi_in) {
    Builder b("central-out", *e);
    b.set_subject(e);
    const auto* ext = e->as<family::FiniteExtension>();
    if (!ext) throw InvalidArgument("central_out_invariance needs a FiniteExtension");
    Json images = Json::array();
    for (const auto& w : phi_in.images) images.push_back(word_to_json(w, ext->kernel->generators()));
    b.inputs() = Json{{"group", to_json(*e)}, {"images", images}};

    Homomorphism phi{ext->kernel, ext->kernel, phi_in.images, phi_in.level};
    if (phi.level != ValidationLevel::Exact) {
        try {
            validate_homomorphism(phi);
        } catch (const NotAHomomorphism& err) {
            return b.fail(std::string("phi is not an endomorphism of the kernel: ") + err.what());
        }
    }
    if (phi.level != ValidationLevel::Exact) return b.fail("phi could not be validated exactly on the kernel");

    const auto a = find_assertion(*e, AssertionKind::CentralInOut);
    if (!a) return b.fail("missing assertion that every alpha_q is central in Out(H)");
    TraceStep& s0 = b.step("central_in_out", "every alpha_q lies in the center of Out(H)", "asserted");
    s0.assertions.push_back(b.assertion(*a));

    const QMatrix m = pullback_matrix(phi);
    const FixSubspace fix = fix_subspace(*e);
    const auto inv = fix.subspace.invariance_under(m);
    const std::string fid = b.check("fix_invariant", Json{{"ambient", m.rows()},
                                                         {"basis", points_json(fix.subspace.basis_vectors())},
                                                         {"matrix", matrix_to_json(m)}});
    if (!inv.invariant) {
        b.witnesses()["vector"] = vector_to_json(inv.witness);
        b.witnesses()["image"] = vector_to_json(inv.witness_image);
        return b.fail("Fix is not invariant under phi");
    }
    b.step("fix_invariant", "phi^* maps S(G) = Fix onto itself", "computed", {fid});

    Certificate fixed = fixed_character_pipeline(e);
    TraceStep& s1 = b.step("fixed_character", "fixed character of G", "computed");
    b.premise(s1, fixed);
    if (!fixed.certified()) return b.fail(e->name() + " has no certified fixed character: " + fixed.reason);

    const QVector eta = *fixed.witness_character->rational_coordinates();
    const QMatrix r = restriction_matrix(e);
    const QVector eta_h = r.apply(eta);
    const std::string rid = b.check("restriction", Json{{"matrix", matrix_to_json(r)},
                                                        {"eta", vector_to_json(eta)},
                                                        {"restricted", vector_to_json(eta_h)}});
    bool fixed_ok = false;
    const std::string kid =
        b.check("character_fixed", Json{{"matrix", matrix_to_json(m)}, {"eta", vector_to_json(eta_h)}}, &fixed_ok);
    b.step("sigma_invariance",
           "Sigma^1(G) is phi-invariant and S(G) is phi-invariant, so the fixed character of G restricted to H is "
           "fixed by phi",
           "cited", {rid});
    if (!fixed_ok) return b.fail("the restricted character is not fixed by phi");
    const Character chi_h = rational_character(ext->kernel, eta_h);
    const auto crit = fixed_character_criterion(chi_h, phi);
    if (!crit) return b.fail("the restricted character is not fixed by phi");
    b.step("fixed_character_criterion", "chi o phi = chi with chi nonzero forces R(phi) infinite", "computed", {kid});
    b.witnesses()["character"] = to_json(chi_h);
    b.raw().witness_character = chi_h;
    return b.done(Conclusion::RphiInf);
}

// ------------------------------------------------------------- replay

Certificate rerun(const Json& cert) {
    const std::string op = cert.at("operation").get<std::string>();
    const Json& in = cert.at("inputs");
    auto group = [&](const char* key) { return group_from_json(in.at(key), std::string("$.inputs.") + key); };
    if (op == "check-class-s") return check_class_S(group("group"));
    if (op == "fixed-character") return fixed_character_pipeline(group("group"));
    if (op == "certify-rchi") return certify_Rchi(group("group"));
    if (op == "rinf-from-rchi") return rinf_from_rchi(rerun(in.at("certificate")));
    if (op == "certify-rinf") return certify_Rinf_extension(group("group"), rerun(in.at("inner")));
    if (op == "b1-stability") {
        std::vector<SubgroupData> subs;
        for (const auto& s : in.at("subgroups")) subs.push_back({group_from_json(s)});
        return check_b1_stability(group("group"), subs);
    }
    if (op == "commensurable")
        return certify_commensurable({group("group"), group("subgroup"), group("target"), group("target_subgroup")});
    if (op == "central-out") {
        GroupPtr e = group("group");
        const auto* ext = e->as<family::FiniteExtension>();
        if (!ext) throw ParseError("central-out inputs need a FiniteExtension", "$.inputs.group");
        Homomorphism phi{ext->kernel, ext->kernel, {}};
        for (std::size_t i = 0; i < in.at("images").size(); ++i)
            phi.images.push_back(parse_word(in["images"][i], ext->kernel->generators(),
                                            "$.inputs.images[" + std::to_string(i) + "]"));
        return central_out_invariance(e, phi);
    }
    throw ParseError("unknown operation " + op, "$.operation");
}

namespace {

void verify_all(const Json& cert, const std::string& path, ReplayReport& r) {
    GroupPtr subject;
    if (cert.contains("inputs") && cert["inputs"].contains("group")) subject = group_from_json(cert["inputs"]["group"]);
    for (const auto& k : cert.at("checks")) {
        const bool now = verify_check(k.at("kind").get<std::string>(), k.at("data"), subject);
        if (now != k.at("passed").get<bool>()) {
            r.checks_verified = false;
            r.failures.push_back(path + " check " + k["id"].get<std::string>() + " (" + k["kind"].get<std::string>() +
                                 ") does not re-verify");
        }
    }
    for (std::size_t i = 0; i < cert.at("trace").size(); ++i) {
        const auto& prem = cert["trace"][i]["premises"];
        for (std::size_t p = 0; p < prem.size(); ++p)
            verify_all(prem[p], path + ".trace[" + std::to_string(i) + "].premises[" + std::to_string(p) + "]", r);
    }
}

}  // namespace

ReplayReport replay(const Json& certificate) {
    ReplayReport r;
    if (!certificate.is_object() || certificate.value("schema", "") != kCertificateSchema) {
        r.checks_verified = r.identical = false;
        r.failures.push_back("not a " + std::string(kCertificateSchema) + " document");
        return r;
    }
    try {
        verify_all(certificate, "$", r);
        const Json again = to_json(rerun(certificate));
        if (again.dump() != certificate.dump()) {
            r.identical = false;
            r.failures.push_back("re-derived certificate differs from the stored one");
        }
    } catch (const Error& e) {
        r.checks_verified = r.identical = false;
        r.failures.push_back(e.what());
    }
    return r;
}

bool witness_fixed_by(const Certificate& c, const Homomorphism& phi) {
    if (!c.witness_character) return false;
    return pullback(*c.witness_character, phi) == *c.witness_character;
}

}  // namespace sigmacert
