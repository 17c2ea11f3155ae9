#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "sigmacert/certify.hpp"
#include "sigmacert/errors.hpp"
#include "sigmacert/reidemeister.hpp"

namespace sigmacert::cli {

namespace {

inline constexpr const char* kReportSchema = "sigmacert.report/1";

struct Options {
    std::string format = "json";
    std::string out;
    std::size_t radius = 6;
    std::size_t budget = kDefaultVertexBudget;
    std::vector<std::string> inputs;
};

struct Output {
    Json doc;
    int code = kExitOk;
    std::function<void(std::ostream&)> text;
};

Homomorphism load_endomorphism(const std::string& path, const GroupPtr& g) {
    const Json j = read_json_file(path);
    Homomorphism phi = homomorphism_from_json(j, g, g);
    validate_homomorphism(phi);
    return phi;
}

std::string sphere_name(std::size_t b1) { return b1 == 0 ? "empty" : "S^" + std::to_string(b1 - 1); }

// ------------------------------------------------------------- text rendering

void render_certificate(std::ostream& os, const Json& c, int depth) {
    const std::string pad(2 * depth, ' ');
    os << pad << c["operation"].get<std::string>() << " " << c["subject"].get<std::string>() << ": "
       << c["conclusion"].get<std::string>() << "\n";
    if (c.contains("reason")) os << pad << "  reason: " << c["reason"].get<std::string>() << "\n";
    std::size_t passed = 0;
    for (const auto& k : c["checks"]) passed += k["passed"].get<bool>();
    os << pad << "  checks: " << passed << "/" << c["checks"].size() << " passed\n";
    for (const auto& s : c["trace"]) {
        os << pad << "  [" << s["kind"].get<std::string>() << "] " << s["rule"].get<std::string>() << ": "
           << s["statement"].get<std::string>();
        if (!s["checks"].empty()) {
            os << " (";
            for (std::size_t i = 0; i < s["checks"].size(); ++i) os << (i ? ", " : "") << s["checks"][i].get<std::string>();
            os << ")";
        }
        os << "\n";
        for (const auto& p : s["premises"]) render_certificate(os, p, depth + 2);
    }
    if (depth == 0) {
        for (const auto& a : c["assertions"])
            os << "  assertion " << a["kind"].get<std::string>() << ": " << a["justification"].get<std::string>() << "\n";
        for (const auto& f : c["imported_facts"]) os << "  imported: " << f.get<std::string>() << "\n";
        if (c["witnesses"].contains("character"))
            os << "  witness character: " << c["witnesses"]["character"].dump() << "\n";
    }
}

void render_flat(std::ostream& os, const Json& j) {
    for (const auto& [k, v] : j.items()) os << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
}

Output certificate_output(const Certificate& c) {
    Output o;
    o.doc = to_json(c);
    o.code = c.certified() ? kExitOk : kExitNotCertified;
    o.text = [doc = o.doc](std::ostream& os) { render_certificate(os, doc, 0); };
    return o;
}

// ------------------------------------------------------------- commands

Output cmd_analyze(const Options& opt) {
    const GroupPtr g = load_group(opt.inputs[0]);
    Json j;
    j["schema"] = kReportSchema;
    j["kind"] = "analysis";
    j["group"] = g->name();
    j["generators"] = g->generators();
    if (!g->abelianization_known()) {
        j["abelianization"] = nullptr;
        j["reason"] = "the abelianization of a characteristic quotient descriptor is not known";
    } else {
        const AbelianStructure a = abelianization(*g);
        Json torsion = Json::array();
        for (const auto& t : a.torsion) torsion.push_back(t.get_str());
        j["abelianization"] = Json{{"free_rank", a.free_rank}, {"torsion", torsion}};
        j["b1"] = a.b1();
        j["sphere_dimension"] = a.b1() == 0 ? Json(nullptr) : Json(a.b1() - 1);
        j["sphere"] = sphere_name(a.b1());
        Json basis = Json::array();
        const IntMatrix cb = character_basis(*g);
        for (std::size_t r = 0; r < cb.rows(); ++r) {
            Json row = Json::array();
            for (std::size_t c = 0; c < cb.cols(); ++c) row.push_back(cb(r, c).get_str());
            basis.push_back(row);
        }
        j["character_basis"] = basis;
    }
    j["word_problem"] = supports_normal_form(*g);
    j["assertions"] = Json::array();
    for (const auto& a : g->assertions()) j["assertions"].push_back(to_json(a));
    return {j, kExitOk, [j](std::ostream& os) {
                Json flat = j;
                flat.erase("schema");
                flat.erase("assertions");
                render_flat(os, flat);
            }};
}

Output cmd_sigma(const Options& opt) {
    const GroupPtr g = load_group(opt.inputs[0]);
    const SigmaDerivation d = sigma1_complement(*g);
    Json j;
    j["schema"] = kReportSchema;
    j["kind"] = "sigma";
    j["group"] = g->name();
    j["complement"] = to_json(d.complement);
    j["derivation"] = to_json(d);
    if (!d.complement.is_unknown()) j["isolated_points"] = [&] {
        Json a = Json::array();
        for (const auto& p : isolated_points(d.complement)) a.push_back(vector_to_json(p));
        return a;
    }();
    const int code = d.complement.is_unknown() ? kExitNotCertified : kExitOk;
    return {j, code, [j, d](std::ostream& os) {
                os << "group: " << j["group"].get<std::string>() << "\n";
                os << "rule: " << d.rule << "\n";
                os << "complement: " << j["complement"].dump() << "\n";
                os << "statement: " << d.statement << "\n";
            }};
}

Output cmd_rigid(const Options& opt) {
    const Character chi = load_character(opt.inputs[0]);
    const RigidityResult r = is_rigid(chi);
    const TranscendenceResult t = is_transcendental(chi);
    Json basis = Json::array();
    for (const auto& s : image_subgroup(chi).basis) basis.push_back(scalar_to_json(s));
    Json j;
    j["schema"] = kReportSchema;
    j["kind"] = "rigidity";
    j["group"] = chi.group()->name();
    j["character"] = to_json(chi);
    j["image_basis"] = basis;
    j["rigid"] = to_string(r.verdict);
    if (r.witness) j["unit_witness"] = scalar_to_json(*r.witness);
    if (r.multiplier_rank) j["multiplier_rank"] = r.multiplier_rank;
    if (!r.reason.empty()) j["rigid_reason"] = r.reason;
    j["transcendental"] = to_string(t.value);
    if (!t.reason.empty()) j["transcendental_reason"] = t.reason;
    const int code = r.verdict == RigidityResult::Verdict::Unknown && t.value == Decision::Unknown ? kExitNotCertified
                                                                                                 : kExitOk;
    return {j, code, [j](std::ostream& os) {
                Json flat = j;
                flat.erase("schema");
                flat.erase("character");
                render_flat(os, flat);
            }};
}

Output cmd_reidemeister(const Options& opt) {
    const GroupPtr g = load_group(opt.inputs[0]);
    const Homomorphism phi = load_endomorphism(opt.inputs[1], g);
    std::optional<ReidemeisterResult> r;
    std::string reason;
    if (g->as<family::FiniteGroup>()) {
        r = twisted_classes_finite(phi);
    } else if (g->as<family::FinitelyGeneratedAbelian>()) {
        r = reidemeister_abelian(phi);
    } else {
        const Certificate c = certify_Rchi(g);
        if (!c.certified()) {
            reason = "no fixed character is certified: " + c.reason;
        } else if (!c.witness_character || c.witness_character->group() != g) {
            reason = "the certified character lives on a quotient";
        } else if (phi.level != ValidationLevel::Exact) {
            reason = "the endomorphism could not be validated exactly";
        } else {
            r = fixed_character_criterion(*c.witness_character, phi);
            if (!r) reason = "the certified character is not fixed by this endomorphism";
        }
    }
    Json j;
    if (r) {
        j = to_json(*r, g.get());
    } else {
        j["count"] = nullptr;
        j["reason"] = reason;
    }
    j["schema"] = kReportSchema;
    j["kind"] = "reidemeister";
    j["group"] = g->name();
    return {j, r ? kExitOk : kExitNotCertified, [j](std::ostream& os) {
                os << "group: " << j["group"].get<std::string>() << "\n";
                os << "R(phi): " << (j["count"].is_null() ? "undetermined" : j["count"].get<std::string>()) << "\n";
                if (j.contains("method")) os << "method: " << j["method"].get<std::string>() << "\n";
                if (j.contains("reason")) os << "reason: " << j["reason"].get<std::string>() << "\n";
            }};
}

Output cmd_certify_rinf(const Options& opt) {
    const GroupPtr g = load_group(opt.inputs[0]);
    if (const auto* e = g->as<family::FiniteExtension>()) return certificate_output(certify_Rinf_extension(g, certify_Rchi(e->kernel)));
    const std::vector<GroupPtr>* factors = nullptr;
    if (const auto* p = g->as<family::DirectProduct>()) factors = &p->factors;
    if (const auto* p = g->as<family::FreeProduct>()) factors = &p->factors;
    if (factors && factors->size() == 2) {
        std::optional<Certificate> best;
        for (const auto& f : *factors) {
            Certificate inner = certify_Rchi(f);
            Certificate c = certify_Rinf_extension(g, inner);
            if (c.certified()) return certificate_output(c);
            if (!best && inner.certified()) best = std::move(c);
        }
        if (best) return certificate_output(*best);
    }
    return certificate_output(rinf_from_rchi(certify_Rchi(g)));
}

Output cmd_evidence(const Options& opt) {
    const GroupPtr g = load_group(opt.inputs[0]);
    const Json cj = read_json_file(opt.inputs[1]);
    const Character chi = character_from_json(cj, g);
    const EvidenceReport r = ball_evidence(g, chi, opt.radius, opt.budget);
    Json j = to_json(r);
    return {j, kExitOk, [j](std::ostream& os) { render_flat(os, j); }};
}

Output cmd_central_out(const Options& opt) {
    const GroupPtr e = load_group(opt.inputs[0]);
    const auto* ext = e->as<family::FiniteExtension>();
    if (!ext) throw InvalidArgument(e->name() + " is not a finite extension");
    const Json j = read_json_file(opt.inputs[1]);
    Homomorphism phi = homomorphism_from_json(j, ext->kernel, ext->kernel);
    validate_homomorphism(phi);
    return certificate_output(central_out_invariance(e, phi));
}

Output cmd_b1(const Options& opt) {
    const GroupPtr g = load_group(opt.inputs[0]);
    std::vector<SubgroupData> subs;
    for (std::size_t i = 1; i < opt.inputs.size(); ++i) subs.push_back({load_group(opt.inputs[i])});
    return certificate_output(check_b1_stability(g, subs));
}

Output cmd_replay(const Options& opt) {
    const Json c = read_json_file(opt.inputs[0]);
    const ReplayReport r = replay(c);
    Json j;
    j["schema"] = kReportSchema;
    j["kind"] = "replay";
    j["certificate"] = opt.inputs[0];
    j["checks_verified"] = r.checks_verified;
    j["identical"] = r.identical;
    j["failures"] = r.failures;
    return {j, r.ok() ? kExitOk : kExitNotCertified, [j](std::ostream& os) { render_flat(os, j); }};
}

struct Command {
    const char* name;
    const char* help;
    std::vector<const char*> positionals;
    bool variadic = false;
    std::function<Output(const Options&)> run;
};

std::vector<Command> commands() {
    return {
        {"analyze", "abelianization, b1 and character sphere of a group", {"GROUP"}, false, cmd_analyze},
        {"sigma", "Sigma^1 complement from the rule table", {"GROUP"}, false, cmd_sigma},
        {"rigid", "rigidity and transcendence of a character", {"CHARACTER"}, false, cmd_rigid},
        {"reidemeister", "Reidemeister number of an endomorphism", {"GROUP", "ENDOMORPHISM"}, false, cmd_reidemeister},
        {"class-s", "class S certificate", {"GROUP"}, false,
         [](const Options& o) { return certificate_output(check_class_S(load_group(o.inputs[0]))); }},
        {"certify-rchi", "R_chi_inf certificate", {"GROUP"}, false,
         [](const Options& o) { return certificate_output(certify_Rchi(load_group(o.inputs[0]))); }},
        {"certify-rinf", "R_inf certificate", {"GROUP"}, false, cmd_certify_rinf},
        {"commensurable", "R_inf for a group commensurable with a class S group", {"DATA"}, false,
         [](const Options& o) { return certificate_output(certify_commensurable(load_commensuration(o.inputs[0]))); }},
        {"central-out", "R(phi) infinite for an endomorphism of the kernel of a finite extension",
         {"GROUP", "ENDOMORPHISM"}, false, cmd_central_out},
        {"b1-stability", "b1 on finite index subgroups", {"GROUP", "SUBGROUP"}, true, cmd_b1},
        {"evidence", "finite Cayley ball evidence for a character class (never a certificate)",
         {"GROUP", "CHARACTER"}, false, cmd_evidence},
        {"replay", "re-verify a stored certificate", {"CERTIFICATE"}, false, cmd_replay},
    };
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sigma-invariant certificates for twisted conjugacy"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
    app.require_subcommand(1);
    Options opt;
    app.add_option("--format", opt.format, "output format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
    app.add_option("--out", opt.out, "write the output to PATH");
    app.add_option("--radius", opt.radius, "ball radius for evidence")->capture_default_str();
    app.add_option("--vertex-budget", opt.budget, "maximum ball size for evidence")->capture_default_str();

    const auto table = commands();
    std::vector<CLI::App*> subs;
    std::vector<std::vector<std::string>> positional(table.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        auto* sub = app.add_subcommand(table[i].name, table[i].help);
        sub->fallthrough();
        std::string names;
        for (const auto* p : table[i].positionals) names += std::string(names.empty() ? "" : " ") + p;
        auto* o = sub->add_option("inputs", positional[i], names)->check(CLI::ExistingFile);
        if (table[i].variadic) o->expected(1, -1);
        else o->expected(static_cast<int>(table[i].positionals.size()));
        o->required();
        subs.push_back(sub);
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitError;
    }

    for (std::size_t i = 0; i < table.size(); ++i) {
        if (!subs[i]->parsed()) continue;
        opt.inputs = positional[i];
        try {
            Output o = table[i].run(opt);
            std::ostringstream buf;
            if (opt.format == "text" && o.text) o.text(buf);
            else buf << o.doc.dump(2) << "\n";
            if (opt.out.empty()) {
                out << buf.str();
            } else {
                std::ofstream f(opt.out, std::ios::binary);
                if (!f) throw InvalidArgument("cannot write " + opt.out);
                f << buf.str();
            }
            return o.code;
        } catch (const Error& e) {
            err << "error: " << e.what() << "\n";
            return kExitError;
        } catch (const nlohmann::json::exception& e) {
            err << "error: " << e.what() << "\n";
            return kExitError;
        }
    }
    return kExitError;
}

}  // namespace sigmacert::cli
