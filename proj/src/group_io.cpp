#include "sigmacert/group_io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sigmacert/errors.hpp"
#include "sigmacert/finite_groups.hpp"

namespace sigmacert {

namespace {

const Json& require(const Json& j, const char* key, const std::string& loc) {
    if (!j.is_object()) throw ParseError("expected an object", loc);
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'", loc);
    return *it;
}

std::string require_string(const Json& j, const std::string& loc) {
    if (!j.is_string()) throw ParseError("expected a string", loc);
    return j.get<std::string>();
}

Integer json_integer(const Json& j, const std::string& loc) {
    if (j.is_number_integer()) return Integer(j.get<long>());
    if (j.is_string()) {
        Integer z;
        if (z.set_str(j.get<std::string>(), 10) == 0) return z;
    }
    throw ParseError("expected an integer", loc);
}

std::vector<std::string> string_list(const Json& j, const std::string& loc) {
    if (!j.is_array()) throw ParseError("expected an array of strings", loc);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(require_string(j[i], loc + "[" + std::to_string(i) + "]"));
    return out;
}

FiniteTablePtr finite_table_from_json(const Json& j, const std::string& loc) {
    if (!j.is_object()) throw ParseError("expected a finite group object", loc);
    if (j.contains("library")) {
        try {
            return finite::named(require_string(j["library"], loc + ".library"));
        } catch (const ParseError& e) {
            throw ParseError(e.what(), loc + ".library");
        }
    }
    auto elements = string_list(require(j, "elements", loc), loc + ".elements");
    const Json& tj = require(j, "table", loc);
    if (!tj.is_array()) throw ParseError("expected an array of rows", loc + ".table");
    std::vector<std::vector<std::uint32_t>> table;
    for (std::size_t i = 0; i < tj.size(); ++i) {
        const std::string rl = loc + ".table[" + std::to_string(i) + "]";
        if (!tj[i].is_array()) throw ParseError("expected a row of element indices", rl);
        std::vector<std::uint32_t> row;
        for (const auto& x : tj[i]) {
            if (!x.is_number_unsigned()) throw ParseError("expected element indices", rl);
            row.push_back(x.get<std::uint32_t>());
        }
        table.push_back(std::move(row));
    }
    try {
        return std::make_shared<FiniteGroupTable>(std::move(elements), std::move(table));
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what(), loc);
    }
}

Json finite_table_to_json(const FiniteGroupTable& t) {
    Json j;
    j["elements"] = t.elements();
    j["table"] = t.table();
    return j;
}

Json descriptor_json(const GroupDescriptor& g) {
    using namespace family;
    Json j;
    j["kind"] = g.family_name();
    j["name"] = g.name();
    std::visit(
        [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, FinitePresentation>) {
                j["generators"] = f.generators;
                Json rels = Json::array();
                for (const auto& r : f.relators) rels.push_back(word_to_json(r, f.generators));
                j["relators"] = rels;
            } else if constexpr (std::is_same_v<T, FreeGroup>) {
                j["rank"] = f.rank;
                j["generators"] = g.generators();
            } else if constexpr (std::is_same_v<T, FinitelyGeneratedAbelian>) {
                Json fs = Json::array();
                for (const auto& x : f.factors) fs.push_back(x.get_si());
                j["factors"] = fs;
                j["generators"] = g.generators();
            } else if constexpr (std::is_same_v<T, BaumslagSolitar1n>) {
                j["n"] = f.n.get_si();
            } else if constexpr (std::is_same_v<T, GammaN>) {
                j["n"] = f.n.get_si();
                Json fac = Json::array();
                for (const auto& [p, y] : f.factorization) fac.push_back(Json::array({p.get_si(), y}));
                j["factorization"] = fac;
            } else if constexpr (std::is_same_v<T, FiniteGroup>) {
                Json t = finite_table_to_json(*f.table);
                for (auto& [k, v] : t.items()) j[k] = v;
            } else if constexpr (std::is_same_v<T, DirectProduct> || std::is_same_v<T, FreeProduct>) {
                Json fs = Json::array();
                for (const auto& x : f.factors) fs.push_back(descriptor_json(*x));
                j["factors"] = fs;
            } else if constexpr (std::is_same_v<T, FiniteExtension>) {
                const auto& k = *f.quotient;
                const auto& hg = f.kernel->generators();
                j["kernel"] = descriptor_json(*f.kernel);
                j["quotient"] = finite_table_to_json(k);
                Json tr = Json::object(), conj = Json::object(), coc = Json::array();
                for (std::uint32_t q = 1; q < k.order(); ++q) {
                    tr[k.elements()[q]] = f.transversal[q];
                    Json c = Json::object();
                    for (std::size_t h = 0; h < hg.size(); ++h) c[hg[h]] = word_to_json(f.conjugation[q][h], hg);
                    conj[f.transversal[q]] = c;
                }
                for (const auto& [qr, w] : f.cocycle)
                    coc.push_back({{"q", k.elements()[qr.first]}, {"r", k.elements()[qr.second]}, {"word", word_to_json(w, hg)}});
                j["transversal"] = tr;
                j["conjugation"] = conj;
                j["cocycle"] = coc;
            } else if constexpr (std::is_same_v<T, CharacteristicQuotient>) {
                j["ambient"] = f.ambient;
                j["quotient"] = descriptor_json(*f.quotient);
                j["justification"] = f.justification;
            } else if constexpr (std::is_same_v<T, Builtin>) {
                if (f.kind == BuiltinKind::ThompsonF) j["builtin"] = "ThompsonF";
                else {
                    j["builtin"] = "Lamplighter";
                    j["n"] = f.parameter.get_si();
                }
            }
        },
        g.family());
    if (!g.assertions().empty()) {
        Json as = Json::array();
        for (const auto& a : g.assertions()) as.push_back(to_json(a));
        j["assertions"] = as;
    }
    return j;
}

}  // namespace

Json parse_json_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("JSON syntax error: ") + e.what(), "byte " + std::to_string(e.byte));
    }
}

Json rational_to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const Json& j, const std::string& loc) {
    try {
        if (j.is_number_integer()) return Rational(j.get<long>());
        if (j.is_string()) return parse_rational(j.get<std::string>());
    } catch (const Error& e) {
        throw ParseError(e.what(), loc);
    }
    throw ParseError("expected a rational (integer or string like \"3/2\")", loc);
}

Json vector_to_json(const QVector& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(rational_to_json(x));
    return a;
}

Json vector_to_json(const ZVector& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(to_string(x));
    return a;
}

QVector vector_from_json(const Json& j, const std::string& loc) {
    if (!j.is_array()) throw ParseError("expected an array of rationals", loc);
    QVector v;
    for (std::size_t i = 0; i < j.size(); ++i) v.push_back(rational_from_json(j[i], loc + "[" + std::to_string(i) + "]"));
    return v;
}

Json matrix_to_json(const QMatrix& m) {
    Json a = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(vector_to_json(m.row(i)));
    return a;
}

QMatrix matrix_from_json(const Json& j, std::size_t cols, const std::string& loc) {
    if (!j.is_array()) throw ParseError("expected an array of rows", loc);
    std::vector<QVector> rows;
    for (std::size_t i = 0; i < j.size(); ++i) {
        rows.push_back(vector_from_json(j[i], loc + "[" + std::to_string(i) + "]"));
        if (rows.back().size() != cols) throw ParseError("row has the wrong length", loc + "[" + std::to_string(i) + "]");
    }
    return QMatrix::from_rows(rows, cols);
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file", path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_json_text(ss.str());
    } catch (const ParseError& e) {
        throw ParseError(e.what(), path);
    }
}

Word parse_word(const Json& arr, const std::vector<std::string>& generators, const std::string& loc) {
    if (!arr.is_array()) throw ParseError("expected a word (array of letters)", loc);
    Word w;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string ll = loc + "[" + std::to_string(i) + "]";
        std::string tok = require_string(arr[i], ll);
        long e = 1;
        if (auto caret = tok.find('^'); caret != std::string::npos) {
            std::size_t used = 0;
            try {
                e = std::stol(tok.substr(caret + 1), &used);
            } catch (...) {
                used = 0;
            }
            if (used == 0 || caret + 1 + used != tok.size()) throw ParseError("bad exponent in letter '" + tok + "'", ll);
            tok = tok.substr(0, caret);
        }
        auto it = std::find(generators.begin(), generators.end(), tok);
        if (it == generators.end()) throw ParseError("unknown generator '" + tok + "'", ll);
        auto g = static_cast<std::uint32_t>(it - generators.begin());
        for (long k = 0; k < std::abs(e); ++k) w.push_back({g, e > 0 ? 1 : -1});
    }
    return w;
}

Json word_to_json(const Word& w, const std::vector<std::string>& generators) {
    Json out = Json::array();
    for (std::size_t i = 0; i < w.size();) {
        std::size_t j = i;
        while (j < w.size() && w[j] == w[i]) ++j;
        long e = static_cast<long>(j - i) * w[i].sign;
        out.push_back(e == 1 ? generators.at(w[i].gen) : generators.at(w[i].gen) + "^" + std::to_string(e));
        i = j;
    }
    return out;
}

PropertyAssertion assertion_from_json(const Json& j, const std::string& loc) {
    PropertyAssertion a;
    try {
        a.kind = assertion_kind_from_string(require_string(require(j, "kind", loc), loc + ".kind"));
        if (j.contains("tag")) a.tag = class_tag_from_string(require_string(j["tag"], loc + ".tag"));
    } catch (const ParseError& e) {
        throw ParseError(e.what(), loc);
    }
    if (a.kind == AssertionKind::ClassTag && !a.tag) throw ParseError("ClassTag assertion needs a tag", loc);
    if (j.contains("about")) a.about = string_list(j["about"], loc + ".about");
    a.justification = require_string(require(j, "justification", loc), loc + ".justification");
    if (j.contains("source")) a.source = require_string(j["source"], loc + ".source");
    return a;
}

Json to_json(const PropertyAssertion& a) {
    Json j;
    j["kind"] = to_string(a.kind);
    if (!a.about.empty()) j["about"] = a.about;
    if (a.tag) j["tag"] = to_string(*a.tag);
    j["justification"] = a.justification;
    j["source"] = a.source;
    return j;
}

GroupPtr group_from_json(const Json& j, const std::string& loc, const std::string& base_dir) {
    using namespace family;
    if (!j.is_object()) throw ParseError("expected a group descriptor object", loc);
    if (j.contains("ref")) {
        std::filesystem::path p = require_string(j["ref"], loc + ".ref");
        if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
        return load_group(p.string());
    }
    if (j.contains("schema") && j["schema"] != kGroupSchema)
        throw ParseError("unsupported schema (expected " + std::string(kGroupSchema) + ")", loc + ".schema");
    const std::string kind = require_string(require(j, "kind", loc), loc + ".kind");
    std::string name = j.contains("name") ? require_string(j["name"], loc + ".name") : "";
    std::vector<PropertyAssertion> assertions;
    if (j.contains("assertions")) {
        const Json& as = j["assertions"];
        if (!as.is_array()) throw ParseError("expected an array", loc + ".assertions");
        for (std::size_t i = 0; i < as.size(); ++i)
            assertions.push_back(assertion_from_json(as[i], loc + ".assertions[" + std::to_string(i) + "]"));
    }
    auto gens_of = [&]() {
        return j.contains("generators") ? string_list(j["generators"], loc + ".generators") : std::vector<std::string>{};
    };
    auto sub = [&](const Json& x, const std::string& l) { return group_from_json(x, l, base_dir); };

    FamilyVariant fam;
    if (kind == "FinitePresentation") {
        auto gens = string_list(require(j, "generators", loc), loc + ".generators");
        const Json& rj = require(j, "relators", loc);
        if (!rj.is_array()) throw ParseError("expected an array of words", loc + ".relators");
        std::vector<Word> rels;
        for (std::size_t i = 0; i < rj.size(); ++i)
            rels.push_back(parse_word(rj[i], gens, loc + ".relators[" + std::to_string(i) + "]"));
        fam = FinitePresentation{gens, rels};
    } else if (kind == "FreeGroup") {
        const Json& r = require(j, "rank", loc);
        if (!r.is_number_unsigned()) throw ParseError("rank must be a nonnegative integer", loc + ".rank");
        fam = FreeGroup{r.get<std::size_t>(), gens_of()};
    } else if (kind == "FinitelyGeneratedAbelian") {
        const Json& fj = require(j, "factors", loc);
        if (!fj.is_array()) throw ParseError("expected an array of integers", loc + ".factors");
        ZVector fs;
        for (std::size_t i = 0; i < fj.size(); ++i) fs.push_back(json_integer(fj[i], loc + ".factors[" + std::to_string(i) + "]"));
        fam = FinitelyGeneratedAbelian{fs, gens_of()};
    } else if (kind == "BaumslagSolitar1n") {
        Integer n = json_integer(require(j, "n", loc), loc + ".n");
        if (n < 2) throw ParseError("BS(1,n) needs n >= 2", loc + ".n");
        fam = BaumslagSolitar1n{n};
    } else if (kind == "GammaN") {
        Integer n = json_integer(require(j, "n", loc), loc + ".n");
        if (n < 2) throw ParseError("Gamma_n needs n >= 2", loc + ".n");
        auto fac = factorize(n);
        if (j.contains("factorization")) {
            std::vector<std::pair<Integer, unsigned>> given;
            for (const auto& pe : j["factorization"]) {
                if (!pe.is_array() || pe.size() != 2) throw ParseError("expected [prime, exponent] pairs", loc + ".factorization");
                given.emplace_back(json_integer(pe[0], loc + ".factorization"),
                                   static_cast<unsigned>(json_integer(pe[1], loc + ".factorization").get_ui()));
            }
            std::sort(given.begin(), given.end());
            if (given != fac) throw ParseError("factorization does not match n", loc + ".factorization");
        }
        fam = GammaN{n, fac};
    } else if (kind == "FiniteGroup") {
        fam = FiniteGroup{finite_table_from_json(j, loc)};
    } else if (kind == "DirectProduct" || kind == "FreeProduct") {
        const Json& fj = require(j, "factors", loc);
        if (!fj.is_array() || fj.empty()) throw ParseError("expected a nonempty array of descriptors", loc + ".factors");
        std::vector<GroupPtr> fs;
        for (std::size_t i = 0; i < fj.size(); ++i) fs.push_back(sub(fj[i], loc + ".factors[" + std::to_string(i) + "]"));
        if (kind == "DirectProduct") fam = DirectProduct{fs};
        else fam = FreeProduct{fs};
    } else if (kind == "FiniteExtension") {
        FiniteExtension ext;
        ext.kernel = sub(require(j, "kernel", loc), loc + ".kernel");
        const Json& qj = require(j, "quotient", loc);
        if (qj.contains("kind") && qj["kind"] != "FiniteGroup") throw ParseError("quotient must be a finite group", loc + ".quotient");
        ext.quotient = finite_table_from_json(qj, loc + ".quotient");
        const auto& k = *ext.quotient;
        const auto& hg = ext.kernel->generators();
        const Json& tj = require(j, "transversal", loc);
        if (!tj.is_object()) throw ParseError("expected an object mapping quotient elements to letters", loc + ".transversal");
        ext.transversal.assign(k.order(), "");
        for (const auto& [qn, letter] : tj.items()) {
            auto q = k.element_index(qn);
            if (!q) throw ParseError("unknown quotient element '" + qn + "'", loc + ".transversal");
            if (*q == 0) throw ParseError("the identity has the empty transversal word", loc + ".transversal." + qn);
            ext.transversal[*q] = require_string(letter, loc + ".transversal." + qn);
        }
        for (std::size_t q = 1; q < k.order(); ++q)
            if (ext.transversal[q].empty())
                throw ParseError("no transversal letter for '" + k.elements()[q] + "'", loc + ".transversal");
        const Json& cj = require(j, "conjugation", loc);
        ext.conjugation.assign(k.order(), {});
        for (std::size_t h = 0; h < hg.size(); ++h) ext.conjugation[0].push_back({{static_cast<std::uint32_t>(h), 1}});
        for (std::uint32_t q = 1; q < k.order(); ++q) {
            const std::string ql = loc + ".conjugation." + ext.transversal[q];
            const Json& row = require(cj, ext.transversal[q].c_str(), loc + ".conjugation");
            for (const auto& hn : hg) ext.conjugation[q].push_back(parse_word(require(row, hn.c_str(), ql), hg, ql + "." + hn));
        }
        const Json& coc = require(j, "cocycle", loc);
        if (!coc.is_array()) throw ParseError("expected an array", loc + ".cocycle");
        for (std::size_t i = 0; i < coc.size(); ++i) {
            const std::string cl = loc + ".cocycle[" + std::to_string(i) + "]";
            auto q = k.element_index(require_string(require(coc[i], "q", cl), cl + ".q"));
            auto r = k.element_index(require_string(require(coc[i], "r", cl), cl + ".r"));
            if (!q || !r || *q == 0 || *r == 0) throw ParseError("cocycle entries need non-identity quotient elements", cl);
            ext.cocycle[{*q, *r}] = parse_word(require(coc[i], "word", cl), hg, cl + ".word");
        }
        fam = std::move(ext);
    } else if (kind == "CharacteristicQuotient") {
        fam = CharacteristicQuotient{require_string(require(j, "ambient", loc), loc + ".ambient"),
                                     sub(require(j, "quotient", loc), loc + ".quotient"),
                                     require_string(require(j, "justification", loc), loc + ".justification")};
    } else if (kind == "Builtin") {
        const std::string b = require_string(require(j, "builtin", loc), loc + ".builtin");
        if (b == "ThompsonF") fam = Builtin{BuiltinKind::ThompsonF, 0};
        else if (b == "Lamplighter") fam = Builtin{BuiltinKind::Lamplighter, json_integer(require(j, "n", loc), loc + ".n")};
        else throw ParseError("unknown builtin '" + b + "'", loc + ".builtin");
        if (name.empty() && b == "ThompsonF") name = "F";
    } else {
        throw ParseError("unknown group kind '" + kind + "'", loc + ".kind");
    }
    try {
        return std::make_shared<GroupDescriptor>(name, std::move(fam), std::move(assertions));
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what(), loc);
    }
}

GroupPtr parse_group(const std::string& text) { return group_from_json(parse_json_text(text)); }

GroupPtr load_group(const std::string& path) {
    Json j = read_json_file(path);
    try {
        return group_from_json(j, "$", std::filesystem::path(path).parent_path().string());
    } catch (const ParseError& e) {
        throw ParseError(e.what(), path);
    }
}

Json to_json(const GroupDescriptor& g) {
    Json j;
    j["schema"] = kGroupSchema;
    Json body = descriptor_json(g);
    for (auto& [k, v] : body.items()) j[k] = v;
    return j;
}

Homomorphism homomorphism_from_json(const Json& j, GroupPtr source, GroupPtr target, const std::string& loc) {
    Homomorphism phi{source, target, {}};
    const Json& im = require(j, "images", loc);
    const auto& sg = source->generators();
    if (im.is_array()) {
        if (im.size() != sg.size()) throw ParseError("need one image per source generator", loc + ".images");
        for (std::size_t i = 0; i < im.size(); ++i)
            phi.images.push_back(parse_word(im[i], target->generators(), loc + ".images[" + std::to_string(i) + "]"));
    } else if (im.is_object()) {
        for (const auto& [k, v] : im.items())
            if (!source->generator_index(k)) throw ParseError("unknown source generator '" + k + "'", loc + ".images");
        for (const auto& g : sg)
            phi.images.push_back(parse_word(require(im, g.c_str(), loc + ".images"), target->generators(), loc + ".images." + g));
    } else {
        throw ParseError("images must be an array or an object", loc + ".images");
    }
    return phi;
}

Json to_json(const Homomorphism& phi) {
    Json im = Json::object();
    for (std::size_t i = 0; i < phi.images.size(); ++i)
        im[phi.source->generators()[i]] = word_to_json(phi.images[i], phi.target->generators());
    Json j;
    j["source"] = phi.source->name();
    j["target"] = phi.target->name();
    j["images"] = im;
    j["validation"] = to_string(phi.level);
    return j;
}

}  // namespace sigmacert
