#include "sigmacert/groups.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "sigmacert/errors.hpp"

namespace sigmacert {

Word inverse(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(it->inverse());
    return out;
}

Word concat(const Word& a, const Word& b) {
    Word out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

Word free_reduce(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (const Letter& l : w) {
        if (!out.empty() && out.back() == l.inverse()) out.pop_back();
        else out.push_back(l);
    }
    return out;
}

Word power(const Word& w, long k) {
    Word base = k < 0 ? inverse(w) : w;
    Word out;
    for (long i = 0; i < (k < 0 ? -k : k); ++i) out.insert(out.end(), base.begin(), base.end());
    return out;
}

Word commutator(const Word& a, const Word& b) { return concat(concat(a, b), concat(inverse(a), inverse(b))); }

ZVector exponent_sums(const Word& w, std::size_t generator_count) {
    ZVector e(generator_count, 0);
    for (const Letter& l : w) {
        if (l.gen >= generator_count) throw InvalidArgument("generator index out of range");
        e[l.gen] += l.sign;
    }
    return e;
}

std::size_t WordHash::operator()(const Word& w) const noexcept {
    std::size_t h = w.size();
    for (const Letter& l : w) h = h * 1000003u ^ (static_cast<std::size_t>(l.gen) * 2 + (l.sign > 0 ? 1 : 0));
    return h;
}

// ------------------------------------------------------------- assertions

namespace {

const std::vector<std::pair<AssertionKind, const char*>> kAssertionNames = {
    {AssertionKind::HomsTrivial, "HomsTrivial"},
    {AssertionKind::CommutatorContainsFiniteIndexInfiniteSimple, "CommutatorContainsFiniteIndexInfiniteSimple"},
    {AssertionKind::B1StableAllFiniteIndex, "B1StableAllFiniteIndex"},
    {AssertionKind::ClassTag, "ClassTag"},
    {AssertionKind::ThetaImageInner, "ThetaImageInner"},
    {AssertionKind::CentralInOut, "CentralInOut"},
    {AssertionKind::Characteristic, "Characteristic"},
    {AssertionKind::FreelyIndecomposable, "FreelyIndecomposable"},
};

}  // namespace

std::string to_string(AssertionKind k) {
    for (const auto& [kind, name] : kAssertionNames)
        if (kind == k) return name;
    return "?";
}

AssertionKind assertion_kind_from_string(const std::string& s) {
    for (const auto& [kind, name] : kAssertionNames)
        if (s == name) return kind;
    throw ParseError("unknown assertion kind '" + s + "'");
}

std::string to_string(GroupClassTag t) {
    switch (t) {
        case GroupClassTag::D: return "D";
        case GroupClassTag::T: return "T";
        case GroupClassTag::A: return "A";
        case GroupClassTag::L: return "L";
    }
    return "?";
}

GroupClassTag class_tag_from_string(const std::string& s) {
    if (s == "D") return GroupClassTag::D;
    if (s == "T") return GroupClassTag::T;
    if (s == "A") return GroupClassTag::A;
    if (s == "L") return GroupClassTag::L;
    throw ParseError("unknown class tag '" + s + "' (expected D, T, A or L)");
}

// ------------------------------------------------------------- finite tables

FiniteGroupTable::FiniteGroupTable(std::vector<std::string> elements, std::vector<std::vector<std::uint32_t>> table)
    : elements_(std::move(elements)), table_(std::move(table)) {
    const std::size_t n = elements_.size();
    if (n == 0) throw InvalidArgument("finite group needs at least one element");
    if (table_.size() != n) throw InvalidArgument("multiplication table has wrong number of rows");
    std::set<std::string> names(elements_.begin(), elements_.end());
    if (names.size() != n) throw InvalidArgument("finite group element names must be distinct");
    for (const auto& row : table_) {
        if (row.size() != n) throw InvalidArgument("multiplication table is not square");
        std::vector<bool> seen(n, false);
        for (auto x : row) {
            if (x >= n || seen[x]) throw InvalidArgument("multiplication table is not a Latin square");
            seen[x] = true;
        }
    }
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<bool> seen(n, false);
        for (std::size_t i = 0; i < n; ++i) {
            if (seen[table_[i][j]]) throw InvalidArgument("multiplication table is not a Latin square");
            seen[table_[i][j]] = true;
        }
    }
    for (std::uint32_t x = 0; x < n; ++x)
        if (table_[0][x] != x || table_[x][0] != x) throw InvalidArgument("element 0 must be the identity");
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
                    throw InvalidArgument("multiplication table is not associative");
    inverse_.assign(n, 0);
    for (std::uint32_t a = 0; a < n; ++a)
        for (std::uint32_t b = 0; b < n; ++b)
            if (table_[a][b] == 0) inverse_[a] = b;
}

std::optional<std::uint32_t> FiniteGroupTable::element_index(std::string_view name) const {
    for (std::size_t i = 0; i < elements_.size(); ++i)
        if (elements_[i] == name) return static_cast<std::uint32_t>(i);
    return std::nullopt;
}

bool FiniteGroupTable::is_abelian() const {
    for (std::size_t a = 0; a < order(); ++a)
        for (std::size_t b = 0; b < a; ++b)
            if (table_[a][b] != table_[b][a]) return false;
    return true;
}

// ------------------------------------------------------------- descriptors

std::vector<std::pair<Integer, unsigned>> factorize(const Integer& n) {
    if (n < 1) throw InvalidArgument("can only factor positive integers");
    std::vector<std::pair<Integer, unsigned>> out;
    Integer m = n;
    for (Integer p = 2; p * p <= m; ++p) {
        unsigned e = 0;
        while (m % p == 0) m /= p, ++e;
        if (e) out.emplace_back(p, e);
    }
    if (m > 1) out.emplace_back(m, 1u);
    return out;
}

std::vector<std::size_t> factor_offsets(const std::vector<GroupPtr>& factors) {
    std::vector<std::size_t> out;
    std::size_t off = 0;
    for (const auto& f : factors) {
        out.push_back(off);
        off += f->generator_count();
    }
    out.push_back(off);
    return out;
}

namespace {

std::vector<std::string> default_names(std::size_t count) {
    static const char* small = "abcdefgh";
    std::vector<std::string> out;
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(count <= 8 ? std::string(1, small[i]) : "x" + std::to_string(i + 1));
    return out;
}

Word letters(std::uint32_t g, long exponent) { return power(Word{{g, 1}}, exponent); }

Word shift(const Word& w, std::size_t offset) {
    Word out = w;
    for (auto& l : out) l.gen += static_cast<std::uint32_t>(offset);
    return out;
}

void check_word(const Word& w, std::size_t generator_count, const std::string& what) {
    for (const auto& l : w)
        if (l.gen >= generator_count || (l.sign != 1 && l.sign != -1))
            throw InvalidArgument(what + " uses an invalid letter");
}

// Merges generator lists, suffixing with the factor position on collision.
std::vector<std::string> merged_names(const std::vector<GroupPtr>& factors) {
    std::vector<std::string> plain;
    for (const auto& f : factors) plain.insert(plain.end(), f->generators().begin(), f->generators().end());
    if (std::set<std::string>(plain.begin(), plain.end()).size() == plain.size()) return plain;
    std::vector<std::string> out;
    for (std::size_t i = 0; i < factors.size(); ++i)
        for (const auto& g : factors[i]->generators()) out.push_back(g + "_" + std::to_string(i + 1));
    return out;
}

std::string join_names(const std::vector<GroupPtr>& factors, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i) out += sep;
        const bool compound = factors[i]->as<family::DirectProduct>() || factors[i]->as<family::FreeProduct>();
        out += compound ? "(" + factors[i]->name() + ")" : factors[i]->name();
    }
    return out;
}

std::string abelian_name(const ZVector& f) {
    if (f.empty()) return "1";
    std::size_t free = 0;
    std::string tors;
    for (const auto& x : f) {
        if (x == 0) ++free;
        else tors += (tors.empty() ? "" : " x ") + std::string("Z/") + x.get_str();
    }
    std::string out;
    if (free == 1) out = "Z";
    else if (free > 1) out = "Z^" + std::to_string(free);
    if (!tors.empty()) out += (out.empty() ? "" : " x ") + tors;
    return out;
}

}  // namespace

GroupDescriptor::GroupDescriptor(std::string name, FamilyVariant fam, std::vector<PropertyAssertion> assertions)
    : name_(std::move(name)), family_(std::move(fam)), assertions_(std::move(assertions)) {
    using namespace family;
    std::visit(
        [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, FinitePresentation>) {
                generators_ = f.generators;
                relators_ = f.relators;
                if (name_.empty()) name_ = "presentation";
            } else if constexpr (std::is_same_v<T, FreeGroup>) {
                generators_ = f.generators.empty() ? default_names(f.rank) : f.generators;
                if (generators_.size() != f.rank) throw InvalidArgument("free group generator count differs from rank");
                if (name_.empty()) name_ = "F_" + std::to_string(f.rank);
            } else if constexpr (std::is_same_v<T, FinitelyGeneratedAbelian>) {
                for (const auto& x : f.factors)
                    if (x < 0 || x == 1) throw InvalidArgument("abelian factors must be 0 (for Z) or at least 2");
                generators_ = f.generators.empty() ? default_names(f.factors.size()) : f.generators;
                if (generators_.size() != f.factors.size())
                    throw InvalidArgument("abelian generator count differs from factor count");
                for (std::uint32_t i = 0; i < f.factors.size(); ++i) {
                    if (f.factors[i] != 0) relators_.push_back(letters(i, f.factors[i].get_si()));
                    for (std::uint32_t j = i + 1; j < f.factors.size(); ++j)
                        relators_.push_back(commutator({{i, 1}}, {{j, 1}}));
                }
                if (name_.empty()) name_ = abelian_name(f.factors);
            } else if constexpr (std::is_same_v<T, BaumslagSolitar1n>) {
                if (f.n < 2) throw InvalidArgument("BS(1,n) needs n >= 2");
                generators_ = {"a", "t"};
                relators_ = {concat(Word{{1, 1}, {0, 1}, {1, -1}}, letters(0, -f.n.get_si()))};
                if (name_.empty()) name_ = "BS(1," + f.n.get_str() + ")";
            } else if constexpr (std::is_same_v<T, GammaN>) {
                if (f.n < 2) throw InvalidArgument("Gamma_n needs n >= 2");
                Integer prod = 1;
                std::set<Integer> primes;
                for (const auto& [p, y] : f.factorization) {
                    if (y < 1 || factorize(p).size() != 1 || factorize(p)[0].second != 1)
                        throw InvalidArgument("Gamma_n factorization must list distinct primes with positive exponents");
                    primes.insert(p);
                    Integer q;
                    mpz_pow_ui(q.get_mpz_t(), p.get_mpz_t(), y);
                    prod *= q;
                }
                if (prod != f.n || primes.size() != f.factorization.size())
                    throw InvalidArgument("Gamma_n factorization does not multiply to n");
                generators_ = {"a"};
                const auto r = static_cast<std::uint32_t>(f.factorization.size());
                for (std::uint32_t i = 1; i <= r; ++i) generators_.push_back("t" + std::to_string(i));
                for (std::uint32_t i = 1; i <= r; ++i)
                    for (std::uint32_t j = i + 1; j <= r; ++j) relators_.push_back(commutator({{i, 1}}, {{j, 1}}));
                for (std::uint32_t i = 1; i <= r; ++i) {
                    Integer q;
                    mpz_pow_ui(q.get_mpz_t(), f.factorization[i - 1].first.get_mpz_t(), f.factorization[i - 1].second);
                    relators_.push_back(concat(Word{{i, 1}, {0, 1}, {i, -1}}, letters(0, -q.get_si())));
                }
                if (name_.empty()) name_ = "Gamma_" + f.n.get_str();
            } else if constexpr (std::is_same_v<T, FiniteGroup>) {
                if (!f.table) throw InvalidArgument("finite group without table");
                const auto& t = *f.table;
                generators_.assign(t.elements().begin() + 1, t.elements().end());
                for (std::uint32_t x = 1; x < t.order(); ++x)
                    for (std::uint32_t y = 1; y < t.order(); ++y) {
                        Word w{{x - 1, 1}, {y - 1, 1}};
                        if (auto z = t.mul(x, y); z != 0) w.push_back({z - 1, -1});
                        relators_.push_back(w);
                    }
                if (name_.empty()) name_ = "finite group of order " + std::to_string(t.order());
            } else if constexpr (std::is_same_v<T, DirectProduct> || std::is_same_v<T, FreeProduct>) {
                constexpr bool direct = std::is_same_v<T, DirectProduct>;
                if (f.factors.empty()) throw InvalidArgument("product needs at least one factor");
                generators_ = merged_names(f.factors);
                auto off = factor_offsets(f.factors);
                for (std::size_t i = 0; i < f.factors.size(); ++i) {
                    const auto& g = *f.factors[i];
                    if (!g.abelianization_known()) abelianization_known_ = false;
                    if (!g.presentation_complete()) presentation_complete_ = false;
                    for (const auto& r : g.relators()) relators_.push_back(shift(r, off[i]));
                }
                if (direct)
                    for (std::size_t i = 0; i < f.factors.size(); ++i)
                        for (std::size_t j = i + 1; j < f.factors.size(); ++j)
                            for (auto x = off[i]; x < off[i + 1]; ++x)
                                for (auto y = off[j]; y < off[j + 1]; ++y)
                                    relators_.push_back(commutator({{static_cast<std::uint32_t>(x), 1}},
                                                                   {{static_cast<std::uint32_t>(y), 1}}));
                if (name_.empty()) name_ = join_names(f.factors, direct ? " x " : " * ");
            } else if constexpr (std::is_same_v<T, FiniteExtension>) {
                if (!f.kernel || !f.quotient) throw InvalidArgument("extension needs kernel and quotient");
                const auto& h = *f.kernel;
                const auto& k = *f.quotient;
                const std::size_t hn = h.generator_count();
                if (!h.abelianization_known()) abelianization_known_ = false;
                presentation_complete_ = h.presentation_complete();
                if (f.transversal.size() != k.order()) throw InvalidArgument("transversal must name one letter per quotient element");
                if (f.conjugation.size() != k.order()) throw InvalidArgument("conjugation data must cover every quotient element");
                generators_ = h.generators();
                for (std::size_t q = 1; q < k.order(); ++q) generators_.push_back(f.transversal[q]);
                auto nu = [&](std::uint32_t q) { return q == 0 ? Word{} : Word{{static_cast<std::uint32_t>(hn + q - 1), 1}}; };
                relators_ = h.relators();
                for (std::uint32_t q = 1; q < k.order(); ++q) {
                    if (f.conjugation[q].size() != hn)
                        throw InvalidArgument("conjugation data must cover every kernel generator");
                    for (std::uint32_t g = 0; g < hn; ++g) {
                        check_word(f.conjugation[q][g], hn, "conjugation word");
                        relators_.push_back(
                            concat(concat(inverse(nu(q)), Word{{g, 1}}), concat(nu(q), inverse(f.conjugation[q][g]))));
                    }
                    for (std::uint32_t r = 1; r < k.order(); ++r) {
                        auto it = f.cocycle.find({q, r});
                        if (it == f.cocycle.end())
                            throw InvalidArgument("extension data lacks the cocycle value for (" + k.elements()[q] + ", " +
                                                  k.elements()[r] + ")");
                        check_word(it->second, hn, "cocycle word");
                        // nu(q) nu(r) = nu(qr) c(q, r)
                        relators_.push_back(concat(concat(nu(q), nu(r)), inverse(concat(nu(k.mul(q, r)), it->second))));
                    }
                }
                if (name_.empty()) name_ = "extension of " + h.name();
            } else if constexpr (std::is_same_v<T, CharacteristicQuotient>) {
                if (!f.quotient) throw InvalidArgument("characteristic quotient needs a quotient descriptor");
                abelianization_known_ = false;
                presentation_complete_ = false;
                if (name_.empty()) name_ = f.ambient;
            } else if constexpr (std::is_same_v<T, Builtin>) {
                generators_ = {};
                if (f.kind == BuiltinKind::ThompsonF) {
                    generators_ = {"x0", "x1"};
                    Word u{{0, 1}, {1, -1}};
                    relators_.push_back(commutator(u, Word{{0, -1}, {1, 1}, {0, 1}}));
                    relators_.push_back(commutator(u, Word{{0, -1}, {0, -1}, {1, 1}, {0, 1}, {0, 1}}));
                    if (name_.empty()) name_ = "F";
                } else {
                    if (f.parameter < 2) throw InvalidArgument("lamplighter needs lamp group order >= 2");
                    generators_ = {"a", "t"};
                    relators_.push_back(letters(0, f.parameter.get_si()));
                    for (long k = 1; k <= 2; ++k)
                        relators_.push_back(commutator({{0, 1}}, concat(concat(letters(1, k), {{0, 1}}), letters(1, -k))));
                    presentation_complete_ = false;
                    if (name_.empty()) name_ = "L_" + f.parameter.get_str();
                }
            }
        },
        family_);

    if (std::set<std::string>(generators_.begin(), generators_.end()).size() != generators_.size())
        throw InvalidArgument("generator names of " + name_ + " are not distinct");
    for (const auto& g : generators_)
        if (g.empty() || g.find('^') != std::string::npos)
            throw InvalidArgument("generator name '" + g + "' is empty or contains '^'");
    for (const auto& r : relators_) check_word(r, generators_.size(), "relator");

    if (const auto* ext = std::get_if<FiniteExtension>(&family_)) {
        // each alpha_q must be an automorphism of the kernel
        for (std::uint32_t q = 1; q < ext->quotient->order(); ++q) {
            Homomorphism alpha{ext->kernel, ext->kernel, ext->conjugation[q]};
            try {
                validate_homomorphism(alpha);
            } catch (const NotAHomomorphism& e) {
                throw InvalidArgument("inconsistent extension data: conjugation by " + ext->transversal[q] +
                                      " is not an endomorphism (" + e.what() + ")");
            } catch (const UnsupportedFamily&) {
            }
        }
    }
}

std::string GroupDescriptor::family_name() const {
    static const char* names[] = {"FinitePresentation", "FreeGroup",     "FinitelyGeneratedAbelian",
                                  "BaumslagSolitar1n",  "GammaN",        "FiniteGroup",
                                  "DirectProduct",      "FreeProduct",   "FiniteExtension",
                                  "CharacteristicQuotient", "Builtin"};
    return names[family_.index()];
}

std::optional<std::uint32_t> GroupDescriptor::generator_index(std::string_view name) const {
    for (std::size_t i = 0; i < generators_.size(); ++i)
        if (generators_[i] == name) return static_cast<std::uint32_t>(i);
    return std::nullopt;
}

std::vector<PropertyAssertion> GroupDescriptor::assertions_of_kind(AssertionKind k) const {
    std::vector<PropertyAssertion> out;
    for (const auto& a : assertions_)
        if (a.kind == k) out.push_back(a);
    return out;
}

std::string GroupDescriptor::format_word(const Word& w) const {
    if (w.empty()) return "1";
    std::ostringstream os;
    for (std::size_t i = 0; i < w.size();) {
        std::size_t j = i;
        while (j < w.size() && w[j] == w[i]) ++j;
        long e = static_cast<long>(j - i) * w[i].sign;
        if (i) os << ' ';
        os << (w[i].gen < generators_.size() ? generators_[w[i].gen] : "?" + std::to_string(w[i].gen));
        if (e != 1) os << '^' << e;
        i = j;
    }
    return os.str();
}

GroupPtr make_presentation(std::vector<std::string> generators, std::vector<Word> relators, std::string name) {
    return std::make_shared<GroupDescriptor>(std::move(name),
                                             family::FinitePresentation{std::move(generators), std::move(relators)});
}

GroupPtr make_free_group(std::size_t rank, std::vector<std::string> generators, std::string name) {
    return std::make_shared<GroupDescriptor>(std::move(name), family::FreeGroup{rank, std::move(generators)});
}

GroupPtr make_abelian(ZVector factors, std::vector<std::string> generators, std::string name) {
    return std::make_shared<GroupDescriptor>(std::move(name),
                                             family::FinitelyGeneratedAbelian{std::move(factors), std::move(generators)});
}

GroupPtr make_baumslag_solitar(const Integer& n, std::string name) {
    return std::make_shared<GroupDescriptor>(std::move(name), family::BaumslagSolitar1n{n});
}

GroupPtr make_gamma(const Integer& n, std::string name) {
    if (n < 2) throw InvalidArgument("Gamma_n needs n >= 2");
    return std::make_shared<GroupDescriptor>(std::move(name), family::GammaN{n, factorize(n)});
}

GroupPtr make_finite(FiniteTablePtr table, std::string name) {
    return std::make_shared<GroupDescriptor>(std::move(name), family::FiniteGroup{std::move(table)});
}

GroupPtr make_direct_product(std::vector<GroupPtr> factors, std::string name) {
    return std::make_shared<GroupDescriptor>(std::move(name), family::DirectProduct{std::move(factors)});
}

GroupPtr make_free_product(std::vector<GroupPtr> factors, std::string name) {
    return std::make_shared<GroupDescriptor>(std::move(name), family::FreeProduct{std::move(factors)});
}

GroupPtr make_finite_extension(family::FiniteExtension ext, std::string name) {
    return std::make_shared<GroupDescriptor>(std::move(name), std::move(ext));
}

GroupPtr make_characteristic_quotient(std::string ambient, GroupPtr quotient, std::string justification) {
    std::string name = ambient;
    return std::make_shared<GroupDescriptor>(
        std::move(name), family::CharacteristicQuotient{std::move(ambient), std::move(quotient), std::move(justification)});
}

GroupPtr make_thompson_f() {
    return std::make_shared<GroupDescriptor>("F", family::Builtin{family::BuiltinKind::ThompsonF, 0});
}

GroupPtr make_lamplighter(const Integer& n) {
    return std::make_shared<GroupDescriptor>("", family::Builtin{family::BuiltinKind::Lamplighter, n});
}

GroupPtr with_assertions(const GroupPtr& g, std::vector<PropertyAssertion> assertions) {
    return std::make_shared<GroupDescriptor>(g->name(), g->family(), std::move(assertions));
}

IntMatrix relation_matrix(const GroupDescriptor& g) {
    if (!g.abelianization_known())
        throw UnsupportedFamily("no relation matrix is known for " + g.name() + " (" + g.family_name() + ")");
    std::vector<ZVector> rows;
    for (const auto& r : g.relators()) {
        auto e = exponent_sums(r, g.generator_count());
        bool zero = std::all_of(e.begin(), e.end(), [](const Integer& x) { return x == 0; });
        if (!zero) rows.push_back(std::move(e));
    }
    return IntMatrix::from_rows(rows, g.generator_count());
}

// ------------------------------------------------------------- homomorphisms

std::string to_string(ValidationLevel v) {
    switch (v) {
        case ValidationLevel::Unvalidated: return "unvalidated";
        case ValidationLevel::AbelianizedOnly: return "abelianized-only";
        case ValidationLevel::Exact: return "exact";
    }
    return "?";
}

Word map_word(const Homomorphism& phi, const Word& w) {
    Word out;
    for (const auto& l : w) {
        if (l.gen >= phi.images.size()) throw InvalidArgument("word letter outside the homomorphism's source");
        const Word& img = phi.images[l.gen];
        if (l.sign > 0) out.insert(out.end(), img.begin(), img.end());
        else {
            Word inv = inverse(img);
            out.insert(out.end(), inv.begin(), inv.end());
        }
    }
    return free_reduce(out);
}

Homomorphism compose(const Homomorphism& outer, const Homomorphism& inner) {
    if (inner.target.get() != outer.source.get() && inner.target->generators() != outer.source->generators())
        throw InvalidArgument("cannot compose: target of the inner map differs from the source of the outer map");
    Homomorphism out{inner.source, outer.target, {}};
    for (const auto& w : inner.images) out.images.push_back(map_word(outer, w));
    out.level = std::min(outer.level, inner.level);
    return out;
}

Homomorphism identity_homomorphism(const GroupPtr& g) {
    Homomorphism id{g, g, {}};
    for (std::uint32_t i = 0; i < g->generator_count(); ++i) id.images.push_back({{i, 1}});
    id.level = ValidationLevel::Exact;
    return id;
}

IntMatrix exponent_matrix(const Homomorphism& phi) {
    IntMatrix m(phi.target->generator_count(), phi.source->generator_count());
    for (std::size_t j = 0; j < phi.images.size(); ++j) {
        auto e = exponent_sums(phi.images[j], phi.target->generator_count());
        for (std::size_t i = 0; i < e.size(); ++i) m(i, j) = e[i];
    }
    return m;
}

ValidationLevel validate_homomorphism(Homomorphism& phi) {
    if (!phi.source || !phi.target) throw InvalidArgument("homomorphism without source or target");
    const auto& src = *phi.source;
    const auto& tgt = *phi.target;
    if (phi.images.size() != src.generator_count())
        throw InvalidArgument("homomorphism needs one image per source generator (" +
                              std::to_string(src.generator_count()) + "), got " + std::to_string(phi.images.size()));
    for (const auto& w : phi.images) check_word(w, tgt.generator_count(), "image word");
    if (!src.abelianization_known() || !tgt.abelianization_known())
        throw UnsupportedFamily("cannot validate homomorphisms involving " +
                                (src.abelianization_known() ? tgt.name() : src.name()));

    IntMatrix rel = relation_matrix(tgt);
    std::vector<Word> images;
    for (const auto& r : src.relators()) {
        Word w = map_word(phi, r);
        auto e = exponent_sums(w, tgt.generator_count());
        bool zero = std::all_of(e.begin(), e.end(), [](const Integer& x) { return x == 0; });
        bool dies = zero || (rel.rows() > 0 && solve_integer(rel.transpose(), e).has_value());
        if (!dies)
            throw NotAHomomorphism("relator " + src.format_word(r) + " maps to " + tgt.format_word(w) +
                                   ", which is nonzero in the abelianization of " + tgt.name());
        images.push_back(std::move(w));
    }
    phi.level = ValidationLevel::AbelianizedOnly;
    if (!src.presentation_complete() || !supports_normal_form(tgt)) return phi.level;
    for (std::size_t i = 0; i < images.size(); ++i)
        if (!normal_form(images[i], tgt).empty())
            throw NotAHomomorphism("relator " + src.format_word(src.relators()[i]) + " maps to " +
                                   tgt.format_word(images[i]) + ", which is nontrivial in " + tgt.name());
    phi.level = ValidationLevel::Exact;
    return phi.level;
}

}  // namespace sigmacert
