#include <algorithm>
#include <deque>

#include "sigmacert/errors.hpp"
#include "sigmacert/groups.hpp"

namespace sigmacert {

Word WordProblemSolver::multiply(const Word& nf, Letter s) const {
    Word w = nf;
    w.push_back(s);
    return normal_form(w);
}

namespace {

class FreeSolver final : public WordProblemSolver {
public:
    Word normal_form(const Word& w) const override { return free_reduce(w); }
    Word multiply(const Word& nf, Letter s) const override {
        Word out = nf;
        if (!out.empty() && out.back() == s.inverse()) out.pop_back();
        else out.push_back(s);
        return out;
    }
};

class AbelianSolver final : public WordProblemSolver {
public:
    explicit AbelianSolver(ZVector factors) : factors_(std::move(factors)) {}

    Word normal_form(const Word& w) const override {
        std::vector<long> e(factors_.size(), 0);
        for (const auto& l : w) e[l.gen] += l.sign;
        Word out;
        for (std::uint32_t i = 0; i < e.size(); ++i) {
            long x = e[i];
            if (factors_[i] != 0) {
                long f = factors_[i].get_si();
                x = ((x % f) + f) % f;
            }
            for (long k = 0; k < std::abs(x); ++k) out.push_back({i, x > 0 ? 1 : -1});
        }
        return out;
    }

private:
    ZVector factors_;
};

class FiniteSolver final : public WordProblemSolver {
public:
    explicit FiniteSolver(FiniteTablePtr t) : t_(std::move(t)) {}

    Word normal_form(const Word& w) const override {
        std::uint32_t x = 0;
        for (const auto& l : w) {
            std::uint32_t y = l.gen + 1;
            x = t_->mul(x, l.sign > 0 ? y : t_->inv(y));
        }
        return x == 0 ? Word{} : Word{{x - 1, 1}};
    }

private:
    FiniteTablePtr t_;
};

// Z[1/N] x| Z^r with t_i acting on the a-coordinate by multiplication by m_i.
// Element (x, k) stands for a^x t^k; generators map onto a^(+-1) or t_i^(+-1).
class MetabelianSolver final : public WordProblemSolver {
public:
    struct Role {
        int t_index = -1;  // -1 for the a-role
        int sign = 1;
    };

    MetabelianSolver(std::vector<Role> roles, ZVector multipliers) : roles_(std::move(roles)), mult_(std::move(multipliers)) {
        for (std::size_t g = 0; g < roles_.size(); ++g) {
            if (roles_[g].t_index < 0) a_gen_ = static_cast<std::uint32_t>(g);
            else t_gen_.resize(std::max<std::size_t>(t_gen_.size(), roles_[g].t_index + 1)), t_gen_[roles_[g].t_index] = g;
        }
        for (const auto& m : mult_) prime_parts_.push_back(factorize(abs(m)));
    }

    Word normal_form(const Word& w) const override {
        Rational x = 0;
        std::vector<long> k(mult_.size(), 0);
        for (const auto& l : w) {
            const Role& r = roles_[l.gen];
            const int s = l.sign * r.sign;
            if (r.t_index < 0) x += Rational(s) * weight(k);
            else k[r.t_index] += s;
        }
        x.canonicalize();

        // smallest p >= max(0, -k) with x * prod m^p integral
        std::vector<long> p(mult_.size(), 0);
        for (std::size_t i = 0; i < mult_.size(); ++i) {
            p[i] = std::max(0L, -k[i]);
            Integer den = x.get_den();
            long need = 0;
            for (const auto& [prime, e] : prime_parts_[i]) {
                (void)e;
                long v = 0;
                while (den % prime == 0) den /= prime, ++v;
                // m_i^need must absorb prime^v
                long per = static_cast<long>(e);
                need = std::max(need, (v + per - 1) / per);
            }
            p[i] = std::max(p[i], need);
        }
        Rational m = x * weight(p);
        m.canonicalize();
        if (m.get_den() != 1) throw Error("metabelian normal form: denominator not cleared");
        const long mi = m.get_num().get_si();

        Word out;
        for (std::size_t i = 0; i < mult_.size(); ++i) append_t(out, i, -p[i]);
        for (long c = 0; c < std::abs(mi); ++c) out.push_back({a_gen_, (mi > 0 ? 1 : -1) * sign_of(a_gen_)});
        for (std::size_t i = 0; i < mult_.size(); ++i) append_t(out, i, k[i] + p[i]);
        return out;
    }

private:
    int sign_of(std::uint32_t g) const { return roles_[g].sign; }

    void append_t(Word& out, std::size_t i, long e) const {
        const auto g = static_cast<std::uint32_t>(t_gen_[i]);
        for (long c = 0; c < std::abs(e); ++c) out.push_back({g, (e > 0 ? 1 : -1) * sign_of(g)});
    }

    Rational weight(const std::vector<long>& k) const {
        Rational w = 1;
        for (std::size_t i = 0; i < k.size(); ++i) {
            Integer q;
            mpz_pow_ui(q.get_mpz_t(), mult_[i].get_mpz_t(), static_cast<unsigned long>(std::abs(k[i])));
            w *= k[i] >= 0 ? Rational(q) : Rational(1) / Rational(q);
        }
        w.canonicalize();
        return w;
    }

    std::vector<Role> roles_;
    ZVector mult_;
    std::uint32_t a_gen_ = 0;
    std::vector<std::size_t> t_gen_;
    std::vector<std::vector<std::pair<Integer, unsigned>>> prime_parts_;
};

class ProductSolver final : public WordProblemSolver {
public:
    ProductSolver(std::vector<SolverPtr> parts, std::vector<std::size_t> offsets)
        : parts_(std::move(parts)), off_(std::move(offsets)) {}

    Word normal_form(const Word& w) const override {
        std::vector<Word> split(parts_.size());
        for (const auto& l : w) {
            std::size_t f = std::upper_bound(off_.begin(), off_.end(), l.gen) - off_.begin() - 1;
            split[f].push_back({static_cast<std::uint32_t>(l.gen - off_[f]), l.sign});
        }
        Word out;
        for (std::size_t f = 0; f < parts_.size(); ++f)
            for (auto l : parts_[f]->normal_form(split[f])) out.push_back({static_cast<std::uint32_t>(l.gen + off_[f]), l.sign});
        return out;
    }

private:
    std::vector<SolverPtr> parts_;
    std::vector<std::size_t> off_;
};

// Matches <x, y | x y x^-1 y^-k> up to cyclic rotation, inversion, and
// replacing either generator by its inverse.
std::optional<std::pair<std::vector<MetabelianSolver::Role>, Integer>> recognize_bs(const family::FinitePresentation& p) {
    if (p.generators.size() != 2 || p.relators.size() != 1) return std::nullopt;
    Word rel = free_reduce(p.relators[0]);
    while (rel.size() >= 2 && rel.front() == rel.back().inverse()) rel = Word(rel.begin() + 1, rel.end() - 1);
    if (rel.size() < 4) return std::nullopt;
    for (const Word& base : {rel, inverse(rel)}) {
        for (std::size_t rot = 0; rot < base.size(); ++rot) {
            Word w(base.begin() + rot, base.end());
            w.insert(w.end(), base.begin(), base.begin() + rot);
            // w = T Y T^-1 Y^(-k)
            const Letter t = w[0], y = w[1];
            if (t.gen == y.gen || w[2] != t.inverse()) continue;
            const std::size_t tail = w.size() - 3;
            bool uniform = true;
            for (std::size_t i = 3; i < w.size(); ++i) uniform &= w[i].gen == y.gen && w[i].sign == w[3].sign;
            if (!uniform) continue;
            // y-exponent in the tail, relative to y's orientation
            Integer k = -Integer(static_cast<long>(tail)) * (w[3].sign * y.sign);
            std::vector<MetabelianSolver::Role> roles(2);
            roles[t.gen] = {0, t.sign};
            roles[y.gen] = {-1, y.sign};
            return std::make_pair(roles, k);
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<BsShape> recognize_bs_shape(const GroupDescriptor& g) {
    const auto* f = g.as<family::FinitePresentation>();
    if (!f) return std::nullopt;
    auto bs = recognize_bs(*f);
    if (!bs) return std::nullopt;
    BsShape out;
    for (std::uint32_t i = 0; i < 2; ++i) {
        if (bs->first[i].t_index < 0) out.a_gen = i;
        else out.t_gen = i, out.t_sign = bs->first[i].sign;
    }
    out.k = bs->second;
    return out;
}

bool supports_normal_form(const GroupDescriptor& g) {
    try {
        word_problem(g);
        return true;
    } catch (const UnsupportedFamily&) {
        return false;
    }
}

SolverPtr word_problem(const GroupDescriptor& g) {
    using namespace family;
    if (g.as<FreeGroup>()) return std::make_shared<FreeSolver>();
    if (const auto* f = g.as<FinitelyGeneratedAbelian>()) return std::make_shared<AbelianSolver>(f->factors);
    if (const auto* f = g.as<FiniteGroup>()) return std::make_shared<FiniteSolver>(f->table);
    if (const auto* f = g.as<BaumslagSolitar1n>())
        return std::make_shared<MetabelianSolver>(std::vector<MetabelianSolver::Role>{{-1, 1}, {0, 1}}, ZVector{f->n});
    if (const auto* f = g.as<GammaN>()) {
        std::vector<MetabelianSolver::Role> roles{{-1, 1}};
        ZVector mult;
        for (const auto& [p, y] : f->factorization) {
            roles.push_back({static_cast<int>(mult.size()), 1});
            Integer q;
            mpz_pow_ui(q.get_mpz_t(), p.get_mpz_t(), y);
            mult.push_back(q);
        }
        return std::make_shared<MetabelianSolver>(roles, mult);
    }
    if (const auto* f = g.as<DirectProduct>()) {
        std::vector<SolverPtr> parts;
        for (const auto& factor : f->factors) parts.push_back(word_problem(*factor));
        return std::make_shared<ProductSolver>(std::move(parts), factor_offsets(f->factors));
    }
    if (const auto* f = g.as<FinitePresentation>()) {
        if (f->relators.empty()) return std::make_shared<FreeSolver>();
        if (auto bs = recognize_bs(*f)) return std::make_shared<MetabelianSolver>(bs->first, ZVector{bs->second});
    }
    throw UnsupportedFamily("no word problem strategy for " + g.name() + " (" + g.family_name() + ")");
}

Word normal_form(const Word& w, const GroupDescriptor& g) {
    for (const auto& l : w)
        if (l.gen >= g.generator_count()) throw InvalidArgument("word letter outside the generators of " + g.name());
    return word_problem(g)->normal_form(w);
}

std::optional<std::size_t> CayleyBall::index_of(const Word& nf) const {
    auto it = index.find(nf);
    if (it == index.end()) return std::nullopt;
    return it->second;
}

CayleyBall ball(const GroupDescriptor& g, std::size_t radius, std::size_t vertex_budget) {
    auto solver = word_problem(g);
    CayleyBall b;
    b.generator_names = g.generators();
    for (std::uint32_t i = 0; i < g.generator_count(); ++i) {
        b.letters.push_back({i, 1});
        b.letters.push_back({i, -1});
    }
    auto add = [&](Word w, std::size_t len) {
        if (b.vertices.size() >= vertex_budget)
            throw BallTooLarge("ball of radius " + std::to_string(radius) + " in " + g.name() + " exceeds the budget of " +
                               std::to_string(vertex_budget) + " vertices");
        b.index.emplace(w, b.vertices.size());
        b.vertices.push_back(std::move(w));
        b.length.push_back(len);
        b.neighbors.emplace_back();
        return b.vertices.size() - 1;
    };
    add(solver->normal_form({}), 0);
    for (std::size_t v = 0; v < b.vertices.size(); ++v) {
        for (const auto& s : b.letters) {
            Word w = solver->multiply(b.vertices[v], s);
            auto it = b.index.find(w);
            std::size_t u;
            if (it != b.index.end()) u = it->second;
            else if (b.length[v] < radius) u = add(std::move(w), b.length[v] + 1);
            else continue;
            b.neighbors[v].push_back(u);
        }
    }
    return b;
}

}  // namespace sigmacert
