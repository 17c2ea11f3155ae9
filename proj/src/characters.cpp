#include "sigmacert/characters.hpp"

#include <filesystem>
#include <set>

#include "sigmacert/errors.hpp"

namespace sigmacert {

AbelianStructure abelianization(const GroupDescriptor& g) {
    return cokernel_structure(relation_matrix(g).transpose());
}

IntMatrix character_basis(const GroupDescriptor& g) {
    const IntMatrix r = relation_matrix(g);
    if (r.rows() == 0) return IntMatrix::identity(g.generator_count());
    return integer_kernel(r);
}

std::size_t betti_number(const GroupDescriptor& g) { return character_basis(g).rows(); }

namespace {

bool same_group(const GroupPtr& a, const GroupPtr& b) {
    return a == b || (a->generators() == b->generators() && a->relators() == b->relators());
}

FieldPtr unify_fields(std::vector<Scalar>& xs) {
    FieldPtr f = CoefficientField::rationals();
    for (const auto& x : xs) {
        if (x.field()->is_rationals() || x.field() == f || *x.field() == *f) continue;
        if (!f->is_rationals()) throw InvalidArgument("character values over different coefficient fields");
        f = x.field();
    }
    for (auto& x : xs) x = x * Scalar(f, 1);
    return f;
}

Scalar linear_combination(const ZVector& coeffs, const std::vector<Scalar>& xs, const FieldPtr& f) {
    Scalar s(f);
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        if (coeffs[i] != 0) s += xs[i] * Scalar(Rational(coeffs[i]));
    return s;
}

// Column of (monomial, theta power) keys for a list of scalars over one field.
using Key = std::pair<Scalar::Monomial, std::size_t>;

struct Flattened {
    std::vector<Key> keys;
    std::vector<QVector> rows;
};

Flattened flatten(const std::vector<Scalar>& xs) {
    std::set<Key> keyset;
    for (const auto& x : xs)
        for (const auto& [m, c] : x.terms())
            for (std::size_t j = 0; j < c.size(); ++j)
                if (c[j] != 0) keyset.insert({m, j});
    Flattened out{{keyset.begin(), keyset.end()}, {}};
    for (const auto& x : xs) {
        QVector row(out.keys.size(), 0);
        for (std::size_t k = 0; k < out.keys.size(); ++k) {
            auto it = x.terms().find(out.keys[k].first);
            if (it != x.terms().end()) row[k] = it->second[out.keys[k].second];
        }
        out.rows.push_back(row);
    }
    return out;
}

Scalar unflatten(const FieldPtr& f, const std::vector<Key>& keys, const QVector& row) {
    std::map<Scalar::Monomial, QVector> terms;
    for (std::size_t k = 0; k < keys.size(); ++k) {
        if (row[k] == 0) continue;
        auto& c = terms[keys[k].first];
        c.resize(f->degree(), 0);
        c[keys[k].second] = row[k];
    }
    return Scalar::from_terms(f, std::move(terms));
}

QVector nf_vector(const Scalar& s) {
    QVector v(s.field()->degree(), 0);
    for (const auto& [m, c] : s.terms()) v = add(v, c);
    return v;
}

Scalar nf_scalar(const FieldPtr& f, const QVector& v) {
    return Scalar::from_terms(f, {{Scalar::Monomial(f->symbols().size(), 0), v}});
}

Integer denominator_lcm(const std::vector<QVector>& rows) {
    Integer l = 1;
    for (const auto& r : rows)
        for (const auto& x : r) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    return l;
}

}  // namespace

// ------------------------------------------------------------- Character

bool Character::is_trivial() const {
    for (const auto& v : values_)
        if (!v.is_zero()) return false;
    return true;
}

bool Character::is_rational() const { return rational_coordinates().has_value(); }

std::optional<QVector> Character::rational_coordinates() const {
    QVector out;
    for (const auto& c : coordinates_) {
        auto q = c.as_rational();
        if (!q) return std::nullopt;
        out.push_back(*q);
    }
    return out;
}

Scalar Character::evaluate(const Word& w) const {
    return linear_combination(exponent_sums(w, values_.size()), values_, field_);
}

Character Character::scaled(const Scalar& s) const {
    std::vector<Scalar> c = coordinates_;
    for (auto& x : c) x = x * s;
    return character_from_coordinates(group_, std::move(c));
}

bool operator==(const Character& a, const Character& b) {
    if (!same_group(a.group_, b.group_)) return false;
    for (std::size_t i = 0; i < a.values_.size(); ++i)
        if (!(a.values_[i] == b.values_[i])) return false;
    return true;
}

Character character_from_values(GroupPtr g, std::vector<Scalar> values) {
    if (values.size() != g->generator_count())
        throw DimensionMismatch("expected " + std::to_string(g->generator_count()) + " character values, got " +
                                std::to_string(values.size()));
    Character chi;
    chi.field_ = unify_fields(values);
    chi.group_ = std::move(g);
    chi.values_ = std::move(values);
    for (const auto& r : chi.group_->relators()) {
        Scalar e = chi.evaluate(r);
        if (!e.is_zero())
            throw NotACharacter("relator " + chi.group_->format_word(r) + " evaluates to " + e.to_string() + ", not 0");
    }
    // Back substitution through the echelon basis: v = B^T w.
    const IntMatrix b = character_basis(*chi.group_);
    for (std::size_t i = 0; i < b.rows(); ++i) {
        std::size_t p = 0;
        while (b(i, p) == 0) ++p;
        Scalar w = chi.values_[p];
        for (std::size_t k = 0; k < i; ++k) w = w - chi.coordinates_[k] * Scalar(Rational(b(k, p)));
        chi.coordinates_.push_back(w * Scalar(Rational(1, b(i, p))));
    }
    for (std::size_t j = 0; j < chi.values_.size(); ++j) {
        ZVector col = b.col(j);
        if (!(linear_combination(col, chi.coordinates_, chi.field_) == chi.values_[j]))
            throw NotACharacter("values do not factor through the abelianization at generator " +
                                chi.group_->generators()[j]);
    }
    return chi;
}

Character character_from_coordinates(GroupPtr g, std::vector<Scalar> coordinates) {
    const IntMatrix b = character_basis(*g);
    if (coordinates.size() != b.rows())
        throw DimensionMismatch("expected " + std::to_string(b.rows()) + " coordinates, got " +
                                std::to_string(coordinates.size()));
    FieldPtr f = unify_fields(coordinates);
    std::vector<Scalar> values;
    for (std::size_t j = 0; j < b.cols(); ++j) values.push_back(linear_combination(b.col(j), coordinates, f));
    Character chi = character_from_values(std::move(g), std::move(values));
    chi.field_ = f;
    return chi;
}

Character rational_character(GroupPtr g, const QVector& coordinates) {
    std::vector<Scalar> c(coordinates.begin(), coordinates.end());
    return character_from_coordinates(std::move(g), std::move(c));
}

QMatrix pullback_matrix(const Homomorphism& phi) {
    // w_S = L_S E^T B_T^T w_T with L_S a left inverse of B_S^T.
    const IntMatrix bs = character_basis(*phi.source), bt = character_basis(*phi.target);
    const QMatrix values = QMatrix(exponent_matrix(phi)).transpose() * QMatrix(bt).transpose();
    QMatrix out(bs.rows(), bt.rows());
    const QMatrix bst = QMatrix(bs).transpose();
    for (std::size_t j = 0; j < bt.rows(); ++j) {
        auto w = solve(bst, values.col(j));
        if (!w) throw NotAHomomorphism("pulled-back character does not vanish on the source relators");
        for (std::size_t i = 0; i < bs.rows(); ++i) out(i, j) = (*w)[i];
    }
    return out;
}

Character pullback(const Character& chi, const Homomorphism& phi) {
    if (!same_group(phi.target, chi.group()))
        throw InvalidArgument("pullback: homomorphism target is not the group of the character");
    const IntMatrix e = exponent_matrix(phi);
    std::vector<Scalar> values;
    for (std::size_t j = 0; j < e.cols(); ++j) values.push_back(linear_combination(e.col(j), chi.values(), chi.field()));
    return character_from_values(phi.source, std::move(values));
}

// ------------------------------------------------------------- classes

CharacterClass canonical_class_rep(const Character& chi) {
    if (chi.is_trivial()) throw InvalidArgument("the trivial character has no class on the sphere");
    if (auto q = chi.rational_coordinates()) {
        ZVector z = primitive_integer(*q);
        return {rational_character(chi.group(), to_rational(z)), true, z};
    }
    const auto& c = chi.coordinates();
    std::size_t first = 0;
    while (c[first].is_zero()) ++first;
    Scalar scale;
    if (auto inv = c[first].inverse()) {
        scale = *inv * Scalar(Rational(c[first].sign()));
    } else {
        // Not a unit: normalize by its leading rational coefficient instead.
        Rational lead = 0;
        for (const auto& [m, coeffs] : c[first].terms()) {
            for (const auto& x : coeffs)
                if (x != 0) {
                    lead = x;
                    break;
                }
            break;
        }
        scale = Scalar(1 / abs(lead));
    }
    Character rep = chi.scaled(scale);
    if (auto q = rep.rational_coordinates()) {
        ZVector z = primitive_integer(*q);
        return {rational_character(chi.group(), to_rational(z)), true, z};
    }
    return {rep, false, std::nullopt};
}

ImageSubgroup image_subgroup(const Character& chi) {
    Flattened fl = flatten(chi.values());
    ImageSubgroup out;
    if (fl.keys.empty()) return out;
    const Integer d = denominator_lcm(fl.rows);
    IntMatrix m(fl.rows.size(), fl.keys.size());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t k = 0; k < m.cols(); ++k) m(i, k) = Rational(fl.rows[i][k] * d).get_num();
    const IntMatrix h = hermite_normal_form(m);
    for (std::size_t i = 0; i < h.rows(); ++i) {
        QVector row(h.cols());
        for (std::size_t k = 0; k < h.cols(); ++k) row[k] = Rational(h(i, k)) / d;
        out.basis.push_back(unflatten(chi.field(), fl.keys, row));
    }
    return out;
}

std::string to_string(Decision d) {
    switch (d) {
        case Decision::True: return "true";
        case Decision::False: return "false";
        case Decision::Unknown: break;
    }
    return "unknown";
}

std::string to_string(RigidityResult::Verdict v) {
    switch (v) {
        case RigidityResult::Verdict::Rigid: return "rigid";
        case RigidityResult::Verdict::NotRigid: return "not_rigid";
        case RigidityResult::Verdict::Unknown: break;
    }
    return "unknown";
}

std::optional<QMatrix> multiplier_action(const Scalar& r, const std::vector<Scalar>& basis) {
    std::vector<Scalar> all = basis;
    for (const auto& b : basis) all.push_back(r * b);
    unify_fields(all);
    Flattened fl = flatten(all);
    const std::size_t k = basis.size();
    QMatrix cols(fl.keys.size(), k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t row = 0; row < fl.keys.size(); ++row) cols(row, i) = fl.rows[i][row];
    QMatrix out(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        auto c = solve(cols, fl.rows[k + i]);
        if (!c) return std::nullopt;
        for (std::size_t j = 0; j < k; ++j) out(j, i) = (*c)[j];
    }
    return out;
}

namespace {

bool all_in_number_field(const std::vector<Scalar>& xs) {
    for (const auto& x : xs)
        if (!x.in_number_field()) return false;
    return true;
}

bool is_unit_multiplier(const Scalar& r, const std::vector<Scalar>& basis) {
    auto t = multiplier_action(r, basis);
    if (!t || !t->is_integral()) return false;
    const Rational det = determinant(*t);
    return det == 1 || det == -1;
}

// Solution of a^2 - delta b^2 = +-1 with b > 0 from the continued fraction of sqrt(delta).
std::optional<std::pair<Integer, Integer>> pell(const Integer& delta) {
    Integer a0 = sqrt(delta);
    if (a0 * a0 == delta) return std::nullopt;
    Integer m = 0, d = 1, a = a0;
    Integer h1 = 1, h2 = 0, k1 = 0, k2 = 1;
    for (int step = 0; step < 100000; ++step) {
        Integer h = a * h1 + h2, k = a * k1 + k2;
        Integer n = h * h - delta * k * k;
        if (n == 1 || n == -1) return std::make_pair(h, k);
        h2 = h1, h1 = h, k2 = k1, k1 = k;
        m = d * a - m;
        d = (delta - m * m) / d;
        a = (a0 + m) / d;
    }
    return std::nullopt;
}

// A unit of the order Z[omega], omega^2 = t omega - n, other than +-1.
std::optional<std::pair<Integer, Integer>> quadratic_unit(const Integer& t, const Integer& n) {
    const Integer delta = t * t - 4 * n;
    for (long y = 1; y <= 10000; ++y) {
        for (int eps : {-4, 4}) {
            Integer x = delta * y * y + eps;
            if (x < 0 || !mpz_perfect_square_p(x.get_mpz_t())) continue;
            Integer s = sqrt(x);
            Integer num = s - t * y;
            if (num % 2 == 0) return std::make_pair(Integer(num / 2), Integer(y));
        }
    }
    if (auto p = pell(delta)) return std::make_pair(Integer(p->first - t * p->second), Integer(2 * p->second));
    return std::nullopt;
}

// Representative of {+-r, +-1/r} that is > 1.
Scalar normalize_unit(Scalar r) {
    if (r.sign() < 0) r = -r;
    if ((r - Scalar(r.field(), 1)).sign() < 0) r = *r.inverse();
    return r;
}

RigidityResult number_field_rigidity(const Character& chi, const ImageSubgroup& im) {
    const FieldPtr& f = chi.field();
    const std::size_t d = f->degree(), k = im.rank();
    std::vector<QVector> m;
    for (const auto& b : im.basis) m.push_back(nf_vector(b));
    QMatrix mcols(d, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t r = 0; r < d; ++r) mcols(r, i) = m[i][r];

    // A = {x : x V in V}.
    const QMatrix p = Subspace::span(d, m).annihilator();
    QMatrix stacked(p.rows() * k, d);
    for (std::size_t j = 0; j < d; ++j) {
        QVector theta_j(d, 0);
        theta_j[j] = 1;
        for (std::size_t i = 0; i < k; ++i) {
            QVector col = p.apply(f->mul(theta_j, m[i]));
            for (std::size_t r = 0; r < p.rows(); ++r) stacked(i * p.rows() + r, j) = col[r];
        }
    }
    const std::vector<QVector> a = (p.rows() == 0 ? Subspace::whole(d) : Subspace::kernel(stacked)).basis_vectors();
    const std::size_t s = a.size();

    // O = {sum c_l a_l : coordinates of (sum c_l a_l) m_i in the basis m are integral}.
    std::vector<QVector> lrows;
    for (const auto& al : a) {
        QVector row;
        for (std::size_t i = 0; i < k; ++i) {
            auto c = solve(mcols, f->mul(al, m[i]));
            if (!c) throw Error("multiplier leaves the span of the image");
            row.insert(row.end(), c->begin(), c->end());
        }
        lrows.push_back(row);
    }
    const Integer den = denominator_lcm(lrows);
    IntMatrix l(s, k * k);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < k * k; ++j) l(i, j) = Rational(lrows[i][j] * den).get_num();
    const SmithDecomposition snf = smith_normal_form(l);
    std::vector<QVector> order;  // Z-basis of O as field elements
    for (std::size_t i = 0; i < s; ++i) {
        const Rational factor = Rational(den) / Rational(snf.d(i, i));
        QVector x(d, 0);
        for (std::size_t j = 0; j < s; ++j) x = add(x, scale(a[j], factor * Rational(snf.u(i, j))));
        order.push_back(x);
    }

    RigidityResult out;
    out.multiplier_rank = s;
    if (s == 1) {
        out.verdict = RigidityResult::Verdict::Rigid;
        out.reason = "the multiplier ring of the image has Z-rank 1, so only +-1 preserve the image";
        return out;
    }
    std::optional<Scalar> witness;
    if (s == 2) {
        QMatrix ocols(d, 2);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t r = 0; r < d; ++r) ocols(r, i) = order[i][r];
        QVector one(d, 0);
        one[0] = 1;
        QVector z = *solve(ocols, one);
        Integer g, pc, qc;
        mpz_gcdext(g.get_mpz_t(), pc.get_mpz_t(), qc.get_mpz_t(), z[0].get_num_mpz_t(), z[1].get_num_mpz_t());
        QVector omega = add(scale(order[0], Rational(-qc)), scale(order[1], Rational(pc)));
        QMatrix basis2(d, 2);
        for (std::size_t r = 0; r < d; ++r) basis2(r, 0) = one[r], basis2(r, 1) = omega[r];
        QVector tn = *solve(basis2, f->mul(omega, omega));
        if (auto u = quadratic_unit(tn[1].get_num(), Rational(-tn[0]).get_num())) {
            QVector w = add(scale(one, Rational(u->first)), scale(omega, Rational(u->second)));
            witness = normalize_unit(nf_scalar(f, w));
        }
    } else {
        // Small box search for a unit of the order.
        const long bound = s <= 4 ? 3 : 1;
        std::vector<long> c(s, -bound);
        while (!witness) {
            QVector x(d, 0);
            for (std::size_t j = 0; j < s; ++j) x = add(x, scale(order[j], Rational(c[j])));
            Scalar r = nf_scalar(f, x);
            if (!r.is_zero() && !r.is_rational() && is_unit_multiplier(r, im.basis)) witness = normalize_unit(r);
            std::size_t j = 0;
            while (j < s && c[j] == bound) c[j++] = -bound;
            if (j == s) break;
            ++c[j];
        }
    }
    out.verdict = RigidityResult::Verdict::NotRigid;
    if (witness && is_unit_multiplier(*witness, im.basis)) {
        out.witness = witness;
        out.reason = "r = " + witness->to_string() + " acts on the image basis by an integral matrix of determinant +-1";
    } else {
        out.reason = "the multiplier ring has Z-rank " + std::to_string(s) +
                     " >= 2 and so contains a unit of infinite order; none found by the bounded search";
    }
    return out;
}

}  // namespace

RigidityResult is_rigid(const Character& chi) {
    if (chi.is_trivial()) throw InvalidArgument("rigidity of the trivial character is undefined");
    const ImageSubgroup im = image_subgroup(chi);
    RigidityResult out;
    if (im.rank() == 1) {
        out.verdict = RigidityResult::Verdict::Rigid;
        out.multiplier_rank = 1;
        out.reason = "the image is cyclic, so r Im = Im forces r = +-1";
        return out;
    }
    if (all_in_number_field(chi.values())) return number_field_rigidity(chi, im);
    if (is_transcendental(chi).value == Decision::True) {
        out.verdict = RigidityResult::Verdict::Rigid;
        out.reason = "transcendental classes are rigid";
        return out;
    }
    out.reason = "image mixes algebraic irrational and transcendental values";
    return out;
}

TranscendenceResult is_transcendental(const Character& chi) {
    if (chi.is_trivial()) throw InvalidArgument("transcendence of the trivial character is undefined");
    const ImageSubgroup im = image_subgroup(chi);
    if (im.rank() <= 1) return {Decision::True, "all values lie on one rational line"};
    bool theta_free = true;
    for (const auto& v : chi.values()) theta_free = theta_free && v.theta_free();
    if (theta_free)
        return {Decision::True,
                "values are rational Laurent polynomials in algebraically independent symbols; an algebraic ratio of two "
                "such values forces proportional coefficients, hence a rational ratio"};
    if (all_in_number_field(chi.values()))
        return {Decision::False, "two Q-independent values in the number field have an algebraic irrational ratio"};
    // Rank of Im intersected with Q(theta).
    Flattened fl = flatten(im.basis);
    std::vector<std::size_t> symbolic;
    for (std::size_t k = 0; k < fl.keys.size(); ++k) {
        bool constant = true;
        for (int e : fl.keys[k].first) constant = constant && e == 0;
        if (!constant) symbolic.push_back(k);
    }
    QMatrix a(symbolic.size(), im.rank());
    for (std::size_t r = 0; r < symbolic.size(); ++r)
        for (std::size_t i = 0; i < im.rank(); ++i) a(r, i) = fl.rows[i][symbolic[r]];
    if (Subspace::kernel(a).dim() >= 2)
        return {Decision::False, "the image meets the number field in rank >= 2, giving an algebraic irrational ratio"};
    return {Decision::Unknown, "image mixes algebraic irrational and transcendental values"};
}

// ------------------------------------------------------------- extensions

FixSubspace fix_subspace(const GroupDescriptor& e) {
    const auto* ext = e.as<family::FiniteExtension>();
    if (!ext) throw InvalidArgument("fix_subspace needs a finite extension descriptor");
    const GroupDescriptor& h = *ext->kernel;
    const std::size_t n = h.generator_count();
    const QMatrix bt = QMatrix(character_basis(h)).transpose();
    std::vector<QVector> rows;
    for (std::size_t q = 1; q < ext->quotient->order(); ++q) {
        // (E_q^T - I) B^T w = 0, E_q columns the exponent sums of alpha_q(h).
        QMatrix eq(n, n);
        for (std::size_t g = 0; g < n; ++g) {
            ZVector col = exponent_sums(ext->conjugation[q][g], n);
            for (std::size_t r = 0; r < n; ++r) eq(g, r) = Rational(col[r]) - (g == r ? 1 : 0);
        }
        const QMatrix cond = eq * bt;
        for (std::size_t r = 0; r < n; ++r) rows.push_back(cond.row(r));
    }
    const std::size_t b1 = bt.cols();
    FixSubspace out{ext->kernel, Subspace::whole(b1)};
    if (!rows.empty()) out.subspace = Subspace::kernel(QMatrix::from_rows(rows, b1));
    return out;
}

Homomorphism kernel_inclusion(const GroupPtr& e) {
    const auto* ext = e->as<family::FiniteExtension>();
    if (!ext) throw InvalidArgument("kernel inclusion needs a finite extension descriptor");
    Homomorphism phi{ext->kernel, e, {}, ValidationLevel::Unvalidated};
    for (std::uint32_t i = 0; i < ext->kernel->generator_count(); ++i) phi.images.push_back({Letter{i, 1}});
    return phi;
}

QMatrix restriction_matrix(const GroupPtr& e) { return pullback_matrix(kernel_inclusion(e)); }

// ------------------------------------------------------------- JSON

namespace {

Interval interval_from_json(const Json& j, const std::string& loc) {
    if (!j.is_array() || j.size() != 2) throw ParseError("expected [lo, hi]", loc);
    return {rational_from_json(j[0], loc + "[0]"), rational_from_json(j[1], loc + "[1]")};
}

Json interval_to_json(const Interval& i) { return Json::array({rational_to_json(i.lo), rational_to_json(i.hi)}); }

}  // namespace

FieldPtr field_from_json(const Json& j, const std::string& loc) {
    if (j.is_null()) return CoefficientField::rationals();
    if (!j.is_object()) throw ParseError("field must be an object", loc);
    std::vector<CoefficientField::Symbol> symbols;
    if (j.contains("symbols")) {
        const Json& s = j["symbols"];
        if (!s.is_array()) throw ParseError("symbols must be an array", loc + ".symbols");
        for (std::size_t i = 0; i < s.size(); ++i) {
            const std::string l = loc + ".symbols[" + std::to_string(i) + "]";
            if (s[i].is_string()) symbols.push_back({s[i].get<std::string>(), std::nullopt});
            else if (s[i].is_object() && s[i].contains("name") && s[i]["name"].is_string()) {
                CoefficientField::Symbol sym{s[i]["name"].get<std::string>(), std::nullopt};
                if (s[i].contains("enclosure")) sym.enclosure = interval_from_json(s[i]["enclosure"], l + ".enclosure");
                symbols.push_back(sym);
            } else
                throw ParseError("symbol must be a name or {name, enclosure}", l);
        }
    }
    try {
        if (!j.contains("theta")) return symbols.empty() ? CoefficientField::rationals()
                                                         : CoefficientField::make_transcendental(symbols);
        const Json& t = j["theta"];
        const std::string l = loc + ".theta";
        if (!t.is_object() || !t.contains("name") || !t.contains("minpoly") || !t.contains("interval"))
            throw ParseError("theta needs name, minpoly and interval", l);
        QVector p;
        for (std::size_t i = 0; i < t["minpoly"].size(); ++i)
            p.push_back(rational_from_json(t["minpoly"][i], l + ".minpoly[" + std::to_string(i) + "]"));
        return CoefficientField::make(t["name"].get<std::string>(), p, interval_from_json(t["interval"], l + ".interval"),
                                      symbols);
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(e.what(), loc);
    }
}

Json to_json(const CoefficientField& f) {
    Json j = Json::object();
    if (f.degree() >= 2) {
        Json p = Json::array();
        for (const auto& c : f.minpoly()) p.push_back(rational_to_json(c));
        j["theta"] = {{"name", f.theta_name()}, {"minpoly", p}, {"interval", interval_to_json(f.isolating_interval())}};
    }
    if (!f.symbols().empty()) {
        Json s = Json::array();
        for (const auto& sym : f.symbols()) {
            if (sym.enclosure) s.push_back({{"name", sym.name}, {"enclosure", interval_to_json(*sym.enclosure)}});
            else s.push_back(sym.name);
        }
        j["symbols"] = s;
    }
    return j;
}

Scalar scalar_from_json(const Json& j, const FieldPtr& f, const std::string& loc) {
    if (j.is_number_integer() || (j.is_object() && j.contains("rational")))
        return Scalar(f, rational_from_json(j.is_object() ? j["rational"] : j, loc));
    if (j.is_string()) {
        try {
            return parse_scalar(j.get<std::string>(), f);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), loc);
        }
    }
    if (j.is_object() && j.contains("terms") && j["terms"].is_array()) {
        std::map<Scalar::Monomial, QVector> terms;
        for (std::size_t i = 0; i < j["terms"].size(); ++i) {
            const Json& t = j["terms"][i];
            const std::string l = loc + ".terms[" + std::to_string(i) + "]";
            if (!t.is_object() || !t.contains("algebraic") || !t["algebraic"].is_array())
                throw ParseError("term needs an algebraic coefficient vector", l);
            Scalar::Monomial m(f->symbols().size(), 0);
            if (t.contains("monomial")) {
                for (const auto& [name, e] : t["monomial"].items()) {
                    auto idx = f->symbol_index(name);
                    if (!idx || !e.is_number_integer()) throw ParseError("unknown symbol or bad exponent '" + name + "'", l);
                    m[*idx] = e.get<int>();
                }
            }
            QVector c;
            for (std::size_t k = 0; k < t["algebraic"].size(); ++k)
                c.push_back(rational_from_json(t["algebraic"][k], l + ".algebraic[" + std::to_string(k) + "]"));
            if (c.size() > f->degree()) throw ParseError("coefficient vector longer than the field degree", l);
            QVector& slot = terms[m];
            slot.resize(f->degree(), 0);
            for (std::size_t k = 0; k < c.size(); ++k) slot[k] += c[k];
        }
        return Scalar::from_terms(f, std::move(terms));
    }
    throw ParseError("scalar must be a string, an integer, {rational} or {terms}", loc);
}

Json scalar_to_json(const Scalar& s) {
    if (auto q = s.as_rational()) return {{"rational", rational_to_json(*q)}};
    Json terms = Json::array();
    for (const auto& [m, c] : s.terms()) {
        Json mono = Json::object();
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i] != 0) mono[s.field()->symbols()[i].name] = m[i];
        Json coeffs = Json::array();
        for (const auto& x : c) coeffs.push_back(rational_to_json(x));
        terms.push_back({{"monomial", mono}, {"algebraic", coeffs}});
    }
    return {{"text", s.to_string()}, {"terms", terms}};
}

Character character_from_json(const Json& j, GroupPtr g, const std::string& loc) {
    if (!j.is_object()) throw ParseError("character document must be an object", loc);
    if (j.contains("schema") && j["schema"] != kCharacterSchema)
        throw ParseError("unsupported schema (expected " + std::string(kCharacterSchema) + ")", loc + ".schema");
    FieldPtr f = field_from_json(j.contains("field") ? j["field"] : Json(), loc + ".field");
    try {
        std::optional<Character> chi;
        if (j.contains("values")) {
            const Json& v = j["values"];
            std::vector<Scalar> values;
            if (v.is_array()) {
                for (std::size_t i = 0; i < v.size(); ++i)
                    values.push_back(scalar_from_json(v[i], f, loc + ".values[" + std::to_string(i) + "]"));
            } else if (v.is_object()) {
                for (const auto& [name, x] : v.items())
                    if (!g->generator_index(name)) throw ParseError("unknown generator '" + name + "'", loc + ".values");
                for (const auto& name : g->generators()) {
                    if (!v.contains(name)) throw ParseError("missing value for generator '" + name + "'", loc + ".values");
                    values.push_back(scalar_from_json(v[name], f, loc + ".values." + name));
                }
            } else
                throw ParseError("values must be an array or an object keyed by generator", loc + ".values");
            chi = character_from_values(g, std::move(values));
        }
        if (j.contains("coordinates")) {
            const Json& c = j["coordinates"];
            if (!c.is_array()) throw ParseError("coordinates must be an array", loc + ".coordinates");
            std::vector<Scalar> coords;
            for (std::size_t i = 0; i < c.size(); ++i)
                coords.push_back(scalar_from_json(c[i], f, loc + ".coordinates[" + std::to_string(i) + "]"));
            Character from_coords = character_from_coordinates(g, std::move(coords));
            if (chi && !(*chi == from_coords))
                throw ParseError("coordinates disagree with values", loc + ".coordinates");
            chi = from_coords;
        }
        if (!chi) throw ParseError("character needs values or coordinates", loc);
        return *chi;
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(e.what(), loc);
    }
}

Character character_from_json(const Json& j, const std::string& loc, const std::string& base_dir) {
    if (!j.is_object() || !j.contains("group")) throw ParseError("character document needs a group", loc);
    return character_from_json(j, group_from_json(j["group"], loc + ".group", base_dir), loc);
}

Json to_json(const Character& chi) {
    Json coords = Json::array();
    for (const auto& c : chi.coordinates()) coords.push_back(scalar_to_json(c));
    Json values = Json::object();
    for (std::size_t i = 0; i < chi.values().size(); ++i)
        values[chi.group()->generators()[i]] = scalar_to_json(chi.values()[i]);
    return {{"schema", kCharacterSchema},
            {"group", to_json(*chi.group())},
            {"field", to_json(*chi.field())},
            {"coordinates", coords},
            {"values", values}};
}

Character load_character(const std::string& path) {
    return character_from_json(read_json_file(path), "$", std::filesystem::path(path).parent_path().string());
}

}  // namespace sigmacert
