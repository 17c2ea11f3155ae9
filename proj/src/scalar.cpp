#include "sigmacert/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "sigmacert/errors.hpp"

namespace sigmacert {

Interval operator*(const Interval& a, const Interval& b) {
    Rational p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

Interval operator*(const Rational& s, const Interval& a) {
    return s >= 0 ? Interval{s * a.lo, s * a.hi} : Interval{s * a.hi, s * a.lo};
}

Interval Interval::pow(int e) const {
    Interval base = *this;
    if (e < 0) {
        if (contains_zero()) throw UndecidableSign("cannot invert an interval containing zero");
        base = {1 / hi, 1 / lo};
        e = -e;
    }
    Interval out{1, 1};
    for (int i = 0; i < e; ++i) out = out * base;
    return out;
}

// ------------------------------------------------------------- polynomials

namespace {

using Poly = QVector;

void trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    trim(c);
    return c;
}

Poly poly_sub(Poly a, const Poly& b) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    trim(a);
    return a;
}

// a = q b + r
void poly_divmod(Poly a, const Poly& b, Poly& q, Poly& r) {
    trim(a);
    q.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
    while (!a.empty() && a.size() >= b.size()) {
        const std::size_t shift = a.size() - b.size();
        Rational c = a.back() / b.back();
        q[shift] = c;
        for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= c * b[i];
        a.pop_back();
        trim(a);
    }
    r = a;
}

Poly poly_mod(const Poly& a, const Poly& b) {
    Poly q, r;
    poly_divmod(a, b, q, r);
    return r;
}

Rational poly_eval(const Poly& p, const Rational& x) {
    Rational v = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * x + *it;
    return v;
}

int sgn(const Rational& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

// Primitive integer polynomial with the same roots.
ZVector integerize(const Poly& p) {
    Integer l = 1;
    for (const auto& c : p) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    ZVector z;
    Integer g = 0;
    for (const auto& c : p) {
        Rational s = c * l;
        z.push_back(s.get_num());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), s.get_num_mpz_t());
    }
    if (g != 0)
        for (auto& c : z) c /= g;
    return z;
}

std::vector<Integer> divisors(Integer n) {
    n = abs(n);
    std::vector<Integer> out;
    for (Integer d = 1; d * d <= n; ++d)
        if (n % d == 0) {
            out.push_back(d);
            if (d * d != n) out.push_back(n / d);
        }
    return out;
}

std::vector<Integer> primes_of(const Integer& n) {
    std::vector<Integer> out;
    Integer m = abs(n);
    for (Integer p = 2; p * p <= m; ++p)
        if (m % p == 0) {
            out.push_back(p);
            while (m % p == 0) m /= p;
        }
    if (m > 1) out.push_back(m);
    return out;
}

bool eisenstein(const ZVector& f) {
    const std::size_t n = f.size() - 1;
    if (f[0] == 0) return false;
    for (const auto& p : primes_of(f[0])) {
        if (f[n] % p == 0 || f[0] % (p * p) == 0) continue;
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) ok = f[i] % p == 0;
        if (ok) return true;
    }
    return false;
}

ZVector shift_poly(const ZVector& f, long s) {
    // f(x + s)
    ZVector out(f.size(), 0);
    ZVector power{1};  // (x + s)^k
    for (std::size_t k = 0; k < f.size(); ++k) {
        for (std::size_t i = 0; i < power.size(); ++i) out[i] += f[k] * power[i];
        ZVector next(power.size() + 1, 0);
        for (std::size_t i = 0; i < power.size(); ++i) {
            next[i + 1] += power[i];
            next[i] += power[i] * s;
        }
        power = next;
    }
    return out;
}

// ---- polynomials over F_p
using PolyP = std::vector<long>;

void trim_p(PolyP& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

long inv_mod(long a, long p) {
    long r = 1, e = p - 2, b = ((a % p) + p) % p;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

PolyP mod_p(PolyP a, const PolyP& m, long p) {
    trim_p(a);
    const long li = inv_mod(m.back(), p);
    while (a.size() >= m.size()) {
        long c = a.back() * li % p;
        std::size_t s = a.size() - m.size();
        for (std::size_t i = 0; i < m.size(); ++i) a[i + s] = ((a[i + s] - c * m[i]) % p + p) % p;
        trim_p(a);
    }
    return a;
}

PolyP mulmod_p(const PolyP& a, const PolyP& b, const PolyP& m, long p) {
    if (a.empty() || b.empty()) return {};
    PolyP c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    return mod_p(c, m, p);
}

PolyP powmod_p(PolyP base, Integer e, const PolyP& m, long p) {
    PolyP r{1};
    while (e > 0) {
        if (e % 2 == 1) r = mulmod_p(r, base, m, p);
        base = mulmod_p(base, base, m, p);
        e /= 2;
    }
    return r;
}

PolyP gcd_p(PolyP a, PolyP b, long p) {
    trim_p(a), trim_p(b);
    while (!b.empty()) {
        PolyP r = mod_p(a, b, p);
        a = b;
        b = r;
    }
    return a;
}

bool irreducible_mod_p(const ZVector& f, long p) {
    PolyP m;
    for (const auto& c : f) m.push_back((Integer(c % p).get_si() + p) % p);
    trim_p(m);
    const std::size_t n = f.size() - 1;
    if (m.size() != f.size()) return false;  // degree drops
    auto x_pow = [&](std::size_t k) {
        Integer e;
        mpz_ui_pow_ui(e.get_mpz_t(), p, k);
        PolyP r = powmod_p({0, 1}, e, m, p);
        // r - x
        if (r.size() < 2) r.resize(2, 0);
        r[1] = ((r[1] - 1) % p + p) % p;
        trim_p(r);
        return r;
    };
    if (!x_pow(n).empty()) return false;
    for (const auto& q : primes_of(Integer(static_cast<unsigned long>(n)))) {
        PolyP g = gcd_p(m, x_pow(n / q.get_ui()), p);
        if (g.size() != 1) return false;
    }
    return true;
}

Rational pow_q(const Rational& x, unsigned long e) {
    Rational r = 1;
    for (unsigned long i = 0; i < e; ++i) r *= x;
    return r;
}

// atan(1/x) enclosure from alternating partial sums.
Interval atan_inv(long x, const Rational& eps) {
    Rational s = 0, term;
    for (long k = 0;; ++k) {
        term = Rational(1) / (Rational(2 * k + 1) * pow_q(Rational(x), 2 * k + 1));
        if (term < eps) {
            Rational other = s + (k % 2 == 0 ? term : -term);
            return {std::min(s, other), std::max(s, other)};
        }
        s += k % 2 == 0 ? term : -term;
    }
}

Interval pi_interval(unsigned level) {
    Rational eps = Rational(1, 64) / pow_q(2, level);
    Interval a = atan_inv(5, eps), b = atan_inv(239, eps);
    return {16 * a.lo - 4 * b.hi, 16 * a.hi - 4 * b.lo};
}

Interval e_interval(unsigned level) {
    Rational eps = Rational(1, 4) / pow_q(2, level);
    Rational s = 0, term = 1;
    for (long k = 1;; ++k) {
        s += term;
        term /= k;  // 1/k!
        if (term < eps) return {s, s + 2 * term};
    }
}

}  // namespace

std::size_t sturm_root_count(const QVector& p0, const Rational& lo, const Rational& hi) {
    Poly p = p0;
    trim(p);
    if (p.size() < 2) return 0;
    std::vector<Poly> seq{p};
    Poly d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Rational(static_cast<long>(i)));
    trim(d);
    seq.push_back(d);
    while (seq.back().size() > 1) {
        Poly r = poly_mod(seq[seq.size() - 2], seq.back());
        if (r.empty()) break;
        for (auto& c : r) c = -c;
        seq.push_back(r);
    }
    auto changes = [&](const Rational& x) {
        int last = 0;
        std::size_t v = 0;
        for (const auto& q : seq) {
            int s = sgn(poly_eval(q, x));
            if (s == 0) continue;
            if (last != 0 && s != last) ++v;
            last = s;
        }
        return v;
    };
    const std::size_t a = changes(lo), b = changes(hi);
    return a >= b ? a - b : 0;
}

bool provably_irreducible(const QVector& p0) {
    Poly p = p0;
    trim(p);
    if (p.size() < 2) return false;
    if (p.size() == 2) return true;
    ZVector f = integerize(p);
    const std::size_t n = f.size() - 1;
    if (f[0] == 0) return false;
    if (n <= 3) {
        for (const auto& a : divisors(f[0]))
            for (const auto& b : divisors(f[n]))
                for (int s : {1, -1})
                    if (poly_eval(p, Rational(a * s, b)) == 0) return false;
        return true;
    }
    for (long s : {0L, 1L, -1L, 2L, -2L})
        if (eisenstein(shift_poly(f, s))) return true;
    for (long prime : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L, 41L, 43L, 47L})
        if (f[n] % prime != 0 && irreducible_mod_p(f, prime)) return true;
    return false;
}

// ------------------------------------------------------------- field

FieldPtr CoefficientField::rationals() {
    static const FieldPtr q = [] {
        auto f = std::shared_ptr<CoefficientField>(new CoefficientField());
        f->theta_name_ = "";
        return f;
    }();
    return q;
}

FieldPtr CoefficientField::make_transcendental(std::vector<Symbol> symbols) {
    auto f = std::shared_ptr<CoefficientField>(new CoefficientField());
    f->theta_name_ = "";
    for (const auto& s : symbols)
        if (s.name.empty()) throw InvalidArgument("symbol needs a name");
    f->symbols_ = std::move(symbols);
    return f;
}

FieldPtr CoefficientField::make(std::string theta_name, QVector minpoly, Interval iso, std::vector<Symbol> symbols) {
    trim(minpoly);
    if (minpoly.size() < 2) throw InvalidArgument("minimal polynomial must have degree >= 1");
    const Rational lead = minpoly.back();
    for (auto& c : minpoly) c /= lead;
    if (!provably_irreducible(minpoly))
        throw InvalidArgument("minimal polynomial is not (provably) irreducible over Q");
    if (iso.lo > iso.hi) throw InvalidArgument("isolating interval is empty");
    auto f = std::shared_ptr<CoefficientField>(new CoefficientField());
    f->minpoly_ = minpoly;
    f->symbols_ = std::move(symbols);
    if (minpoly.size() == 2) {
        Rational root = -minpoly[0];
        if (root < iso.lo || root > iso.hi) throw InvalidArgument("isolating interval does not contain the root");
        f->isolating_ = {root, root};
        f->theta_name_ = "";
        f->minpoly_ = {0, 1};
        if (root != 0) throw InvalidArgument("a degree one minimal polynomial adds nothing; use the rationals");
    } else {
        if (iso.lo == iso.hi || poly_eval(minpoly, iso.lo) == 0 || poly_eval(minpoly, iso.hi) == 0 ||
            sturm_root_count(minpoly, iso.lo, iso.hi) != 1)
            throw InvalidArgument("interval does not isolate exactly one real root of the minimal polynomial");
        if (theta_name.empty()) throw InvalidArgument("the algebraic generator needs a name");
        f->isolating_ = iso;
        f->theta_name_ = std::move(theta_name);
    }
    for (const auto& s : f->symbols_)
        if (s.name.empty() || s.name == f->theta_name_) throw InvalidArgument("symbol names must be nonempty and distinct");
    return f;
}

std::optional<std::size_t> CoefficientField::symbol_index(const std::string& name) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i)
        if (symbols_[i].name == name) return i;
    return std::nullopt;
}

QVector CoefficientField::mul(const QVector& a, const QVector& b) const {
    Poly r = poly_mod(poly_mul(a, b), minpoly_);
    r.resize(degree(), 0);
    return r;
}

std::optional<QVector> CoefficientField::inverse(const QVector& a0) const {
    Poly a = a0;
    trim(a);
    if (a.empty()) return std::nullopt;
    // extended Euclid: s a + t f = g
    Poly r0 = minpoly_, r1 = a, s0{}, s1{1};
    while (!r1.empty()) {
        Poly q, r;
        poly_divmod(r0, r1, q, r);
        Poly s = poly_sub(s0, poly_mul(q, s1));
        r0 = r1, r1 = r, s0 = s1, s1 = s;
    }
    if (r0.size() != 1) return std::nullopt;
    for (auto& c : s0) c /= r0[0];
    Poly out = poly_mod(s0, minpoly_);
    out.resize(degree(), 0);
    return out;
}

QMatrix CoefficientField::multiplication_matrix(const QVector& a) const {
    const std::size_t d = degree();
    QMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        QVector e(d, 0);
        e[i] = 1;
        QVector col = mul(a, e);
        for (std::size_t r = 0; r < d; ++r) m(r, i) = col[r];
    }
    return m;
}

Interval CoefficientField::theta_interval(unsigned level) const {
    Interval it = isolating_;
    if (it.lo == it.hi) return it;
    const int s_lo = sgn(poly_eval(minpoly_, it.lo));
    for (unsigned i = 0; i < level; ++i) {
        Rational mid = (it.lo + it.hi) / 2;
        int s = sgn(poly_eval(minpoly_, mid));
        if (s == 0) return {mid, mid};
        if (s == s_lo) it.lo = mid;
        else it.hi = mid;
    }
    return it;
}

std::optional<Interval> CoefficientField::symbol_interval(std::size_t i, unsigned level) const {
    const auto& s = symbols_.at(i);
    if (s.name == "pi") return pi_interval(level);
    if (s.name == "e") return e_interval(level);
    return s.enclosure;
}

// ------------------------------------------------------------- scalars

Scalar::Scalar(const Rational& q) : Scalar(CoefficientField::rationals(), q) {}

Scalar::Scalar(FieldPtr field, const Rational& q) : field_(std::move(field)) {
    if (q != 0) {
        QVector c(field_->degree(), 0);
        c[0] = q;
        terms_[Monomial(field_->symbols().size(), 0)] = c;
    }
}

Scalar Scalar::theta(const FieldPtr& field) {
    if (field->degree() < 2) throw InvalidArgument("field has no algebraic generator");
    Scalar s(field);
    QVector c(field->degree(), 0);
    c[1] = 1;
    s.terms_[Monomial(field->symbols().size(), 0)] = c;
    return s;
}

Scalar Scalar::symbol(const FieldPtr& field, std::size_t i) {
    Scalar s(field);
    Monomial m(field->symbols().size(), 0);
    m.at(i) = 1;
    QVector c(field->degree(), 0);
    c[0] = 1;
    s.terms_[m] = c;
    return s;
}

Scalar Scalar::from_terms(const FieldPtr& field, std::map<Monomial, QVector> terms) {
    Scalar s(field);
    for (auto& [m, c] : terms) {
        if (m.size() != field->symbols().size()) throw DimensionMismatch("monomial length differs from symbol count");
        if (c.size() > field->degree())
            for (std::size_t i = field->degree(); i < c.size(); ++i)
                if (c[i] != 0) throw DimensionMismatch("coefficient vector longer than the field degree");
        c.resize(field->degree(), 0);
    }
    s.terms_ = std::move(terms);
    s.normalize();
    return s;
}

void Scalar::normalize() {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (sigmacert::is_zero(it->second)) it = terms_.erase(it);
        else ++it;
    }
}

std::optional<Rational> Scalar::as_rational() const {
    if (terms_.empty()) return Rational(0);
    if (terms_.size() != 1) return std::nullopt;
    const auto& [m, c] = *terms_.begin();
    for (int e : m)
        if (e != 0) return std::nullopt;
    for (std::size_t i = 1; i < c.size(); ++i)
        if (c[i] != 0) return std::nullopt;
    return c[0];
}

bool Scalar::in_number_field() const {
    for (const auto& [m, c] : terms_)
        for (int e : m)
            if (e != 0) return false;
    return true;
}

bool Scalar::theta_free() const {
    for (const auto& [m, c] : terms_)
        for (std::size_t i = 1; i < c.size(); ++i)
            if (c[i] != 0) return false;
    return true;
}

FieldPtr Scalar::common_field(const Scalar& a, const Scalar& b) {
    if (a.field_ == b.field_ || *a.field_ == *b.field_) return a.field_;
    if (a.field_->is_rationals()) return b.field_;
    if (b.field_->is_rationals()) return a.field_;
    throw InvalidArgument("scalars over different coefficient fields");
}

namespace {

// Re-expresses a scalar over a field it embeds into.
std::map<Scalar::Monomial, QVector> lift(const Scalar& s, const FieldPtr& f) {
    if (s.field() == f || *s.field() == *f) return s.terms();
    std::map<Scalar::Monomial, QVector> out;
    if (auto q = s.as_rational(); q && *q != 0) {
        QVector c(f->degree(), 0);
        c[0] = *q;
        out[Scalar::Monomial(f->symbols().size(), 0)] = c;
    }
    return out;
}

}  // namespace

Scalar Scalar::operator-() const {
    Scalar r = *this;
    for (auto& [m, c] : r.terms_)
        for (auto& x : c) x = -x;
    return r;
}

Scalar operator+(const Scalar& a, const Scalar& b) {
    Scalar r(Scalar::common_field(a, b));
    r.terms_ = lift(a, r.field_);
    for (const auto& [m, c] : lift(b, r.field_)) {
        auto& t = r.terms_[m];
        if (t.empty()) t.assign(c.size(), 0);
        for (std::size_t i = 0; i < c.size(); ++i) t[i] += c[i];
    }
    r.normalize();
    return r;
}

Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }

Scalar operator*(const Scalar& a, const Scalar& b) {
    Scalar r(Scalar::common_field(a, b));
    auto ta = lift(a, r.field_), tb = lift(b, r.field_);
    for (const auto& [ma, ca] : ta)
        for (const auto& [mb, cb] : tb) {
            Scalar::Monomial m(ma.size());
            for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
            QVector c = r.field_->mul(ca, cb);
            auto& t = r.terms_[m];
            if (t.empty()) t.assign(c.size(), 0);
            for (std::size_t i = 0; i < c.size(); ++i) t[i] += c[i];
        }
    r.normalize();
    return r;
}

bool operator==(const Scalar& a, const Scalar& b) { return (a - b).is_zero(); }

std::optional<Scalar> Scalar::inverse() const {
    if (terms_.size() != 1) return std::nullopt;
    const auto& [m, c] = *terms_.begin();
    auto ci = field_->inverse(c);
    if (!ci) return std::nullopt;
    Scalar r(field_);
    Monomial mi(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) mi[i] = -m[i];
    r.terms_[mi] = *ci;
    return r;
}

Interval Scalar::enclosure(unsigned level) const {
    Interval total{0, 0};
    const Interval th = field_->theta_interval(level);
    for (const auto& [m, c] : terms_) {
        Interval coef{0, 0};
        for (std::size_t j = 0; j < c.size(); ++j)
            if (c[j] != 0) coef = coef + c[j] * th.pow(static_cast<int>(j));
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            auto si = field_->symbol_interval(i, level);
            if (!si) throw UndecidableSign("symbol " + field_->symbols()[i].name + " has no numerical enclosure");
            coef = coef * si->pow(m[i]);
        }
        total = total + coef;
    }
    return total;
}

int Scalar::sign() const {
    if (is_zero()) return 0;
    for (unsigned level : {0u, 4u, 8u, 16u, 32u, 64u, 128u, 256u}) {
        Interval it = enclosure(level);
        if (it.lo > 0) return 1;
        if (it.hi < 0) return -1;
    }
    throw UndecidableSign("cannot decide the sign of " + to_string());
}

double Scalar::approx() const {
    Interval it = enclosure(48);
    return Rational((it.lo + it.hi) / 2).get_d();
}

std::string Scalar::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        for (std::size_t j = 0; j < c.size(); ++j) {
            if (c[j] == 0) continue;
            std::string factors;
            auto add = [&](const std::string& name, long e) {
                if (!factors.empty()) factors += "*";
                factors += name;
                if (e != 1) factors += "^" + std::to_string(e);
            };
            if (j > 0) add(field_->theta_name(), static_cast<long>(j));
            for (std::size_t i = 0; i < m.size(); ++i)
                if (m[i] != 0) add(field_->symbols()[i].name, m[i]);
            Rational a = abs(c[j]);
            if (first) os << (c[j] < 0 ? "-" : "");
            else os << (c[j] < 0 ? " - " : " + ");
            if (factors.empty()) os << sigmacert::to_string(a);
            else if (a == 1) os << factors;
            else os << sigmacert::to_string(a) << "*" << factors;
            first = false;
        }
    }
    return os.str();
}

// ------------------------------------------------------------- parser

namespace {

class ScalarParser {
public:
    ScalarParser(const std::string& text, const FieldPtr& field) : s_(text), f_(field) {}

    Scalar parse() {
        Scalar v = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) {
        throw ParseError(what + " in scalar '" + s_ + "'", "column " + std::to_string(pos_ + 1));
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) return ++pos_, true;
        return false;
    }
    Scalar expr() {
        Scalar v(f_);
        bool neg = eat('-');
        if (!neg) eat('+');
        v = term();
        if (neg) v = -v;
        while (true) {
            if (eat('+')) v = v + term();
            else if (eat('-')) v = v - term();
            else return v;
        }
    }
    Scalar term() {
        Scalar v = power();
        while (eat('*')) v = v * power();
        return v;
    }
    Scalar power() {
        Scalar base = atom();
        if (!eat('^')) return base;
        skip();
        std::size_t start = pos_;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start || !std::isdigit(static_cast<unsigned char>(s_[pos_ - 1]))) fail("expected an integer exponent");
        long e = std::stol(s_.substr(start, pos_ - start));
        if (e < 0) {
            auto inv = base.inverse();
            if (!inv) fail("negative power of a non-unit");
            base = *inv;
            e = -e;
        }
        Scalar r(f_, 1);
        for (long i = 0; i < e; ++i) r = r * base;
        return r;
    }
    Scalar atom() {
        skip();
        if (eat('(')) {
            Scalar v = expr();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (pos_ >= s_.size()) fail("unexpected end");
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' || s_[pos_] == '/'))
                ++pos_;
            try {
                return Scalar(f_, parse_rational(s_.substr(start, pos_ - start)));
            } catch (const Error&) {
                fail("bad number");
            }
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            const std::string name = s_.substr(start, pos_ - start);
            if (f_->degree() >= 2 && name == f_->theta_name()) return Scalar::theta(f_);
            if (auto i = f_->symbol_index(name)) return Scalar::symbol(f_, *i);
            pos_ = start;
            fail("unknown name '" + name + "'");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string s_;
    FieldPtr f_;
    std::size_t pos_ = 0;
};

}  // namespace

Scalar parse_scalar(const std::string& text, const FieldPtr& field) { return ScalarParser(text, field).parse(); }

}  // namespace sigmacert
