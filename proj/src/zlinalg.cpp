#include "sigmacert/zlinalg.hpp"

#include <algorithm>
#include <sstream>

#include "sigmacert/errors.hpp"

namespace sigmacert {

Rational parse_rational(const std::string& text) {
    std::string t;
    for (char c : text)
        if (c != ' ') t.push_back(c);
    if (!t.empty() && t[0] == '+') t.erase(0, 1);
    if (t.empty()) throw ParseError("empty rational");
    const auto bad = [&] { return ParseError("malformed rational '" + text + "'"); };
    // Decimal notation "3.14159" is accepted as the exact fraction it spells.
    if (const auto dot = t.find('.'); dot != std::string::npos) {
        std::string digits = t.substr(0, dot) + t.substr(dot + 1);
        const std::size_t frac = t.size() - dot - 1;
        if (digits.empty() || digits == "-" || t.find('/') != std::string::npos) throw bad();
        Integer num;
        if (num.set_str(digits, 10) != 0) throw bad();
        Integer den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
        Rational q(num, den);
        q.canonicalize();
        return q;
    }
    Rational q;
    if (q.set_str(t, 10) != 0) throw bad();
    if (q.get_den() == 0) throw ParseError("zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }
std::string to_string(const Integer& z) { return z.get_str(); }

// ------------------------------------------------------------------ IntMatrix

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw DimensionMismatch("ragged matrix literal");
        for (long x : r) data_.emplace_back(x);
    }
}

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<ZVector>& rows, std::size_t cols) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw DimensionMismatch("row length differs from column count");
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

ZVector IntMatrix::row(std::size_t i) const {
    return ZVector(data_.begin() + static_cast<long>(i * cols_), data_.begin() + static_cast<long>((i + 1) * cols_));
}

ZVector IntMatrix::col(std::size_t j) const {
    ZVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

bool IntMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Integer& x) { return x == 0; });
}

void IntMatrix::swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
}

void IntMatrix::swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
}

void IntMatrix::add_row_multiple(std::size_t dst, std::size_t src, const Integer& factor) {
    if (factor == 0) return;
    for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += factor * (*this)(src, j);
}

void IntMatrix::add_col_multiple(std::size_t dst, std::size_t src, const Integer& factor) {
    if (factor == 0) return;
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += factor * (*this)(i, src);
}

void IntMatrix::negate_row(std::size_t i) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
}

void IntMatrix::negate_col(std::size_t j) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = -(*this)(i, j);
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product dimensions");
    IntMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const Integer& x = a(i, k);
            if (x == 0) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += x * b(k, j);
        }
    return c;
}

std::string IntMatrix::to_string() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i ? ",[" : "[");
        for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j).get_str();
        os << ']';
    }
    os << ']';
    return os.str();
}

Integer determinant(const IntMatrix& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("determinant of non-square matrix");
    const std::size_t n = a.rows();
    if (n == 0) return 1;
    // Bareiss fraction-free elimination.
    IntMatrix m = a;
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && m(p, k) == 0) ++p;
            if (p == n) return 0;
            m.swap_rows(k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                Integer t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                m(i, j) = t;
            }
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

// ------------------------------------------------------------------ Smith form

ZVector SmithDecomposition::diagonal() const {
    ZVector diag;
    for (std::size_t k = 0; k < std::min(d.rows(), d.cols()); ++k) diag.push_back(d(k, k));
    return diag;
}

namespace {

struct Pos {
    std::size_t i, j;
};

std::optional<Pos> least_nonzero(const IntMatrix& m, std::size_t r0, std::size_t c0) {
    std::optional<Pos> best;
    Integer best_abs;
    for (std::size_t i = r0; i < m.rows(); ++i)
        for (std::size_t j = c0; j < m.cols(); ++j) {
            if (m(i, j) == 0) continue;
            Integer a = abs(m(i, j));
            if (!best || a < best_abs) {
                best = Pos{i, j};
                best_abs = a;
                if (best_abs == 1) return best;
            }
        }
    return best;
}

}  // namespace

SmithDecomposition smith_normal_form(const IntMatrix& a) {
    const std::size_t m = a.rows(), n = a.cols();
    SmithDecomposition s{IntMatrix::identity(m), IntMatrix::identity(n), a, 0};
    IntMatrix& d = s.d;
    std::size_t t = 0;
    for (; t < std::min(m, n); ++t) {
        auto p = least_nonzero(d, t, t);
        if (!p) break;
        d.swap_rows(t, p->i);
        s.u.swap_rows(t, p->i);
        d.swap_cols(t, p->j);
        s.v.swap_cols(t, p->j);
        for (;;) {
            bool dirty = false;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (d(i, t) == 0) continue;
                Integer q = d(i, t) / d(t, t);
                d.add_row_multiple(i, t, -q);
                s.u.add_row_multiple(i, t, -q);
                if (d(i, t) != 0) dirty = true;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (d(t, j) == 0) continue;
                Integer q = d(t, j) / d(t, t);
                d.add_col_multiple(j, t, -q);
                s.v.add_col_multiple(j, t, -q);
                if (d(t, j) != 0) dirty = true;
            }
            if (dirty) {
                // Bring the smallest remainder in row t / column t into the pivot.
                std::size_t bi = t, bj = t;
                Integer best = abs(d(t, t));
                for (std::size_t i = t + 1; i < m; ++i)
                    if (d(i, t) != 0 && abs(d(i, t)) < best) best = abs(d(i, t)), bi = i, bj = t;
                for (std::size_t j = t + 1; j < n; ++j)
                    if (d(t, j) != 0 && abs(d(t, j)) < best) best = abs(d(t, j)), bi = t, bj = j;
                d.swap_rows(t, bi);
                s.u.swap_rows(t, bi);
                d.swap_cols(t, bj);
                s.v.swap_cols(t, bj);
                continue;
            }
            bool fixed = false;
            for (std::size_t i = t + 1; i < m && !fixed; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (d(i, j) % d(t, t) != 0) {
                        d.add_row_multiple(t, i, 1);
                        s.u.add_row_multiple(t, i, 1);
                        fixed = true;
                        break;
                    }
            if (!fixed) break;
        }
        if (d(t, t) < 0) {
            d.negate_row(t);
            s.u.negate_row(t);
        }
    }
    s.rank = t;
    return s;
}

std::optional<Integer> AbelianStructure::order() const {
    if (free_rank > 0) return std::nullopt;
    Integer o = 1;
    for (const auto& f : torsion) o *= f;
    return o;
}

AbelianStructure cokernel_structure(const IntMatrix& a) {
    const SmithDecomposition s = smith_normal_form(a);
    const std::size_t m = a.rows();
    AbelianStructure out;
    std::vector<std::size_t> torsion_rows;
    for (std::size_t k = 0; k < s.rank; ++k)
        if (s.d(k, k) != 1) {
            torsion_rows.push_back(k);
            out.torsion.push_back(s.d(k, k));
        }
    out.free_rank = m - s.rank;
    out.coordinates = IntMatrix(m, out.free_rank + torsion_rows.size());
    for (std::size_t g = 0; g < m; ++g) {
        for (std::size_t k = s.rank; k < m; ++k) out.coordinates(g, k - s.rank) = s.u(k, g);
        for (std::size_t t = 0; t < torsion_rows.size(); ++t) {
            Integer r;
            mpz_fdiv_r(r.get_mpz_t(), s.u(torsion_rows[t], g).get_mpz_t(), out.torsion[t].get_mpz_t());
            out.coordinates(g, out.free_rank + t) = r;
        }
    }
    return out;
}

IntMatrix hermite_normal_form(const IntMatrix& a) {
    IntMatrix h = a;
    const std::size_t m = h.rows(), n = h.cols();
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        for (;;) {
            std::optional<std::size_t> best;
            for (std::size_t i = r; i < m; ++i)
                if (h(i, c) != 0 && (!best || abs(h(i, c)) < abs(h(*best, c)))) best = i;
            if (!best) break;
            h.swap_rows(r, *best);
            bool dirty = false;
            for (std::size_t i = r + 1; i < m; ++i) {
                if (h(i, c) == 0) continue;
                Integer q = h(i, c) / h(r, c);
                h.add_row_multiple(i, r, -q);
                if (h(i, c) != 0) dirty = true;
            }
            if (!dirty) break;
        }
        if (h(r, c) == 0) continue;
        if (h(r, c) < 0) h.negate_row(r);
        for (std::size_t i = 0; i < r; ++i) {
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), h(i, c).get_mpz_t(), h(r, c).get_mpz_t());
            h.add_row_multiple(i, r, -q);
        }
        ++r;
    }
    IntMatrix out(r, n);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = h(i, j);
    return out;
}

IntMatrix integer_kernel(const IntMatrix& a) {
    const SmithDecomposition s = smith_normal_form(a);
    const std::size_t n = a.cols();
    IntMatrix k(n - s.rank, n);
    for (std::size_t c = s.rank; c < n; ++c)
        for (std::size_t i = 0; i < n; ++i) k(c - s.rank, i) = s.v(i, c);
    return hermite_normal_form(k);
}

std::optional<ZVector> solve_integer(const IntMatrix& a, const ZVector& b) {
    if (b.size() != a.rows()) throw DimensionMismatch("solve_integer: right-hand side length");
    const SmithDecomposition s = smith_normal_form(a);
    ZVector ub(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.rows(); ++j) ub[i] += s.u(i, j) * b[j];
    ZVector y(a.cols());
    for (std::size_t k = 0; k < a.rows(); ++k) {
        if (k < s.rank) {
            if (ub[k] % s.d(k, k) != 0) return std::nullopt;
            y[k] = ub[k] / s.d(k, k);
        } else if (ub[k] != 0) {
            return std::nullopt;
        }
    }
    ZVector x(a.cols());
    for (std::size_t i = 0; i < a.cols(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) x[i] += s.v(i, j) * y[j];
    return x;
}

// ------------------------------------------------------------------ QMatrix

QMatrix::QMatrix(const IntMatrix& m) : rows_(m.rows()), cols_(m.cols()), data_(rows_ * cols_) {
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = Rational(m(i, j));
}

QMatrix QMatrix::identity(std::size_t n) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

QMatrix QMatrix::from_rows(const std::vector<QVector>& rows, std::size_t cols) {
    QMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw DimensionMismatch("row length differs from column count");
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

QVector QMatrix::row(std::size_t i) const {
    return QVector(data_.begin() + static_cast<long>(i * cols_), data_.begin() + static_cast<long>((i + 1) * cols_));
}

QVector QMatrix::col(std::size_t j) const {
    QVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
}

QMatrix QMatrix::transpose() const {
    QMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

QVector QMatrix::apply(const QVector& x) const {
    if (x.size() != cols_) throw DimensionMismatch("matrix-vector product dimensions");
    QVector y(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (x[j] != 0) y[i] += (*this)(i, j) * x[j];
    return y;
}

bool QMatrix::is_integral() const {
    return std::all_of(data_.begin(), data_.end(), [](const Rational& q) { return q.get_den() == 1; });
}

IntMatrix QMatrix::to_integer() const {
    if (!is_integral()) throw InvalidArgument("matrix has non-integral entries");
    IntMatrix m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).get_num();
    return m;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
    if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product dimensions");
    QMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const Rational& x = a(i, k);
            if (x == 0) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += x * b(k, j);
        }
    return c;
}

QMatrix operator-(const QMatrix& a, const QMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("matrix difference dimensions");
    QMatrix c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
    return c;
}

QMatrix rref(const QMatrix& a, std::vector<std::size_t>* pivots) {
    QMatrix m = a;
    std::vector<std::size_t> piv;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m(p, c) == 0) ++p;
        if (p == m.rows()) continue;
        if (p != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
        Rational inv = 1 / m(r, c);
        for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c) == 0) continue;
            Rational f = m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
        }
        piv.push_back(c);
        ++r;
    }
    QMatrix out(r, m.cols());
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    if (pivots) *pivots = std::move(piv);
    return out;
}

std::size_t rank(const QMatrix& a) { return rref(a).rows(); }

std::optional<QMatrix> inverse(const QMatrix& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("inverse of non-square matrix");
    const std::size_t n = a.rows();
    QMatrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
        aug(i, n + i) = 1;
    }
    std::vector<std::size_t> piv;
    QMatrix r = rref(aug, &piv);
    if (r.rows() < n || piv[n - 1] != n - 1) return std::nullopt;
    QMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = r(i, n + j);
    return inv;
}

std::optional<QVector> solve(const QMatrix& a, const QVector& b) {
    if (b.size() != a.rows()) throw DimensionMismatch("solve: right-hand side length");
    QMatrix aug(a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
        aug(i, a.cols()) = b[i];
    }
    std::vector<std::size_t> piv;
    QMatrix r = rref(aug, &piv);
    if (!piv.empty() && piv.back() == a.cols()) return std::nullopt;
    QVector x(a.cols());
    for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = r(i, a.cols());
    return x;
}

Rational determinant(const QMatrix& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("determinant of non-square matrix");
    QMatrix m = a;
    const std::size_t n = m.rows();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m(p, c) == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
            det = -det;
        }
        det *= m(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m(i, c) == 0) continue;
            Rational f = m(i, c) / m(c, c);
            for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
        }
    }
    return det;
}

Rational dot(const QVector& a, const QVector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("dot product dimensions");
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

bool is_zero(const QVector& v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& q) { return q == 0; });
}

QVector add(const QVector& a, const QVector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("vector sum dimensions");
    QVector c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    return c;
}

QVector scale(const QVector& a, const Rational& s) {
    QVector c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] * s;
    return c;
}

ZVector primitive_integer(const QVector& v) {
    if (is_zero(v)) throw InvalidArgument("primitive representative of the zero vector");
    Integer l = 1;
    for (const auto& q : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    ZVector z(v.size());
    Integer g = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        Rational s = v[i] * l;
        z[i] = s.get_num();
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z[i].get_mpz_t());
    }
    for (auto& x : z) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    return z;
}

QVector to_rational(const ZVector& v) {
    QVector q(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) q[i] = Rational(v[i]);
    return q;
}

// ------------------------------------------------------------------ Subspace

Subspace Subspace::span(std::size_t ambient, const std::vector<QVector>& vectors) {
    Subspace s(ambient);
    if (vectors.empty()) return s;
    s.basis_ = rref(QMatrix::from_rows(vectors, ambient));
    return s;
}

Subspace Subspace::whole(std::size_t ambient) {
    Subspace s(ambient);
    s.basis_ = QMatrix::identity(ambient);
    return s;
}

Subspace Subspace::kernel(const QMatrix& a) {
    std::vector<std::size_t> piv;
    QMatrix r = rref(a, &piv);
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto p : piv) is_pivot[p] = true;
    std::vector<QVector> basis;
    for (std::size_t f = 0; f < a.cols(); ++f) {
        if (is_pivot[f]) continue;
        QVector v(a.cols());
        v[f] = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -r(i, f);
        basis.push_back(std::move(v));
    }
    return span(a.cols(), basis);
}

Subspace Subspace::image(const QMatrix& a) {
    std::vector<QVector> cols;
    for (std::size_t j = 0; j < a.cols(); ++j) cols.push_back(a.col(j));
    return span(a.rows(), cols);
}

std::vector<QVector> Subspace::basis_vectors() const {
    std::vector<QVector> out;
    for (std::size_t i = 0; i < basis_.rows(); ++i) out.push_back(basis_.row(i));
    return out;
}

namespace {

std::size_t leading_index(const QMatrix& m, std::size_t row) {
    for (std::size_t j = 0; j < m.cols(); ++j)
        if (m(row, j) != 0) return j;
    return m.cols();
}

}  // namespace

bool Subspace::contains(const QVector& v) const {
    if (v.size() != ambient_) throw DimensionMismatch("subspace membership: vector dimension");
    QVector r = v;
    for (std::size_t i = 0; i < basis_.rows(); ++i) {
        const std::size_t p = leading_index(basis_, i);
        if (r[p] == 0) continue;
        Rational f = r[p];
        for (std::size_t j = 0; j < ambient_; ++j) r[j] -= f * basis_(i, j);
    }
    return is_zero(r);
}

bool Subspace::contains(const Subspace& other) const {
    if (other.ambient_ != ambient_) throw DimensionMismatch("subspace containment: ambient dimension");
    for (std::size_t i = 0; i < other.basis_.rows(); ++i)
        if (!contains(other.basis_.row(i))) return false;
    return true;
}

QMatrix Subspace::annihilator() const {
    if (basis_.rows() == 0) return QMatrix::identity(ambient_);
    Subspace perp = kernel(basis_);
    return perp.basis_;
}

Subspace Subspace::intersect(const Subspace& other) const {
    if (other.ambient_ != ambient_) throw DimensionMismatch("subspace intersection: ambient dimension");
    QMatrix a = annihilator(), b = other.annihilator();
    std::vector<QVector> rows;
    for (std::size_t i = 0; i < a.rows(); ++i) rows.push_back(a.row(i));
    for (std::size_t i = 0; i < b.rows(); ++i) rows.push_back(b.row(i));
    if (rows.empty()) return whole(ambient_);
    return kernel(QMatrix::from_rows(rows, ambient_));
}

Subspace Subspace::sum(const Subspace& other) const {
    if (other.ambient_ != ambient_) throw DimensionMismatch("subspace sum: ambient dimension");
    auto vs = basis_vectors();
    auto ws = other.basis_vectors();
    vs.insert(vs.end(), ws.begin(), ws.end());
    return span(ambient_, vs);
}

QVector Subspace::coordinates(const QVector& v) const {
    if (!contains(v)) throw InvalidArgument("vector is not in the subspace");
    QVector c(basis_.rows());
    for (std::size_t i = 0; i < basis_.rows(); ++i) c[i] = v[leading_index(basis_, i)];
    return c;
}

Subspace::Invariance Subspace::invariance_under(const QMatrix& m) const {
    if (m.rows() != ambient_ || m.cols() != ambient_) throw DimensionMismatch("invariance test: matrix dimensions");
    for (std::size_t i = 0; i < basis_.rows(); ++i) {
        QVector v = basis_.row(i);
        QVector w = m.apply(v);
        if (!contains(w)) return {false, v, w};
    }
    return {};
}

}  // namespace sigmacert
