#pragma once

// Exact integer and rational linear algebra. No floating point anywhere.

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace sigmacert {

using Integer = mpz_class;
using Rational = mpq_class;
using QVector = std::vector<Rational>;
using ZVector = std::vector<Integer>;

Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

    static IntMatrix identity(std::size_t n);
    static IntMatrix from_rows(const std::vector<ZVector>& rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    ZVector row(std::size_t i) const;
    ZVector col(std::size_t j) const;
    IntMatrix transpose() const;
    bool is_zero() const;

    void swap_rows(std::size_t a, std::size_t b);
    void swap_cols(std::size_t a, std::size_t b);
    /// row[dst] += factor * row[src]
    void add_row_multiple(std::size_t dst, std::size_t src, const Integer& factor);
    void add_col_multiple(std::size_t dst, std::size_t src, const Integer& factor);
    void negate_row(std::size_t i);
    void negate_col(std::size_t j);

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
    friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;

    std::string to_string() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Integer> data_;
};

Integer determinant(const IntMatrix& a);

/// U * A * V = D with U, V unimodular and D diagonal with d1 | d2 | ... (all >= 0).
struct SmithDecomposition {
    IntMatrix u;
    IntMatrix v;
    IntMatrix d;
    std::size_t rank = 0;

    ZVector diagonal() const;
};

SmithDecomposition smith_normal_form(const IntMatrix& a);

/// Finitely generated abelian group Z^free_rank + sum Z/torsion[i].
/// `coordinates` has one row per generator: free coordinates then torsion residues.
struct AbelianStructure {
    std::size_t free_rank = 0;
    ZVector torsion;
    IntMatrix coordinates;

    std::size_t b1() const { return free_rank; }
    /// Order of the group, or nullopt when infinite.
    std::optional<Integer> order() const;
};

/// Cokernel of Z^cols -> Z^rows, x |-> A x.
AbelianStructure cokernel_structure(const IntMatrix& a);

/// Row-style Hermite normal form of the row lattice of `a` (zero rows dropped):
/// echelon, positive pivots, entries above each pivot reduced into [0, pivot).
IntMatrix hermite_normal_form(const IntMatrix& a);

/// Basis (as rows, in Hermite normal form) of {x in Z^cols : A x = 0}.
IntMatrix integer_kernel(const IntMatrix& a);

/// Integer solution of A x = b, if one exists.
std::optional<ZVector> solve_integer(const IntMatrix& a, const ZVector& b);

// ---------------------------------------------------------------- rationals

class QMatrix {
public:
    QMatrix() = default;
    QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    explicit QMatrix(const IntMatrix& m);

    static QMatrix identity(std::size_t n);
    static QMatrix from_rows(const std::vector<QVector>& rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    QVector row(std::size_t i) const;
    QVector col(std::size_t j) const;
    QMatrix transpose() const;
    QVector apply(const QVector& x) const;
    bool is_integral() const;
    IntMatrix to_integer() const;

    friend QMatrix operator*(const QMatrix& a, const QMatrix& b);
    friend QMatrix operator-(const QMatrix& a, const QMatrix& b);
    friend bool operator==(const QMatrix& a, const QMatrix& b) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

/// Reduced row echelon form; returns the nonzero rows and sets `pivots`.
QMatrix rref(const QMatrix& a, std::vector<std::size_t>* pivots = nullptr);
std::size_t rank(const QMatrix& a);
std::optional<QMatrix> inverse(const QMatrix& a);
std::optional<QVector> solve(const QMatrix& a, const QVector& b);
Rational determinant(const QMatrix& a);

Rational dot(const QVector& a, const QVector& b);
bool is_zero(const QVector& v);
QVector add(const QVector& a, const QVector& b);
QVector scale(const QVector& a, const Rational& s);
/// Positive rescaling to a primitive integer vector; v must be nonzero.
ZVector primitive_integer(const QVector& v);
QVector to_rational(const ZVector& v);

/// A linear subspace of Q^n stored as a reduced row-echelon basis, so equal
/// subspaces compare equal.
class Subspace {
public:
    Subspace() = default;
    explicit Subspace(std::size_t ambient) : ambient_(ambient), basis_(0, ambient) {}

    static Subspace span(std::size_t ambient, const std::vector<QVector>& vectors);
    static Subspace whole(std::size_t ambient);
    /// Null space {x : A x = 0}.
    static Subspace kernel(const QMatrix& a);
    /// Column space of A.
    static Subspace image(const QMatrix& a);

    std::size_t ambient() const { return ambient_; }
    std::size_t dim() const { return basis_.rows(); }
    const QMatrix& basis() const { return basis_; }
    std::vector<QVector> basis_vectors() const;

    bool contains(const QVector& v) const;
    bool contains(const Subspace& other) const;
    Subspace intersect(const Subspace& other) const;
    Subspace sum(const Subspace& other) const;
    /// Matrix whose kernel is this subspace.
    QMatrix annihilator() const;

    /// Coordinates of v in basis_vectors(); v must lie in the subspace.
    QVector coordinates(const QVector& v) const;

    struct Invariance {
        bool invariant = true;
        QVector witness;        // basis vector v with M v outside the subspace
        QVector witness_image;  // M v
    };
    Invariance invariance_under(const QMatrix& m) const;

    friend bool operator==(const Subspace& a, const Subspace& b) = default;

private:
    std::size_t ambient_ = 0;
    QMatrix basis_;
};

}  // namespace sigmacert
