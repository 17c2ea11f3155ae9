#pragma once

// Exact real scalars: Laurent polynomials in declared transcendental symbols
// with coefficients in a real number field Q(theta).

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sigmacert/zlinalg.hpp"

namespace sigmacert {

/// Closed rational interval.
struct Interval {
    Rational lo, hi;

    bool contains_zero() const { return lo <= 0 && hi >= 0; }
    Rational width() const { return hi - lo; }
    friend Interval operator+(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }
    friend Interval operator*(const Interval& a, const Interval& b);
    friend Interval operator*(const Rational& s, const Interval& a);
    Interval pow(int e) const;
    friend bool operator==(const Interval&, const Interval&) = default;
};

class CoefficientField;
using FieldPtr = std::shared_ptr<const CoefficientField>;

class CoefficientField {
public:
    struct Symbol {
        std::string name;
        /// User enclosure; "pi" and "e" are refined internally and need none.
        std::optional<Interval> enclosure;
        friend bool operator==(const Symbol&, const Symbol&) = default;
    };

    static FieldPtr rationals();
    /// Validates irreducibility of minpoly (coefficients low to high, made
    /// monic) and that [lo, hi] isolates exactly one real root.
    static FieldPtr make(std::string theta_name, QVector minpoly, Interval isolating, std::vector<Symbol> symbols = {});
    static FieldPtr make_transcendental(std::vector<Symbol> symbols);

    std::size_t degree() const { return minpoly_.size() - 1; }
    const QVector& minpoly() const { return minpoly_; }
    const std::string& theta_name() const { return theta_name_; }
    const Interval& isolating_interval() const { return isolating_; }
    const std::vector<Symbol>& symbols() const { return symbols_; }
    bool is_rationals() const { return degree() == 1 && symbols_.empty(); }
    std::optional<std::size_t> symbol_index(const std::string& name) const;

    /// Product in the power basis of theta.
    QVector mul(const QVector& a, const QVector& b) const;
    std::optional<QVector> inverse(const QVector& a) const;
    /// Column i holds a * theta^i.
    QMatrix multiplication_matrix(const QVector& a) const;

    /// Enclosure of theta after `level` bisection steps.
    Interval theta_interval(unsigned level) const;
    /// Enclosure of a symbol of width about 2^-level, or nullopt if unknown.
    std::optional<Interval> symbol_interval(std::size_t i, unsigned level) const;

    friend bool operator==(const CoefficientField& a, const CoefficientField& b) {
        return a.minpoly_ == b.minpoly_ && a.theta_name_ == b.theta_name_ && a.isolating_.lo == b.isolating_.lo &&
               a.isolating_.hi == b.isolating_.hi && a.symbols_ == b.symbols_;
    }

private:
    CoefficientField() = default;
    QVector minpoly_{0, 1};
    std::string theta_name_ = "theta";
    Interval isolating_{0, 0};
    std::vector<Symbol> symbols_;
};

/// Number of distinct real roots of p in (lo, hi], by Sturm's theorem.
std::size_t sturm_root_count(const QVector& p, const Rational& lo, const Rational& hi);
/// Irreducibility over Q when it can be proven (rational roots for degree
/// <= 3, Eisenstein, or irreducibility modulo a small prime).
bool provably_irreducible(const QVector& p);

class Scalar {
public:
    using Monomial = std::vector<int>;  // exponent per symbol, may be negative

    Scalar() : field_(CoefficientField::rationals()) {}
    Scalar(const Rational& q);  // NOLINT: rationals convert implicitly
    Scalar(long q) : Scalar(Rational(q)) {}
    Scalar(FieldPtr field, const Rational& q = 0);

    static Scalar theta(const FieldPtr& field);
    static Scalar symbol(const FieldPtr& field, std::size_t i);
    /// Coefficient vectors are padded or checked against the field degree.
    static Scalar from_terms(const FieldPtr& field, std::map<Monomial, QVector> terms);

    const FieldPtr& field() const { return field_; }
    const std::map<Monomial, QVector>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    std::optional<Rational> as_rational() const;
    bool is_rational() const { return as_rational().has_value(); }
    /// No transcendental symbols appear.
    bool in_number_field() const;
    /// No positive power of theta appears.
    bool theta_free() const;

    Scalar operator-() const;
    friend Scalar operator+(const Scalar& a, const Scalar& b);
    friend Scalar operator-(const Scalar& a, const Scalar& b);
    friend Scalar operator*(const Scalar& a, const Scalar& b);
    Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
    friend bool operator==(const Scalar& a, const Scalar& b);

    /// Units are c * monomial with c in Q(theta) nonzero.
    std::optional<Scalar> inverse() const;

    Interval enclosure(unsigned level) const;
    /// -1, 0 or 1; throws UndecidableSign when enclosures cannot separate from 0.
    int sign() const;
    double approx() const;

    std::string to_string() const;

private:
    void normalize();
    static FieldPtr common_field(const Scalar& a, const Scalar& b);

    FieldPtr field_;
    std::map<Monomial, QVector> terms_;
};

/// "1 + sqrt2", "3/2*pi^2 - theta", with names taken from the field.
Scalar parse_scalar(const std::string& text, const FieldPtr& field);

}  // namespace sigmacert
