#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nchodge/matrix.hpp"
#include "nchodge/scalar.hpp"

namespace nchodge {

/// Dense univariate polynomial over Q; coefficient i multiplies x^i.
/// Always normalized so the leading coefficient is nonzero (zero = empty).
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Rational> coeffs);

    static Polynomial constant(const Rational& c);
    static Polynomial monomial(std::size_t degree, const Rational& c = 1);
    /// x^n - 1
    static Polynomial x_pow_minus_one(std::size_t n);
    /// 1 + x + ... + x^{n-1}
    static Polynomial geometric(std::size_t n);
    /// n-th cyclotomic polynomial.
    static Polynomial cyclotomic(std::size_t n);

    bool is_zero() const { return c_.empty(); }
    /// -1 for the zero polynomial.
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }
    Rational eval(const Rational& x) const;

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

    /// Euclidean division; throws on division by zero.
    static void divmod(const Polynomial& a, const Polynomial& b, Polynomial& quotient, Polynomial& remainder);
    friend Polynomial operator%(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator/(const Polynomial& a, const Polynomial& b);

    std::string to_string() const;

private:
    void normalize();
    std::vector<Rational> c_;
};

/// Monic gcd g with s*a + t*b = g.
void extended_gcd(const Polynomial& a, const Polynomial& b, Polynomial& g, Polynomial& s, Polynomial& t);

/// Evaluates p(M) by Horner's rule in the matrix's scalar field.
template <class S>
Matrix<S> evaluate(const Polynomial& p, const Matrix<S>& m) {
    const std::size_t n = m.rows();
    Matrix<S> acc(n, n);
    for (long i = p.degree(); i >= 0; --i) {
        acc = acc * m;
        const S c = ScalarTraits<S>::from_rational(p.coeff(static_cast<std::size_t>(i)));
        if (!is_zero(c))
            for (std::size_t d = 0; d < n; ++d) acc(d, d) += c;
    }
    return acc;
}

}  // namespace nchodge
