#include "nchodge/polynomial.hpp"

#include <sstream>

#include "nchodge/error.hpp"

namespace nchodge {

Polynomial::Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
    for (auto& c : c_) c.canonicalize();
    normalize();
}

void Polynomial::normalize() {
    while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
}

Polynomial Polynomial::constant(const Rational& c) { return Polynomial({c}); }

Polynomial Polynomial::monomial(std::size_t degree, const Rational& c) {
    std::vector<Rational> v(degree + 1, Rational(0));
    v[degree] = c;
    return Polynomial(std::move(v));
}

Polynomial Polynomial::x_pow_minus_one(std::size_t n) {
    std::vector<Rational> v(n + 1, Rational(0));
    v[0] = -1;
    v[n] += 1;
    return Polynomial(std::move(v));
}

Polynomial Polynomial::geometric(std::size_t n) { return Polynomial(std::vector<Rational>(n, Rational(1))); }

Polynomial Polynomial::cyclotomic(std::size_t n) {
    if (n == 0) throw Error("polynomial", "InvalidArgument", "cyclotomic order must be positive");
    Polynomial p = x_pow_minus_one(n);
    for (std::size_t d = 1; d < n; ++d)
        if (n % d == 0) p = p / cyclotomic(d);
    return p;
}

Rational Polynomial::eval(const Rational& x) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Rational> v(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] += b.c_[i];
    return Polynomial(std::move(v));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<Rational> v(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] -= b.c_[i];
    return Polynomial(std::move(v));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> v(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(v));
}

void Polynomial::divmod(const Polynomial& a, const Polynomial& b, Polynomial& quotient, Polynomial& remainder) {
    if (b.is_zero()) throw Error("polynomial", "DivisionByZero", "polynomial division by zero");
    std::vector<Rational> r = a.c_;
    const long db = b.degree();
    std::vector<Rational> q(a.degree() >= db ? static_cast<std::size_t>(a.degree() - db + 1) : 0, Rational(0));
    const Rational lead = b.c_.back();
    for (long i = a.degree(); i >= db; --i) {
        const Rational f = r[static_cast<std::size_t>(i)] / lead;
        if (sgn(f) == 0) continue;
        q[static_cast<std::size_t>(i - db)] = f;
        for (long j = 0; j <= db; ++j) r[static_cast<std::size_t>(i - db + j)] -= f * b.c_[static_cast<std::size_t>(j)];
    }
    quotient = Polynomial(std::move(q));
    remainder = Polynomial(std::move(r));
}

Polynomial operator%(const Polynomial& a, const Polynomial& b) {
    Polynomial q, r;
    Polynomial::divmod(a, b, q, r);
    return r;
}

Polynomial operator/(const Polynomial& a, const Polynomial& b) {
    Polynomial q, r;
    Polynomial::divmod(a, b, q, r);
    return q;
}

std::string Polynomial::to_string() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = c_.size(); i-- > 0;) {
        if (sgn(c_[i]) == 0) continue;
        if (!first) os << " + ";
        os << "(" << c_[i].get_str() << ")";
        if (i > 0) os << "x^" << i;
        first = false;
    }
    return os.str();
}

void extended_gcd(const Polynomial& a, const Polynomial& b, Polynomial& g, Polynomial& s, Polynomial& t) {
    Polynomial r0 = a, r1 = b;
    Polynomial s0 = Polynomial::constant(1), s1;
    Polynomial t0, t1 = Polynomial::constant(1);
    while (!r1.is_zero()) {
        Polynomial q, r;
        Polynomial::divmod(r0, r1, q, r);
        Polynomial s2 = s0 - q * s1;
        Polynomial t2 = t0 - q * t1;
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.is_zero()) {
        g = r0;
        s = s0;
        t = t0;
        return;
    }
    const Polynomial inv = Polynomial::constant(Rational(1) / r0.coeffs().back());
    g = r0 * inv;
    s = s0 * inv;
    t = t0 * inv;
}

}  // namespace nchodge
