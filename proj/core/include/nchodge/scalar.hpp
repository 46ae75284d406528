#pragma once

#include <complex>
#include <concepts>
#include <string>
#include <string_view>
#include <type_traits>

#include <gmpxx.h>

namespace nchodge {

using Rational = mpq_class;
using Complex = std::complex<double>;

/// Exact element of Q(i).
struct Gaussian {
    Rational re{0};
    Rational im{0};

    Gaussian() = default;
    Gaussian(Rational r) : re(std::move(r)) { re.canonicalize(); }
    Gaussian(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {
        re.canonicalize();
        im.canonicalize();
    }
    Gaussian(long v) : re(v) {}

    Gaussian& operator+=(const Gaussian& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    Gaussian& operator-=(const Gaussian& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    Gaussian& operator*=(const Gaussian& o) {
        Rational r = re * o.re - im * o.im;
        Rational i = re * o.im + im * o.re;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }
    Gaussian& operator/=(const Gaussian& o);

    friend Gaussian operator+(Gaussian a, const Gaussian& b) { return a += b; }
    friend Gaussian operator-(Gaussian a, const Gaussian& b) { return a -= b; }
    friend Gaussian operator*(Gaussian a, const Gaussian& b) { return a *= b; }
    friend Gaussian operator/(Gaussian a, const Gaussian& b) { return a /= b; }
    friend Gaussian operator-(const Gaussian& a) { return Gaussian(-a.re, -a.im); }
    friend bool operator==(const Gaussian& a, const Gaussian& b) {
        return a.re == b.re && a.im == b.im;
    }
};

enum class ScalarMode { rational, gaussian, complex_float };

std::string_view to_string(ScalarMode mode);
/// Accepts "rational", "gaussian", "float" (and "complex-float").
ScalarMode parse_scalar_mode(std::string_view name);

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static constexpr ScalarMode mode = ScalarMode::rational;
    static Rational from_int(long v) { return Rational(v); }
    static Rational from_rational(const Rational& q) { return q; }
    static bool is_zero(const Rational& x) { return sgn(x) == 0; }
    static Rational conj(const Rational& x) { return x; }
    static Complex to_complex(const Rational& x) { return {x.get_d(), 0.0}; }
    static double abs(const Rational& x) { return std::abs(x.get_d()); }
};

template <>
struct ScalarTraits<Gaussian> {
    static constexpr bool exact = true;
    static constexpr ScalarMode mode = ScalarMode::gaussian;
    static Gaussian from_int(long v) { return Gaussian(v); }
    static Gaussian from_rational(const Rational& q) { return Gaussian(q); }
    static bool is_zero(const Gaussian& x) { return sgn(x.re) == 0 && sgn(x.im) == 0; }
    static Gaussian conj(const Gaussian& x) { return Gaussian(x.re, -x.im); }
    static Complex to_complex(const Gaussian& x) { return {x.re.get_d(), x.im.get_d()}; }
    static double abs(const Gaussian& x) { return std::abs(to_complex(x)); }
};

template <>
struct ScalarTraits<Complex> {
    static constexpr bool exact = false;
    static constexpr ScalarMode mode = ScalarMode::complex_float;
    static Complex from_int(long v) { return {static_cast<double>(v), 0.0}; }
    static Complex from_rational(const Rational& q) { return {q.get_d(), 0.0}; }
    static bool is_zero(const Complex& x) { return x == Complex{}; }
    static Complex conj(const Complex& x) { return std::conj(x); }
    static Complex to_complex(const Complex& x) { return x; }
    static double abs(const Complex& x) { return std::abs(x); }
};

/// Scalars usable as the ground field of algebras and form spaces.
template <class S>
concept Field = requires(S a, S b) {
    { a + b } -> std::convertible_to<S>;
    { a - b } -> std::convertible_to<S>;
    { a * b } -> std::convertible_to<S>;
    { a / b } -> std::convertible_to<S>;
    { ScalarTraits<S>::exact } -> std::convertible_to<bool>;
};

template <class S>
inline bool is_zero(const S& x) {
    return ScalarTraits<S>::is_zero(x);
}

template <class S>
inline S from_int(long v) {
    return ScalarTraits<S>::from_int(v);
}

template <class S>
inline Complex to_complex(const S& x) {
    return ScalarTraits<S>::to_complex(x);
}

/// Exact narrowing (Q(i) -> Q with zero imaginary part); throws otherwise.
template <class To, class From>
To narrow_scalar(const From& x);

template <>
Rational narrow_scalar<Rational, Gaussian>(const Gaussian& x);
template <>
Rational narrow_scalar<Rational, Complex>(const Complex& x);
template <>
Gaussian narrow_scalar<Gaussian, Complex>(const Complex& x);

/// Embeds a scalar of one mode into another (Q -> Q(i) -> C). Throws when the
/// target cannot represent the source exactly (C -> Q).
template <class To, class From>
To convert_scalar(const From& x) {
    if constexpr (std::is_same_v<To, From>) {
        return x;
    } else if constexpr (std::is_same_v<To, Complex>) {
        return ScalarTraits<From>::to_complex(x);
    } else if constexpr (std::is_same_v<To, Gaussian> && std::is_same_v<From, Rational>) {
        return Gaussian(x);
    } else {
        return narrow_scalar<To>(x);
    }
}

}  // namespace nchodge
