#include "nchodge/scalar.hpp"

#include "nchodge/error.hpp"

namespace nchodge {

Gaussian& Gaussian::operator/=(const Gaussian& o) {
    const Rational norm = o.re * o.re + o.im * o.im;
    if (sgn(norm) == 0) {
        throw Error("scalar", "DivisionByZero", "division by zero in Q(i)");
    }
    Rational r = (re * o.re + im * o.im) / norm;
    Rational i = (im * o.re - re * o.im) / norm;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

std::string_view to_string(ScalarMode mode) {
    switch (mode) {
        case ScalarMode::rational: return "rational";
        case ScalarMode::gaussian: return "gaussian";
        case ScalarMode::complex_float: return "float";
    }
    return "unknown";
}

ScalarMode parse_scalar_mode(std::string_view name) {
    if (name == "rational") return ScalarMode::rational;
    if (name == "gaussian") return ScalarMode::gaussian;
    if (name == "float" || name == "complex-float") return ScalarMode::complex_float;
    throw Error("scalar", "UnknownMode", "unknown scalar mode '" + std::string(name) + "'");
}

template <>
Rational narrow_scalar<Rational, Gaussian>(const Gaussian& x) {
    if (sgn(x.im) != 0) {
        throw Error("scalar", "NotRepresentable", "Gaussian value with nonzero imaginary part in rational mode");
    }
    return x.re;
}

template <>
Rational narrow_scalar<Rational, Complex>(const Complex&) {
    throw Error("scalar", "NotRepresentable", "floating-point value cannot be converted to an exact rational");
}

template <>
Gaussian narrow_scalar<Gaussian, Complex>(const Complex&) {
    throw Error("scalar", "NotRepresentable", "floating-point value cannot be converted to an exact Gaussian rational");
}

}  // namespace nchodge
