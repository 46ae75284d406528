#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace nchodge {

/// 1-form omega = wx dx + wy dy + wz dz sampled on the periodic n^3 grid of
/// the unit torus; point (i, j, k) sits at (i/n, j/n, k/n), stored at (i n + j) n + k.
struct OneFormField {
    std::size_t n = 0;
    std::vector<double> wx, wy, wz;
};

using ScalarFunction3 = std::function<double(double x, double y, double z)>;

struct AnalyticOneForm {
    std::string name;
    ScalarFunction3 wx, wy, wz;
};

/// "dz", "dz+sin(2piz)dx", "dz+xdy". Error: gv.InvalidArgument.
AnalyticOneForm builtin_one_form(const std::string& name);

OneFormField sample_one_form(const AnalyticOneForm& form, std::size_t n);

enum class DerivativeMethod { spectral, central };

std::string_view to_string(DerivativeMethod method);
DerivativeMethod parse_derivative_method(std::string_view name);

struct GVOptions {
    DerivativeMethod method = DerivativeMethod::spectral;
    /// Max |omega . curl omega| accepted as integrable.
    double gv_tol = 1e-8;
    /// Gauge function h for the invariance test theta -> theta + h omega.
    ScalarFunction3 gauge = nullptr;
};

struct GVReport {
    std::size_t n = 0;
    DerivativeMethod method = DerivativeMethod::spectral;
    double integrability_residual = 0.0;
    double min_omega_norm = 0.0;
    /// max |curl omega - theta x omega|
    double theta_residual = 0.0;
    double gv = 0.0;
    double gv_gauge = 0.0;
    double gauge_residual = 0.0;
    std::optional<double> gv_refined;
    std::optional<double> refinement_residual;
};

/// Default gauge function cos(2 pi x) + sin(2 pi y).
double default_gauge(double x, double y, double z);

/// GV = integral over T^3 of theta . curl theta with theta = (omega x curl omega) / |omega|^2.
/// Errors: gv.GridTooCoarse (n < 8), gv.ShapeMismatch, gv.VanishingOmega, gv.NotIntegrable.
GVReport godbillon_vey(const OneFormField& omega, const GVOptions& options = {});

/// Samples at n and 2n and fills the refinement fields from the finer grid.
GVReport godbillon_vey(const AnalyticOneForm& omega, std::size_t n, const GVOptions& options = {});

}  // namespace nchodge
