#include "nchodge/godbillon_vey.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "nchodge/error.hpp"

namespace nchodge {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

using Field = std::vector<double>;
using Vec3 = std::array<Field, 3>;

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

class Differentiator {
public:
    Differentiator(std::size_t n, DerivativeMethod method) : n_(n), method_(method) {
        if (method_ != DerivativeMethod::spectral) return;
        const std::size_t total = n * n * n;
        freq_ = fftw_alloc_complex(total);
        work_ = fftw_alloc_complex(total);
        const int ni = static_cast<int>(n);
        std::lock_guard<std::mutex> lock(planner_mutex());
        forward_ = fftw_plan_dft_3d(ni, ni, ni, work_, freq_, FFTW_FORWARD, FFTW_ESTIMATE);
        backward_ = fftw_plan_dft_3d(ni, ni, ni, work_, work_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~Differentiator() {
        if (method_ != DerivativeMethod::spectral) return;
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
        fftw_free(freq_);
        fftw_free(work_);
    }
    Differentiator(const Differentiator&) = delete;
    Differentiator& operator=(const Differentiator&) = delete;

    /// All three partial derivatives of f.
    Vec3 gradient(const Field& f) {
        if (method_ == DerivativeMethod::central) return {central(f, 0), central(f, 1), central(f, 2)};
        const std::size_t total = n_ * n_ * n_;
        for (std::size_t i = 0; i < total; ++i) {
            work_[i][0] = f[i];
            work_[i][1] = 0.0;
        }
        fftw_execute(forward_);
        Vec3 out;
        for (int axis = 0; axis < 3; ++axis) out[static_cast<std::size_t>(axis)] = spectral(axis);
        return out;
    }

private:
    long wavenumber(std::size_t idx) const {
        const auto i = static_cast<long>(idx);
        const auto n = static_cast<long>(n_);
        if (2 * i == n) return 0;  // Nyquist mode carries no odd derivative
        return 2 * i < n ? i : i - n;
    }

    Field spectral(int axis) {
        const std::size_t n = n_;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    const std::size_t idx = (i * n + j) * n + k;
                    const std::size_t along = axis == 0 ? i : axis == 1 ? j : k;
                    const double w = two_pi * static_cast<double>(wavenumber(along));
                    // Multiply by i w.
                    work_[idx][0] = -w * freq_[idx][1];
                    work_[idx][1] = w * freq_[idx][0];
                }
        fftw_execute(backward_);
        const double norm = 1.0 / static_cast<double>(n * n * n);
        Field out(n * n * n);
        for (std::size_t idx = 0; idx < out.size(); ++idx) out[idx] = work_[idx][0] * norm;
        return out;
    }

    Field central(const Field& f, int axis) const {
        const std::size_t n = n_;
        const double inv = static_cast<double>(n) / 2.0;
        Field out(n * n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    std::array<std::size_t, 3> p{i, j, k}, m{i, j, k};
                    const auto a = static_cast<std::size_t>(axis);
                    p[a] = (p[a] + 1) % n;
                    m[a] = (m[a] + n - 1) % n;
                    out[(i * n + j) * n + k] =
                        (f[(p[0] * n + p[1]) * n + p[2]] - f[(m[0] * n + m[1]) * n + m[2]]) * inv;
                }
        return out;
    }

    std::size_t n_;
    DerivativeMethod method_;
    fftw_complex* freq_ = nullptr;
    fftw_complex* work_ = nullptr;
    fftw_plan forward_ = nullptr;
    fftw_plan backward_ = nullptr;
};

Vec3 curl(Differentiator& diff, const Vec3& w) {
    const Vec3 gx = diff.gradient(w[0]);
    const Vec3 gy = diff.gradient(w[1]);
    const Vec3 gz = diff.gradient(w[2]);
    const std::size_t total = w[0].size();
    Vec3 out{Field(total), Field(total), Field(total)};
    for (std::size_t i = 0; i < total; ++i) {
        out[0][i] = gz[1][i] - gy[2][i];
        out[1][i] = gx[2][i] - gz[0][i];
        out[2][i] = gy[0][i] - gx[1][i];
    }
    return out;
}

double mean_dot(const Vec3& a, const Vec3& b) {
    // Compensated sum.
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < a[0].size(); ++i) {
        const double term = a[0][i] * b[0][i] + a[1][i] * b[1][i] + a[2][i] * b[2][i] - comp;
        const double t = sum + term;
        comp = (t - sum) - term;
        sum = t;
    }
    return sum / static_cast<double>(a[0].size());
}

}  // namespace

std::string_view to_string(DerivativeMethod method) {
    return method == DerivativeMethod::spectral ? "spectral" : "central";
}

DerivativeMethod parse_derivative_method(std::string_view name) {
    if (name == "spectral") return DerivativeMethod::spectral;
    if (name == "central") return DerivativeMethod::central;
    throw Error("gv", "InvalidArgument", "unknown derivative method '" + std::string(name) + "'");
}

double default_gauge(double x, double y, double) { return std::cos(two_pi * x) + std::sin(two_pi * y); }

AnalyticOneForm builtin_one_form(const std::string& name) {
    AnalyticOneForm f;
    f.name = name;
    auto zero = [](double, double, double) { return 0.0; };
    auto one = [](double, double, double) { return 1.0; };
    f.wx = zero;
    f.wy = zero;
    f.wz = one;
    if (name == "dz") {
    } else if (name == "dz+sin(2piz)dx") {
        f.wx = [](double, double, double z) { return std::sin(two_pi * z); };
    } else if (name == "dz+xdy") {
        f.wy = [](double x, double, double) { return x; };
    } else {
        throw Error("gv", "InvalidArgument", "unknown one-form '" + name + "'");
    }
    return f;
}

OneFormField sample_one_form(const AnalyticOneForm& form, std::size_t n) {
    OneFormField f;
    f.n = n;
    const std::size_t total = n * n * n;
    f.wx.resize(total);
    f.wy.resize(total);
    f.wz.resize(total);
    const double h = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                const std::size_t idx = (i * n + j) * n + k;
                const double x = static_cast<double>(i) * h, y = static_cast<double>(j) * h, z = static_cast<double>(k) * h;
                f.wx[idx] = form.wx(x, y, z);
                f.wy[idx] = form.wy(x, y, z);
                f.wz[idx] = form.wz(x, y, z);
            }
    return f;
}

GVReport godbillon_vey(const OneFormField& omega, const GVOptions& options) {
    const std::size_t n = omega.n;
    if (n < 8) throw Error("gv", "GridTooCoarse", "grid needs at least 8 points per direction");
    const std::size_t total = n * n * n;
    if (omega.wx.size() != total || omega.wy.size() != total || omega.wz.size() != total) {
        throw Error("gv", "ShapeMismatch", "coefficient arrays must hold n^3 samples");
    }
    GVReport r;
    r.n = n;
    r.method = options.method;

    const Vec3 w{omega.wx, omega.wy, omega.wz};
    Field norm2(total);
    double max_norm2 = 0.0;
    double min_norm2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < total; ++i) {
        norm2[i] = w[0][i] * w[0][i] + w[1][i] * w[1][i] + w[2][i] * w[2][i];
        max_norm2 = std::max(max_norm2, norm2[i]);
        min_norm2 = std::min(min_norm2, norm2[i]);
    }
    r.min_omega_norm = std::sqrt(min_norm2);
    if (!(min_norm2 > 1e-16 * std::max(1.0, max_norm2))) {
        throw Error("gv", "VanishingOmega", "omega vanishes on the grid (min |omega| = " + std::to_string(r.min_omega_norm) + ")");
    }

    Differentiator diff(n, options.method);
    const Vec3 F = curl(diff, w);
    for (std::size_t i = 0; i < total; ++i)
        r.integrability_residual =
            std::max(r.integrability_residual, std::abs(w[0][i] * F[0][i] + w[1][i] * F[1][i] + w[2][i] * F[2][i]));
    if (!(r.integrability_residual <= options.gv_tol)) {
        throw Error("gv", "NotIntegrable",
                    "omega ^ d omega residual " + std::to_string(r.integrability_residual) + " exceeds tolerance");
    }

    // Minimal-norm solution of theta x omega = curl omega.
    Vec3 theta{Field(total), Field(total), Field(total)};
    for (std::size_t i = 0; i < total; ++i) {
        theta[0][i] = (w[1][i] * F[2][i] - w[2][i] * F[1][i]) / norm2[i];
        theta[1][i] = (w[2][i] * F[0][i] - w[0][i] * F[2][i]) / norm2[i];
        theta[2][i] = (w[0][i] * F[1][i] - w[1][i] * F[0][i]) / norm2[i];
        const double cx = theta[1][i] * w[2][i] - theta[2][i] * w[1][i];
        const double cy = theta[2][i] * w[0][i] - theta[0][i] * w[2][i];
        const double cz = theta[0][i] * w[1][i] - theta[1][i] * w[0][i];
        r.theta_residual =
            std::max({r.theta_residual, std::abs(cx - F[0][i]), std::abs(cy - F[1][i]), std::abs(cz - F[2][i])});
    }
    r.gv = mean_dot(theta, curl(diff, theta));

    const ScalarFunction3 gauge = options.gauge ? options.gauge : ScalarFunction3(default_gauge);
    Vec3 shifted = theta;
    const double h = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                const std::size_t idx = (i * n + j) * n + k;
                const double g = gauge(static_cast<double>(i) * h, static_cast<double>(j) * h, static_cast<double>(k) * h);
                for (std::size_t c = 0; c < 3; ++c) shifted[c][idx] += g * w[c][idx];
            }
    r.gv_gauge = mean_dot(shifted, curl(diff, shifted));
    r.gauge_residual = std::abs(r.gv - r.gv_gauge);
    return r;
}

GVReport godbillon_vey(const AnalyticOneForm& omega, std::size_t n, const GVOptions& options) {
    GVReport coarse = godbillon_vey(sample_one_form(omega, n), options);
    const GVReport fine = godbillon_vey(sample_one_form(omega, 2 * n), options);
    coarse.gv_refined = fine.gv;
    coarse.refinement_residual = std::abs(coarse.gv - fine.gv);
    return coarse;
}

}  // namespace nchodge
