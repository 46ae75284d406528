#include "nchodge/tangential.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "nchodge/error.hpp"
#include "nchodge/parallel.hpp"

namespace nchodge {

namespace {

using Eigen::MatrixXcd;

MatrixXcd kernel_projector(const HodgePackage& pkg, std::size_t k) {
    const MatrixXcd& h = pkg.harmonic_bases()[k];
    const MatrixXcd& g = pkg.complex().grams[k];
    return h * h.adjoint() * g;
}

MatrixXcd image_basis(const MatrixXcd& d, double rel_tol) {
    if (d.size() == 0) return MatrixXcd::Zero(d.rows(), 0);
    Eigen::JacobiSVD<MatrixXcd> svd(d, Eigen::ComputeThinU);
    const auto r = static_cast<Eigen::Index>(numerical_rank(d, rel_tol));
    return svd.matrixU().leftCols(r);
}

LeafKernelData analyse_leaf(const CochainComplex& base, const HodgePackage& base_pkg, const CochainComplex& deformed,
                            const std::vector<std::vector<double>>& weights, const SweepOptions& options) {
    ComplexTolerances tol;
    tol.rank_tol = options.kernel_tol;
    const HodgePackage pkg(deformed, tol);
    LeafKernelData out;
    out.kernel_dims = pkg.betti();
    for (std::size_t k = 0; k <= base.length(); ++k) {
        const auto n = static_cast<Eigen::Index>(base.dims[k]);
        Eigen::VectorXcd t(n);
        for (Eigen::Index i = 0; i < n; ++i) t(i) = 1.0 / weights[k][static_cast<std::size_t>(i)];
        const MatrixXcd q = kernel_projector(base_pkg, k);
        const MatrixXcd q_tau = kernel_projector(pkg, k);
        const MatrixXcd u = q_tau * t.asDiagonal() * q;
        out.intertwiner_ranks.push_back(numerical_rank(u, options.kernel_tol));
        double residual = 0.0;
        if (k > 0) {
            const MatrixXcd b = image_basis(base.differentials[k - 1], options.kernel_tol);
            if (b.cols() > 0) residual = (q_tau * t.asDiagonal() * b).cwiseAbs().maxCoeff();
        }
        out.block_residuals.push_back(residual);
    }
    return out;
}

}  // namespace

std::string_view to_string(LeafKind kind) { return kind == LeafKind::circle ? "circle" : "torus"; }

LeafKind parse_leaf_kind(std::string_view name) {
    if (name == "circle") return LeafKind::circle;
    if (name == "torus") return LeafKind::torus;
    throw Error("tangential", "InvalidArgument", "unknown leaf kind '" + std::string(name) + "'");
}

std::vector<double> LeafSpec::vertex_coords(std::size_t i) const {
    const double step = 1.0 / static_cast<double>(n);
    if (kind == LeafKind::circle) return {static_cast<double>(i) * step};
    return {static_cast<double>(i / n) * step, static_cast<double>(i % n) * step};
}

CochainComplex leaf_complex(const LeafSpec& leaf) {
    const std::size_t n = leaf.n;
    const double s = leaf.metric_scale;
    const auto p = static_cast<double>(leaf.leaf_dim());
    auto gram = [&](std::size_t dim, double k) {
        return MatrixXcd(std::pow(s, p - 2.0 * k) * MatrixXcd::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)));
    };
    if (leaf.kind == LeafKind::circle) {
        Matrix<Gaussian> d(n, n);
        for (std::size_t j = 0; j < n; ++j) {
            d(j, j) -= Gaussian(1);
            d(j, (j + 1) % n) += Gaussian(1);
        }
        return make_exact_complex({n, n}, {d}, {gram(n, 0), gram(n, 1)});
    }
    // Vertex (i, j) -> i n + j; x-edge (i, j)->(i+1, j) first, then y-edges (i, j)->(i, j+1).
    const std::size_t v = n * n;
    auto vid = [n](std::size_t i, std::size_t j) { return (i % n) * n + (j % n); };
    Matrix<Gaussian> d0(2 * v, v), d1(v, 2 * v);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t e = vid(i, j);
            d0(e, vid(i + 1, j)) += Gaussian(1);
            d0(e, vid(i, j)) -= Gaussian(1);
            d0(v + e, vid(i, j + 1)) += Gaussian(1);
            d0(v + e, vid(i, j)) -= Gaussian(1);
            // Face (i, j): bottom + right - top - left.
            d1(e, e) += Gaussian(1);
            d1(e, v + vid(i + 1, j)) += Gaussian(1);
            d1(e, vid(i, j + 1)) -= Gaussian(1);
            d1(e, v + e) -= Gaussian(1);
        }
    }
    return make_exact_complex({v, 2 * v, v}, {d0, d1}, {gram(v, 0), gram(2 * v, 1), gram(v, 2)});
}

FoliationModel make_model(const LeafSpec& leaf, std::vector<double> samples, std::vector<double> weights) {
    if (leaf.n < 3) throw Error("tangential", "LeafTooSmall", "leaf needs at least 3 points, got " + std::to_string(leaf.n));
    if (!(leaf.metric_scale > 0.0) || !std::isfinite(leaf.metric_scale)) {
        throw Error("tangential", "InvalidArgument", "metric scale must be positive");
    }
    if (samples.empty()) throw Error("tangential", "BadWeights", "at least one transversal sample is required");
    if (weights.empty()) weights.assign(samples.size(), 1.0 / static_cast<double>(samples.size()));
    if (weights.size() != samples.size()) {
        throw Error("tangential", "BadWeights", "weights and transversal samples differ in length");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw Error("tangential", "BadWeights", "transversal weight " + std::to_string(w) + " is not positive");
        }
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw Error("tangential", "BadWeights", "transversal weights sum to " + std::to_string(total) + ", not 1");
    }
    FoliationModel m;
    m.leaf = leaf;
    m.samples = std::move(samples);
    m.weights = std::move(weights);
    m.leaf_complex = leaf_complex(leaf);
    return m;
}

SampledPhi sample_phi(const FoliationModel& model, const std::string& name, std::uint64_t seed) {
    const std::size_t nv = model.leaf.vertex_count();
    const double two_pi = 2.0 * std::numbers::pi;
    std::function<double(const std::vector<double>&, double)> f;
    if (name == "zero") {
        f = [](const std::vector<double>&, double) { return 0.0; };
    } else if (name == "constant") {
        f = [](const std::vector<double>&, double) { return 1.0; };
    } else if (name == "cos-h") {
        f = [two_pi](const std::vector<double>& x, double) { return std::cos(two_pi * x[0]); };
    } else if (name == "cubic-bd") {
        f = [](const std::vector<double>& x, double v) {
            const double h = 2.0 * x[0] - 1.0;
            return h * h * h / 3.0 - v * h;
        };
    } else if (name == "random") {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> coef(-1.0, 1.0);
        constexpr int modes = 3;
        std::vector<double> a(modes * modes * 2 + 2 * modes);
        for (auto& c : a) c = coef(rng);
        const bool torus = model.leaf.kind == LeafKind::torus;
        f = [a, two_pi, torus](const std::vector<double>& x, double v) {
            double acc = 0.0;
            std::size_t idx = 0;
            for (int m = 1; m <= modes; ++m) {
                const double scale = 1.0 / static_cast<double>(m * m);
                acc += scale * a[idx++] * std::cos(two_pi * (m * x[0] + v));
                acc += scale * a[idx++] * std::sin(two_pi * m * x[0]);
            }
            if (torus) {
                for (int m = 1; m <= modes; ++m)
                    for (int l = 1; l <= modes; ++l) {
                        const double scale = 1.0 / static_cast<double>(m * m + l * l);
                        acc += scale * a[idx++] * std::cos(two_pi * (m * x[0] + l * x[1] + v));
                        acc += scale * a[idx++] * std::sin(two_pi * (m * x[0] - l * x[1]));
                    }
            }
            return acc;
        };
    } else {
        throw Error("tangential", "InvalidArgument", "unknown leaf function '" + name + "'");
    }
    SampledPhi out(model.samples.size(), std::vector<double>(nv));
    for (std::size_t s = 0; s < model.samples.size(); ++s)
        for (std::size_t i = 0; i < nv; ++i) out[s][i] = f(model.leaf.vertex_coords(i), model.samples[s]);
    return out;
}

std::vector<std::vector<double>> witten_weights(const LeafSpec& leaf, const std::vector<double>& phi, double tau) {
    const std::size_t n = leaf.n;
    if (phi.size() != leaf.vertex_count()) {
        throw Error("tangential", "ShapeMismatch",
                    "phi has " + std::to_string(phi.size()) + " samples, leaf has " +
                        std::to_string(leaf.vertex_count()) + " vertices");
    }
    std::vector<double> vertex(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) vertex[i] = std::exp(tau * phi[i]);
    if (leaf.kind == LeafKind::circle) {
        std::vector<double> edge(n);
        for (std::size_t j = 0; j < n; ++j) edge[j] = std::exp(tau * 0.5 * (phi[j] + phi[(j + 1) % n]));
        return {vertex, edge};
    }
    const std::size_t v = n * n;
    auto vid = [n](std::size_t i, std::size_t j) { return (i % n) * n + (j % n); };
    std::vector<double> edge(2 * v), face(v);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t e = vid(i, j);
            edge[e] = std::exp(tau * 0.5 * (phi[e] + phi[vid(i + 1, j)]));
            edge[v + e] = std::exp(tau * 0.5 * (phi[e] + phi[vid(i, j + 1)]));
            face[e] = std::exp(tau * 0.25 * (phi[e] + phi[vid(i + 1, j)] + phi[vid(i, j + 1)] + phi[vid(i + 1, j + 1)]));
        }
    return {vertex, edge, face};
}

CochainComplex witten_complex(const CochainComplex& base, const std::vector<std::vector<double>>& weights) {
    if (weights.size() != base.dims.size()) throw Error("tangential", "ShapeMismatch", "one weight vector per degree");
    for (std::size_t k = 0; k < weights.size(); ++k)
        if (weights[k].size() != base.dims[k]) throw Error("tangential", "ShapeMismatch", "weight vector has the wrong length");
    CochainComplex out;
    out.dims = base.dims;
    out.grams = base.grams;
    for (std::size_t k = 0; k < base.differentials.size(); ++k) {
        MatrixXcd d = base.differentials[k];
        for (Eigen::Index i = 0; i < d.rows(); ++i)
            for (Eigen::Index j = 0; j < d.cols(); ++j)
                d(i, j) = (1.0 / weights[k + 1][static_cast<std::size_t>(i)]) * d(i, j) * weights[k][static_cast<std::size_t>(j)];
        out.differentials.push_back(std::move(d));
    }
    return out;
}

std::vector<CochainComplex> witten_model(const FoliationModel& model, const SampledPhi& phi, double tau) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw Error("tangential", "InvalidArgument", "tau must be non-negative");
    if (phi.size() != model.samples.size()) {
        throw Error("tangential", "ShapeMismatch", "phi needs one sample vector per transversal sample");
    }
    std::vector<CochainComplex> out;
    for (const auto& p : phi) out.push_back(witten_complex(model.leaf_complex, witten_weights(model.leaf, p, tau)));
    return out;
}

WittenSweepReport witten_betti_sweep(const FoliationModel& model, const SampledPhi& phi,
                                     const std::vector<double>& tau_values, const SweepOptions& options) {
    if (phi.size() != model.samples.size()) {
        throw Error("tangential", "ShapeMismatch", "phi needs one sample vector per transversal sample");
    }
    for (double tau : tau_values)
        if (!(tau >= 0.0) || !std::isfinite(tau)) throw Error("tangential", "InvalidArgument", "tau must be non-negative");

    WittenSweepReport r;
    r.leaf = model.leaf;
    r.weights = model.weights;
    r.tau_values = tau_values;
    const std::size_t nt = tau_values.size();
    const std::size_t nl = model.samples.size();
    const std::size_t degrees = model.leaf_complex.dims.size();

    ComplexTolerances tol;
    tol.rank_tol = options.kernel_tol;
    const HodgePackage base_pkg(model.leaf_complex, tol);

    std::vector<LeafKernelData> flat(nt * nl);
    parallel_for(nt * nl, options.jobs, [&](std::size_t idx) {
        const std::size_t t = idx / nl, v = idx % nl;
        const auto weights = witten_weights(model.leaf, phi[v], tau_values[t]);
        flat[idx] = analyse_leaf(model.leaf_complex, base_pkg, witten_complex(model.leaf_complex, weights), weights, options);
    });

    r.leaves.assign(nt, {});
    for (std::size_t t = 0; t < nt; ++t) {
        std::vector<double> betti(degrees, 0.0);
        for (std::size_t v = 0; v < nl; ++v) {
            const auto& leaf = flat[t * nl + v];
            for (std::size_t k = 0; k < degrees; ++k) {
                betti[k] += model.weights[v] * static_cast<double>(leaf.kernel_dims[k]);
                if (leaf.intertwiner_ranks[k] != leaf.kernel_dims[k]) r.intertwiners_ok = false;
            }
            r.leaves[t].push_back(leaf);
        }
        double euler = 0.0;
        for (std::size_t k = 0; k < degrees; ++k) euler += (k % 2 == 0 ? 1.0 : -1.0) * betti[k];
        r.euler_from_betti.push_back(euler);
        r.betti_table.push_back(std::move(betti));
        bool stable = true;
        for (std::size_t v = 0; v < nl; ++v)
            if (r.leaves[t][v].kernel_dims != r.leaves[0][v].kernel_dims) stable = false;
        if (!stable) r.unstable_taus.push_back(t);
    }
    for (std::size_t v = 0; v < nl; ++v) {
        double chi = 0.0;
        for (std::size_t k = 0; k < degrees; ++k)
            chi += (k % 2 == 0 ? 1.0 : -1.0) * static_cast<double>(model.leaf_complex.dims[k]);
        r.euler_from_dims += model.weights[v] * chi;
    }
    return r;
}

std::vector<double> tangential_betti(const FoliationModel& model, const SweepOptions& options) {
    const auto phi = sample_phi(model, "zero");
    return witten_betti_sweep(model, phi, {0.0}, options).betti_table.front();
}

}  // namespace nchodge
