#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nchodge/cochain.hpp"

namespace nchodge {

enum class LeafKind { circle, torus };

std::string_view to_string(LeafKind kind);
/// Errors: tangential.InvalidArgument for unknown names.
LeafKind parse_leaf_kind(std::string_view name);

struct LeafSpec {
    LeafKind kind = LeafKind::circle;
    /// Points per leaf direction.
    std::size_t n = 16;
    /// Edge length s; the degree-k Gram matrix is s^{p - 2k} times the identity.
    double metric_scale = 1.0;

    std::size_t leaf_dim() const { return kind == LeafKind::circle ? 1 : 2; }
    std::size_t vertex_count() const { return kind == LeafKind::circle ? n : n * n; }
    /// Leaf coordinates of vertex i, each in [0, 1).
    std::vector<double> vertex_coords(std::size_t i) const;
};

/// Product foliation: one leaf complex per transversal sample v with weight w_v.
struct FoliationModel {
    LeafSpec leaf;
    std::vector<double> samples;
    std::vector<double> weights;
    CochainComplex leaf_complex;
};

/// Leaf complex of a circle (forward differences) or a periodic N x N torus.
CochainComplex leaf_complex(const LeafSpec& leaf);

/// Errors: tangential.LeafTooSmall (n < 3), tangential.BadWeights (non-positive,
/// non-finite or not summing to 1, or a count mismatch with samples).
/// Empty weights mean uniform weights.
FoliationModel make_model(const LeafSpec& leaf, std::vector<double> samples, std::vector<double> weights = {});

/// phi sampled per transversal sample, per leaf vertex.
using SampledPhi = std::vector<std::vector<double>>;

/// Builtin leaf functions: "zero", "constant", "cos-h" (cos 2 pi h_1),
/// "cubic-bd" (h^3/3 - v h with h = 2 h_1 - 1), "random" (smooth random
/// Fourier sum from `seed`). Error: tangential.InvalidArgument.
SampledPhi sample_phi(const FoliationModel& model, const std::string& name, std::uint64_t seed = 0);

/// Diagonal of the weight operator e^{tau phi} on k-cells: vertex values,
/// edge means of endpoint values, face means of the four corners.
std::vector<std::vector<double>> witten_weights(const LeafSpec& leaf, const std::vector<double>& phi, double tau);

/// D_tau^k = E_{k+1}^{-1} D^k E_k with the undeformed Gram matrices.
/// Error: tangential.ShapeMismatch.
CochainComplex witten_complex(const CochainComplex& base, const std::vector<std::vector<double>>& weights);

/// Deforms every leaf of the model. Errors: tangential.ShapeMismatch, tangential.InvalidArgument (tau < 0).
std::vector<CochainComplex> witten_model(const FoliationModel& model, const SampledPhi& phi, double tau);

struct LeafKernelData {
    std::vector<std::size_t> kernel_dims;
    std::vector<std::size_t> intertwiner_ranks;
    /// ||Q_tau T P_{Im D}||: T carries exact cochains away from the deformed kernel.
    std::vector<double> block_residuals;
};

struct WittenSweepReport {
    LeafSpec leaf;
    std::vector<double> weights;
    std::vector<double> tau_values;
    /// betti_table[t][k] = sum_v w_v dim Ker Delta^k_{tau_t, L_v}.
    std::vector<std::vector<double>> betti_table;
    /// leaves[t][v]
    std::vector<std::vector<LeafKernelData>> leaves;
    /// tau indices where some leaf's kernel dimension differs from tau = tau_values[0].
    std::vector<std::size_t> unstable_taus;
    /// sum_k (-1)^k beta_k per tau, and the weighted alternating cell count.
    std::vector<double> euler_from_betti;
    double euler_from_dims = 0.0;
    bool intertwiners_ok = true;
};

struct SweepOptions {
    /// Kernel threshold relative to the largest Laplacian eigenvalue.
    double kernel_tol = 1e-8;
    unsigned jobs = 1;
};

WittenSweepReport witten_betti_sweep(const FoliationModel& model, const SampledPhi& phi,
                                     const std::vector<double>& tau_values, const SweepOptions& options = {});

/// Untwisted leaf Betti numbers weighted by the transverse measure.
std::vector<double> tangential_betti(const FoliationModel& model, const SweepOptions& options = {});

}  // namespace nchodge
