#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace nchodge {

/// Leaf derivatives of phi(h, v) on a chart with one leaf coordinate h and
/// one transversal coordinate v.
struct PhiJet {
    double phi = 0.0;
    double h = 0.0;    ///< d phi / dh (the leaf gradient)
    double hh = 0.0;   ///< tangential Hessian
    double hv = 0.0;
    double hhh = 0.0;
    double hhv = 0.0;
};

struct PhiChart {
    std::string name;
    /// Leaf coordinate is periodic on [0, 1) when true, else the interval [h_min, h_max].
    bool periodic = false;
    double h_min = -1.0;
    double h_max = 1.0;
    double v_min = -1.0;
    double v_max = 1.0;
    std::function<PhiJet(double h, double v)> jet;
};

/// "cos-h" (periodic circle chart), "cubic-bd" (h^3/3 - v h) and "constant".
/// Error: morse.InvalidArgument.
PhiChart builtin_chart(const std::string& name);

struct MorseGrid {
    std::size_t nh = 256;
    /// Odd so that the symmetric transversal range contains v = 0.
    std::size_t nv = 21;
    /// Bisection steps allowed per bracket.
    std::size_t refine_cap = 200;
    /// |Hessian| below degenerate_tol * (Hessian scale) counts as degenerate.
    double degenerate_tol = 1e-8;
};

struct Singularity {
    double h = 0.0;
    double v = 0.0;
    double leaf_gradient_norm = 0.0;
    double hessian = 0.0;
    double det = 0.0;
    std::size_t index = 0;
    bool morse = false;
    /// Rank of the Jacobian of (d_F phi, det d_F^2 phi) in (h, v).
    std::size_t birth_death_rank = 0;
    bool birth_death_rank_ok = false;
    /// Tangent of the singular set has a nonzero transversal component.
    bool transverse = false;
    std::size_t family = 0;
};

struct MorseScanReport {
    std::string chart;
    std::size_t leaf_dim = 1;
    double cell_width = 0.0;
    std::vector<double> transversal;
    std::vector<Singularity> singularities;
    std::size_t family_count = 0;
    std::size_t morse_count = 0;
    std::size_t degenerate_count = 0;
    /// Transversal samples whose leaf function is singular everywhere.
    std::vector<double> singular_leaves;
    /// Transverse-measure weight (uniform over samples) of leaves carrying a degenerate point.
    double degenerate_weight = 0.0;
    bool almost_morse = true;
};

/// Error: morse.GridTooCoarse (nh < 8, nv < 1, or a bracket not resolved within refine_cap).
MorseScanReport morse_scan(const PhiChart& chart, const MorseGrid& grid = {});

}  // namespace nchodge
