#pragma once

#include <string>
#include <vector>

#include "nchodge/error.hpp"
#include "nchodge/io.hpp"
#include "nchodge/spectral.hpp"

namespace nchodge {

/// A finished report: JSON document, companion CSV table (possibly empty) and
/// whether every asserted invariant held.
struct Report {
    Json json;
    std::string csv;
    bool ok = true;
};

inline constexpr int report_schema = 1;

/// {"schema", "command", "scalars"} in that order.
Json report_header(const std::string& command, ScalarMode mode);

/// {"code", "module", "kind", "message"}.
Json error_entry(const Error& e);

/// Header plus a failed status carrying one error entry.
Report error_report(const std::string& command, ScalarMode mode, const Error& e);

/// Pretty-printed JSON with a trailing newline.
std::string dump_report(const Json& j);

/// Shortest round-trip decimal, as used in CSV output.
std::string format_double(double x);

Json residual_to_json(const Residual& r, double tol);

/// Algebra description, per-degree bases and the assembled d, b, k, N, 1-k
/// and L blocks, plus the d^2, b^2 and (bd+db) = (1-k) checks.
template <class S>
Report nc_report(const FormsWindow<S>& window, unsigned jobs = 1);

/// Per-degree invariant table on degrees 0..n_max-1. Module errors raised
/// while checking a degree are recorded and mark the report failed.
template <class S>
Report spectral_report(const FormsWindow<S>& window, const SpectralTolerances& tol = {}, unsigned jobs = 1);

/// Laplacian spectra, harmonic dimensions and both Betti computations.
Report hodge_report(const CochainComplex& complex, const ComplexTolerances& tol = {});

/// `command` is "torsion" or "cs-partition"; the latter requires degrees 0 and 1.
Report torsion_report(const CochainComplex& complex, const ComplexTolerances& tol = {},
                      const std::string& command = "torsion");

Report witten_sweep_report(const ModelInput& input, const SweepOptions& options = {});

Report morse_report(const MorseInput& input);

/// Tolerance for the gauge and grid-refinement checks of the GV report.
inline constexpr double gv_invariance_tol = 1e-6;

Report gv_report(const GVInput& input, const GVOptions& options = {});

}  // namespace nchodge
