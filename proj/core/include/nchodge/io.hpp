#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nchodge/algebra.hpp"
#include "nchodge/cochain.hpp"
#include "nchodge/godbillon_vey.hpp"
#include "nchodge/morse.hpp"
#include "nchodge/tangential.hpp"

namespace nchodge {

/// Insertion-ordered JSON so emitted reports are byte-stable.
using Json = nlohmann::ordered_json;

/// Exact numbers become [num, den] (decimal strings once beyond 64 bits);
/// Gaussian values [re, im] of such pairs; floats [re, im] or plain numbers.
Json to_json(const Rational& q);
Json to_json(const Gaussian& z);
Json to_json(const Complex& z);
Json real_to_json(double x);

/// Accepts integers, [num, den] pairs (integers or strings) and "p/q" strings.
/// Error: io.BadScalar.
Rational rational_from_json(const Json& j);
/// A pair [re, im] of rationals, or a bare integer / "p/q" string for a real value.
Gaussian gaussian_from_json(const Json& j);
/// A number or [re, im] numbers; exact encodings are accepted and rounded.
Complex complex_from_json(const Json& j);

/// Reads a scalar written in `file_mode` and converts it to S.
/// Error: io.ModeMismatch (float input requested in an exact mode).
template <class S>
S scalar_from_json(const Json& j, ScalarMode file_mode);

/// Errors: io.FileNotFound, io.ParseError.
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Scalar mode declared by an input document ("scalars"), default rational.
ScalarMode declared_mode(const Json& doc);

/// {"name", "dim", "basis", "unit", "mul": c[i][j][k], "scalars"}.
/// Errors: io.BadInput plus the algebra validation errors.
template <class S>
Algebra<S> algebra_from_json(const Json& doc);

/// {"dims", "differentials", "gram"?, "scalars"}.
CochainComplex cochain_complex_from_json(const Json& doc);

struct ModelInput {
    FoliationModel model;
    SampledPhi phi;
    std::string phi_name;
    std::vector<double> taus;
};

/// {"leaf": {"kind", "n", "metric_scale"}, "transversal": {"samples", "weights"},
///  "phi": name | {"builtin", "seed"} | [[per-vertex samples]], "tau": [...]}
ModelInput model_from_json(const Json& doc, std::uint64_t seed);

struct MorseInput {
    PhiChart chart;
    MorseGrid grid;
};

/// {"chart": name, "grid": {"nh", "nv", "refine_cap"}, "v_range": [lo, hi]}.
MorseInput morse_from_json(const Json& doc);

struct GVInput {
    std::optional<AnalyticOneForm> analytic;
    std::optional<OneFormField> sampled;
    std::size_t n = 32;
    DerivativeMethod method = DerivativeMethod::spectral;
};

/// {"n", "omega": name | {"wx", "wy", "wz"}, "method"}.
GVInput gv_from_json(const Json& doc);

}  // namespace nchodge
