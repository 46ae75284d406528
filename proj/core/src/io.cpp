#include "nchodge/io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include "nchodge/error.hpp"

namespace nchodge {

namespace {

Json integer_to_json(const mpz_class& z) {
    if (z.fits_slong_p()) return Json(z.get_si());
    return Json(z.get_str());
}

mpz_class integer_from_json(const Json& j) {
    if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()));
    if (j.is_number_unsigned()) return mpz_class(std::to_string(j.get<unsigned long long>()));
    if (j.is_string()) {
        mpz_class z;
        if (z.set_str(j.get<std::string>(), 10) != 0) throw Error("io", "BadScalar", "not an integer: " + j.dump());
        return z;
    }
    throw Error("io", "BadScalar", "expected an integer, got " + j.dump());
}

const Json& require(const Json& doc, const char* key) {
    if (!doc.is_object() || !doc.contains(key)) throw Error("io", "BadInput", std::string("missing field '") + key + "'");
    return doc.at(key);
}

std::size_t size_field(const Json& j, const char* what) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
        throw Error("io", "BadInput", std::string(what) + " must be a non-negative integer");
    }
    return j.get<std::size_t>();
}

double real_from_json(const Json& j, const char* what) {
    if (!j.is_number()) throw Error("io", "BadInput", std::string(what) + " must be a number");
    return j.get<double>();
}

std::vector<double> real_array(const Json& j, const char* what) {
    if (!j.is_array()) throw Error("io", "BadInput", std::string(what) + " must be an array");
    std::vector<double> out;
    for (const auto& x : j) out.push_back(real_from_json(x, what));
    return out;
}

template <class S>
std::vector<std::vector<S>> dense_matrix(const Json& j, ScalarMode mode, std::size_t rows, std::size_t cols, const std::string& what) {
    if (!j.is_array() || j.size() != rows) {
        throw Error("io", "BadInput", what + " must have " + std::to_string(rows) + " rows");
    }
    std::vector<std::vector<S>> out;
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != cols) {
            throw Error("io", "BadInput", what + " rows must have " + std::to_string(cols) + " entries");
        }
        std::vector<S> r;
        for (const auto& x : row) r.push_back(scalar_from_json<S>(x, mode));
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace

Json to_json(const Rational& q) {
    Rational c = q;
    c.canonicalize();
    return Json::array({integer_to_json(c.get_num()), integer_to_json(c.get_den())});
}

Json to_json(const Gaussian& z) { return Json::array({to_json(z.re), to_json(z.im)}); }

Json to_json(const Complex& z) { return Json::array({real_to_json(z.real()), real_to_json(z.imag())}); }

Json real_to_json(double x) {
    if (!std::isfinite(x)) return Json(nullptr);
    if (x == 0.0) return Json(0.0);
    return Json(x);
}

Rational rational_from_json(const Json& j) {
    if (j.is_number_integer() || j.is_number_unsigned()) return Rational(integer_from_json(j));
    if (j.is_string()) {
        Rational q;
        if (q.set_str(j.get<std::string>(), 10) != 0) throw Error("io", "BadScalar", "not a rational: " + j.dump());
        q.canonicalize();
        return q;
    }
    if (j.is_array() && j.size() == 2) {
        const mpz_class num = integer_from_json(j[0]);
        const mpz_class den = integer_from_json(j[1]);
        if (den == 0) throw Error("io", "BadScalar", "zero denominator in " + j.dump());
        Rational q(num, den);
        q.canonicalize();
        return q;
    }
    if (j.is_number_float()) {
        throw Error("io", "BadScalar", "floating-point value " + j.dump() + " in an exact-mode input; write [num, den]");
    }
    throw Error("io", "BadScalar", "cannot read a rational from " + j.dump());
}

Gaussian gaussian_from_json(const Json& j) {
    if (j.is_array() && j.size() == 2) return Gaussian(rational_from_json(j[0]), rational_from_json(j[1]));
    return Gaussian(rational_from_json(j));
}

Complex complex_from_json(const Json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
    if (j.is_array() && j.size() == 2) {
        const Gaussian g = gaussian_from_json(j);
        return ScalarTraits<Gaussian>::to_complex(g);
    }
    return ScalarTraits<Rational>::to_complex(rational_from_json(j));
}

template <class S>
S scalar_from_json(const Json& j, ScalarMode file_mode) {
    switch (file_mode) {
        case ScalarMode::rational: return convert_scalar<S>(rational_from_json(j));
        case ScalarMode::gaussian: return convert_scalar<S>(gaussian_from_json(j));
        case ScalarMode::complex_float:
            if constexpr (ScalarTraits<S>::exact) {
                throw Error("io", "ModeMismatch", "float-valued input cannot be analysed in an exact scalar mode");
            } else {
                return complex_from_json(j);
            }
    }
    throw Error("io", "BadScalar", "unknown scalar mode");
}

template Rational scalar_from_json<Rational>(const Json&, ScalarMode);
template Gaussian scalar_from_json<Gaussian>(const Json&, ScalarMode);
template Complex scalar_from_json<Complex>(const Json&, ScalarMode);

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("io", "FileNotFound", "cannot open '" + path.string() + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error("io", "ParseError", "'" + path.string() + "': " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("io", "WriteFailed", "cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw Error("io", "WriteFailed", "write to '" + path.string() + "' failed");
}

ScalarMode declared_mode(const Json& doc) {
    if (!doc.is_object() || !doc.contains("scalars")) return ScalarMode::rational;
    if (!doc["scalars"].is_string()) throw Error("io", "BadInput", "'scalars' must be a string");
    return parse_scalar_mode(doc["scalars"].get<std::string>());
}

template <class S>
Algebra<S> algebra_from_json(const Json& doc) {
    const ScalarMode mode = declared_mode(doc);
    const std::size_t dim = size_field(require(doc, "dim"), "dim");
    std::vector<std::string> labels;
    if (doc.contains("basis")) {
        if (!doc["basis"].is_array()) throw Error("io", "BadInput", "'basis' must be an array of labels");
        for (const auto& l : doc["basis"]) {
            if (!l.is_string()) throw Error("io", "BadInput", "basis labels must be strings");
            labels.push_back(l.get<std::string>());
        }
    } else {
        for (std::size_t i = 0; i < dim; ++i) labels.push_back("e" + std::to_string(i));
    }
    const Json& unit_json = require(doc, "unit");
    if (!unit_json.is_array() || unit_json.size() != dim) {
        throw Error("algebra", "ShapeMismatch", "unit must have " + std::to_string(dim) + " coordinates");
    }
    std::vector<S> unit;
    for (const auto& x : unit_json) unit.push_back(scalar_from_json<S>(x, mode));

    const Json& mul = require(doc, "mul");
    StructureConstants<S> c(dim);
    if (!mul.is_array() || mul.size() != dim) throw Error("algebra", "ShapeMismatch", "mul must be a dim x dim x dim array");
    for (std::size_t i = 0; i < dim; ++i) {
        if (!mul[i].is_array() || mul[i].size() != dim) throw Error("algebra", "ShapeMismatch", "mul must be a dim x dim x dim array");
        for (std::size_t j = 0; j < dim; ++j) {
            if (!mul[i][j].is_array() || mul[i][j].size() != dim) {
                throw Error("algebra", "ShapeMismatch", "mul must be a dim x dim x dim array");
            }
            for (std::size_t k = 0; k < dim; ++k) c(i, j, k) = scalar_from_json<S>(mul[i][j][k], mode);
        }
    }
    auto algebra = Algebra<S>::make(dim, std::move(labels), c, std::move(unit));
    if (doc.contains("name") && doc["name"].is_string()) algebra.set_name(doc["name"].get<std::string>());
    return algebra;
}

template Algebra<Rational> algebra_from_json<Rational>(const Json&);
template Algebra<Gaussian> algebra_from_json<Gaussian>(const Json&);
template Algebra<Complex> algebra_from_json<Complex>(const Json&);

CochainComplex cochain_complex_from_json(const Json& doc) {
    const ScalarMode mode = declared_mode(doc);
    const Json& dims_json = require(doc, "dims");
    if (!dims_json.is_array() || dims_json.empty()) throw Error("hodge", "ShapeMismatch", "'dims' must be a non-empty array");
    std::vector<std::size_t> dims;
    for (const auto& d : dims_json) dims.push_back(size_field(d, "dims entry"));

    const Json& diffs = require(doc, "differentials");
    if (!diffs.is_array() || diffs.size() + 1 != dims.size()) {
        throw Error("hodge", "ShapeMismatch", "expected " + std::to_string(dims.size() - 1) + " differentials");
    }
    std::vector<Eigen::MatrixXcd> grams;
    if (doc.contains("gram") && !doc["gram"].is_null()) {
        const Json& g = doc["gram"];
        if (!g.is_array() || g.size() != dims.size()) throw Error("hodge", "BadGram", "one Gram matrix per degree required");
        for (std::size_t k = 0; k < dims.size(); ++k) {
            const auto rows = dense_matrix<Complex>(g[k], mode, dims[k], dims[k],
                                                    "gram[" + std::to_string(k) + "]");
            Eigen::MatrixXcd m(static_cast<Eigen::Index>(dims[k]), static_cast<Eigen::Index>(dims[k]));
            for (std::size_t i = 0; i < dims[k]; ++i)
                for (std::size_t j = 0; j < dims[k]; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
            grams.push_back(std::move(m));
        }
    }
    if (mode == ScalarMode::complex_float) {
        std::vector<Eigen::MatrixXcd> ds;
        for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
            const auto rows = dense_matrix<Complex>(diffs[k], mode, dims[k + 1], dims[k], "differentials[" + std::to_string(k) + "]");
            Eigen::MatrixXcd m(static_cast<Eigen::Index>(dims[k + 1]), static_cast<Eigen::Index>(dims[k]));
            for (std::size_t i = 0; i < dims[k + 1]; ++i)
                for (std::size_t j = 0; j < dims[k]; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
            ds.push_back(std::move(m));
        }
        return make_complex(std::move(dims), std::move(ds), std::move(grams));
    }
    std::vector<Matrix<Gaussian>> ds;
    for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
        const auto rows = dense_matrix<Gaussian>(diffs[k], mode, dims[k + 1], dims[k], "differentials[" + std::to_string(k) + "]");
        Matrix<Gaussian> m(dims[k + 1], dims[k]);
        for (std::size_t i = 0; i < dims[k + 1]; ++i)
            for (std::size_t j = 0; j < dims[k]; ++j) m(i, j) = rows[i][j];
        ds.push_back(std::move(m));
    }
    return make_exact_complex(std::move(dims), std::move(ds), std::move(grams));
}

ModelInput model_from_json(const Json& doc, std::uint64_t seed) {
    const Json& leaf_json = require(doc, "leaf");
    LeafSpec leaf;
    leaf.kind = parse_leaf_kind(require(leaf_json, "kind").get<std::string>());
    leaf.n = size_field(require(leaf_json, "n"), "leaf.n");
    if (leaf_json.contains("metric_scale")) leaf.metric_scale = real_from_json(leaf_json["metric_scale"], "leaf.metric_scale");

    const Json& tr = require(doc, "transversal");
    std::vector<double> samples = real_array(require(tr, "samples"), "transversal.samples");
    std::vector<double> weights;
    if (tr.contains("weights")) weights = real_array(tr["weights"], "transversal.weights");

    ModelInput in;
    in.model = make_model(leaf, std::move(samples), std::move(weights));

    const Json phi = doc.contains("phi") ? doc["phi"] : Json("zero");
    if (phi.is_string()) {
        in.phi_name = phi.get<std::string>();
        in.phi = sample_phi(in.model, in.phi_name, seed);
    } else if (phi.is_object()) {
        in.phi_name = require(phi, "builtin").get<std::string>();
        const std::uint64_t s = phi.contains("seed") ? phi["seed"].get<std::uint64_t>() : seed;
        in.phi = sample_phi(in.model, in.phi_name, s);
    } else if (phi.is_array()) {
        in.phi_name = "sampled";
        if (phi.size() != in.model.samples.size()) {
            throw Error("tangential", "ShapeMismatch", "phi needs one array per transversal sample");
        }
        for (const auto& row : phi) {
            auto values = real_array(row, "phi");
            if (values.size() != leaf.vertex_count()) {
                throw Error("tangential", "ShapeMismatch", "phi arrays need one value per leaf vertex");
            }
            in.phi.push_back(std::move(values));
        }
    } else {
        throw Error("io", "BadInput", "'phi' must be a name, an object or an array");
    }
    in.taus = doc.contains("tau") ? real_array(doc["tau"], "tau") : std::vector<double>{0.0, 0.5, 1.0, 2.0, 5.0};
    return in;
}

MorseInput morse_from_json(const Json& doc) {
    MorseInput in;
    in.chart = builtin_chart(require(doc, "chart").get<std::string>());
    if (doc.contains("grid")) {
        const Json& g = doc["grid"];
        if (g.contains("nh")) in.grid.nh = size_field(g["nh"], "grid.nh");
        if (g.contains("nv")) in.grid.nv = size_field(g["nv"], "grid.nv");
        if (g.contains("refine_cap")) in.grid.refine_cap = size_field(g["refine_cap"], "grid.refine_cap");
    }
    if (doc.contains("v_range")) {
        const auto r = real_array(doc["v_range"], "v_range");
        if (r.size() != 2 || !(r[1] >= r[0])) throw Error("io", "BadInput", "'v_range' must be [lo, hi]");
        in.chart.v_min = r[0];
        in.chart.v_max = r[1];
    }
    return in;
}

GVInput gv_from_json(const Json& doc) {
    GVInput in;
    if (doc.contains("n")) in.n = size_field(doc["n"], "n");
    if (doc.contains("method")) in.method = parse_derivative_method(doc["method"].get<std::string>());
    const Json& omega = require(doc, "omega");
    if (omega.is_string()) {
        in.analytic = builtin_one_form(omega.get<std::string>());
        return in;
    }
    OneFormField f;
    f.n = in.n;
    f.wx = real_array(require(omega, "wx"), "omega.wx");
    f.wy = real_array(require(omega, "wy"), "omega.wy");
    f.wz = real_array(require(omega, "wz"), "omega.wz");
    in.sampled = std::move(f);
    return in;
}

}  // namespace nchodge
