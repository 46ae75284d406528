#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nchodge/acceptance.hpp"
#include "nchodge/error.hpp"
#include "nchodge/io.hpp"
#include "nchodge/reports.hpp"

namespace {

using namespace nchodge;

struct Options {
    std::string algebra;
    std::string complex_path;
    std::string model;
    std::string chart;
    std::string omega;
    std::size_t nmax = 4;
    std::optional<std::size_t> grid_n;
    std::optional<std::size_t> nh;
    std::optional<std::size_t> nv;
    std::string method;
    std::vector<double> taus;
    std::optional<std::string> scalar;
    std::string out;
    std::string csv;
    double rank_tol = 1e-10;
    double eig_tol = 1e-8;
    double residual_tol = 1e-10;
    double kernel_tol = 1e-8;
    double gv_tol = 1e-8;
    std::uint64_t seed = 1;
    unsigned jobs = 1;
};

/// Raised for problems with the user's input (exit code 1).
struct InputError {
    Error error;
};

template <class F>
auto load(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        throw InputError{e};
    }
}

std::size_t window_cap() {
    const char* env = std::getenv("NCHODGE_CAP");
    if (!env || !*env) return FormsWindow<Rational>::default_cap;
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(env, &pos);
        if (pos != std::string(env).size() || v == 0) throw std::invalid_argument(env);
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw InputError{Error("cli", "BadEnvironment", std::string("NCHODGE_CAP must be a positive integer, got '") + env + "'")};
    }
}

Json algebra_document(const std::string& source) {
    if (std::filesystem::exists(source)) return read_json_file(source);
    for (const auto& name : algebras::names()) {
        if (name == source) return Json{{"builtin", name}};
    }
    return read_json_file(source);
}

template <class S>
Algebra<S> load_algebra(const Json& doc) {
    if (doc.contains("builtin")) return algebras::by_name<S>(doc["builtin"].get<std::string>());
    return algebra_from_json<S>(doc);
}

template <class S>
Report algebra_command(const std::string& command, const Json& doc, const Options& o) {
    const std::size_t cap = window_cap();
    const FormsWindow<S> window = load([&] { return FormsWindow<S>(load_algebra<S>(doc), o.nmax, cap); });
    if (command == "nc-report") return nc_report(window, o.jobs);
    SpectralTolerances tol;
    tol.eig_tol = o.eig_tol;
    tol.residual_tol = o.residual_tol;
    return spectral_report(window, tol, o.jobs);
}

Report run_algebra(const std::string& command, const Options& o) {
    if (o.algebra.empty()) throw InputError{Error("cli", "MissingInput", command + " needs --algebra")};
    const Json doc = load([&] { return algebra_document(o.algebra); });
    const ScalarMode file_mode = load([&] { return declared_mode(doc); });
    const ScalarMode mode = o.scalar ? load([&] { return parse_scalar_mode(*o.scalar); }) : file_mode;
    if (file_mode == ScalarMode::complex_float && mode != ScalarMode::complex_float) {
        throw InputError{Error("io", "ModeMismatch", "float algebra data cannot be used in an exact scalar mode")};
    }
    switch (mode) {
        case ScalarMode::rational: return algebra_command<Rational>(command, doc, o);
        case ScalarMode::gaussian: return algebra_command<Gaussian>(command, doc, o);
        case ScalarMode::complex_float: break;
    }
    return algebra_command<Complex>(command, doc, o);
}

Report run_complex(const std::string& command, const Options& o) {
    if (o.complex_path.empty()) throw InputError{Error("cli", "MissingInput", command + " needs --complex")};
    const Json doc = load([&] { return read_json_file(o.complex_path); });
    ComplexTolerances tol;
    tol.rank_tol = o.rank_tol;
    CochainComplex c = load([&] { return cochain_complex_from_json(doc); });
    const ScalarMode file_mode = load([&] { return declared_mode(doc); });
    if (o.scalar) {
        const ScalarMode m = load([&] { return parse_scalar_mode(*o.scalar); });
        if (m == ScalarMode::complex_float) c.exact_differentials.reset();
    }
    Report r = command == "hodge" ? hodge_report(c, tol) : torsion_report(c, tol, command);
    r.json["scalars"] = std::string(to_string(c.exact_differentials ? file_mode : ScalarMode::complex_float));
    return r;
}

Report run_witten(const Options& o) {
    if (o.model.empty()) throw InputError{Error("cli", "MissingInput", "witten-sweep needs --model")};
    ModelInput in = load([&] { return model_from_json(read_json_file(o.model), o.seed); });
    if (!o.taus.empty()) in.taus = o.taus;
    for (double t : in.taus)
        if (!(t >= 0.0)) throw InputError{Error("tangential", "InvalidArgument", "tau values must be non-negative")};
    SweepOptions opt;
    opt.kernel_tol = o.kernel_tol;
    opt.jobs = o.jobs;
    return witten_sweep_report(in, opt);
}

Report run_morse(const Options& o) {
    MorseInput in = load([&] {
        if (!o.model.empty()) return morse_from_json(read_json_file(o.model));
        return MorseInput{builtin_chart(o.chart.empty() ? "cos-h" : o.chart), {}};
    });
    if (o.nh) in.grid.nh = *o.nh;
    if (o.nv) in.grid.nv = *o.nv;
    return morse_report(in);
}

Report run_gv(const Options& o) {
    GVInput in = load([&] {
        if (!o.model.empty()) return gv_from_json(read_json_file(o.model));
        GVInput g;
        g.analytic = builtin_one_form(o.omega.empty() ? "dz+sin(2piz)dx" : o.omega);
        return g;
    });
    if (o.grid_n) {
        in.n = *o.grid_n;
        if (in.sampled) in.sampled->n = *o.grid_n;
    }
    GVOptions opt;
    opt.gv_tol = o.gv_tol;
    opt.method = in.method;
    if (!o.method.empty()) opt.method = load([&] { return parse_derivative_method(o.method); });
    return gv_report(in, opt);
}

/// Mode named by --scalar, or rational when absent or unparsable.
ScalarMode requested_mode(const Options& o) {
    if (!o.scalar) return ScalarMode::rational;
    try {
        return parse_scalar_mode(*o.scalar);
    } catch (const Error&) {
        return ScalarMode::rational;
    }
}

void emit(const Report& r, const Options& o) {
    const std::string text = dump_report(r.json);
    if (o.out.empty()) {
        std::cout << text;
    } else {
        write_text_file(o.out, text);
    }
    if (!o.csv.empty()) write_text_file(o.csv, r.csv);
}

int run_selftest(const Options& o) {
    AcceptanceOptions a;
    a.mode = o.scalar ? load([&] { return parse_scalar_mode(*o.scalar); }) : ScalarMode::rational;
    a.seed = o.seed;
    a.jobs = o.jobs;
    a.on_result = [](const CriterionResult& r) { std::cout << format_result(r) << std::endl; };
    const auto results = run_acceptance(a);
    std::size_t passed = 0;
    Json j = report_header("selftest", a.mode);
    j["seed"] = o.seed;
    Json list = Json::array();
    for (const auto& r : results) {
        passed += r.passed ? 1 : 0;
        list.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}});
    }
    j["criteria"] = std::move(list);
    j["status"] = passed == results.size() ? "ok" : "failed";
    j["errors"] = Json::array();
    std::cout << passed << "/" << results.size() << " criteria passed" << std::endl;
    if (!o.out.empty()) write_text_file(o.out, dump_report(j));
    return passed == results.size() ? 0 : 2;
}

int dispatch(const std::string& command, const Options& o) {
    if (command == "selftest") return run_selftest(o);
    Report r;
    try {
        if (command == "nc-report" || command == "spectral") {
            r = run_algebra(command, o);
        } else if (command == "hodge" || command == "torsion" || command == "cs-partition") {
            r = run_complex(command, o);
        } else if (command == "witten-sweep") {
            r = run_witten(o);
        } else if (command == "morse-scan") {
            r = run_morse(o);
        } else {
            r = run_gv(o);
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.error.code() << ": " << e.error.what() << "\n";
        if (!o.out.empty()) write_text_file(o.out, dump_report(error_report(command, requested_mode(o), e.error).json));
        return 1;
    } catch (const Error& e) {
        r = error_report(command, requested_mode(o), e);
    }
    emit(r, o);
    if (!r.ok) {
        for (const auto& e : r.json["errors"]) std::cerr << "error: " << e["code"].get<std::string>() << ": " << e["message"].get<std::string>() << "\n";
        if (r.json["errors"].empty()) std::cerr << "error: invariant check failed, see report\n";
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Noncommutative Hodge theory, torsion and tangential Witten deformation workbench"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;

    app.add_option("--out", o.out, "Write the JSON report here instead of standard output");
    app.add_option("--csv", o.csv, "Write the companion CSV table here");
    app.add_option("--scalar", o.scalar, "Scalar mode: rational, gaussian or float");
    app.add_option("--rank-tol", o.rank_tol, "Relative eigenvalue threshold for kernels of Laplacians")->check(CLI::PositiveNumber);
    app.add_option("--eig-tol", o.eig_tol, "Eigenvalue clustering tolerance for the Karoubi spectrum")->check(CLI::PositiveNumber);
    app.add_option("--residual-tol", o.residual_tol, "Residual threshold in float mode")->check(CLI::PositiveNumber);
    app.add_option("--kernel-tol", o.kernel_tol, "Relative kernel threshold for leaf Laplacians")->check(CLI::PositiveNumber);
    app.add_option("--gv-tol", o.gv_tol, "Integrability tolerance for the Godbillon-Vey computation")->check(CLI::PositiveNumber);
    app.add_option("--seed", o.seed, "Seed for randomized inputs");
    app.add_option("--jobs", o.jobs, "Maximum concurrent tasks")->check(CLI::PositiveNumber);
    app.set_help_all_flag("--help-all", "Show help for every command");

    auto* nc = app.add_subcommand("nc-report", "Form-space bases and operator matrices d, b, k, N, 1-k, L");
    auto* spectral = app.add_subcommand("spectral", "Harmonic projection, Green operator and Karoubi spectrum per degree");
    for (auto* sub : {nc, spectral}) {
        sub->add_option("--algebra", o.algebra, "Algebra JSON file or builtin name")->required();
        sub->add_option("--nmax", o.nmax, "Highest form degree")->capture_default_str();
    }
    auto* hodge = app.add_subcommand("hodge", "Laplacians, harmonic forms and Betti numbers of a cochain complex");
    auto* torsion = app.add_subcommand("torsion", "Zeta-regularized determinants and torsion");
    auto* cs = app.add_subcommand("cs-partition", "Abelian Chern-Simons partition function");
    for (auto* sub : {hodge, torsion, cs}) sub->add_option("--complex", o.complex_path, "Cochain complex JSON file")->required();

    auto* witten = app.add_subcommand("witten-sweep", "Witten-deformed leafwise Betti numbers over tau");
    witten->add_option("--model", o.model, "Foliation model JSON file")->required();
    witten->add_option("--tau", o.taus, "Deformation parameters (overrides the model file)");

    auto* morse = app.add_subcommand("morse-scan", "Tangential singularities of a leaf function");
    morse->add_option("--model", o.model, "Chart JSON file");
    morse->add_option("--chart", o.chart, "Builtin chart: cos-h, cubic-bd, constant");
    morse->add_option("--nh", o.nh, "Leaf grid points");
    morse->add_option("--nv", o.nv, "Transversal grid points");

    auto* gv = app.add_subcommand("gv", "Godbillon-Vey invariant of a 1-form on the 3-torus");
    gv->add_option("--model", o.model, "One-form JSON file");
    gv->add_option("--omega", o.omega, "Builtin one-form: dz, dz+sin(2piz)dx, dz+xdy");
    gv->add_option("--n", o.grid_n, "Grid points per direction");
    gv->add_option("--method", o.method, "Derivatives: spectral or central");

    app.add_subcommand("selftest", "Run every acceptance check on bundled inputs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return dispatch(command, o);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.error.code() << ": " << e.error.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
        return 2;
    }
}
