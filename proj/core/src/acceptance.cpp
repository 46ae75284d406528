#include "nchodge/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "nchodge/cochain.hpp"
#include "nchodge/error.hpp"
#include "nchodge/forms.hpp"
#include "nchodge/godbillon_vey.hpp"
#include "nchodge/morse.hpp"
#include "nchodge/reports.hpp"
#include "nchodge/spectral.hpp"
#include "nchodge/tangential.hpp"

namespace nchodge {

namespace {

using Clock = std::chrono::steady_clock;

struct SuiteEntry {
    const char* name;
    std::size_t n_max;
};

constexpr SuiteEntry suite[] = {{"dual_numbers", 4}, {"c_plus_c", 4}, {"m2", 2}, {"group_z3", 4}};

std::string sci(double x) {
    std::ostringstream os;
    os.precision(2);
    os << std::scientific << x;
    return os.str();
}

/// Running summary of a batch of residual checks.
struct Tally {
    std::size_t checks = 0;
    std::size_t failures = 0;
    double worst = 0.0;
    std::string first_failure;

    void add(bool ok, double value, const std::string& where) {
        ++checks;
        worst = std::max(worst, value);
        if (!ok) {
            if (failures == 0) first_failure = where;
            ++failures;
        }
    }
    void add(const Residual& r, double tol, const std::string& where) { add(r.passes(tol), r.value, where + ": " + r.name); }
    bool ok() const { return failures == 0 && checks > 0; }
    std::string summary(bool exact) const {
        std::string s = std::to_string(checks) + " checks, max residual " + sci(worst);
        if (exact) s += " (exact)";
        if (failures) s += "; " + std::to_string(failures) + " failed, first " + first_failure;
        return s;
    }
};

template <class S>
double form_difference(const Form<S>& a, const Form<S>& b, bool& exact_equal) {
    std::set<std::size_t> degrees;
    for (const auto& [deg, c] : a.components) degrees.insert(deg);
    for (const auto& [deg, c] : b.components) degrees.insert(deg);
    double worst = 0.0;
    exact_equal = true;
    for (std::size_t deg : degrees) {
        const auto* x = a.at(deg);
        const auto* y = b.at(deg);
        const std::size_t len = std::max(x ? x->size() : 0, y ? y->size() : 0);
        for (std::size_t i = 0; i < len; ++i) {
            const S xi = x && i < x->size() ? (*x)[i] : from_int<S>(0);
            const S yi = y && i < y->size() ? (*y)[i] : from_int<S>(0);
            const S diff = xi - yi;
            if (!is_zero(diff)) exact_equal = false;
            worst = std::max(worst, ScalarTraits<S>::abs(diff));
        }
    }
    return worst;
}

template <class S>
Form<S> random_form(const FormsWindow<S>& w, std::size_t degree, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> coef(-3, 3);
    Form<S> f;
    std::vector<S> c(w.degree_dim(degree));
    for (auto& x : c) x = from_int<S>(coef(rng));
    f.components[degree] = std::move(c);
    return f;
}

template <class S>
Form<S> scaled(Form<S> f, long s) {
    for (auto& [deg, c] : f.components)
        for (auto& x : c) x = x * from_int<S>(s);
    return f;
}

template <class S>
Form<S> subtract(const Form<S>& a, const Form<S>& b) {
    Form<S> out = a;
    for (const auto& [deg, c] : b.components) {
        auto& dst = out.components[deg];
        if (dst.empty()) dst.assign(c.size(), from_int<S>(0));
        for (std::size_t i = 0; i < c.size(); ++i) dst[i] = dst[i] - c[i];
    }
    return out;
}

/// Operator-identity data for the algebra suite in one scalar mode, built once.
template <class S>
class AlgebraSuite {
public:
    struct Entry {
        std::string name;
        FormsWindow<S> window;
        std::vector<DegreeInvariants> degrees;
    };

    AlgebraSuite(unsigned jobs, const SpectralTolerances& tol) : tol_(tol) {
        for (const auto& s : suite) {
            FormsWindow<S> w(algebras::by_name<S>(s.name), s.n_max);
            w.assemble(jobs);
            entries_.push_back(Entry{s.name, std::move(w), {}});
        }
        for (auto& e : entries_) {
            e.degrees.resize(e.window.n_max());
            for (std::size_t n = 0; n < e.window.n_max(); ++n) e.degrees[n] = degree_invariants(e.window, n, tol_);
        }
    }

    const std::vector<Entry>& entries() const { return entries_; }
    const SpectralTolerances& tol() const { return tol_; }

    /// Adds every residual whose name is listed.
    void collect(Tally& t, const std::set<std::string>& names) const {
        for (const auto& e : entries_)
            for (const auto& inv : e.degrees)
                for (const auto& r : inv.residuals)
                    if (names.count(r.name)) t.add(r, tol_.residual_tol, e.name + " degree " + std::to_string(inv.degree));
    }

private:
    SpectralTolerances tol_;
    std::vector<Entry> entries_;
};

constexpr bool exact_mode(ScalarMode m) { return m != ScalarMode::complex_float; }

template <class S>
CriterionResult karoubi_laplacian(const AlgebraSuite<S>& suite_data) {
    CriterionResult r;
    Tally exact;
    suite_data.collect(exact, {"(bd+db)-(1-k)"});
    // Float shadow on the same windows.
    Tally shadow;
    for (const auto& e : suite_data.entries()) {
        FormsWindow<Complex> fw(e.window.algebra().template cast<Complex>(), e.window.n_max());
        for (std::size_t n = 0; n < fw.n_max(); ++n) {
            const double res = (fw.laplacian_block(n) - fw.one_minus_k_block(n)).max_abs();
            shadow.add(res < 1e-12, res, e.name + " degree " + std::to_string(n));
        }
    }
    r.passed = exact.ok() && shadow.ok();
    r.detail = exact.summary(ScalarTraits<S>::exact) + "; float residual max " + sci(shadow.worst) + " (< 1e-12)";
    return r;
}

template <class S>
CriterionResult karoubi_relations(const AlgebraSuite<S>& suite_data) {
    CriterionResult r;
    Tally t;
    suite_data.collect(t, {"(k^n-1)(k^(n+1)-1)", "k^(n+1) d - d", "k^n - 1 - b k^n d", "k^(n+1) - 1 + db"});
    r.passed = t.ok();
    r.detail = t.summary(ScalarTraits<S>::exact);
    return r;
}

template <class S>
CriterionResult harmonic_decomposition(const AlgebraSuite<S>& suite_data) {
    CriterionResult r;
    std::size_t rank_checks = 0, rank_failures = 0;
    Tally proj;
    for (const auto& e : suite_data.entries()) {
        for (const auto& inv : e.degrees) {
            ++rank_checks;
            if (inv.rank_P + inv.rank_one_minus_k_sq != inv.dim || inv.rank_P != inv.dim_ker_one_minus_k_sq) ++rank_failures;
            const auto data = harmonic_projection(e.window, inv.degree, ProjectionMethod::polynomial, suite_data.tol());
            const Eigen::MatrixXcd independent = riesz_projection(e.window.k_block(inv.degree).to_eigen(), inv.degree);
            const double diff =
                inv.dim == 0 ? 0.0 : (data.P.to_eigen() - independent).cwiseAbs().maxCoeff();
            proj.add(diff <= 1e-10, diff, e.name + " degree " + std::to_string(inv.degree));
        }
    }
    r.passed = rank_failures == 0 && proj.ok();
    r.detail = std::to_string(rank_checks - rank_failures) + "/" + std::to_string(rank_checks) +
               " rank identities hold; polynomial vs contour projection max diff " + sci(proj.worst) + " (<= 1e-10)";
    return r;
}

template <class S>
CriterionResult exact_coexact_split(const AlgebraSuite<S>& suite_data) {
    CriterionResult r;
    Tally t;
    suite_data.collect(t, {"(Gdb + Gbd) P_perp - P_perp", "(Gdb)^2 - Gdb on P_perp", "(Gbd)^2 - Gbd on P_perp",
                           "Gdb Gbd on P_perp", "images of Gdb, Gbd inside Im(d), Im(b)", "G(bd+db) - P_perp"});
    r.passed = t.ok();
    r.detail = t.summary(ScalarTraits<S>::exact);
    return r;
}

template <class S>
CriterionResult rescaled_laplacian(const AlgebraSuite<S>& suite_data) {
    CriterionResult r;
    std::size_t checks = 0, failures = 0;
    double worst_norm = 0.0;
    double min_sv = std::numeric_limits<double>::infinity();
    for (const auto& e : suite_data.entries()) {
        for (const auto& inv : e.degrees) {
            ++checks;
            const auto& lap = inv.laplacian;
            const bool zero = ScalarTraits<S>::exact ? lap.exact_zero_on_P : lap.norm_on_P <= suite_data.tol().residual_tol;
            const bool invertible = !lap.min_singular_on_P_perp || *lap.min_singular_on_P_perp > 1e-10;
            if (lap.min_singular_on_P_perp) min_sv = std::min(min_sv, *lap.min_singular_on_P_perp);
            worst_norm = std::max(worst_norm, lap.norm_on_P);
            if (!zero || !invertible) ++failures;
        }
    }
    r.passed = failures == 0;
    r.detail = std::to_string(checks) + " degrees; max ||L P|| " + sci(worst_norm) + ", min singular value on Im(P_perp) " +
               sci(min_sv);
    return r;
}

template <class S>
CriterionResult form_identities(const AlgebraSuite<S>& suite_data, std::uint64_t seed, std::size_t triples) {
    CriterionResult r;
    constexpr bool exact = ScalarTraits<S>::exact;
    Tally ops;
    suite_data.collect(ops, {"d^2", "b^2 (degree n+1)", "kd - dk", "kb - bk (degree n+1)"});
    Tally assoc, bracket;
    for (std::size_t a = 0; a < std::size(suite); ++a) {
        const auto& e = suite_data.entries()[a];
        const FormsWindow<S>& w = e.window;
        std::mt19937_64 rng(seed * 1000003u + a);
        const std::size_t top = w.n_max();
        for (std::size_t t = 0; t < triples; ++t) {
            std::uniform_int_distribution<std::size_t> deg(0, top);
            std::size_t p = deg(rng), q = deg(rng), s = deg(rng);
            while (p + q + s > top) {
                p = deg(rng);
                q = deg(rng);
                s = deg(rng);
            }
            const Form<S> u = random_form(w, p, rng), v = random_form(w, q, rng), x = random_form(w, s, rng);
            bool equal = false;
            const double diff = form_difference(w.multiply(w.multiply(u, v), x), w.multiply(u, w.multiply(v, x)), equal);
            const double scale = exact ? 0.0 : 1e-10 * std::max(1.0, diff);
            assoc.add(exact ? equal : diff <= scale, diff, e.name + " triple " + std::to_string(t));

            std::uniform_int_distribution<std::size_t> low(0, top - 1);
            const std::size_t m = low(rng);
            const Form<S> omega = random_form(w, m, rng);
            const Form<S> alg = random_form(w, 0, rng);
            const Form<S> lhs = w.apply_b(w.multiply(omega, w.apply_d(alg)));
            const Form<S> comm = subtract(w.multiply(omega, alg), w.multiply(alg, omega));
            const Form<S> rhs = scaled(comm, m % 2 == 0 ? 1 : -1);
            const double bdiff = form_difference(lhs, rhs, equal);
            bracket.add(exact ? equal : bdiff <= 1e-10, bdiff, e.name + " pair " + std::to_string(t));
        }
    }
    r.passed = ops.ok() && assoc.ok() && bracket.ok();
    r.detail = "operator identities: " + ops.summary(exact) + "; associativity " + std::to_string(assoc.checks - assoc.failures) +
               "/" + std::to_string(assoc.checks) + ", bracket identity " + std::to_string(bracket.checks - bracket.failures) +
               "/" + std::to_string(bracket.checks) + (exact ? " exact" : " within 1e-10");
    if (!assoc.ok()) r.detail += "; first failure " + assoc.first_failure;
    if (!bracket.ok()) r.detail += "; first failure " + bracket.first_failure;
    return r;
}

double product_of_positive(const Eigen::MatrixXcd& hermitian) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const double top = ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0;
    double p = 1.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) > 1e-10 * top) p *= ev(i);
    return p;
}

CriterionResult torsion_checks() {
    CriterionResult r;
    bool ok = true;
    double worst = 0.0;
    std::ostringstream detail;
    for (std::size_t n : {3u, 8u, 17u}) {
        const CochainComplex c = twisted_circle_complex({-1.0, 0.0}, n);
        const Eigen::MatrixXcd& D = c.differentials[0];
        const double oracle0 = product_of_positive(D.adjoint() * D);
        const double oracle1 = product_of_positive(D * D.adjoint());
        const TorsionReport t = rs_torsion(c);
        const double errs[] = {std::abs(t.determinants[0].det_prime - 4.0), std::abs(t.determinants[1].det_prime - 4.0),
                               std::abs(oracle0 - 4.0), std::abs(oracle1 - 4.0),
                               std::abs(t.determinants[0].det_prime - oracle0), std::abs(t.torsion - 0.5)};
        for (double e : errs) {
            worst = std::max(worst, e);
            ok = ok && e <= 1e-9;
        }
    }
    detail << "det' = 4 and T = 1/2 for N in {3, 8, 17}, max error " << sci(worst);

    const CochainComplex a = twisted_circle_complex({-1.0, 0.0}, 3);
    const CochainComplex b = twisted_circle_complex({0.0, 1.0}, 5);
    const double additivity =
        std::abs(rs_torsion(direct_sum(a, b)).log_torsion - rs_torsion(a).log_torsion - rs_torsion(b).log_torsion);
    ok = ok && additivity <= 1e-10;
    detail << "; additivity error " << sci(additivity);

    const double z = abelian_cs_partition(twisted_circle_complex({-1.0, 0.0}, 8));
    ok = ok && std::abs(z - 2.0) <= 1e-10;
    detail << "; Z(N=8) - 2 = " << sci(z - 2.0);
    r.passed = ok;
    r.detail = detail.str();
    return r;
}

CriterionResult classical_hodge(std::uint64_t seed, std::size_t count, bool exact) {
    CriterionResult r;
    std::mt19937_64 rng(seed * 7919u + 17u);
    std::normal_distribution<double> gauss;
    std::size_t betti_fail = 0, decomp_fail = 0;
    double worst_orth = 0.0, worst_sum = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        RandomComplex rc = random_complex(rng);
        if (!exact) rc.complex.exact_differentials.reset();
        const HodgePackage pkg(rc.complex);
        if (pkg.betti() != pkg.betti_rank_nullity() || pkg.betti() != rc.betti) ++betti_fail;
        for (std::size_t k = 0; k < rc.complex.dims.size(); ++k) {
            const auto dim = static_cast<Eigen::Index>(rc.complex.dims[k]);
            Eigen::VectorXcd v(dim);
            for (Eigen::Index j = 0; j < dim; ++j) v(j) = Complex(gauss(rng), gauss(rng));
            const Decomposition dec = pkg.decompose(k, v);
            const double norm2 = std::max(1.0, std::abs(pkg.inner(k, v, v)));
            const double orth = std::max({std::abs(pkg.inner(k, dec.harmonic, dec.exact)),
                                          std::abs(pkg.inner(k, dec.harmonic, dec.coexact)),
                                          std::abs(pkg.inner(k, dec.exact, dec.coexact))}) /
                                norm2;
            const double resum = (dec.harmonic + dec.exact + dec.coexact - v).norm() / std::max(1.0, v.norm());
            worst_orth = std::max(worst_orth, orth);
            worst_sum = std::max(worst_sum, resum);
            if (orth > 1e-10 || resum > 1e-10) ++decomp_fail;
        }
    }
    r.passed = betti_fail == 0 && decomp_fail == 0;
    r.detail = std::to_string(count - betti_fail) + "/" + std::to_string(count) + " complexes with matching Betti numbers" +
               (exact ? " (exact rank-nullity)" : "") + "; max relative orthogonality defect " + sci(worst_orth) +
               ", re-sum error " + sci(worst_sum);
    return r;
}

struct SweepCase {
    const char* label;
    LeafSpec leaf;
    std::vector<double> samples;
    std::vector<double> weights;
    const char* phi;
    std::vector<double> expected;
};

CriterionResult witten_invariance(std::uint64_t seed, unsigned jobs) {
    CriterionResult r;
    const std::vector<double> taus{0.0, 0.5, 1.0, 2.0, 5.0};
    const LeafSpec circle{LeafKind::circle, 16, 1.0};
    const LeafSpec torus{LeafKind::torus, 8, 1.0};
    const std::vector<SweepCase> cases{
        {"circle/cos", circle, {0.1, 0.35, 0.6, 0.85}, {}, "cos-h", {1.0, 1.0}},
        {"circle/random", circle, {0.1, 0.35, 0.6, 0.85}, {}, "random", {1.0, 1.0}},
        {"torus/cos", torus, {0.2, 0.5, 0.8}, {0.2, 0.3, 0.5}, "cos-h", {1.0, 2.0, 1.0}},
        {"torus/random", torus, {0.2, 0.5, 0.8}, {0.2, 0.3, 0.5}, "random", {1.0, 2.0, 1.0}},
    };
    SweepOptions opt;
    opt.jobs = jobs;
    bool ok = true;
    std::string failures;
    double worst_block = 0.0;
    for (const auto& c : cases) {
        const FoliationModel model = make_model(c.leaf, c.samples, c.weights);
        const SampledPhi phi = sample_phi(model, c.phi, seed);
        const WittenSweepReport s = witten_betti_sweep(model, phi, taus, opt);
        bool case_ok = s.unstable_taus.empty() && s.intertwiners_ok;
        for (std::size_t t = 0; t < taus.size(); ++t) {
            for (std::size_t k = 0; k < c.expected.size(); ++k)
                case_ok = case_ok && std::abs(s.betti_table[t][k] - c.expected[k]) <= 1e-12;
            case_ok = case_ok && std::abs(s.euler_from_betti[t] - s.euler_from_dims) <= 1e-9;
            for (const auto& leaf : s.leaves[t]) {
                case_ok = case_ok && leaf.intertwiner_ranks == leaf.kernel_dims;
                for (double b : leaf.block_residuals) worst_block = std::max(worst_block, b);
            }
        }
        if (!case_ok) failures += std::string(failures.empty() ? "" : ", ") + c.label;
        ok = ok && case_ok;
    }
    r.passed = ok;
    r.detail = "4 models x 5 tau values: Betti numbers constant, intertwiner ranks = kernel dims";
    r.detail += "; max block residual " + sci(worst_block);
    if (!ok) r.detail += "; failing: " + failures;
    return r;
}

CriterionResult morse_checks() {
    CriterionResult r;
    const MorseScanReport cos_scan = morse_scan(builtin_chart("cos-h"));
    std::set<std::size_t> indices;
    double worst_offset = 0.0;
    for (const auto& s : cos_scan.singularities) {
        indices.insert(s.index);
        const double to_zero = std::min(std::abs(s.h), std::abs(1.0 - s.h));
        const double offset = std::min(to_zero, std::abs(s.h - 0.5));
        worst_offset = std::max(worst_offset, offset);
    }
    const bool cos_ok = cos_scan.family_count == 2 && indices == std::set<std::size_t>{0, 1} &&
                        cos_scan.degenerate_count == 0 && worst_offset <= cos_scan.cell_width;

    const MorseScanReport bd = morse_scan(builtin_chart("cubic-bd"));
    bool bd_ok = bd.degenerate_count >= 1;
    bool saw_origin = false;
    for (const auto& s : bd.singularities) {
        const bool on_locus = std::abs(s.h) <= bd.cell_width;
        if (!s.morse) {
            bd_ok = bd_ok && on_locus && std::abs(s.v) <= 1e-12 && s.birth_death_rank_ok;
            saw_origin = saw_origin || on_locus;
        } else {
            bd_ok = bd_ok && !(on_locus && std::abs(s.v) <= 1e-12);
        }
    }
    bd_ok = bd_ok && saw_origin;
    r.passed = cos_ok && bd_ok;
    r.detail = "cos: " + std::to_string(cos_scan.family_count) + " families, " + std::to_string(cos_scan.degenerate_count) +
               " degenerate, max offset " + sci(worst_offset) + " (cell " + sci(cos_scan.cell_width) +
               "); cubic: " + std::to_string(bd.degenerate_count) + " degenerate point(s) on h = 0" +
               (bd_ok ? ", birth-death rank ok" : ", check failed");
    return r;
}

CriterionResult gv_checks() {
    CriterionResult r;
    const GVReport g = godbillon_vey(builtin_one_form("dz+sin(2piz)dx"), 16);
    const double refine = g.refinement_residual.value_or(1.0);
    bool ok = g.integrability_residual < 1e-8 && std::abs(g.gv) <= 1e-6 && g.gauge_residual <= 1e-6 && refine <= 1e-6;
    std::string raised = "nothing";
    try {
        godbillon_vey(builtin_one_form("dz+xdy"), 16);
    } catch (const Error& e) {
        raised = e.code();
    }
    ok = ok && raised == "gv.NotIntegrable";
    r.passed = ok;
    r.detail = "integrability " + sci(g.integrability_residual) + ", GV " + sci(g.gv) + ", gauge " + sci(g.gauge_residual) +
               ", refinement " + sci(refine) + "; dz + x dy raised " + raised;
    return r;
}

template <class S>
std::string reference_reports(std::uint64_t seed, unsigned jobs) {
    std::string out;
    out += dump_report(spectral_report(FormsWindow<S>(algebras::dual_numbers<S>(), 4), {}, jobs).json);
    out += dump_report(spectral_report(FormsWindow<S>(algebras::group_z3<S>(), 3), {}, jobs).json);
    out += dump_report(torsion_report(twisted_circle_complex({-1.0, 0.0}, 8)).json);

    ModelInput in;
    in.model = make_model({LeafKind::torus, 8, 1.0}, {0.2, 0.5, 0.8}, {0.2, 0.3, 0.5});
    in.phi_name = "random";
    in.phi = sample_phi(in.model, "random", seed);
    in.taus = {0.0, 0.5, 1.0, 2.0, 5.0};
    SweepOptions opt;
    opt.jobs = jobs;
    const Report sweep = witten_sweep_report(in, opt);
    out += dump_report(sweep.json) + sweep.csv;

    MorseInput mi{builtin_chart("cubic-bd"), {}};
    const Report morse = morse_report(mi);
    out += dump_report(morse.json) + morse.csv;

    GVInput gi;
    gi.analytic = builtin_one_form("dz+sin(2piz)dx");
    gi.n = 16;
    out += dump_report(gv_report(gi).json);
    return out;
}

template <class S>
void run_algebraic(const AcceptanceOptions& o,
                   const std::function<void(CriterionResult&&, Clock::time_point)>& push) {
    auto start = Clock::now();
    std::optional<AlgebraSuite<S>> data;
    std::optional<Error> failure;
    try {
        data.emplace(o.jobs, SpectralTolerances{});
    } catch (const Error& e) {
        failure = e;
    }
    auto run = [&](int id, const char* name, auto&& fn) {
        CriterionResult r;
        try {
            if (failure) throw *failure;
            r = fn();
        } catch (const Error& e) {
            r.passed = false;
            r.detail = e.code() + ": " + e.what();
        }
        r.id = id;
        r.name = name;
        push(std::move(r), start);
        start = Clock::now();
    };
    run(1, "karoubi laplacian bd+db = 1-k", [&] { return karoubi_laplacian(*data); });
    run(2, "karoubi polynomial relations", [&] { return karoubi_relations(*data); });
    run(3, "harmonic decomposition and projection", [&] { return harmonic_decomposition(*data); });
    run(4, "green operator exact/coexact splitting", [&] { return exact_coexact_split(*data); });
    run(5, "rescaled laplacian kernel and invertibility", [&] { return rescaled_laplacian(*data); });
    run(6, "differential, product and bracket identities",
        [&] { return form_identities(*data, o.seed, o.random_triples); });
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& o) {
    const auto begin = Clock::now();
    std::vector<CriterionResult> results;
    auto push = [&](CriterionResult&& r, Clock::time_point started) {
        r.seconds = std::chrono::duration<double>(Clock::now() - started).count();
        results.push_back(std::move(r));
        if (o.on_result) o.on_result(results.back());
    };
    auto guarded = [&](int id, const char* name, auto&& fn) {
        const auto started = Clock::now();
        CriterionResult r;
        try {
            r = fn();
        } catch (const Error& e) {
            r.passed = false;
            r.detail = e.code() + ": " + e.what();
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = std::string("unexpected exception: ") + e.what();
        }
        r.id = id;
        r.name = name;
        push(std::move(r), started);
    };

    switch (o.mode) {
        case ScalarMode::rational: run_algebraic<Rational>(o, push); break;
        case ScalarMode::gaussian: run_algebraic<Gaussian>(o, push); break;
        case ScalarMode::complex_float: run_algebraic<Complex>(o, push); break;
    }
    guarded(7, "zeta determinants, torsion and CS partition", [] { return torsion_checks(); });
    guarded(8, "classical hodge decomposition", [&] { return classical_hodge(o.seed, o.random_complexes, exact_mode(o.mode)); });
    guarded(9, "witten deformation invariance", [&] { return witten_invariance(o.seed, o.jobs); });
    guarded(10, "tangential morse scan", [] { return morse_checks(); });
    guarded(11, "godbillon-vey quadrature", [] { return gv_checks(); });
    guarded(12, "wall-clock budget and byte determinism", [&] {
        CriterionResult r;
        std::string first, second;
        switch (o.mode) {
            case ScalarMode::rational:
                first = reference_reports<Rational>(o.seed, o.jobs);
                second = reference_reports<Rational>(o.seed, o.jobs);
                break;
            case ScalarMode::gaussian:
                first = reference_reports<Gaussian>(o.seed, o.jobs);
                second = reference_reports<Gaussian>(o.seed, o.jobs);
                break;
            case ScalarMode::complex_float:
                first = reference_reports<Complex>(o.seed, o.jobs);
                second = reference_reports<Complex>(o.seed, o.jobs);
                break;
        }
        const double elapsed = std::chrono::duration<double>(Clock::now() - begin).count();
        const bool same = first == second;
        r.passed = same && elapsed < o.time_budget_seconds;
        std::ostringstream os;
        os.precision(3);
        os << std::fixed << "total " << elapsed << " s (budget " << o.time_budget_seconds << " s); " << first.size()
           << " report bytes " << (same ? "identical" : "DIFFER") << " across two runs";
        r.detail = os.str();
        return r;
    });
    return results;
}

std::string format_result(const CriterionResult& r) {
    std::ostringstream os;
    os.precision(2);
    os << (r.passed ? "PASS" : "FAIL") << "  " << (r.id < 10 ? " " : "") << r.id << "  " << r.name << "  " << r.detail
       << "  (" << std::fixed << r.seconds << " s)";
    return os.str();
}

}  // namespace nchodge
