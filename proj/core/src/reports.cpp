#include "nchodge/reports.hpp"

#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>

#include "nchodge/parallel.hpp"

namespace nchodge {

namespace {

template <class S>
Json matrix_to_json(const Matrix<S>& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

template <class S>
Json algebra_to_json(const Algebra<S>& a) {
    Json j;
    j["name"] = a.name();
    j["dim"] = a.dim();
    j["basis"] = a.input_labels();
    j["canonical_basis"] = a.basis_labels();
    j["unit_pivot"] = a.unit_pivot();
    return j;
}

template <class S>
Json block_entry(std::size_t degree, const Matrix<S>& m) {
    Json j;
    j["degree"] = degree;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    j["matrix"] = matrix_to_json(m);
    return j;
}

Json eigenvalue_to_json(const EigenvalueEntry& e, bool with_value) {
    Json j;
    j["turn"] = Json::array({e.index, e.order});
    j["multiplicity"] = e.multiplicity;
    if (with_value) j["value"] = to_json(e.value);
    return j;
}

Json vector_to_json(const Eigen::VectorXd& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(real_to_json(v(i)));
    return a;
}

Json reals_to_json(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(real_to_json(x));
    return a;
}

void finish(Report& r, const Json& errors) {
    r.json["status"] = r.ok ? "ok" : "failed";
    r.json["errors"] = errors;
}

Json zeta_to_json(std::size_t degree, const ZetaDeterminant& z) {
    Json j;
    j["degree"] = degree;
    j["det_prime"] = real_to_json(z.det_prime);
    j["zeta_prime"] = real_to_json(z.zeta_prime);
    j["zeta_prime_finite_difference"] = real_to_json(z.zeta_prime_finite_difference);
    j["kernel_dim"] = z.kernel_dim;
    j["nonzero_count"] = z.nonzero_count;
    return j;
}

bool zeta_consistent(const ZetaDeterminant& z) {
    return z.det_prime > 0.0 && std::abs(z.zeta_prime - z.zeta_prime_finite_difference) <= 1e-6 * std::max(1.0, std::abs(z.zeta_prime));
}

}  // namespace

Json report_header(const std::string& command, ScalarMode mode) {
    Json j;
    j["schema"] = report_schema;
    j["command"] = command;
    j["scalars"] = std::string(to_string(mode));
    return j;
}

Json error_entry(const Error& e) {
    Json j;
    j["code"] = e.code();
    j["module"] = e.module();
    j["kind"] = e.kind();
    j["message"] = e.what();
    return j;
}

Report error_report(const std::string& command, ScalarMode mode, const Error& e) {
    Report r;
    r.json = report_header(command, mode);
    r.ok = false;
    finish(r, Json::array({error_entry(e)}));
    return r;
}

std::string dump_report(const Json& j) { return j.dump(2) + "\n"; }

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

Json residual_to_json(const Residual& r, double tol) {
    Json j;
    j["name"] = r.name;
    j["value"] = r.exact_value ? to_json(*r.exact_value) : real_to_json(r.value);
    j["pass"] = r.passes(tol);
    return j;
}

template <class S>
Report nc_report(const FormsWindow<S>& window, unsigned jobs) {
    Report r;
    r.json = report_header("nc-report", ScalarTraits<S>::mode);
    Json errors = Json::array();
    r.json["algebra"] = algebra_to_json(window.algebra());
    r.json["n_max"] = window.n_max();
    r.json["degree_dims"] = window.degree_dims();
    try {
        window.assemble(jobs);
        const std::size_t top = window.n_max();
        Json bases = Json::array();
        for (std::size_t n = 0; n <= top; ++n) {
            Json labels = Json::array();
            for (std::size_t i = 0; i < window.degree_dim(n); ++i) labels.push_back(window.basis_label(n, i));
            bases.push_back(std::move(labels));
        }
        r.json["bases"] = std::move(bases);

        Json ops;
        Json d = Json::array(), b = Json::array(), k = Json::array(), N = Json::array(), omk = Json::array(),
             L = Json::array();
        for (std::size_t n = 0; n <= top; ++n) {
            if (n < top) d.push_back(block_entry(n, window.d_block(n)));
            b.push_back(block_entry(n, window.b_block(n)));
            k.push_back(block_entry(n, window.k_block(n)));
            N.push_back(block_entry(n, window.N_block(n)));
            omk.push_back(block_entry(n, window.one_minus_k_block(n)));
            if (n < top) L.push_back(block_entry(n, window.L_block(n)));
        }
        ops["d"] = std::move(d);
        ops["b"] = std::move(b);
        ops["k"] = std::move(k);
        ops["N"] = std::move(N);
        ops["1-k"] = std::move(omk);
        ops["L"] = std::move(L);
        r.json["operators"] = std::move(ops);

        const double tol = 1e-12;
        Json checks = Json::array();
        auto check = [&](const std::string& name, std::size_t degree, const Matrix<S>& m) {
            Residual res = make_residual(name, m);
            Json j = residual_to_json(res, tol);
            j["degree"] = degree;
            r.ok = r.ok && res.passes(tol);
            checks.push_back(std::move(j));
        };
        for (std::size_t n = 0; n + 2 <= top; ++n) check("d^2", n, window.d_block(n + 1) * window.d_block(n));
        for (std::size_t n = 2; n <= top; ++n) check("b^2", n, window.b_block(n - 1) * window.b_block(n));
        for (std::size_t n = 0; n < top; ++n)
            check("(bd+db)-(1-k)", n, window.laplacian_block(n) - window.one_minus_k_block(n));
        r.json["checks"] = std::move(checks);
    } catch (const Error& e) {
        r.ok = false;
        errors.push_back(error_entry(e));
    }
    finish(r, errors);
    return r;
}

template <class S>
Report spectral_report(const FormsWindow<S>& window, const SpectralTolerances& tol, unsigned jobs) {
    constexpr bool exact = ScalarTraits<S>::exact;
    Report r;
    r.json = report_header("spectral", ScalarTraits<S>::mode);
    r.json["algebra"] = algebra_to_json(window.algebra());
    r.json["n_max"] = window.n_max();
    r.json["degree_dims"] = window.degree_dims();
    Json tolerances;
    tolerances["eig_tol"] = real_to_json(tol.eig_tol);
    tolerances["residual_tol"] = real_to_json(tol.residual_tol);
    r.json["tolerances"] = std::move(tolerances);

    const std::size_t count = window.n_max();
    std::vector<std::optional<DegreeInvariants>> table(count);
    std::vector<std::optional<Error>> failures(count);
    window.assemble(jobs);
    parallel_for(count, jobs, [&](std::size_t n) {
        try {
            table[n] = degree_invariants(window, n, tol);
        } catch (const Error& e) {
            failures[n] = e;
        }
    });

    Json errors = Json::array();
    Json degrees = Json::array();
    std::ostringstream csv;
    csv << "degree,order,index,re,im,multiplicity\n";
    for (std::size_t n = 0; n < count; ++n) {
        if (failures[n]) {
            r.ok = false;
            Json e = error_entry(*failures[n]);
            e["degree"] = n;
            errors.push_back(std::move(e));
            continue;
        }
        const DegreeInvariants& inv = *table[n];
        Json j;
        j["degree"] = n;
        j["dim"] = inv.dim;
        j["rank_P"] = inv.rank_P;
        j["rank_P_perp"] = inv.rank_P_perp;
        j["dim_ker_(1-k)^2"] = inv.dim_ker_one_minus_k_sq;
        j["rank_(1-k)^2"] = inv.rank_one_minus_k_sq;
        const bool ranks_ok = inv.rank_P + inv.rank_one_minus_k_sq == inv.dim && inv.rank_P == inv.dim_ker_one_minus_k_sq &&
                              inv.rank_P + inv.rank_P_perp == inv.dim;
        j["ranks_ok"] = ranks_ok;
        r.ok = r.ok && ranks_ok;

        Json eig = Json::array();
        for (const auto& e : inv.eigenvalues) {
            eig.push_back(eigenvalue_to_json(e, !exact));
            csv << n << ',' << e.order << ',' << e.index << ',' << format_double(e.value.real()) << ','
                << format_double(e.value.imag()) << ',' << e.multiplicity << '\n';
        }
        j["eigenvalues"] = std::move(eig);
        if (!inv.order_totals.empty()) {
            Json totals = Json::array();
            for (const auto& t : inv.order_totals) {
                Json tj;
                tj["order"] = t.order;
                tj["multiplicity"] = t.multiplicity;
                tj["exact"] = t.exact;
                totals.push_back(std::move(tj));
            }
            j["order_totals"] = std::move(totals);
        }

        Json lap;
        const bool zero_on_P = exact ? inv.laplacian.exact_zero_on_P : inv.laplacian.norm_on_P <= tol.residual_tol;
        const bool invertible = !inv.laplacian.min_singular_on_P_perp || *inv.laplacian.min_singular_on_P_perp > tol.residual_tol;
        lap["zero_on_P"] = zero_on_P;
        lap["norm_on_P"] = real_to_json(inv.laplacian.norm_on_P);
        lap["min_singular_on_P_perp"] =
            inv.laplacian.min_singular_on_P_perp ? real_to_json(*inv.laplacian.min_singular_on_P_perp) : Json(nullptr);
        lap["pass"] = zero_on_P && invertible;
        r.ok = r.ok && zero_on_P && invertible;
        j["rescaled_laplacian"] = std::move(lap);

        Json res = Json::array();
        for (const auto& x : inv.residuals) {
            res.push_back(residual_to_json(x, tol.residual_tol));
            r.ok = r.ok && x.passes(tol.residual_tol);
        }
        j["residuals"] = std::move(res);

        Json reading;
        reading["rank_dP_plus_bP"] = inv.rank_dP_plus_bP;
        reading["equals_P_perp_part"] = inv.statement_reading_holds;
        j["alternative_splitting"] = std::move(reading);
        degrees.push_back(std::move(j));
    }
    r.json["degrees"] = std::move(degrees);
    r.csv = csv.str();
    finish(r, errors);
    return r;
}

Report hodge_report(const CochainComplex& complex, const ComplexTolerances& tol) {
    Report r;
    r.json = report_header("hodge", complex.exact_differentials ? ScalarMode::gaussian : ScalarMode::complex_float);
    r.json["dims"] = complex.dims;
    r.json["exact_differentials"] = complex.exact_differentials.has_value();
    Json errors = Json::array();
    try {
        const HodgePackage pkg(complex, tol);
        const auto rn = pkg.betti_rank_nullity();
        r.json["betti"] = pkg.betti();
        r.json["betti_rank_nullity"] = rn;
        r.ok = pkg.betti() == rn;
        Json degrees = Json::array();
        std::ostringstream csv;
        csv << "degree,index,eigenvalue\n";
        for (std::size_t k = 0; k < complex.dims.size(); ++k) {
            Json j;
            j["degree"] = k;
            j["harmonic_dim"] = pkg.harmonic_bases()[k].cols();
            j["laplacian_eigenvalues"] = vector_to_json(pkg.eigenvalues()[k]);
            const ZetaDeterminant z = zeta_det(pkg.eigenvalues()[k], tol.rank_tol);
            j["det_prime"] = real_to_json(z.det_prime);
            degrees.push_back(std::move(j));
            for (Eigen::Index i = 0; i < pkg.eigenvalues()[k].size(); ++i)
                csv << k << ',' << i << ',' << format_double(pkg.eigenvalues()[k](i)) << '\n';
        }
        r.json["degrees"] = std::move(degrees);
        r.csv = csv.str();
    } catch (const Error& e) {
        r.ok = false;
        errors.push_back(error_entry(e));
    }
    finish(r, errors);
    return r;
}

Report torsion_report(const CochainComplex& complex, const ComplexTolerances& tol, const std::string& command) {
    Report r;
    r.json = report_header(command, complex.exact_differentials ? ScalarMode::gaussian : ScalarMode::complex_float);
    r.json["dims"] = complex.dims;
    Json errors = Json::array();
    try {
        if (command == "cs-partition") abelian_cs_partition(complex, tol);
        const TorsionReport t = rs_torsion(complex, tol);
        r.json["betti"] = t.betti;
        Json dets = Json::array();
        std::ostringstream csv;
        csv << "degree,index,eigenvalue\n";
        for (std::size_t k = 0; k < t.determinants.size(); ++k) {
            dets.push_back(zeta_to_json(k, t.determinants[k]));
            r.ok = r.ok && zeta_consistent(t.determinants[k]);
            for (Eigen::Index i = 0; i < t.eigenvalues[k].size(); ++i)
                csv << k << ',' << i << ',' << format_double(t.eigenvalues[k](i)) << '\n';
        }
        r.json["determinants"] = std::move(dets);
        r.json["log_torsion"] = real_to_json(t.log_torsion);
        r.json["torsion"] = real_to_json(t.torsion);
        r.json["cs_partition"] = t.cs_partition ? real_to_json(*t.cs_partition) : Json(nullptr);
        r.csv = csv.str();
    } catch (const Error& e) {
        r.ok = false;
        errors.push_back(error_entry(e));
    }
    finish(r, errors);
    return r;
}

Report witten_sweep_report(const ModelInput& input, const SweepOptions& options) {
    Report r;
    r.json = report_header("witten-sweep", ScalarMode::complex_float);
    const FoliationModel& m = input.model;
    Json model;
    model["leaf"] = {{"kind", std::string(to_string(m.leaf.kind))}, {"n", m.leaf.n}, {"metric_scale", real_to_json(m.leaf.metric_scale)}};
    model["samples"] = reals_to_json(m.samples);
    model["weights"] = reals_to_json(m.weights);
    r.json["model"] = std::move(model);
    r.json["phi"] = input.phi_name;
    r.json["kernel_tol"] = real_to_json(options.kernel_tol);
    Json errors = Json::array();
    try {
        const WittenSweepReport s = witten_betti_sweep(m, input.phi, input.taus, options);
        Json table = Json::array();
        std::ostringstream csv;
        csv << "tau";
        for (std::size_t k = 0; k <= m.leaf.leaf_dim(); ++k) csv << ",beta_" << k;
        csv << ",euler\n";
        for (std::size_t t = 0; t < s.tau_values.size(); ++t) {
            Json row;
            row["tau"] = real_to_json(s.tau_values[t]);
            row["betti"] = reals_to_json(s.betti_table[t]);
            row["euler"] = real_to_json(s.euler_from_betti[t]);
            Json leaves = Json::array();
            for (const auto& leaf : s.leaves[t]) {
                Json lj;
                lj["kernel_dims"] = leaf.kernel_dims;
                lj["intertwiner_ranks"] = leaf.intertwiner_ranks;
                lj["block_residuals"] = reals_to_json(leaf.block_residuals);
                leaves.push_back(std::move(lj));
            }
            row["leaves"] = std::move(leaves);
            table.push_back(std::move(row));
            csv << format_double(s.tau_values[t]);
            for (double b : s.betti_table[t]) csv << ',' << format_double(b);
            csv << ',' << format_double(s.euler_from_betti[t]) << '\n';
            r.ok = r.ok && std::abs(s.euler_from_betti[t] - s.euler_from_dims) <= 1e-9;
        }
        r.json["sweep"] = std::move(table);
        r.json["unstable_taus"] = s.unstable_taus;
        r.json["euler_from_dims"] = real_to_json(s.euler_from_dims);
        r.json["intertwiners_ok"] = s.intertwiners_ok;
        r.ok = r.ok && s.unstable_taus.empty() && s.intertwiners_ok;
        r.csv = csv.str();
    } catch (const Error& e) {
        r.ok = false;
        errors.push_back(error_entry(e));
    }
    finish(r, errors);
    return r;
}

Report morse_report(const MorseInput& input) {
    Report r;
    r.json = report_header("morse-scan", ScalarMode::complex_float);
    r.json["chart"] = input.chart.name;
    r.json["grid"] = {{"nh", input.grid.nh}, {"nv", input.grid.nv}, {"refine_cap", input.grid.refine_cap},
                      {"degenerate_tol", real_to_json(input.grid.degenerate_tol)}};
    Json errors = Json::array();
    try {
        const MorseScanReport s = morse_scan(input.chart, input.grid);
        r.json["leaf_dim"] = s.leaf_dim;
        r.json["cell_width"] = real_to_json(s.cell_width);
        r.json["family_count"] = s.family_count;
        r.json["morse_count"] = s.morse_count;
        r.json["degenerate_count"] = s.degenerate_count;
        r.json["singular_leaves"] = reals_to_json(s.singular_leaves);
        r.json["degenerate_weight"] = real_to_json(s.degenerate_weight);
        r.json["almost_morse"] = s.almost_morse;
        Json list = Json::array();
        std::ostringstream csv;
        csv << "h,v,leaf_gradient_norm,hessian,index,classification,birth_death_rank,birth_death_rank_ok,transverse,family\n";
        for (const auto& p : s.singularities) {
            Json j;
            j["h"] = real_to_json(p.h);
            j["v"] = real_to_json(p.v);
            j["leaf_gradient_norm"] = real_to_json(p.leaf_gradient_norm);
            j["tangential_hessian"] = real_to_json(p.hessian);
            j["det"] = real_to_json(p.det);
            j["index"] = p.index;
            j["classification"] = p.morse ? "morse" : "degenerate";
            j["birth_death_rank"] = p.birth_death_rank;
            j["birth_death_rank_ok"] = p.birth_death_rank_ok;
            j["transverse"] = p.transverse;
            j["family"] = p.family;
            list.push_back(std::move(j));
            csv << format_double(p.h) << ',' << format_double(p.v) << ',' << format_double(p.leaf_gradient_norm) << ','
                << format_double(p.hessian) << ',' << p.index << ',' << (p.morse ? "morse" : "degenerate") << ','
                << p.birth_death_rank << ',' << (p.birth_death_rank_ok ? "true" : "false") << ','
                << (p.transverse ? "true" : "false") << ',' << p.family << '\n';
        }
        r.json["singularities"] = std::move(list);
        r.csv = csv.str();
    } catch (const Error& e) {
        r.ok = false;
        errors.push_back(error_entry(e));
    }
    finish(r, errors);
    return r;
}

Report gv_report(const GVInput& input, const GVOptions& options) {
    Report r;
    r.json = report_header("gv", ScalarMode::complex_float);
    r.json["omega"] = input.analytic ? input.analytic->name : "sampled";
    r.json["method"] = std::string(to_string(options.method));
    r.json["gv_tol"] = real_to_json(options.gv_tol);
    Json errors = Json::array();
    try {
        const GVReport g = input.analytic ? godbillon_vey(*input.analytic, input.n, options)
                                          : godbillon_vey(*input.sampled, options);
        r.json["n"] = g.n;
        r.json["integrability_residual"] = real_to_json(g.integrability_residual);
        r.json["min_omega_norm"] = real_to_json(g.min_omega_norm);
        r.json["theta_residual"] = real_to_json(g.theta_residual);
        r.json["gv"] = real_to_json(g.gv);
        r.json["gv_gauge"] = real_to_json(g.gv_gauge);
        r.json["gauge_residual"] = real_to_json(g.gauge_residual);
        r.json["gv_refined"] = g.gv_refined ? real_to_json(*g.gv_refined) : Json(nullptr);
        r.json["refinement_residual"] = g.refinement_residual ? real_to_json(*g.refinement_residual) : Json(nullptr);
        const bool gauge_ok = g.gauge_residual <= gv_invariance_tol;
        const bool refine_ok = !g.refinement_residual || *g.refinement_residual <= gv_invariance_tol;
        r.json["checks"] = {{"gauge_invariance", gauge_ok}, {"grid_refinement", refine_ok}};
        r.ok = gauge_ok && refine_ok;
        std::ostringstream csv;
        csv << "quantity,value\n";
        csv << "integrability_residual," << format_double(g.integrability_residual) << '\n';
        csv << "theta_residual," << format_double(g.theta_residual) << '\n';
        csv << "gv," << format_double(g.gv) << '\n';
        csv << "gv_gauge," << format_double(g.gv_gauge) << '\n';
        csv << "gauge_residual," << format_double(g.gauge_residual) << '\n';
        if (g.gv_refined) csv << "gv_refined," << format_double(*g.gv_refined) << '\n';
        if (g.refinement_residual) csv << "refinement_residual," << format_double(*g.refinement_residual) << '\n';
        r.csv = csv.str();
    } catch (const Error& e) {
        r.ok = false;
        errors.push_back(error_entry(e));
    }
    finish(r, errors);
    return r;
}

template Report nc_report<Rational>(const FormsWindow<Rational>&, unsigned);
template Report nc_report<Gaussian>(const FormsWindow<Gaussian>&, unsigned);
template Report nc_report<Complex>(const FormsWindow<Complex>&, unsigned);
template Report spectral_report<Rational>(const FormsWindow<Rational>&, const SpectralTolerances&, unsigned);
template Report spectral_report<Gaussian>(const FormsWindow<Gaussian>&, const SpectralTolerances&, unsigned);
template Report spectral_report<Complex>(const FormsWindow<Complex>&, const SpectralTolerances&, unsigned);

}  // namespace nchodge
