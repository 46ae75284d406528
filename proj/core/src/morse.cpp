#include "nchodge/morse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "nchodge/error.hpp"

namespace nchodge {

namespace {

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

struct Bracket {
    double a, b;
};

struct LeafScan {
    std::vector<double> roots;
    bool singular = false;
};

class LeafScanner {
public:
    LeafScanner(const PhiChart& chart, const MorseGrid& grid, double v) : chart_(chart), grid_(grid), v_(v) {}

    LeafScan scan() {
        const std::size_t count = grid_.nh;
        const double range = chart_.h_max - chart_.h_min;
        const double step = chart_.periodic ? range / static_cast<double>(grid_.nh) : range / static_cast<double>(grid_.nh - 1);
        std::vector<double> hs(count), g(count), hh(count);
        double g_scale = 0.0, hh_scale = 0.0, phi_scale = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            hs[i] = chart_.h_min + range * static_cast<double>(i) /
                                       static_cast<double>(chart_.periodic ? grid_.nh : grid_.nh - 1);
            const PhiJet j = chart_.jet(hs[i], v_);
            g[i] = j.h;
            hh[i] = j.hh;
            g_scale = std::max(g_scale, std::abs(j.h));
            hh_scale = std::max(hh_scale, std::abs(j.hh));
            phi_scale = std::max(phi_scale, std::abs(j.phi));
        }
        LeafScan out;
        const double floor = 1e-14 * std::max(1.0, phi_scale);
        if (g_scale <= floor && hh_scale * step <= floor) {
            out.singular = true;
            out.roots = hs;
            return out;
        }
        scale_ = std::max({g_scale, hh_scale * step, 1e-300});
        const double zero_tol = 1e-12 * scale_;

        std::vector<bool> node_zero(count);
        for (std::size_t i = 0; i < count; ++i) {
            node_zero[i] = std::abs(g[i]) <= zero_tol;
            if (node_zero[i]) out.roots.push_back(hs[i]);
        }
        const std::size_t intervals = chart_.periodic ? count : count - 1;
        for (std::size_t i = 0; i < intervals; ++i) {
            const std::size_t k = (i + 1) % count;
            const double a = hs[i];
            const double b = chart_.periodic && k == 0 ? chart_.h_max : hs[k];
            if (node_zero[i] || node_zero[k]) continue;
            if (sign_of(g[i]) != sign_of(g[k])) {
                out.roots.push_back(bisect_gradient({a, b}));
                continue;
            }
            if (sign_of(hh[i]) * sign_of(hh[k]) < 0) {
                // The gradient has an extremum inside the cell: a double root or an unresolved pair.
                const double m = bisect_hessian({a, b});
                const double gm = chart_.jet(m, v_).h;
                if (std::abs(gm) <= 1e-10 * scale_) {
                    out.roots.push_back(m);
                } else if (sign_of(gm) != sign_of(g[i])) {
                    out.roots.push_back(bisect_gradient({a, m}));
                    out.roots.push_back(bisect_gradient({m, b}));
                }
            }
        }
        for (auto& r : out.roots)
            if (chart_.periodic && r >= chart_.h_max) r -= range;
        std::sort(out.roots.begin(), out.roots.end());
        std::vector<double> unique;
        for (double r : out.roots)
            if (unique.empty() || r - unique.back() > 1e-9 * range) unique.push_back(r);
        out.roots = std::move(unique);
        return out;
    }

private:
    double bisect_gradient(Bracket br) const {
        double ga = chart_.jet(br.a, v_).h;
        for (std::size_t it = 0; it < grid_.refine_cap; ++it) {
            const double m = 0.5 * (br.a + br.b);
            if (m <= br.a || m >= br.b) break;
            const double gm = chart_.jet(m, v_).h;
            if (gm == 0.0) return m;
            if (sign_of(gm) == sign_of(ga)) {
                br.a = m;
                ga = gm;
            } else {
                br.b = m;
            }
        }
        const double m = 0.5 * (br.a + br.b);
        if (std::abs(chart_.jet(m, v_).h) > 1e-8 * scale_) {
            throw Error("morse", "GridTooCoarse",
                        "sign change near h = " + std::to_string(m) + ", v = " + std::to_string(v_) +
                            " not resolved within the refinement cap");
        }
        return m;
    }

    double bisect_hessian(Bracket br) const {
        double ha = chart_.jet(br.a, v_).hh;
        for (std::size_t it = 0; it < grid_.refine_cap; ++it) {
            const double m = 0.5 * (br.a + br.b);
            if (m <= br.a || m >= br.b) break;
            const double hm = chart_.jet(m, v_).hh;
            if (hm == 0.0) return m;
            if (sign_of(hm) == sign_of(ha)) {
                br.a = m;
                ha = hm;
            } else {
                br.b = m;
            }
        }
        return 0.5 * (br.a + br.b);
    }

    const PhiChart& chart_;
    const MorseGrid& grid_;
    double v_;
    double scale_ = 1.0;
};

std::size_t jacobian_rank(const PhiJet& j) {
    Eigen::Matrix2d m;
    m << j.hh, j.hv, j.hhh, j.hhv;
    const double top = m.cwiseAbs().maxCoeff();
    if (top <= 1e-12) return 0;
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(m);
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < 2; ++i)
        if (svd.singularValues()(i) > std::max(1e-8 * svd.singularValues()(0), 1e-12)) ++r;
    return r;
}

}  // namespace

PhiChart builtin_chart(const std::string& name) {
    const double two_pi = 2.0 * std::numbers::pi;
    PhiChart c;
    c.name = name;
    if (name == "cos-h") {
        c.periodic = true;
        c.h_min = 0.0;
        c.h_max = 1.0;
        c.v_min = 0.0;
        c.v_max = 1.0;
        c.jet = [two_pi](double h, double) {
            PhiJet j;
            const double s = std::sin(two_pi * h), co = std::cos(two_pi * h);
            j.phi = co;
            j.h = -two_pi * s;
            j.hh = -two_pi * two_pi * co;
            j.hhh = two_pi * two_pi * two_pi * s;
            return j;
        };
    } else if (name == "cubic-bd") {
        c.jet = [](double h, double v) {
            PhiJet j;
            j.phi = h * h * h / 3.0 - v * h;
            j.h = h * h - v;
            j.hh = 2.0 * h;
            j.hv = -1.0;
            j.hhh = 2.0;
            j.hhv = 0.0;
            return j;
        };
    } else if (name == "constant") {
        c.jet = [](double, double) {
            PhiJet j;
            j.phi = 1.0;
            return j;
        };
    } else {
        throw Error("morse", "InvalidArgument", "unknown chart '" + name + "'");
    }
    return c;
}

MorseScanReport morse_scan(const PhiChart& chart, const MorseGrid& grid) {
    if (grid.nh < 8) throw Error("morse", "GridTooCoarse", "leaf grid needs at least 8 points");
    if (grid.nv < 1) throw Error("morse", "GridTooCoarse", "transversal grid needs at least 1 point");
    if (!chart.jet) throw Error("morse", "InvalidArgument", "chart has no derivative callback");
    if (!(chart.h_max > chart.h_min)) throw Error("morse", "InvalidArgument", "empty leaf interval");

    MorseScanReport r;
    r.chart = chart.name;
    const double range = chart.h_max - chart.h_min;
    r.cell_width = range / static_cast<double>(chart.periodic ? grid.nh : grid.nh - 1);
    for (std::size_t j = 0; j < grid.nv; ++j) {
        const double v = grid.nv == 1 ? 0.5 * (chart.v_min + chart.v_max)
                                      : chart.v_min + (chart.v_max - chart.v_min) * static_cast<double>(j) /
                                                          static_cast<double>(grid.nv - 1);
        r.transversal.push_back(v);
    }

    struct Family {
        double h;
        std::size_t row;
    };
    std::vector<Family> families;
    std::size_t leaves_with_degenerate = 0;
    for (std::size_t row = 0; row < r.transversal.size(); ++row) {
        const double v = r.transversal[row];
        LeafScanner scanner(chart, grid, v);
        const LeafScan scan = scanner.scan();
        if (scan.singular) {
            r.singular_leaves.push_back(v);
            r.almost_morse = false;
        }
        double hess_scale = 0.0;
        for (std::size_t i = 0; i < grid.nh; ++i) {
            const double h = chart.h_min + r.cell_width * static_cast<double>(i);
            hess_scale = std::max(hess_scale, std::abs(chart.jet(h, v).hh));
        }
        bool degenerate_here = false;
        for (double h : scan.roots) {
            const PhiJet jet = chart.jet(h, v);
            Singularity s;
            s.h = h;
            s.v = v;
            s.leaf_gradient_norm = std::abs(jet.h);
            s.hessian = jet.hh;
            s.det = jet.hh;
            s.morse = !scan.singular && std::abs(jet.hh) > grid.degenerate_tol * hess_scale;
            s.index = s.morse && jet.hh < 0.0 ? 1 : 0;
            s.birth_death_rank = jacobian_rank(jet);
            s.birth_death_rank_ok = s.birth_death_rank >= 1;
            const double tnorm = std::hypot(jet.hv, jet.hh);
            s.transverse = tnorm > 0.0 && std::abs(jet.hh) > 1e-8 * tnorm;

            std::size_t best = families.size();
            double best_dist = 2.0 * r.cell_width;
            for (std::size_t f = 0; f < families.size(); ++f) {
                if (row == 0 || families[f].row != row - 1) continue;
                double dist = std::abs(families[f].h - h);
                if (chart.periodic) dist = std::min(dist, range - dist);
                if (dist <= best_dist) {
                    best_dist = dist;
                    best = f;
                }
            }
            if (best == families.size()) families.push_back({h, row});
            families[best] = {h, row};
            s.family = best;

            if (s.morse) {
                ++r.morse_count;
            } else {
                ++r.degenerate_count;
                degenerate_here = true;
            }
            r.singularities.push_back(s);
        }
        if (degenerate_here) ++leaves_with_degenerate;
    }
    r.family_count = families.size();
    r.degenerate_weight = static_cast<double>(leaves_with_degenerate) / static_cast<double>(r.transversal.size());
    return r;
}

}  // namespace nchodge
