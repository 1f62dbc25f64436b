#include "fdlab/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fdlab/mesh.hpp"
#include "fdlab/model.hpp"

namespace fdlab {

namespace {

struct Truncation {
    double r_lo, r_hi;          // computational interval
    bool lo_is_blowup, hi_is_blowup;
    bool lo_is_center;          // r_lo == 0 with a symmetry (zero-flux) condition
    double r_infinity = std::numeric_limits<double>::quiet_NaN();
};

Truncation truncate_domain(const RadialDomain& dom, double offset, double r_inf_factor) {
    Truncation t{};
    switch (dom.shape()) {
        case DomainShape::Ball:
            t = {0.0, dom.outer_radius() - offset, false, true, true};
            break;
        case DomainShape::ExteriorBall:
            t = {dom.inner_radius() + offset, r_inf_factor * dom.inner_radius(), true, false,
                 false};
            t.r_infinity = t.r_hi;
            break;
        case DomainShape::Annulus:
            t = {dom.inner_radius() + offset, dom.outer_radius() - offset, true, true, false};
            break;
    }
    if (!(t.r_lo < t.r_hi))
        throw std::invalid_argument("truncation offset leaves no computational interval");
    return t;
}

}  // namespace

BlowupSolution solve_blowup(const DiffusionModel& model, const RadialDomain& domain,
                            double offset, const BlowupGridSpec& grid) {
    if (!(offset > 0.0)) throw std::invalid_argument("truncation offset must be positive");
    const int N = domain.dimension();
    const double k = model.decay_exponent();
    const double c = blowup_constant(model);
    const bool pme = model.kind == EquationKind::PorousMedium;
    const double m = pme ? model.exponent : 0.0;
    const double p = pme ? 0.0 : model.exponent;

    const Truncation trunc = truncate_domain(domain, offset, grid.r_infinity_factor);

    // Asymptotic value imposed at the truncated walls. The porous medium
    // problem is solved in the pressure-like variable q = w^m, which makes
    // the flux linear and the nonlinearity a semilinear source.
    const double wall_value = c * std::pow(offset, -k);
    auto primal_to_unknown = [&](double w) { return pme ? std::pow(w, m) : w; };
    auto unknown_to_primal = [&](double q) { return pme ? std::pow(q, 1.0 / m) : q; };

    const double span = trunc.r_hi - trunc.r_lo;
    const double h_wall = offset / 8.0;
    const double h_max = 2.0 * span / double(grid.n_points);
    const std::vector<double> r = graded_interval(
        trunc.r_lo, trunc.r_hi, trunc.lo_is_blowup ? h_wall : 0.0,
        trunc.hi_is_blowup ? h_wall : 0.0, h_max, grid.refinement_ratio);
    const std::size_t n = r.size();
    if (n < 8) throw std::runtime_error("blow-up grid degenerated");

    // Face radii and cell volumes; the r = 0 face of a ball has zero area so
    // the symmetry condition is automatic in the flux form.
    std::vector<double> r_face(n + 1);
    r_face[0] = r.front();
    r_face[n] = r.back();
    for (std::size_t i = 1; i < n; ++i) r_face[i] = 0.5 * (r[i - 1] + r[i]);
    std::vector<double> vol(n);
    for (std::size_t i = 0; i < n; ++i)
        vol[i] = (std::pow(r_face[i + 1], N) - std::pow(r_face[i], N)) / double(N);

    // Seed from the wall asymptote of the nearest blow-up boundary; the far
    // field of an exterior domain inherits the natural decay of the seed.
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = domain.distance_to_boundary(r[i]);
        u[i] = primal_to_unknown(c * std::pow(d, -k));
    }

    const bool lo_fixed = !trunc.lo_is_center;
    u.front() = lo_fixed ? (trunc.lo_is_blowup ? primal_to_unknown(wall_value) : 0.0) : u.front();
    u.back() = trunc.hi_is_blowup ? primal_to_unknown(wall_value) : 0.0;

    // Gradient regularization scale for the degenerate p-Laplace flux. It
    // must sit far below the smallest physical gradient in the domain, which
    // is the asymptote's slope at the largest interior distance; anything
    // larger throttles the fast diffusion in the interior and produces a
    // spurious, truncation-dependent collapse there.
    double d_max = 0.0;
    for (double ri : r) d_max = std::max(d_max, domain.distance_to_boundary(ri));
    const double sigma = 1e-12 * k * c * std::pow(d_max, -k - 1.0);

    auto flux = [&](double s, double& dflux) {
        if (pme) {  // linear in q
            dflux = 1.0;
            return s;
        }
        const double w2 = s * s + sigma * sigma;
        const double base = std::pow(w2, 0.5 * (p - 2.0));
        dflux = base / w2 * ((p - 1.0) * s * s + sigma * sigma);
        return base * s;
    };
    auto source = [&](double v, double& dsrc) {
        if (pme) {
            const double vv = std::max(v, 0.0);
            dsrc = std::pow(vv, (1.0 - m) / m) / (m * (1.0 - m));
            return std::pow(vv, 1.0 / m) / (1.0 - m);
        }
        dsrc = 1.0 / (2.0 - p);
        return v / (2.0 - p);
    };

    std::vector<double> res(n), lower(n), diag(n), upper(n), rhs(n);
    bool clamped = false;

    auto assemble = [&](const std::vector<double>& v, bool with_jac) {
        std::vector<double> G(n + 1, 0.0), dG(n + 1, 0.0);  // dG = d flux / d s
        for (std::size_t f = 1; f < n; ++f) {
            const double dr = r[f] - r[f - 1];
            const double s = (v[f] - v[f - 1]) / dr;
            double ds;
            const double area = std::pow(r_face[f], N - 1);
            G[f] = area * flux(s, ds);
            dG[f] = area * ds / dr;
        }
        for (std::size_t i = 0; i < n; ++i) {
            double dsrc;
            const double F = source(v[i], dsrc) * vol[i];
            res[i] = G[i + 1] - G[i] - F;
            if (with_jac) {
                lower[i] = dG[i];
                upper[i] = dG[i + 1];
                diag[i] = -dG[i] - dG[i + 1] - dsrc * vol[i];
            }
        }
        // Dirichlet rows pin the wall values.
        auto pin = [&](std::size_t i) {
            res[i] = 0.0;
            if (with_jac) {
                lower[i] = upper[i] = 0.0;
                diag[i] = 1.0;
            }
        };
        if (lo_fixed) pin(0);
        pin(n - 1);
        // Residual norm over the genuinely unknown rows only; including a
        // pinned wall row would swamp the norm with a constant boundary-layer
        // term and blind the line search.
        double max_scaled = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            max_scaled = std::max(max_scaled, std::abs(res[i]) / (vol[i] + 1e-300));
        return max_scaled;
    };

    double res_norm = assemble(u, true);
    const double u_scale = pme ? primal_to_unknown(wall_value) : wall_value;
    int iter = 0;
    for (; iter < grid.max_newton_iterations; ++iter) {
        // Solve J du = -R (J is tridiagonal in the node ordering).
        for (std::size_t i = 0; i < n; ++i) rhs[i] = -res[i];
        std::vector<double> lo = lower, di = diag, up = upper;
        solve_tridiagonal(lo, di, up, rhs);

        // The solution spans many orders of magnitude between the blow-up
        // wall and the interior, so convergence must be judged per node
        // relative to the local value (with a small floor for clamped zeros).
        const double floor = 1e-14 * u_scale + 1e-300;
        double step_rel = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            step_rel = std::max(step_rel, std::abs(rhs[i]) / (std::abs(u[i]) + floor));

        double damp = 1.0;
        std::vector<double> trial(n);
        double trial_norm = res_norm;
        for (int ls = 0; ls < 30; ++ls) {
            for (std::size_t i = 0; i < n; ++i) {
                trial[i] = u[i] + damp * rhs[i];
                if (pme && trial[i] < 0.0) {
                    trial[i] = 0.0;
                    clamped = true;
                }
            }
            trial_norm = assemble(trial, false);
            if (trial_norm < res_norm || step_rel * damp < grid.newton_tol) break;
            damp *= 0.5;
        }
        u = trial;
        res_norm = assemble(u, true);
        if (step_rel * damp < grid.newton_tol) break;
    }

    double dsrc_unused;
    const double src_scale = source(u_scale, dsrc_unused);
    BlowupSolution out{RadialField(domain), offset, trunc.r_infinity,
                       res_norm / (src_scale + 1e-300), iter, clamped};
    out.field.r_grid = r;
    out.field.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.field.values[i] = unknown_to_primal(std::max(u[i], 0.0));
    return out;
}

std::vector<BoundaryRateRow> boundary_rate_report(const RadialField& field,
                                                  const DiffusionModel& model) {
    const double k = model.decay_exponent();
    std::vector<BoundaryRateRow> rows;
    rows.reserve(field.r_grid.size());
    for (std::size_t i = 0; i < field.r_grid.size(); ++i) {
        const double d = field.domain.distance_to_boundary(field.r_grid[i]);
        if (!(d > 0.0)) continue;
        rows.push_back({d, field.values[i] * std::pow(d, k)});
    }
    std::sort(rows.begin(), rows.end(),
              [](const BoundaryRateRow& a, const BoundaryRateRow& b) { return a.d < b.d; });
    return rows;
}

}  // namespace fdlab
