#include "fdlab/pde.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include "fdlab/mesh.hpp"

namespace fdlab {

namespace {

enum class EndCondition { ZeroFlux, Dirichlet };

struct SpatialSetup {
    std::vector<double> r;
    EndCondition left, right;
    double left_value = 0.0, right_value = 0.0;
    std::vector<double> u0;
};

// Near-wall cell size that resolves the similarity boundary layer at the
// earliest output time (layer width ~ t^{1/p} resp. t^{1/2}).
double wall_cell_size(const EvolutionSpec& spec, double h_max) {
    const double t_min = spec.times.front();
    const double layer = std::pow(t_min, spec.model.similarity_time_exponent());
    const double h = std::min(0.1 * layer, h_max);
    if (h >= 0.5 * layer)
        std::cerr << "warning: initial boundary layer (width " << layer
                  << ") is under-resolved by the near-wall cell " << h << "\n";
    return h;
}

// Concatenates graded pieces so that interior interfaces (Cauchy initial
// data jumps) get the same clustering as true boundaries.
std::vector<double> multi_graded(const std::vector<double>& breakpoints,
                                 const std::vector<bool>& cluster, double h_wall, double h_max,
                                 double ratio) {
    std::vector<double> r;
    for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
        const double ha = cluster[k] ? h_wall : 0.0;
        const double hb = cluster[k + 1] ? h_wall : 0.0;
        std::vector<double> piece =
            graded_interval(breakpoints[k], breakpoints[k + 1], ha, hb, h_max, ratio);
        if (!r.empty()) piece.erase(piece.begin());
        r.insert(r.end(), piece.begin(), piece.end());
    }
    return r;
}

SpatialSetup build_spatial(const EvolutionSpec& spec) {
    const RadialDomain& dom = spec.domain;
    const double beta = spec.beta;
    double r_tr = spec.grid.truncation_radius;
    if (r_tr <= 0.0)
        r_tr = dom.shape() == DomainShape::Annulus ? 2.0 * dom.outer_radius()
                                                   : 6.0 * dom.scale();

    SpatialSetup s;
    std::vector<double> bp;
    std::vector<bool> cl;
    if (spec.problem == ProblemKind::InitialBoundary) {
        switch (dom.shape()) {
            case DomainShape::Ball:
                bp = {0.0, dom.outer_radius()};
                cl = {false, true};
                s.left = EndCondition::ZeroFlux;
                s.right = EndCondition::Dirichlet;
                s.right_value = beta;
                break;
            case DomainShape::ExteriorBall:
                bp = {dom.inner_radius(), r_tr};
                cl = {true, false};
                s.left = EndCondition::Dirichlet;
                s.left_value = beta;
                s.right = EndCondition::Dirichlet;
                s.right_value = 0.0;
                break;
            case DomainShape::Annulus:
                bp = {dom.inner_radius(), dom.outer_radius()};
                cl = {true, true};
                s.left = s.right = EndCondition::Dirichlet;
                s.left_value = s.right_value = beta;
                break;
        }
    } else {  // Cauchy: simulate on [0, r_tr]; the far field sits in the
              // initial plateau (value beta) unless the plateau is the
              // bounded complement of an exterior domain.
        s.left = EndCondition::ZeroFlux;
        s.right = EndCondition::Dirichlet;
        switch (dom.shape()) {
            case DomainShape::Ball:
                bp = {0.0, dom.outer_radius(), r_tr};
                cl = {false, true, false};
                s.right_value = beta;
                break;
            case DomainShape::ExteriorBall:
                bp = {0.0, dom.inner_radius(), r_tr};
                cl = {false, true, false};
                s.right_value = 0.0;
                break;
            case DomainShape::Annulus:
                bp = {0.0, dom.inner_radius(), dom.outer_radius(), r_tr};
                cl = {false, true, true, false};
                s.right_value = beta;
                break;
        }
    }

    const double span = bp.back() - bp.front();
    const double h_max = 2.0 * span / double(spec.grid.n_space);
    const double h_wall = wall_cell_size(spec, h_max);
    s.r = multi_graded(bp, cl, h_wall, h_max, spec.grid.refinement_ratio);

    s.u0.assign(s.r.size(), 0.0);
    if (spec.problem == ProblemKind::Cauchy) {
        for (std::size_t i = 0; i < s.r.size(); ++i)
            if (!dom.contains_radius(s.r[i])) s.u0[i] = beta;
    }
    if (s.left == EndCondition::Dirichlet) s.u0.front() = s.left_value;
    if (s.right == EndCondition::Dirichlet) s.u0.back() = s.right_value;
    return s;
}

// One implicit Euler step solved by damped Newton; returns false when the
// iteration fails to converge (caller halves the time step).
class ImplicitStepper {
public:
    ImplicitStepper(const EvolutionSpec& spec, const SpatialSetup& setup)
        : pme_(spec.model.kind == EquationKind::PorousMedium),
          exp_(spec.model.exponent),
          beta_(spec.beta),
          left_(setup.left),
          right_(setup.right),
          left_value_(setup.left_value),
          right_value_(setup.right_value),
          r_(setup.r) {
        const int N = spec.domain.dimension();
        const std::size_t n = r_.size();
        r_face_.resize(n + 1);
        r_face_[0] = r_.front();
        r_face_[n] = r_.back();
        for (std::size_t i = 1; i < n; ++i) r_face_[i] = 0.5 * (r_[i - 1] + r_[i]);
        vol_.resize(n);
        area_.resize(n + 1);
        for (std::size_t i = 0; i < n; ++i)
            vol_[i] = (std::pow(r_face_[i + 1], N) - std::pow(r_face_[i], N)) / double(N);
        for (std::size_t f = 0; f <= n; ++f) area_[f] = std::pow(r_face_[f], N - 1);

        sigma_ = spec.grid.regularization_sigma;
        if (sigma_ <= 0.0) sigma_ = 1e-8 * beta_ / (r_.back() - r_.front());
        floor_ = spec.grid.floor_fraction * beta_;
    }

    const std::vector<double>& radii() const { return r_; }

    bool step(const std::vector<double>& u_old, double dt, std::vector<double>& u) const {
        const std::size_t n = r_.size();
        u = u_old;
        std::vector<double> res(n), lo(n), di(n), up(n), rhs(n);

        // Face f sits between cells f-1 and f; a_f is the flux sensitivity to
        // the gradient, b_f the (symmetric) sensitivity to the face value.
        auto assemble = [&](const std::vector<double>& v, bool jac) {
            double norm2 = 0.0;
            std::vector<double> G(n + 1, 0.0), a(n + 1, 0.0), b(n + 1, 0.0);
            for (std::size_t f = 1; f < n; ++f) {
                const double dr = r_[f] - r_[f - 1];
                const double s = (v[f] - v[f - 1]) / dr;
                double flux, dflux_ds, dflux_du;  // du: dependence via the face value
                if (pme_) {
                    const double ubar = std::max(0.5 * (v[f - 1] + v[f]), 0.0);
                    const double uc = std::max(ubar, floor_);
                    const double D = exp_ * std::pow(uc, exp_ - 1.0);
                    flux = D * s;
                    dflux_ds = D;
                    dflux_du = (ubar > floor_)
                                   ? 0.5 * exp_ * (exp_ - 1.0) * std::pow(uc, exp_ - 2.0) * s
                                   : 0.0;
                } else {
                    const double w2 = s * s + sigma_ * sigma_;
                    const double base = std::pow(w2, 0.5 * (exp_ - 2.0));
                    flux = base * s;
                    dflux_ds = base / w2 * ((exp_ - 1.0) * s * s + sigma_ * sigma_);
                    dflux_du = 0.0;
                }
                G[f] = area_[f] * flux;
                a[f] = area_[f] * dflux_ds / dr;
                b[f] = area_[f] * dflux_du;
            }
            for (std::size_t i = 0; i < n; ++i) {
                res[i] = (v[i] - u_old[i]) * vol_[i] - dt * (G[i + 1] - G[i]);
                if (jac) {
                    lo[i] = dt * (-a[i] + b[i]);
                    up[i] = -dt * (a[i + 1] + b[i + 1]);
                    di[i] = vol_[i] + dt * (a[i] + a[i + 1]) - dt * (b[i + 1] - b[i]);
                }
                norm2 += res[i] * res[i];
            }
            auto pin = [&](std::size_t i) {
                norm2 -= res[i] * res[i];
                res[i] = 0.0;
                if (jac) {
                    lo[i] = up[i] = 0.0;
                    di[i] = 1.0;
                }
            };
            if (left_ == EndCondition::Dirichlet) pin(0);
            if (right_ == EndCondition::Dirichlet) pin(n - 1);
            return std::sqrt(norm2);
        };

        if (left_ == EndCondition::Dirichlet) u.front() = left_value_;
        if (right_ == EndCondition::Dirichlet) u.back() = right_value_;

        double res_norm = assemble(u, true);
        const double step_tol = 1e-11 * beta_;
        for (int it = 0; it < 40; ++it) {
            for (std::size_t i = 0; i < n; ++i) rhs[i] = -res[i];
            std::vector<double> l = lo, d = di, p = up;
            solve_tridiagonal(l, d, p, rhs);
            double step_norm = 0.0;
            for (double x : rhs) step_norm = std::max(step_norm, std::abs(x));

            if (step_norm <= step_tol) {
                for (std::size_t i = 0; i < n; ++i) u[i] = std::max(u[i] + rhs[i], 0.0);
                return true;
            }
            double damp = 1.0;
            std::vector<double> trial(n);
            bool improved = false;
            for (int ls = 0; ls < 25; ++ls) {
                for (std::size_t i = 0; i < n; ++i)
                    trial[i] = std::max(u[i] + damp * rhs[i], 0.0);
                const double trial_norm = assemble(trial, false);
                if (trial_norm < res_norm) {
                    improved = true;
                    break;
                }
                damp *= 0.5;
            }
            if (!improved) return false;
            u = trial;
            res_norm = assemble(u, true);
        }
        return false;
    }

private:
    bool pme_;
    double exp_, beta_, sigma_, floor_;
    EndCondition left_, right_;
    double left_value_, right_value_;
    std::vector<double> r_, r_face_, vol_, area_;
};

}  // namespace

std::vector<RadialField> simulate(const EvolutionSpec& spec) {
    if (spec.times.empty()) throw std::invalid_argument("no output times requested");
    if (!(spec.beta > 0.0)) throw std::invalid_argument("beta must be positive");
    for (std::size_t i = 0; i < spec.times.size(); ++i) {
        if (!(spec.times[i] > 0.0) || (i > 0 && !(spec.times[i] > spec.times[i - 1])))
            throw std::invalid_argument("output times must be positive and increasing");
    }
    if (spec.grid.n_space < 2 || spec.grid.n_time < 2)
        throw std::invalid_argument("grid counts must be at least 2");
    if (!(spec.grid.refinement_ratio >= 1.0))
        throw std::invalid_argument("refinement ratio must be >= 1");

    const SpatialSetup setup = build_spatial(spec);
    ImplicitStepper stepper(spec, setup);

    // Internal time grid graded toward t = 0, merged with the output times.
    const double t_max = spec.times.back();
    std::vector<double> grid_times;
    for (std::size_t j = 1; j <= spec.grid.n_time; ++j)
        grid_times.push_back(t_max *
                             std::pow(double(j) / double(spec.grid.n_time), spec.grid.time_grading));
    grid_times.insert(grid_times.end(), spec.times.begin(), spec.times.end());
    std::sort(grid_times.begin(), grid_times.end());
    grid_times.erase(std::unique(grid_times.begin(), grid_times.end(),
                                 [&](double a, double b) { return b - a < 1e-14 * t_max; }),
                     grid_times.end());

    std::vector<RadialField> out;
    std::vector<double> u = setup.u0, u_next;
    double t = 0.0;
    std::size_t next_output = 0;
    for (double target : grid_times) {
        while (t < target * (1.0 - 1e-15)) {
            double dt = target - t;
            int halvings = 0;
            while (!stepper.step(u, dt, u_next)) {
                dt *= 0.5;
                if (++halvings > 45)
                    throw std::runtime_error("Newton failed below the time-step floor at t = " +
                                             std::to_string(t));
            }
            u = u_next;
            t += dt;
        }
        t = target;
        while (next_output < spec.times.size() &&
               std::abs(spec.times[next_output] - t) <= 1e-12 * t_max) {
            RadialField field(spec.domain);
            field.r_grid = setup.r;
            field.values = u;
            field.time = t;
            out.push_back(std::move(field));
            ++next_output;
        }
    }
    if (out.size() != spec.times.size())
        throw std::logic_error("internal time grid missed an output time");
    return out;
}

double profile_value_extrapolated(const SimilarityProfile& profile, double xi) {
    if (xi <= profile.xi_min()) return profile.plateau();
    if (xi >= profile.xi_max())
        return profile.matched_tail * std::pow(xi, -profile.decay_exp);
    return profile.value_at(xi);
}

std::vector<InitialBehaviorRow> check_initial_behavior(const std::vector<RadialField>& fields,
                                                       const RadialField& separable,
                                                       const DiffusionModel& model,
                                                       double d_min) {
    std::vector<InitialBehaviorRow> rows;
    const double sep = model.separable_time_exponent();
    for (const RadialField& f : fields) {
        if (!f.time) throw std::invalid_argument("field lacks a time stamp");
        const double t = *f.time;
        double dev = 0.0;
        bool any = false;
        for (std::size_t i = 0; i < f.r_grid.size(); ++i) {
            const double r = f.r_grid[i];
            if (!f.domain.contains_radius(r)) continue;
            if (f.domain.distance_to_boundary(r) < d_min) continue;
            if (r < separable.r_grid.front() || r > separable.r_grid.back()) continue;
            const double v = separable.value_at(r);
            if (!(v > 0.0)) continue;
            dev = std::max(dev, std::abs(std::pow(t, -sep) * f.values[i] - v) / v);
            any = true;
        }
        if (!any) throw std::invalid_argument("compact subset is empty on the field grid");
        rows.push_back({t, dev});
    }
    return rows;
}

double separable_bound_excess(const std::vector<RadialField>& fields,
                              const RadialField& separable, const DiffusionModel& model) {
    const double sep = model.separable_time_exponent();
    double excess = 0.0;
    for (const RadialField& f : fields) {
        const double t = f.time.value();
        for (std::size_t i = 0; i < f.r_grid.size(); ++i) {
            const double r = f.r_grid[i];
            if (r < separable.r_grid.front() || r > separable.r_grid.back()) continue;
            const double v = separable.value_at(r);
            if (!(v > 0.0)) continue;
            excess = std::max(excess, (std::pow(t, -sep) * f.values[i] - v) / v);
        }
    }
    return excess;
}

SandwichReport check_sandwich(const std::vector<RadialField>& fields,
                              const SimilarityProfile& minus, const SimilarityProfile& plus,
                              double rho_eps, double tau_eps) {
    if (minus.variant.side != plus.variant.side)
        throw std::invalid_argument("barrier profiles disagree on the problem type");
    const bool whole = minus.variant.side == ProfileSide::WholeLine;
    const double sim = minus.model.similarity_time_exponent();

    SandwichReport report;
    for (const RadialField& f : fields) {
        const double t = f.time.value();
        if (!(t > 0.0) || t > tau_eps * (1.0 + 1e-12)) continue;
        const double scale = std::pow(t, -sim);
        for (std::size_t i = 0; i < f.r_grid.size(); ++i) {
            const double r = f.r_grid[i];
            const double d = whole ? f.domain.signed_distance(r)
                                   : f.domain.distance_to_boundary(r);
            if (whole) {
                if (std::abs(d) > rho_eps) continue;
            } else {
                if (!f.domain.contains_radius(r) || !(d > 0.0) || d > rho_eps) continue;
            }
            const double w_m = profile_value_extrapolated(minus, scale * d);
            const double w_p = profile_value_extrapolated(plus, scale * d);
            const double u = f.values[i];
            report.violation =
                std::max(report.violation, std::max(0.0, w_m - u) + std::max(0.0, u - w_p));
            report.max_gap = std::max(report.max_gap, w_p - w_m);
            ++report.n_checked;
        }
    }
    if (report.n_checked == 0) throw std::invalid_argument("sandwich region is empty");
    return report;
}

}  // namespace fdlab
