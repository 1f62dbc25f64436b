#ifndef FDLAB_PDE_HPP
#define FDLAB_PDE_HPP

#include <cstddef>
#include <vector>

#include "fdlab/domain.hpp"
#include "fdlab/model.hpp"
#include "fdlab/profiles.hpp"

namespace fdlab {

/// InitialBoundary: u = beta on the boundary, u0 = 0 inside the domain.
/// Cauchy: whole-space run with u0 = beta outside the domain, 0 inside.
enum class ProblemKind { InitialBoundary, Cauchy };

struct GridSpec {
    std::size_t n_space = 800;
    std::size_t n_time = 400;
    double refinement_ratio = 1.05;
    /// Gradient regularization; <= 0 selects the default 1e-8 * beta / diam.
    double regularization_sigma = -1.0;
    /// Simulation truncation radius (Cauchy and exterior runs); <= 0 selects
    /// a default multiple of the domain scale.
    double truncation_radius = -1.0;
    /// Power grading of the internal time grid toward t = 0.
    double time_grading = 3.0;
    /// Diffusivity floor fraction for the porous medium run (floor = frac * beta).
    double floor_fraction = 1e-12;
};

struct EvolutionSpec {
    DiffusionModel model;
    RadialDomain domain;
    ProblemKind problem = ProblemKind::InitialBoundary;
    double beta = 1.0;
    GridSpec grid;
    std::vector<double> times;  // strictly increasing output times (> 0)
};

/// Implicit-Euler finite-volume time integration of the radial fast
/// diffusion equation; returns one field per requested output time.
/// Newton failures trigger automatic time-step halving before erroring out.
std::vector<RadialField> simulate(const EvolutionSpec& spec);

struct InitialBehaviorRow {
    double t;
    double deviation;  // sup over the compact subset of |t^{-sep} u / v - 1|
};

/// Compares the rescaled evolution against the separable elliptic solution
/// on the compact subset { distance >= d_min }.
std::vector<InitialBehaviorRow> check_initial_behavior(const std::vector<RadialField>& fields,
                                                       const RadialField& separable,
                                                       const DiffusionModel& model,
                                                       double d_min);

/// Largest relative excess of t^{-1/(2-p)} u over the separable solution
/// (max of t^{-sep} u / v - 1 over all fields and radii covered by both
/// grids); the one-sided upper bound holds when this is <= tol.
double separable_bound_excess(const std::vector<RadialField>& fields,
                              const RadialField& separable, const DiffusionModel& model);

struct SandwichReport {
    double violation = 0.0;    // max over region of max(0, w_- - u) + max(0, u - w_+)
    double max_gap = 0.0;      // max of w_+ - w_- over the checked region
    std::size_t n_checked = 0; // number of (r, t) samples in the region
};

/// Checks the barrier sandwich w_- <= u <= w_+ on the tubular region of
/// width rho_eps for times <= tau_eps, with w_± = profile(t^{-sigma} d).
/// HalfLine profiles use the one-sided distance, WholeLine the signed one.
SandwichReport check_sandwich(const std::vector<RadialField>& fields,
                              const SimilarityProfile& minus, const SimilarityProfile& plus,
                              double rho_eps, double tau_eps);

/// Profile value extended beyond the tabulated grid: plateau on the left,
/// the matched power tail on the right.
double profile_value_extrapolated(const SimilarityProfile& profile, double xi);

}  // namespace fdlab

#endif
