#ifndef FDLAB_BLOWUP_HPP
#define FDLAB_BLOWUP_HPP

#include <vector>

#include "fdlab/domain.hpp"
#include "fdlab/model.hpp"

namespace fdlab {

struct BlowupGridSpec {
    std::size_t n_points = 2400;      // approximate node count
    double refinement_ratio = 1.05;   // geometric growth away from blow-up walls
    double r_infinity_factor = 100.0; // far-field truncation = factor * rho (ExteriorBall)
    double newton_tol = 1e-11;        // step-based convergence criterion
    int max_newton_iterations = 200;
};

/// Radial boundary blow-up solution with its solve diagnostics.
struct BlowupSolution {
    RadialField field;
    double delta;        // boundary truncation distance
    double r_infinity;   // far-field truncation radius (NaN unless ExteriorBall)
    double residual;     // final scaled Newton residual
    int newton_iterations;
    bool clamped_negative;  // some iterate was clamped to stay positive
};

/// Solves the radial two-point BVP for the boundary blow-up solution
///   (r^{N-1} |v'|^{p-2} v')' = r^{N-1} v/(2-p)        (p-Laplace)
///   (r^{N-1} (w^m)')'       = r^{N-1} w/(1-m)         (porous medium)
/// The blow-up condition is imposed as a Dirichlet value at distance
/// `offset` from each blow-up boundary, taken from the leading asymptote
/// c * offset^{-decay}; for ExteriorBall, v -> 0 at infinity is imposed as a
/// zero Dirichlet value at the truncation radius.
BlowupSolution solve_blowup(const DiffusionModel& model, const RadialDomain& domain,
                            double offset, const BlowupGridSpec& grid = {});

struct BoundaryRateRow {
    double d;      // distance to the nearest boundary sphere
    double ratio;  // v * d^{decay_exponent}
};

/// Tabulates v * d^{p/(2-p)} (resp. w * d^{2/(1-m)}) against d, sorted by
/// increasing d. The approach to blowup_constant is reported, not assumed.
std::vector<BoundaryRateRow> boundary_rate_report(const RadialField& field,
                                                  const DiffusionModel& model);

}  // namespace fdlab

#endif
