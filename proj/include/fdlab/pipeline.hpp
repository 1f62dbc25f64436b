#ifndef FDLAB_PIPELINE_HPP
#define FDLAB_PIPELINE_HPP

#include <limits>
#include <vector>

#include "fdlab/geometry.hpp"
#include "fdlab/model.hpp"
#include "fdlab/pde.hpp"
#include "fdlab/profiles.hpp"

namespace fdlab {

/// Smallest admissible power alpha of the integrand u^alpha:
/// (N+1)(2-p)/(2p) for p-Laplace, (N+1)(1-m)/4 for porous medium.
double alpha_threshold(const DiffusionModel& model, int dimension);

/// Scaling exponent theta of the limit t^{-theta} ∫ u^alpha:
/// (N+1)/(2p) for p-Laplace, (N+1)/4 for porous medium.
double theorem_exponent(const DiffusionModel& model, int dimension);

struct ConstantResult {
    double c;              // 2^{(N-1)/2} omega_{N-1} ∫_0^∞ profile^alpha xi^{(N-1)/2} dxi
    double tail_fraction;  // share contributed by the closed-form tail correction
    bool near_threshold;   // alpha < 1.1 * threshold: the tail dominates, expect noise
};

/// The limit constant from the profile quadrature plus the exact power-law
/// tail beyond the tabulated range. Throws when alpha is at or below the
/// threshold, or when the tail correction exceeds 10% of the total.
ConstantResult compute_c(const SimilarityProfile& profile, double alpha, int dimension);

/// ∫_{B_R(x0)} u^alpha dx for a radial field, reduced to a 1-D integral of
/// u(r)^alpha against exact sphere-ball intersection areas.
double integral_functional(const RadialField& field, double alpha,
                           const TouchingBallConfig& config);

struct TheoremConfig {
    DiffusionModel model;
    double alpha;
    TouchingBallConfig config;
    double beta = 1.0;
    ProblemKind problem = ProblemKind::InitialBoundary;
    std::vector<double> times;  // increasing; empty selects a default ladder
    GridSpec grid;
};

struct PerTimeRow {
    double t;
    double integral;  // I(t)
    double scaled;    // t^{-theta} I(t)
};

struct VerificationReport {
    bool divergent = false;
    double theta_expected = 0.0;
    double theta_fitted = 0.0;
    double fitted_limit = std::numeric_limits<double>::quiet_NaN();
    double predicted = std::numeric_limits<double>::quiet_NaN();
    double relative_error = std::numeric_limits<double>::quiet_NaN();
    double c_constant = 0.0;
    double tail_fraction = 0.0;
    std::vector<PerTimeRow> per_time;  // sorted by decreasing t
};

/// End-to-end check of the short-time limit: simulates the evolution,
/// integrates u^alpha over the probe ball at each output time, fits
/// log I = theta log t + log L over the final time decade, and compares
/// exp(intercept) against c * prod(1/R - kappa_j)^{-1/2}.
/// Degenerate probe configurations report monotone growth of the scaled
/// integral instead of a limit (and throw when no growth is seen).
VerificationReport verify_theorem(const TheoremConfig& tc);

}  // namespace fdlab

#endif
