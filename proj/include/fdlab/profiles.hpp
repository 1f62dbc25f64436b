#ifndef FDLAB_PROFILES_HPP
#define FDLAB_PROFILES_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "fdlab/interp.hpp"
#include "fdlab/model.hpp"

namespace fdlab {

/// HalfLine: profile of the initial-boundary problem, xi >= 0.
/// WholeLine: profile of the Cauchy problem, xi in R.
enum class ProfileSide { HalfLine, WholeLine };

enum class PerturbationSign { None, Plus, Minus };

struct ProfileVariant {
    ProfileSide side = ProfileSide::HalfLine;
    PerturbationSign perturbation = PerturbationSign::None;
    double epsilon = 0.0;

    static ProfileVariant half_line() { return {}; }
    static ProfileVariant whole_line() { return {ProfileSide::WholeLine}; }
    static ProfileVariant perturbed(ProfileSide s, PerturbationSign sign, double eps) {
        return {s, sign, eps};
    }

    void validate() const {
        if (perturbation == PerturbationSign::None) return;
        if (!(epsilon > 0.0 && epsilon < 0.25))
            throw std::invalid_argument("perturbation epsilon must satisfy 0 < eps < 1/4");
    }

    bool is_perturbed() const { return perturbation != PerturbationSign::None; }

    /// +eps for Plus, -eps for Minus, 0 otherwise.
    double signed_epsilon() const {
        switch (perturbation) {
            case PerturbationSign::Plus: return epsilon;
            case PerturbationSign::Minus: return -epsilon;
            default: return 0.0;
        }
    }

    /// +1 for Plus, -1 for Minus, 0 for None (the sign flips inside the
    /// perturbed integrand / forcing term).
    int sign() const {
        switch (perturbation) {
            case PerturbationSign::Plus: return +1;
            case PerturbationSign::Minus: return -1;
            default: return 0;
        }
    }

    std::string name() const;
};

/// A tabulated decreasing similarity profile with its asymptote metadata.
class SimilarityProfile {
public:
    DiffusionModel model;
    ProfileVariant variant;
    double beta;  // plateau value of the underlying (unperturbed) problem

    /// Shooting parameter of the explicit p-Laplace profile; NaN for PME.
    double lambda = std::numeric_limits<double>::quiet_NaN();

    std::vector<double> xi_grid;  // strictly increasing
    std::vector<double> values;   // strictly decreasing, positive

    double blowup_const;    // c(p) or c(m)
    double decay_exp;       // p/(2-p) or 2/(1-m)
    double predicted_tail;  // theoretical limit of value * xi^decay_exp
    double matched_tail;    // the same constant as measured on the computed orbit

    /// PME only: abscissa where the integrated orbit was spliced onto the
    /// power asymptote (NaN for p-Laplace profiles).
    double tail_match_xi = std::numeric_limits<double>::quiet_NaN();

    /// PME perturbed profiles: the small shift eta_eps of the scaling branch.
    double eta_eps = 0.0;

    SimilarityProfile(DiffusionModel m, ProfileVariant v, double b)
        : model(m), variant(v), beta(b), blowup_const(0), decay_exp(0),
          predicted_tail(0), matched_tail(0) {}

    /// Plateau actually attained by this profile (beta +/- eps when perturbed).
    double plateau() const { return beta + variant.signed_epsilon(); }

    double xi_min() const { return xi_grid.front(); }
    double xi_max() const { return xi_grid.back(); }

    /// Monotone-cubic interpolated value; throws if xi is outside the grid.
    double value_at(double xi) const;

    /// Builds the interpolant (done automatically on first value_at call).
    void finalize();

private:
    mutable MonotoneCubic interp_;
    mutable bool interp_ready_ = false;
};

/// value(xi) * xi^{decay_exponent}; xi must be positive and inside the grid.
double profile_asymptote_ratio(const SimilarityProfile& profile, double xi);

/// Plateau drop A * integral of the explicit p-Laplace integrand at a given
/// lambda (the residual function of the lambda search). Strictly decreasing
/// in lambda. Exposed for property tests.
double plaplace_profile_drop(const DiffusionModel& model, const ProfileVariant& variant,
                             double lambda);

/// Solves for the unique lambda > 0 with profile drop == beta + signed eps.
/// Bisection bracket is grown geometrically from lambda = 1 within
/// [2^-40, 2^40]; throws if no bracket is found or the residual fails to
/// reach the relative tolerance.
double solve_lambda(const DiffusionModel& model, const ProfileVariant& variant, double beta,
                    double tol = 1e-12);

/// Tabulates the explicit p-Laplace profile (phi, psi or a perturbed variant)
/// by adaptive quadrature of its defining integrand. lambda must come from
/// solve_lambda for the same (model, variant, beta).
SimilarityProfile tabulate_plaplace_profile(const DiffusionModel& model,
                                            const ProfileVariant& variant, double beta,
                                            double lambda, double xi_max = 1e4,
                                            std::size_t n = 4096);

struct PmeShootingOptions {
    double xi_max = 1e4;
    std::size_t n = 4096;
    /// Switch to the power asymptote once f < f_switch_fraction * gamma.
    double f_switch_fraction = 1e-8;
    /// eta_eps for perturbed profiles; <= 0 selects the default epsilon^2.
    double eta_eps = -1.0;
    /// Integrator tolerance for the final orbit.
    double ode_rel_tol = 1e-11;
};

/// Self-similar decay profile f_gamma of the porous medium equation (and the
/// perturbed f_+/f_- built from it by the explicit scaling), computed by
/// shooting on the initial slope in the variable v = f^m.
SimilarityProfile solve_pme_profile(const DiffusionModel& model, const ProfileVariant& variant,
                                    double gamma, double tol = 1e-8,
                                    const PmeShootingOptions& opts = {});

}  // namespace fdlab

#endif
