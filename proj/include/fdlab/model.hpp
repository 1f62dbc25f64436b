#ifndef FDLAB_MODEL_HPP
#define FDLAB_MODEL_HPP

#include <stdexcept>
#include <string>

namespace fdlab {

enum class EquationKind { PLaplace, PorousMedium };

/// Which fast diffusion equation is being solved and its exponent
/// (p for the p-Laplace evolution, m for the porous medium type).
/// Only the fast ranges 1<p<2 and 0<m<1 are accepted.
struct DiffusionModel {
    EquationKind kind;
    double exponent;

    DiffusionModel(EquationKind k, double e) : kind(k), exponent(e) { validate(); }

    static DiffusionModel p_laplace(double p) { return {EquationKind::PLaplace, p}; }
    static DiffusionModel porous_medium(double m) { return {EquationKind::PorousMedium, m}; }

    void validate() const {
        if (kind == EquationKind::PLaplace) {
            if (!(exponent > 1.0 && exponent < 2.0))
                throw std::invalid_argument("p-Laplace exponent must satisfy 1 < p < 2, got " +
                                            std::to_string(exponent));
        } else {
            if (!(exponent > 0.0 && exponent < 1.0))
                throw std::invalid_argument("porous medium exponent must satisfy 0 < m < 1, got " +
                                            std::to_string(exponent));
        }
    }

    bool is_p_laplace() const { return kind == EquationKind::PLaplace; }

    /// Exponent of the similarity variable: profiles are evaluated at
    /// xi = t^{-1/p} d (p-Laplace) or xi = t^{-1/2} d (porous medium).
    double similarity_time_exponent() const {
        return is_p_laplace() ? 1.0 / exponent : 0.5;
    }

    /// Exponent in the separable short-time solution t^{1/(2-p)} v (resp. t^{1/(1-m)} w).
    double separable_time_exponent() const {
        return is_p_laplace() ? 1.0 / (2.0 - exponent) : 1.0 / (1.0 - exponent);
    }

    /// Decay rate of the profile tail and of the blow-up solution at the
    /// boundary: p/(2-p) for p-Laplace, 2/(1-m) for porous medium.
    double decay_exponent() const {
        return is_p_laplace() ? exponent / (2.0 - exponent) : 2.0 / (1.0 - exponent);
    }

    std::string kind_name() const { return is_p_laplace() ? "p_laplace" : "porous_medium"; }
};

/// Blow-up rate constant: the profile and the boundary blow-up solution both
/// behave like blowup_constant(model) * distance^{-decay_exponent} at the wall.
///
///   c(p) = (2-p)/p * ((2-p)/(2p(p-1)))^{-1/(2-p)}
///   c(m) = (2m(1+m)/(1-m))^{1/(1-m)}
///
/// Diverges as p -> 2^- or m -> 1^- (the exponent 1/(2-p) resp. 1/(1-m) blows
/// up); the result may overflow to +inf for exponents extremely close to the
/// endpoint, which callers can detect with std::isfinite.
double blowup_constant(const DiffusionModel& model);

/// Prefactor of the explicit p-Laplace profile integrand,
/// ((2-p)/(2p(p-1)))^{-1/(2-p)}.
double plaplace_profile_prefactor(double p);

}  // namespace fdlab

#endif
