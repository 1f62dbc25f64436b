#ifndef FDLAB_GEOMETRY_HPP
#define FDLAB_GEOMETRY_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "fdlab/domain.hpp"

namespace fdlab {

/// Volume of the unit ball in R^k (omega_k = pi^{k/2} / Gamma(k/2 + 1)).
double unit_ball_volume(int k);

/// Surface area of the unit sphere in R^n (2 pi^{n/2} / Gamma(n/2)).
double unit_sphere_area(int n);

/// Area of the intersection of the sphere of radius `a` (center O) with the
/// ball of radius `R` centered at distance `L` from O, in R^N. Exact up to
/// quadrature tolerance 1e-10 on the cap angle integral.
double sphere_cap_area(double a, double L, double R, int N);

/// A probe ball B_R(x0) inside the domain whose closure touches exactly one
/// boundary sphere. The center is placed on the radial axis at distance R
/// from the touched boundary, on the domain side.
struct TouchingBallConfig {
    RadialDomain domain;
    BoundaryComponent touched;
    double R;

    TouchingBallConfig(RadialDomain d, BoundaryComponent c, double radius);

    int dimension() const { return domain.dimension(); }

    /// Distance of the probe center from the origin.
    double center_radius() const;

    /// The common principal curvature at the touching point.
    double curvature() const { return domain.curvature_at(touched); }

    /// True when some curvature equals 1/R (the limit formula diverges).
    bool degenerate() const;
};

/// H^{N-1}(Gamma_s ∩ B_R(x0)) where Gamma_s is the level set of the distance
/// to the boundary. Both level-set components are counted for an annulus.
/// Requires 0 < s < R (and s below the inner reach for Annulus).
double level_area(const TouchingBallConfig& config, double s);

/// Monte Carlo estimate of level_area by rejection sampling on the level
/// sphere(s); returns the estimate and fills std_err when non-null.
double level_area_monte_carlo(const TouchingBallConfig& config, double s, std::size_t samples,
                              std::uint64_t seed, double* std_err = nullptr);

/// prod_j (1/R - kappa_j); nullopt when some factor vanishes (within 1e-12
/// absolute), i.e. the degenerate case. Throws if some kappa_j > 1/R.
std::optional<double> curvature_product(double R, const std::vector<double>& curvatures);

struct LevelAreaLimitRow {
    double s;
    double area;
    double scaled;  // s^{-(N-1)/2} * area
};

struct LevelAreaLimitReport {
    bool divergent = false;
    double predicted = 0.0;  // 2^{(N-1)/2} omega_{N-1} prod(1/R - kappa_j)^{-1/2}
    std::vector<LevelAreaLimitRow> rows;
};

/// Tabulates the scaled level area against the curvature-product prediction
/// for its s -> 0 limit. Degenerate configs return divergent=true and no
/// prediction.
LevelAreaLimitReport level_area_limit_check(const TouchingBallConfig& config,
                                            const std::vector<double>& s_sequence);

}  // namespace fdlab

#endif
