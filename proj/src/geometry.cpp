#include "fdlab/geometry.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "fdlab/quadrature.hpp"

namespace fdlab {

double unit_ball_volume(int k) {
    if (k < 0) throw std::invalid_argument("dimension must be >= 0");
    return std::pow(M_PI, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
}

double unit_sphere_area(int n) {
    if (n < 1) throw std::invalid_argument("dimension must be >= 1");
    return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

double sphere_cap_area(double a, double L, double R, int N) {
    if (!(a > 0.0) || !(R > 0.0) || L < 0.0) throw std::invalid_argument("bad cap geometry");
    if (N < 2) throw std::invalid_argument("dimension must be >= 2");
    if (L + a <= R) return unit_sphere_area(N) * std::pow(a, N - 1);  // sphere inside ball
    if (a >= L + R || L >= a + R) return 0.0;                         // disjoint

    // 1 - cos(theta) in the cancellation-free form (R^2 - (a-L)^2)/(2aL);
    // the naive cosine formula loses the whole cap angle when the wall is
    // nearly flat (a, L >> R).
    const double versin =
        std::clamp((R - (a - L)) * (R + (a - L)) / (2.0 * a * L), 0.0, 2.0);
    const double theta = 2.0 * std::asin(std::sqrt(0.5 * versin));
    if (N == 2) return 2.0 * a * theta;  // two symmetric arcs
    if (N == 3) return 2.0 * M_PI * a * a * versin;
    AdaptiveQuadrature quad(1e-10, 1e-300);
    const double integral =
        quad.integrate([&](double t) { return std::pow(std::sin(t), N - 2); }, 0.0, theta);
    return std::pow(a, N - 1) * unit_sphere_area(N - 1) * integral;
}

TouchingBallConfig::TouchingBallConfig(RadialDomain d, BoundaryComponent c, double radius)
    : domain(d), touched(c), R(radius) {
    if (!(R > 0.0)) throw std::invalid_argument("probe radius must be positive");
    domain.boundary_radius(touched);  // validates the component exists
    // Probe must fit inside the domain and respect kappa <= 1/R at the
    // touching point (automatic except for Ball, where R <= rho is needed).
    switch (domain.shape()) {
        case DomainShape::Ball:
            if (R > domain.outer_radius())
                throw std::invalid_argument("probe ball larger than the domain ball");
            break;
        case DomainShape::ExteriorBall:
            break;
        case DomainShape::Annulus: {
            const double width = domain.outer_radius() - domain.inner_radius();
            if (2.0 * R > width)
                throw std::invalid_argument("probe ball does not fit inside the annulus");
            break;
        }
    }
    const double kappa = domain.curvature_at(touched);
    if (kappa > 1.0 / R + 1e-12)
        throw std::invalid_argument("kappa exceeds 1/R: not an interior touching ball");
}

double TouchingBallConfig::center_radius() const {
    const double rho = domain.boundary_radius(touched);
    switch (domain.shape()) {
        case DomainShape::Ball: return rho - R;
        case DomainShape::ExteriorBall: return rho + R;
        case DomainShape::Annulus:
            return touched == BoundaryComponent::Inner ? rho + R : rho - R;
    }
    throw std::logic_error("unreachable");
}

bool TouchingBallConfig::degenerate() const {
    return std::abs(1.0 / R - curvature()) <= 1e-12;
}

namespace {

// Radii of the level-set spheres Gamma_s (one per boundary component).
std::vector<double> level_radii(const RadialDomain& dom, double s) {
    std::vector<double> out;
    for (BoundaryComponent c : dom.boundary_components()) {
        const double rho = dom.boundary_radius(c);
        // Moving distance s into the domain from this boundary sphere.
        double a;
        switch (dom.shape()) {
            case DomainShape::Ball: a = rho - s; break;
            case DomainShape::ExteriorBall: a = rho + s; break;
            case DomainShape::Annulus:
                a = (c == BoundaryComponent::Inner) ? rho + s : rho - s;
                break;
            default: throw std::logic_error("unreachable");
        }
        if (a > 0.0) out.push_back(a);
    }
    return out;
}

void check_level_param(const TouchingBallConfig& config, double s) {
    if (!(s > 0.0 && s < config.R))
        throw std::invalid_argument("level parameter must satisfy 0 < s < R");
    if (config.domain.shape() == DomainShape::Annulus) {
        const double reach = 0.5 * (config.domain.outer_radius() - config.domain.inner_radius());
        if (s >= reach)
            throw std::invalid_argument("level parameter exceeds the annulus inner reach");
    }
}

}  // namespace

double level_area(const TouchingBallConfig& config, double s) {
    check_level_param(config, s);
    const double L = config.center_radius();
    double total = 0.0;
    for (double a : level_radii(config.domain, s))
        total += sphere_cap_area(a, L, config.R, config.dimension());
    return total;
}

double level_area_monte_carlo(const TouchingBallConfig& config, double s, std::size_t samples,
                              std::uint64_t seed, double* std_err) {
    check_level_param(config, s);
    if (samples == 0) throw std::invalid_argument("need at least one sample");
    const int N = config.dimension();
    const double L = config.center_radius();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    double total = 0.0, var = 0.0;
    for (double a : level_radii(config.domain, s)) {
        std::size_t hits = 0;
        std::vector<double> x(static_cast<std::size_t>(N), 0.0);
        for (std::size_t i = 0; i < samples; ++i) {
            double norm2 = 0.0;
            for (auto& c : x) {
                c = gauss(rng);
                norm2 += c * c;
            }
            const double scale = a / std::sqrt(norm2);
            // Probe center sits on the first axis at distance L.
            double dist2 = 0.0;
            for (std::size_t j = 0; j < x.size(); ++j) {
                const double d = x[j] * scale - (j == 0 ? L : 0.0);
                dist2 += d * d;
            }
            if (dist2 < config.R * config.R) ++hits;
        }
        const double sphere = unit_sphere_area(N) * std::pow(a, N - 1);
        const double frac = double(hits) / double(samples);
        total += sphere * frac;
        var += sphere * sphere * frac * (1.0 - frac) / double(samples);
    }
    if (std_err) *std_err = std::sqrt(var);
    return total;
}

std::optional<double> curvature_product(double R, const std::vector<double>& curvatures) {
    if (!(R > 0.0)) throw std::invalid_argument("R must be positive");
    double prod = 1.0;
    for (double kappa : curvatures) {
        const double factor = 1.0 / R - kappa;
        if (factor < -1e-12)
            throw std::invalid_argument("kappa > 1/R is impossible for an interior touching ball");
        if (std::abs(factor) <= 1e-12) return std::nullopt;
        prod *= factor;
    }
    return prod;
}

LevelAreaLimitReport level_area_limit_check(const TouchingBallConfig& config,
                                            const std::vector<double>& s_sequence) {
    const int N = config.dimension();
    LevelAreaLimitReport report;
    const std::vector<double> kappas(std::size_t(N - 1), config.curvature());
    const auto prod = curvature_product(config.R, kappas);
    if (!prod) {
        report.divergent = true;
    } else {
        report.predicted =
            std::pow(2.0, 0.5 * (N - 1)) * unit_ball_volume(N - 1) / std::sqrt(*prod);
    }
    for (double s : s_sequence) {
        const double area = level_area(config, s);
        report.rows.push_back({s, area, area * std::pow(s, -0.5 * (N - 1))});
    }
    return report;
}

}  // namespace fdlab
