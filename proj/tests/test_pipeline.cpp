#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fdlab/pipeline.hpp"

using namespace fdlab;

TEST_CASE("alpha thresholds and scaling exponents") {
    const DiffusionModel pl = DiffusionModel::p_laplace(1.5);
    const DiffusionModel pm = DiffusionModel::porous_medium(0.5);
    CHECK(alpha_threshold(pl, 2) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(alpha_threshold(pm, 2) == doctest::Approx(3.0 / 8.0).epsilon(1e-14));
    CHECK(theorem_exponent(pl, 2) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(theorem_exponent(pm, 2) == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("constant c: threshold rejection and finiteness") {
    const DiffusionModel model = DiffusionModel::p_laplace(1.5);
    const double lambda = solve_lambda(model, ProfileVariant::half_line(), 1.0);
    const SimilarityProfile prof =
        tabulate_plaplace_profile(model, ProfileVariant::half_line(), 1.0, lambda);

    CHECK_THROWS_AS(compute_c(prof, 0.5, 2), std::invalid_argument);
    CHECK_THROWS_AS(compute_c(prof, 0.3, 2), std::invalid_argument);

    const ConstantResult c1 = compute_c(prof, 1.0, 2);
    CHECK(c1.c > 0.0);
    CHECK(c1.tail_fraction < 0.10);
    CHECK_FALSE(c1.near_threshold);
    // Just above threshold: flagged as tail-dominated territory.
    const ConstantResult c2 = compute_c(prof, 0.54, 2);
    CHECK(c2.near_threshold);
}

TEST_CASE("constant c grows with the boundary datum") {
    const DiffusionModel model = DiffusionModel::p_laplace(1.5);
    auto c_of_beta = [&](double beta) {
        const double lambda = solve_lambda(model, ProfileVariant::half_line(), beta);
        const SimilarityProfile prof =
            tabulate_plaplace_profile(model, ProfileVariant::half_line(), beta, lambda);
        return compute_c(prof, 1.0, 2).c;
    };
    CHECK(c_of_beta(2.0) > c_of_beta(1.0));
}

TEST_CASE("integral functional on constant fields") {
    const RadialDomain dom = RadialDomain::exterior_ball(1.0, 2);
    const TouchingBallConfig config(dom, BoundaryComponent::Inner, 0.5);
    RadialField field(dom);
    for (int i = 0; i <= 400; ++i) field.r_grid.push_back(0.9 + i * (1.3 / 400.0));
    field.values.assign(field.r_grid.size(), 2.0);

    const double alpha = 1.3;
    const double expected = std::pow(2.0, alpha) * unit_ball_volume(2) * 0.25;
    CHECK(integral_functional(field, alpha, config) ==
          doctest::Approx(expected).epsilon(1e-6));

    // Probe ball exiting the grid is rejected.
    RadialField narrow(dom);
    narrow.r_grid = {1.2, 1.4};
    narrow.values = {1.0, 1.0};
    CHECK_THROWS_AS(integral_functional(narrow, alpha, config), std::invalid_argument);
}

TEST_CASE("integral functional agrees with direct 2-D quadrature") {
    const RadialDomain dom = RadialDomain::exterior_ball(1.0, 2);
    const TouchingBallConfig config(dom, BoundaryComponent::Inner, 0.5);
    RadialField field(dom);
    for (int i = 0; i <= 2000; ++i) field.r_grid.push_back(0.5 + i * (2.0 / 2000.0));
    for (double r : field.r_grid) field.values.push_back(std::exp(-r));

    const double alpha = 2.0;
    const double reduced = integral_functional(field, alpha, config);

    // Brute-force midpoint quadrature over the disk of radius R at (1.5, 0).
    const double R = 0.5, Lx = 1.5;
    const int n = 1200;
    double direct = 0.0;
    const double h = 2.0 * R / n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double x = Lx - R + (i + 0.5) * h;
            const double y = -R + (j + 0.5) * h;
            if ((x - Lx) * (x - Lx) + y * y >= R * R) continue;
            const double r = std::hypot(x, y);
            direct += h * h * std::pow(std::exp(-r), alpha);
        }
    CHECK(reduced == doctest::Approx(direct).epsilon(0.005));
}

TEST_CASE("verification rejects alpha at or below the threshold") {
    const RadialDomain dom = RadialDomain::exterior_ball(1.0, 2);
    TheoremConfig tc{DiffusionModel::p_laplace(1.5),
                     0.5,
                     TouchingBallConfig(dom, BoundaryComponent::Inner, 0.5),
                     1.0,
                     ProblemKind::InitialBoundary,
                     {},
                     GridSpec{}};
    CHECK_THROWS_AS(verify_theorem(tc), std::invalid_argument);
}
