#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fdlab/interp.hpp"
#include "fdlab/mesh.hpp"
#include "fdlab/ode.hpp"
#include "fdlab/quadrature.hpp"

using namespace fdlab;

TEST_CASE("finite integrals") {
    AdaptiveQuadrature quad(1e-12, 1e-300);
    CHECK(quad.integrate([](double x) { return x * x; }, 0.0, 1.0) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(quad.integrate([](double x) { return std::sin(x); }, 0.0, M_PI) ==
          doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("integrals over half-lines") {
    AdaptiveQuadrature quad(1e-12, 1e-300);
    CHECK(quad.integrate_to_infinity([](double x) { return std::exp(-x); }, 0.0) ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(quad.integrate_to_infinity([](double x) { return 1.0 / (1.0 + x * x); }, 0.0) ==
          doctest::Approx(M_PI / 2.0).epsilon(1e-10));
    // Power tail of the kind used for profile asymptotes.
    CHECK(quad.integrate_to_infinity([](double x) { return std::pow(x, -2.5); }, 4.0) ==
          doctest::Approx(std::pow(4.0, -1.5) / 1.5).epsilon(1e-10));
}

TEST_CASE("monotone cubic interpolation") {
    std::vector<double> x{0.0, 1.0, 2.0, 4.0, 8.0};
    std::vector<double> y{10.0, 6.0, 5.0, 1.0, 0.5};
    MonotoneCubic interp(x, y);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(interp(x[i]) == doctest::Approx(y[i]).epsilon(1e-14));
    // Monotone data stays monotone (no overshoot between knots).
    double prev = interp(0.0);
    for (double t = 0.05; t <= 8.0; t += 0.05) {
        const double v = interp(t);
        CHECK(v <= prev + 1e-12);
        prev = v;
    }
    CHECK_THROWS_AS(interp(-0.1), std::out_of_range);
    CHECK_THROWS_AS(interp(8.1), std::out_of_range);
}

TEST_CASE("adaptive ODE integrator on a known solution") {
    // y' = -2xy, y(0) = 1 has solution exp(-x^2).
    DormandPrince<1> ode(1e-12, 1e-14);
    auto rhs = [](double x, const std::array<double, 1>& y) {
        return std::array<double, 1>{-2.0 * x * y[0]};
    };
    const auto end = ode.integrate(rhs, 0.0, {1.0}, 3.0);
    CHECK(end.y[0] == doctest::Approx(std::exp(-9.0)).epsilon(1e-9));
}

TEST_CASE("graded meshes") {
    const auto r = graded_interval(0.0, 1.0, 1e-4, 1e-4, 0.01, 1.05);
    CHECK(r.front() == 0.0);
    CHECK(r.back() == 1.0);
    for (std::size_t i = 0; i + 1 < r.size(); ++i) CHECK(r[i] < r[i + 1]);
    // First cells honor the requested wall size, interior cells the cap.
    CHECK(r[1] - r[0] == doctest::Approx(1e-4));
    double h_max = 0.0;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) h_max = std::max(h_max, r[i + 1] - r[i]);
    CHECK(h_max <= 0.01 * 1.3);
}

TEST_CASE("tridiagonal solve") {
    // A = [[2,1,0],[1,3,1],[0,1,2]], b = A * [1,2,3].
    std::vector<double> lo{0.0, 1.0, 1.0}, di{2.0, 3.0, 2.0}, up{1.0, 1.0, 0.0};
    std::vector<double> rhs{4.0, 10.0, 8.0};
    solve_tridiagonal(lo, di, up, rhs);
    CHECK(rhs[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(rhs[1] == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(rhs[2] == doctest::Approx(3.0).epsilon(1e-13));
}
