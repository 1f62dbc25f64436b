#ifndef FDLAB_ODE_HPP
#define FDLAB_ODE_HPP

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace fdlab {

/// One accepted integrator step: abscissa, state, derivative.
template <std::size_t Dim>
struct OdeSample {
    double x;
    std::array<double, Dim> y;
    std::array<double, Dim> dy;
};

/// Adaptive Dormand-Prince 5(4) integrator for small systems.
/// The step callback sees every accepted step and may stop the integration
/// by returning false.
template <std::size_t Dim>
class DormandPrince {
public:
    using State = std::array<double, Dim>;
    using Rhs = std::function<State(double, const State&)>;
    using StepCallback = std::function<bool(const OdeSample<Dim>&)>;

    DormandPrince(double rel_tol = 1e-10, double abs_tol = 1e-14)
        : rel_tol_(rel_tol), abs_tol_(abs_tol) {}

    /// Integrate from (x0, y0) toward x_end (either direction). Returns the
    /// final sample (which is the last accepted step if the callback stopped
    /// the run early).
    OdeSample<Dim> integrate(const Rhs& rhs, double x0, const State& y0, double x_end,
                             const StepCallback& on_step = nullptr,
                             double initial_step = 0.0) const {
        const double dir = (x_end >= x0) ? 1.0 : -1.0;
        double x = x0;
        State y = y0;
        State k1 = rhs(x, y);
        if (on_step && !on_step({x, y, k1})) return {x, y, k1};

        double h = initial_step != 0.0 ? std::abs(initial_step)
                                       : std::min(1e-4, std::abs(x_end - x0));
        h *= dir;
        std::size_t n_steps = 0;
        while (dir * (x_end - x) > 0.0) {
            if (++n_steps > max_steps_)
                throw std::runtime_error("ODE integration exceeded step budget");
            if (dir * (x + h - x_end) > 0.0) h = x_end - x;

            State y_new, k_new;
            double err = attempt(rhs, x, y, k1, h, y_new, k_new);
            if (err <= 1.0) {
                x += h;
                y = y_new;
                k1 = k_new;
                if (on_step && !on_step({x, y, k1})) break;
                h *= std::min(5.0, 0.9 * std::pow(std::max(err, 1e-10), -0.2));
            } else {
                h *= std::max(0.1, 0.9 * std::pow(err, -0.2));
                if (std::abs(h) < 1e-300)
                    throw std::runtime_error("ODE step size underflow");
            }
        }
        return {x, y, k1};
    }

private:
    double rel_tol_;
    double abs_tol_;
    std::size_t max_steps_ = 20'000'000;

    // Returns the scaled error of the trial step; fills y_new/k_new on output.
    double attempt(const Rhs& rhs, double x, const State& y, const State& k1, double h,
                   State& y_new, State& k_new) const {
        static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        static constexpr double a21 = 1.0 / 5;
        static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                                a53 = 64448.0 / 6561, a54 = -212.0 / 729;
        static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                                a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                                b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                                e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

        State t;
        auto axpy = [&](auto&&... terms) {
            for (std::size_t i = 0; i < Dim; ++i) t[i] = y[i] + h * (... + (terms.second * terms.first[i]));
        };
        using P = std::pair<const State&, double>;
        axpy(P{k1, a21});
        State k2 = rhs(x + c2 * h, t);
        axpy(P{k1, a31}, P{k2, a32});
        State k3 = rhs(x + c3 * h, t);
        axpy(P{k1, a41}, P{k2, a42}, P{k3, a43});
        State k4 = rhs(x + c4 * h, t);
        axpy(P{k1, a51}, P{k2, a52}, P{k3, a53}, P{k4, a54});
        State k5 = rhs(x + c5 * h, t);
        axpy(P{k1, a61}, P{k2, a62}, P{k3, a63}, P{k4, a64}, P{k5, a65});
        State k6 = rhs(x + h, t);
        for (std::size_t i = 0; i < Dim; ++i)
            y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        k_new = rhs(x + h, y_new);

        double err = 0.0;
        for (std::size_t i = 0; i < Dim; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                  e6 * k6[i] + e7 * k_new[i]);
            const double sc = abs_tol_ + rel_tol_ * std::max(std::abs(y[i]), std::abs(y_new[i]));
            err = std::max(err, std::abs(e) / sc);
        }
        return err;
    }
};

/// Cubic Hermite evaluation between two ODE samples.
template <std::size_t Dim>
double hermite_component(const OdeSample<Dim>& a, const OdeSample<Dim>& b, std::size_t i,
                         double x) {
    const double h = b.x - a.x;
    if (h == 0.0) return a.y[i];
    const double s = (x - a.x) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    return h00 * a.y[i] + h10 * h * a.dy[i] + h01 * b.y[i] + h11 * h * b.dy[i];
}

}  // namespace fdlab

#endif
