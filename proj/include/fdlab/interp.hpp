#ifndef FDLAB_INTERP_HPP
#define FDLAB_INTERP_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace fdlab {

/// Monotone cubic interpolation (Fritsch-Carlson limited Hermite slopes).
/// Preserves monotone data exactly, C^1, no overshoot.
class MonotoneCubic {
public:
    MonotoneCubic() = default;

    MonotoneCubic(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n)
            throw std::invalid_argument("MonotoneCubic needs two matching samples at least");
        for (std::size_t i = 1; i < n; ++i)
            if (!(x_[i] > x_[i - 1]))
                throw std::invalid_argument("MonotoneCubic abscissae must be strictly increasing");

        std::vector<double> d(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);

        slope_.resize(n);
        slope_[0] = d[0];
        slope_[n - 1] = d[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (d[i - 1] * d[i] <= 0.0) {
                slope_[i] = 0.0;
            } else {
                const double w1 = 2.0 * (x_[i + 1] - x_[i]) + (x_[i] - x_[i - 1]);
                const double w2 = (x_[i + 1] - x_[i]) + 2.0 * (x_[i] - x_[i - 1]);
                slope_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
        // Limit endpoint slopes to keep monotonicity.
        for (std::size_t i : {std::size_t{0}, n - 1}) {
            const double del = (i == 0) ? d[0] : d[n - 2];
            if (slope_[i] * del <= 0.0)
                slope_[i] = 0.0;
            else if (std::abs(slope_[i]) > 3.0 * std::abs(del))
                slope_[i] = 3.0 * del;
        }
    }

    double min_x() const { return x_.front(); }
    double max_x() const { return x_.back(); }

    double operator()(double x) const {
        if (x < x_.front() || x > x_.back())
            throw std::out_of_range("MonotoneCubic evaluation outside tabulated range");
        const auto it = std::upper_bound(x_.begin(), x_.end(), x);
        std::size_t i = (it == x_.begin()) ? 0 : std::size_t(it - x_.begin()) - 1;
        if (i + 1 >= x_.size()) i = x_.size() - 2;
        const double h = x_[i + 1] - x_[i];
        const double s = (x - x_[i]) / h;
        const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
        const double h10 = s * (1 - s) * (1 - s);
        const double h01 = s * s * (3 - 2 * s);
        const double h11 = s * s * (s - 1);
        return h00 * y_[i] + h10 * h * slope_[i] + h01 * y_[i + 1] + h11 * h * slope_[i + 1];
    }

private:
    std::vector<double> x_, y_, slope_;
};

/// Linear interpolation on a strictly increasing grid; clamped at the ends.
inline double lerp_grid(const std::vector<double>& x, const std::vector<double>& y, double xq) {
    if (xq <= x.front()) return y.front();
    if (xq >= x.back()) return y.back();
    const auto it = std::upper_bound(x.begin(), x.end(), xq);
    const std::size_t i = std::size_t(it - x.begin()) - 1;
    const double s = (xq - x[i]) / (x[i + 1] - x[i]);
    return y[i] + s * (y[i + 1] - y[i]);
}

}  // namespace fdlab

#endif
