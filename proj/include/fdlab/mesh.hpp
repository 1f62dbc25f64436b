#ifndef FDLAB_MESH_HPP
#define FDLAB_MESH_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

namespace fdlab {

/// Graded 1-D mesh on [ra, rb]. Cell sizes grow geometrically (factor
/// `ratio`) away from each clustered end, starting from h_a / h_b, and are
/// capped at h_max. Pass h_a <= 0 (resp. h_b <= 0) to leave that end
/// unclustered. The two fronts march toward the midpoint and are joined.
inline std::vector<double> graded_interval(double ra, double rb, double h_a, double h_b,
                                           double h_max, double ratio = 1.05) {
    if (!(rb > ra)) throw std::invalid_argument("graded_interval needs ra < rb");
    if (!(h_max > 0.0)) throw std::invalid_argument("h_max must be positive");
    const double span = rb - ra;
    const double mid = ra + 0.5 * span;

    auto march = [&](double h0) {
        std::vector<double> sizes;
        double h = h0 > 0.0 ? h0 : h_max;
        double covered = 0.0;
        while (covered < 0.5 * span + h_max) {
            const double hc = std::min(h, h_max);
            sizes.push_back(hc);
            covered += hc;
            h *= ratio;
            if (sizes.size() > 2'000'000) throw std::runtime_error("mesh too fine");
        }
        return sizes;
    };

    std::vector<double> left = march(h_a), right = march(h_b);
    std::vector<double> nodes;
    nodes.push_back(ra);
    for (double h : left) {
        const double next = nodes.back() + h;
        if (next >= mid) break;
        nodes.push_back(next);
    }
    std::vector<double> right_nodes;
    right_nodes.push_back(rb);
    for (double h : right) {
        const double next = right_nodes.back() - h;
        if (next <= nodes.back() + 0.25 * std::min(h, h_max)) break;
        right_nodes.push_back(next);
    }
    for (auto it = right_nodes.rbegin(); it != right_nodes.rend(); ++it) nodes.push_back(*it);
    return nodes;
}

/// Solves a tridiagonal system in place (Thomas algorithm).
/// lower[0] and upper[n-1] are ignored; rhs receives the solution.
inline void solve_tridiagonal(std::vector<double>& lower, std::vector<double>& diag,
                              std::vector<double>& upper, std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

}  // namespace fdlab

#endif
