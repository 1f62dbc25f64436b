#include "fdlab/domain.hpp"

#include "fdlab/interp.hpp"

namespace fdlab {

double RadialField::value_at(double r) const {
    if (r_grid.empty()) throw std::logic_error("empty radial field");
    if (r < r_grid.front() - 1e-12 * domain.scale() ||
        r > r_grid.back() + 1e-12 * domain.scale())
        throw std::out_of_range("radius outside the field grid");
    return lerp_grid(r_grid, values, r);
}

}  // namespace fdlab
