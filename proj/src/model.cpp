#include "fdlab/model.hpp"

#include <cmath>

namespace fdlab {

double plaplace_profile_prefactor(double p) {
    return std::pow((2.0 - p) / (2.0 * p * (p - 1.0)), -1.0 / (2.0 - p));
}

double blowup_constant(const DiffusionModel& model) {
    model.validate();
    if (model.is_p_laplace()) {
        const double p = model.exponent;
        return (2.0 - p) / p * plaplace_profile_prefactor(p);
    }
    const double m = model.exponent;
    return std::pow(2.0 * m * (1.0 + m) / (1.0 - m), 1.0 / (1.0 - m));
}

}  // namespace fdlab
