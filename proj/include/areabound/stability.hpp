#pragma once

#include <functional>
#include <optional>

#include "areabound/immersion.hpp"

namespace areabound {

/// Smallest generalized Rayleigh quotient
///   int grad_{ds_g}(phi,phi) W du dv  /  int (q - K) W phi^2 du dv
/// over nodal test functions vanishing on the boundary row, by power
/// iteration on the inverse quadratic-form pair. Returns nullopt when the
/// denominator form is numerically zero (the inequality then holds for
/// every constant). Throws when q - K < -1e-8 somewhere.
std::optional<double> mu_stability_estimate(
    const Immersion& im, const WeightMatrix& w,
    const std::function<double(double, double)>& q);

}  // namespace areabound
