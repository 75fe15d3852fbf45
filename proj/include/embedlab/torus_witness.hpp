#pragma once

#include "embedlab/metric.hpp"

#include <span>

namespace embedlab {

struct TorusWitnessConfig {
    int n = 1;        // dimension
    int m = 2;        // even modulus
    double r = 2.0;   // target exponent, +inf allowed
    double s = 1.0;   // scale

    void validate() const;
    [[nodiscard]] Norm norm() const { return Norm::lr(r); }
    // 2 pi s n^(1/r) / m, the unit-step bound.
    [[nodiscard]] double unit_step_bound() const;
};

// h(x)_j = s exp(2 pi i x_j / m), a point of l_r^n(C).
[[nodiscard]] NormedPoint torus_witness(const TorusWitnessConfig& cfg, std::span<const int> x);

}  // namespace embedlab
