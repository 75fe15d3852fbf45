#include "embedlab/torus_witness.hpp"

#include "embedlab/error.hpp"

#include <cmath>
#include <numbers>

namespace embedlab {

void TorusWitnessConfig::validate() const {
    if (n < 1) throw InputError("torus witness: n must be >= 1");
    if (m < 2 || m % 2 != 0) throw InputError("torus witness: m must be even and >= 2");
    if (!(r >= 1.0)) throw InputError("torus witness: r must be >= 1");
    if (!(s > 0.0) || !std::isfinite(s)) throw InputError("torus witness: s must be positive");
}

double TorusWitnessConfig::unit_step_bound() const {
    const double root = std::isinf(r) ? 1.0 : std::pow(static_cast<double>(n), 1.0 / r);
    return 2.0 * std::numbers::pi * s * root / static_cast<double>(m);
}

NormedPoint torus_witness(const TorusWitnessConfig& cfg, std::span<const int> x) {
    cfg.validate();
    if (x.size() != static_cast<std::size_t>(cfg.n)) throw InputError("torus witness: lattice point has wrong dimension");
    std::vector<Complex> coords(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        // Reduce first so the angle is exact up to one rounding.
        const int xj = ((x[j] % cfg.m) + cfg.m) % cfg.m;
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(xj) / static_cast<double>(cfg.m);
        coords[j] = cfg.s * Complex(std::cos(angle), std::sin(angle));
    }
    return {std::move(coords), cfg.norm()};
}

}  // namespace embedlab
