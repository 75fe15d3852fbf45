#pragma once

#include "embedlab/metric.hpp"
#include "embedlab/rational.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace embedlab {

/// l_inf lift of a map f: X -> l_inf^d over a grid of positive rationals:
/// F(x)(q, n) = f(q x)_n / q, flattened q-major.
class LinftyLift {
public:
    LinftyLift(PointMap f, std::vector<Rational> q_grid);

    [[nodiscard]] NormedPoint operator()(const NormedPoint& x) const;
    [[nodiscard]] const std::vector<Rational>& q_grid() const { return q_grid_; }
    // Index of q in the grid when t / dist matches some q to relative 1e-12.
    [[nodiscard]] std::optional<std::size_t> grid_match(double q) const;

private:
    PointMap f_;
    std::vector<Rational> q_grid_;
    std::vector<double> q_values_;
};

struct LiftCheckReport {
    double lip_f = 0.0;
    double lip_F = 0.0;             // max over tested pairs of ||F(x) - F(y)|| / ||x - y||
    bool lipschitz_ok = true;
    double t = 0.0;
    double rho_bar_t = 0.0;
    std::size_t lower_bound_pairs = 0;
    double min_lower_margin = 0.0;  // min of ||F(x)-F(y)|| - (rho_bar(t)/t) ||x-y||
    bool lower_ok = true;
};

/// Lip(F) <= lip_f + tol over `pairs`, and for pairs with t/||x-y|| in the
/// grid the lower bound ||F(x)-F(y)|| >= (rho_bar_t / t) ||x-y|| - tol.
[[nodiscard]] LiftCheckReport check_lift(const LinftyLift& lift,
                                         std::span<const std::pair<NormedPoint, NormedPoint>> pairs,
                                         double lip_f, double t, double rho_bar_t, double tol = 1e-9);

}  // namespace embedlab
