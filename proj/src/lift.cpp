#include "embedlab/lift.hpp"

#include "embedlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace embedlab {

LinftyLift::LinftyLift(PointMap f, std::vector<Rational> q_grid) : f_(std::move(f)), q_grid_(std::move(q_grid)) {
    if (!f_) throw InputError("lift: map missing");
    if (q_grid_.empty()) throw InputError("lift: empty q grid");
    for (const auto& q : q_grid_) {
        if (q.sign() <= 0) throw InputError("lift: q must be positive");
        q_values_.push_back(q.to_double());
    }
}

NormedPoint LinftyLift::operator()(const NormedPoint& x) const {
    std::vector<Complex> out;
    std::size_t d = 0;
    for (std::size_t i = 0; i < q_grid_.size(); ++i) {
        const double q = q_values_[i];
        const NormedPoint fx = f_(x.scaled(q));
        if (fx.norm.kind != NormKind::LInf) throw InputError("lift: map must take values in l_inf^d");
        if (i == 0) {
            d = fx.dim();
            out.reserve(q_grid_.size() * d);
        } else if (fx.dim() != d) {
            throw InputError("lift: map changed target dimension");
        }
        for (const auto& c : fx.coords) out.push_back(c / q);
    }
    return {std::move(out), Norm::linf()};
}

std::optional<std::size_t> LinftyLift::grid_match(double q) const {
    for (std::size_t i = 0; i < q_values_.size(); ++i)
        if (std::abs(q - q_values_[i]) <= 1e-12 * q_values_[i]) return i;
    return std::nullopt;
}

LiftCheckReport check_lift(const LinftyLift& lift, std::span<const std::pair<NormedPoint, NormedPoint>> pairs,
                           double lip_f, double t, double rho_bar_t, double tol) {
    if (!(t > 0.0)) throw InputError("lift: witness t must be positive");
    LiftCheckReport rep;
    rep.lip_f = lip_f;
    rep.t = t;
    rep.rho_bar_t = rho_bar_t;
    rep.min_lower_margin = std::numeric_limits<double>::infinity();
    for (const auto& [x, y] : pairs) {
        const double dxy = distance(x, y);
        if (!(dxy > 0.0)) continue;
        const double dF = distance(lift(x), lift(y));
        rep.lip_F = std::max(rep.lip_F, dF / dxy);
        if (lift.grid_match(t / dxy)) {
            ++rep.lower_bound_pairs;
            const double margin = dF - rho_bar_t / t * dxy;
            rep.min_lower_margin = std::min(rep.min_lower_margin, margin);
            if (margin < -tol) rep.lower_ok = false;
        }
    }
    rep.lipschitz_ok = rep.lip_F <= lip_f + tol;
    if (rep.lower_bound_pairs == 0) rep.min_lower_margin = 0.0;
    return rep;
}

}  // namespace embedlab
