#include "embedlab/cocycle.hpp"

#include "embedlab/error.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <sstream>

namespace embedlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// theta = num/den folded into (-1/2, 1/2], for 0 <= num < den.
double folded_theta(const BigInt& num, const BigInt& den) {
    if (2 * num > den) return ratio_to_double(num - den, den);
    return ratio_to_double(num, den);
}

}  // namespace

CocycleConfig::CocycleConfig(int truncation, UnderflowPolicy policy)
    : truncation_(truncation), policy_(policy) {
    if (truncation < 1 || truncation > kMaxTruncation)
        throw InputError("cocycle: truncation N must lie in [1, 16]");
    periods_.reserve(static_cast<std::size_t>(truncation));
    for (int n = 1; n <= truncation; ++n) periods_.push_back(pow2(1u << n));
}

double CocycleConfig::lipschitz_constant_sq() const {
    double c = 0.0;
    for (int n = 1; n <= truncation_; ++n) {
        const double term = std::ldexp(kTwoPi, -(1 << n));
        c += term * term;
    }
    return c;
}

double CocycleValue::norm_sq() const {
    double s = 0.0;
    for (double m : magnitudes) s += m * m;
    return s;
}

double CocycleValue::norm() const { return std::sqrt(norm_sq()); }

std::vector<Phase> cocycle_phases(const Rational& t, const CocycleConfig& cfg) {
    std::vector<Phase> out;
    out.reserve(static_cast<std::size_t>(cfg.truncation()));
    for (int n = 1; n <= cfg.truncation(); ++n) {
        const BigInt& period = cfg.period(n);
        const Rational reduced = t.mod(period);  // r/den in [0, period)
        const BigInt full = reduced.den() * period;
        Phase ph;
        ph.frac = Rational(reduced.num(), full);
        ph.exact_zero = reduced.num() == 0;
        if (!ph.exact_zero) {
            ph.theta = folded_theta(reduced.num(), full);
            if (std::abs(ph.theta) < DBL_MIN) {
                if (cfg.policy() == UnderflowPolicy::Strict) {
                    std::ostringstream os;
                    os << "precision: phase of coordinate " << n << " for t = " << t.str()
                       << " is below the double range";
                    throw PrecisionError(os.str());
                }
                ph.theta = 0.0;
                ph.flushed = true;
            }
        }
        out.push_back(std::move(ph));
    }
    return out;
}

CocycleValue cocycle_eval(const Rational& t, const CocycleConfig& cfg) {
    CocycleValue v;
    v.phases = cocycle_phases(t, cfg);
    v.coords.reserve(v.phases.size());
    v.magnitudes.reserve(v.phases.size());
    for (const auto& ph : v.phases) {
        if (ph.flushed) ++v.flushed;
        if (ph.exact_zero || ph.flushed) {
            v.coords.emplace_back(0.0, 0.0);
            v.magnitudes.push_back(0.0);
            continue;
        }
        // 1 - exp(2 pi i theta) = 2 sin^2(pi theta) - i sin(2 pi theta)
        const double s = std::sin(std::numbers::pi * ph.theta);
        v.coords.emplace_back(2.0 * s * s, -std::sin(kTwoPi * ph.theta));
        v.magnitudes.push_back(2.0 * std::abs(s));
    }
    return v;
}

std::vector<Complex> rotation(const Rational& t, const CocycleConfig& cfg) {
    const auto phases = cocycle_phases(t, cfg);
    std::vector<Complex> u;
    u.reserve(phases.size());
    for (const auto& ph : phases) {
        const double s = std::sin(std::numbers::pi * ph.theta);
        u.emplace_back(1.0 - 2.0 * s * s, std::sin(kTwoPi * ph.theta));
    }
    return u;
}

std::vector<Complex> affine_action(const Rational& t, std::span<const Complex> x, const CocycleConfig& cfg) {
    if (x.size() != static_cast<std::size_t>(cfg.truncation()))
        throw InputError("cocycle: action input must have N coordinates");
    const auto u = rotation(t, cfg);
    std::vector<Complex> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = 1.0 + u[i] * (x[i] - 1.0);
    return out;
}

double collapse_bound_sq(int k, int truncation) {
    double s = 0.0;
    for (int n = k + 1; n <= truncation; ++n) {
        const double term = std::ldexp(kTwoPi, (1 << k) - (1 << n));
        s += term * term;
    }
    return s;
}

std::vector<CollapseStep> collapse_sequence(const CocycleConfig& cfg) {
    std::vector<CollapseStep> seq;
    for (int k = 1; k < cfg.truncation(); ++k) {
        const auto v = cocycle_eval(Rational(cfg.period(k)), cfg);
        CollapseStep step;
        step.k = k;
        step.norm_sq = v.norm_sq();
        step.norm = std::sqrt(step.norm_sq);
        step.bound_sq = collapse_bound_sq(k, cfg.truncation());
        step.low_coords_exact_zero = std::all_of(v.phases.begin(), v.phases.begin() + k,
                                                 [](const Phase& p) { return p.exact_zero; });
        seq.push_back(step);
    }
    return seq;
}

CocycleCheckReport cocycle_norm_checks(const CocycleConfig& cfg, std::span<const Rational> t_samples,
                                       double identity_tol) {
    CocycleCheckReport rep;
    rep.lipschitz_constant_sq = cfg.lipschitz_constant_sq();
    const double lip = std::sqrt(rep.lipschitz_constant_sq);

    std::vector<CocycleValue> values;
    values.reserve(t_samples.size());
    for (const auto& t : t_samples) values.push_back(cocycle_eval(t, cfg));

    for (std::size_t i = 0; i < t_samples.size(); ++i) {
        const double abs_t = std::abs(t_samples[i].to_double());
        const double nb = values[i].norm();
        if (!t_samples[i].is_zero()) rep.max_lipschitz_ratio = std::max(rep.max_lipschitz_ratio, nb / (lip * abs_t));
        if (nb > lip * abs_t + 1e-9) {
            std::ostringstream os;
            os << "lipschitz: ||b(" << t_samples[i].str() << ")|| = " << nb << " exceeds sqrt(C_N)|t| = " << lip * abs_t;
            rep.violations.push_back(os.str());
        }
    }

    auto identity_residual = [&](std::size_t i, const CocycleValue& bs, const Rational& s) {
        double diff_sq = 0.0;
        for (std::size_t c = 0; c < bs.coords.size(); ++c) diff_sq += std::norm(values[i].coords[c] - bs.coords[c]);
        const double shifted = cocycle_eval(t_samples[i] - s, cfg).norm();
        const double res = std::abs(std::sqrt(diff_sq) - shifted);
        rep.max_identity_residual = std::max(rep.max_identity_residual, res);
        if (res > identity_tol) {
            std::ostringstream os;
            os << "identity: residual " << res << " at (" << t_samples[i].str() << ", " << s.str() << ")";
            rep.violations.push_back(os.str());
        }
    };
    for (std::size_t i = 0; i + 1 < t_samples.size(); ++i) identity_residual(i, values[i + 1], t_samples[i + 1]);
    for (std::size_t i = 0; i < t_samples.size(); ++i) {
        const Rational neg = -t_samples[i];
        identity_residual(i, cocycle_eval(neg, cfg), neg);
    }

    rep.collapse = collapse_sequence(cfg);
    for (std::size_t i = 0; i < rep.collapse.size(); ++i) {
        const auto& st = rep.collapse[i];
        if (!st.low_coords_exact_zero)
            rep.violations.push_back("collapse: coordinates n <= " + std::to_string(st.k) + " are not exactly zero");
        if (st.norm_sq > st.bound_sq) {
            std::ostringstream os;
            os << "collapse: ||b(2^2^" << st.k << ")||^2 = " << st.norm_sq << " exceeds bound " << st.bound_sq;
            rep.violations.push_back(os.str());
        }
        if (i > 0 && !(st.norm < rep.collapse[i - 1].norm)) rep.collapse_strictly_decreasing = false;
    }
    if (!rep.collapse_strictly_decreasing) rep.violations.push_back("collapse: norms are not strictly decreasing");
    return rep;
}

WitnessResult cocycle_solvency_witness(const CocycleConfig& cfg, double target, const WitnessSearch& search) {
    const int N = cfg.truncation();
    if (!(target < 2.0 * std::sqrt(static_cast<double>(N))))
        throw InputError("unreachable at truncation N = " + std::to_string(N));

    WitnessResult res;
    if (target <= 0.0) {
        res.t = Rational(0);
        res.norm = 0.0;
        return res;
    }

    struct Candidate {
        BigInt t;
        double partial_sq;
    };
    std::vector<Candidate> beam{{BigInt(0), 0.0}};
    BigInt step = 1;  // t is fixed modulo `step` by earlier levels

    for (int n = 1; n <= N; ++n) {
        const BigInt& period = cfg.period(n);
        const BigInt choices = period / step;
        std::vector<Candidate> children;
        for (const auto& c : beam) {
            // k with (t + k step) / period closest to 1/2
            const BigInt ideal = (period / 2 - c.t) / step;
            const BigInt w = static_cast<long long>(search.window);
            BigInt lo = ideal - w;
            if (lo < 0) lo = 0;
            BigInt hi = ideal + w;
            if (hi >= choices) hi = choices - 1;
            for (BigInt k = lo; k <= hi; ++k) {
                BigInt t = c.t + k * step;
                const double theta = folded_theta(t, period);
                const double s = std::sin(std::numbers::pi * theta);
                const double mag = 2.0 * std::abs(s);
                children.push_back({std::move(t), c.partial_sq + mag * mag});
                if (++res.evaluations > search.budget) return res;
            }
        }

        const Candidate* hit = nullptr;
        for (const auto& ch : children) {
            if (std::sqrt(ch.partial_sq) >= target && (!hit || ch.t < hit->t)) hit = &ch;
        }
        if (hit) {
            res.t = Rational(hit->t);
            res.level = n;
            const auto v = cocycle_eval(*res.t, cfg);
            res.norm = v.norm();
            if (res.norm < target) throw ViolationError("cocycle witness: exact re-evaluation fell below target");
            return res;
        }

        std::sort(children.begin(), children.end(), [](const Candidate& a, const Candidate& b) {
            return a.partial_sq > b.partial_sq || (a.partial_sq == b.partial_sq && a.t < b.t);
        });
        if (children.size() > search.beam_width) children.resize(search.beam_width);
        beam = std::move(children);
        step = period;
    }
    return res;
}

}  // namespace embedlab
