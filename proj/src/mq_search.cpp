#include "embedlab/mq_search.hpp"

#include "embedlab/error.hpp"
#include "embedlab/parallel.hpp"
#include "embedlab/random.hpp"
#include "embedlab/torus_witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace embedlab {

namespace {

// Neighbour tables and powered distances shared by the exhaustive and annealing searches.
struct Landscape {
    std::size_t sites = 0;
    std::size_t labels = 0;
    int n = 0;
    double three_n = 1.0;
    std::vector<std::uint32_t> half;  // sites x n: x + (m/2) e_j
    std::vector<std::uint32_t> unit;  // sites x (3^n - 1): x + eps
    std::size_t unit_count = 0;
    std::vector<double> dq;           // labels x labels

    Landscape(const CotypeInstance& inst, const FiniteMetricSpace& target) {
        inst.validate();
        const Torus t(inst.n, inst.m);
        const std::uint64_t size = t.size();
        if (size > std::numeric_limits<std::uint32_t>::max()) throw BudgetError("budget: lattice too large for search");
        sites = size;
        labels = target.size();
        n = inst.n;
        const auto steps = t.unit_steps();
        unit_count = steps.size();
        three_n = static_cast<double>(unit_count + 1);
        half.resize(sites * static_cast<std::size_t>(n));
        unit.resize(sites * unit_count);
        std::vector<int> x(static_cast<std::size_t>(n));
        std::vector<int> y(x.size());
        for (std::size_t s = 0; s < sites; ++s) {
            t.coords(s, x);
            for (int j = 0; j < n; ++j) {
                y = x;
                y[static_cast<std::size_t>(j)] += inst.m / 2;
                half[s * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(t.index(y));
            }
            for (std::size_t e = 0; e < unit_count; ++e) {
                for (std::size_t j = 0; j < x.size(); ++j) y[j] = x[j] + steps[e][j];
                unit[s * unit_count + e] = static_cast<std::uint32_t>(t.index(y));
            }
        }
        dq.resize(labels * labels);
        for (std::size_t a = 0; a < labels; ++a)
            for (std::size_t b = 0; b < labels; ++b) dq[a * labels + b] = std::pow(target(a, b), inst.q);
    }

    [[nodiscard]] double d(std::uint32_t a, std::uint32_t b) const { return dq[a * labels + b]; }

    struct Sums {
        double left = 0.0;
        double right = 0.0;
    };

    [[nodiscard]] Sums sums(const std::vector<std::uint32_t>& f) const {
        Sums s;
        for (std::size_t x = 0; x < sites; ++x) {
            for (int j = 0; j < n; ++j) s.left += d(f[x], f[half[x * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)]]);
            for (std::size_t e = 0; e < unit_count; ++e) s.right += d(f[x], f[unit[x * unit_count + e]]);
        }
        return s;
    }

    // Change in both sums when site y switches from label `from` to `to`.
    [[nodiscard]] Sums delta(const std::vector<std::uint32_t>& f, std::size_t y, std::uint32_t from, std::uint32_t to) const {
        Sums s;
        for (int j = 0; j < n; ++j) {
            const auto nb = f[half[y * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)]];
            s.left += d(to, nb) - d(from, nb);
        }
        for (std::size_t e = 0; e < unit_count; ++e) {
            const auto nb = f[unit[y * unit_count + e]];
            s.right += d(to, nb) - d(from, nb);
        }
        s.left *= 2.0;
        s.right *= 2.0;
        return s;
    }

    [[nodiscard]] double ratio(const Sums& s) const { return cotype_ratio(three_n * s.left, s.right); }

    [[nodiscard]] MqCandidate candidate(std::vector<std::uint32_t> f) const {
        const Sums s = sums(f);
        MqCandidate c;
        c.labels = std::move(f);
        c.lhs = s.left / static_cast<double>(sites);
        c.rhs_integral = s.right / (static_cast<double>(sites) * three_n);
        c.ratio = ratio(s);
        return c;
    }
};

bool improves(double candidate, double best) {
    return candidate > best + 1e-12 * std::max(1.0, std::abs(best));
}

std::shared_ptr<const FiniteMetricSpace> require(std::shared_ptr<const FiniteMetricSpace> target) {
    if (!target) throw InputError("mq search: target space missing");
    return target;
}

}  // namespace

MqCandidate mq_evaluate(const CotypeInstance& inst, const FiniteMetricSpace& target, std::vector<std::uint32_t> labels) {
    const Landscape land(inst, target);
    if (labels.size() != land.sites) throw InputError("mq search: expected m^n labels");
    for (auto l : labels)
        if (l >= land.labels) throw InputError("mq search: label outside target");
    return land.candidate(std::move(labels));
}

MqExhaustiveResult mq_exhaustive(const CotypeInstance& inst, std::shared_ptr<const FiniteMetricSpace> target,
                                 std::uint64_t budget) {
    target = require(std::move(target));
    const Landscape land(inst, *target);
    const std::uint64_t T = land.labels;
    const std::size_t L = land.sites;

    std::uint64_t total = 1;
    for (std::size_t i = 0; i < L && T > 1; ++i) {
        if (total > budget / T) throw BudgetError("budget: |target|^(m^n) exceeds the function budget");
        total *= T;
    }
    MqExhaustiveResult out;
    out.functions = total;
    if (T == 1) {
        out.best = land.candidate(std::vector<std::uint32_t>(L, 0));
        return out;
    }

    // Low digits vary inside a block; the remaining top digits index the block.
    std::size_t low = 0;
    std::uint64_t per_block = 1;
    while (low < L && per_block * T <= (std::uint64_t{1} << 20)) {
        per_block *= T;
        ++low;
    }
    const std::uint64_t blocks = total / per_block;

    std::vector<MqCandidate> best(blocks);
    parallel::for_blocks(blocks, [&](std::size_t b) {
        std::vector<std::uint32_t> counter(L, 0);
        std::uint64_t rest = b;
        for (std::size_t i = low; i < L; ++i) {
            counter[i] = static_cast<std::uint32_t>(rest % T);
            rest /= T;
        }
        // Modular Gray code: g_j = c_j - c_{j+1} (mod T). Incrementing the counter
        // changes exactly one Gray digit, the one at the carry position, by +1.
        std::vector<std::uint32_t> f(L);
        for (std::size_t j = 0; j < L; ++j) {
            const std::uint64_t next = j + 1 < L ? counter[j + 1] : 0;
            f[j] = static_cast<std::uint32_t>((counter[j] + T - next) % T);
        }
        auto sums = land.sums(f);
        MqCandidate local = land.candidate(f);
        for (std::uint64_t step = 1; step < per_block; ++step) {
            std::size_t r = 0;
            while (counter[r] == T - 1) counter[r++] = 0;
            ++counter[r];
            const auto from = f[r];
            const auto to = static_cast<std::uint32_t>((from + 1) % T);
            const auto dlt = land.delta(f, r, from, to);
            f[r] = to;
            sums.left += dlt.left;
            sums.right += dlt.right;
            if (improves(land.ratio(sums), local.ratio)) {
                auto exact = land.candidate(f);
                if (exact.ratio > local.ratio) local = std::move(exact);
            }
        }
        best[b] = std::move(local);
    });
    out.best = std::move(best.front());
    for (std::size_t b = 1; b < best.size(); ++b)
        if (best[b].ratio > out.best.ratio) out.best = std::move(best[b]);
    return out;
}

MqSearchResult mq_witness_search(const CotypeInstance& inst, std::shared_ptr<const FiniteMetricSpace> target,
                                 const AnnealParams& params) {
    target = require(std::move(target));
    if (params.restarts < 1) throw InputError("mq search: restarts must be >= 1");
    if (!(params.cooling > 0.0 && params.cooling <= 1.0)) throw InputError("mq search: cooling must lie in (0, 1]");
    if (!(params.initial_temperature > 0.0)) throw InputError("mq search: initial temperature must be positive");
    const Landscape land(inst, *target);
    const std::size_t L = land.sites;
    const auto T = static_cast<std::uint32_t>(land.labels);

    std::vector<MqCandidate> results(static_cast<std::size_t>(params.restarts));
    parallel::for_blocks(results.size(), [&](std::size_t restart) {
        auto rng = make_rng(params.seed, restart);
        std::vector<std::uint32_t> f(L);
        for (auto& v : f) v = static_cast<std::uint32_t>(uniform_below(rng, T));
        auto sums = land.sums(f);
        double current = land.ratio(sums);
        std::vector<std::uint32_t> best = f;
        double best_ratio = current;
        double temperature = params.initial_temperature;
        if (T > 1) {
            for (std::uint64_t p = 0; p < params.proposals; ++p) {
                const auto y = static_cast<std::size_t>(uniform_below(rng, L));
                const auto from = f[y];
                const auto to = static_cast<std::uint32_t>((from + 1 + uniform_below(rng, T - 1)) % T);
                const auto dlt = land.delta(f, y, from, to);
                const Landscape::Sums next{sums.left + dlt.left, sums.right + dlt.right};
                const double proposed = land.ratio(next);
                const double u = uniform01(rng);
                if (proposed >= current || u < std::exp((proposed - current) / temperature)) {
                    f[y] = to;
                    sums = next;
                    current = proposed;
                    if (improves(current, best_ratio)) {
                        best = f;
                        best_ratio = current;
                    }
                }
                if ((p + 1) % L == 0) {
                    temperature *= params.cooling;
                    if (((p + 1) / L) % 64 == 0) {
                        sums = land.sums(f);
                        current = land.ratio(sums);
                    }
                }
            }
        }
        results[restart] = land.candidate(std::move(best));
    });

    MqSearchResult out;
    out.threshold = inst.threshold();
    std::size_t arg = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        out.restart_ratios.push_back(results[i].ratio);
        if (results[i].ratio > results[arg].ratio) arg = i;
    }
    out.best = std::move(results[arg]);
    out.violates = out.best.ratio > out.threshold;
    return out;
}

LowerBoundTable mq_lower_bound(int n, double q, double gamma, const LowerBoundOptions& opts) {
    const CotypeInstance probe{n, 2, q, gamma};
    probe.validate();
    LowerBoundTable table;
    table.n = n;
    table.q = q;
    table.gamma = gamma;
    table.bound = std::pow(static_cast<double>(n), 1.0 / q) / gamma;

    std::vector<int> ms = opts.ms;
    if (ms.empty())
        for (int m = 2; m < table.bound; m += 2) ms.push_back(m);

    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (int m : ms) {
        const CotypeInstance inst{n, m, q, gamma};
        inst.validate();
        const Torus torus(n, m);
        const TorusWitnessConfig cfg{n, m, 2.0, s};
        const auto f = LatticeFunction::lazy(torus, [cfg](std::span<const int> x) { return torus_witness(cfg, x); });

        CotypeOptions co = opts.cotype;
        co.seed = derive_seed(opts.cotype.seed, static_cast<std::uint64_t>(m));
        co.method = CotypeMethod::MonteCarlo;
        try {
            if (exhaustive_summands(torus) <= co.budget) co.method = CotypeMethod::Exhaustive;
        } catch (const BudgetError&) {
        }

        LowerBoundRow row;
        row.m = m;
        row.report = cotype_check(f, inst, co);
        const double pi = std::numbers::pi;
        row.analytic_ratio = q == 2.0 ? 1.5 / std::pow(std::sin(pi / m), 2) : std::numeric_limits<double>::quiet_NaN();
        if (co.method == CotypeMethod::Exhaustive) {
            row.found_violation = !row.report.holds;
        } else {
            const double thr = row.report.threshold;
            const double gap = row.report.lhs - thr * row.report.rhs_integral;
            const double se = std::hypot(row.report.stderr_lhs, thr * row.report.stderr_rhs);
            row.found_violation = gap > 4.0 * se;
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace embedlab
