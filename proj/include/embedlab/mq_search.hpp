#pragma once

#include "embedlab/cotype.hpp"
#include "embedlab/metric.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace embedlab {

/// Best lattice function found for the cotype ratio lhs / rhs_integral.
struct MqCandidate {
    std::vector<std::uint32_t> labels;  // row-major over Z_m^n
    double lhs = 0.0;
    double rhs_integral = 0.0;
    double ratio = 0.0;
};

struct MqExhaustiveResult {
    MqCandidate best;
    std::uint64_t functions = 0;
};

/// Exact maximum of the ratio over all |target|^(m^n) functions.
/// Throws BudgetError("budget") when the function count exceeds `budget`.
[[nodiscard]] MqExhaustiveResult mq_exhaustive(const CotypeInstance& inst,
                                               std::shared_ptr<const FiniteMetricSpace> target,
                                               std::uint64_t budget = 100'000'000);

struct AnnealParams {
    std::uint64_t proposals = 100'000;  // per restart
    int restarts = 8;
    double cooling = 0.999;             // applied once per sweep of m^n proposals
    double initial_temperature = 1.0;
    std::uint64_t seed = 0;
};

struct MqSearchResult {
    MqCandidate best;
    std::vector<double> restart_ratios;
    double threshold = 0.0;
    bool violates = false;
    // "violation" when best ratio exceeds the threshold, otherwise "inconclusive".
    [[nodiscard]] std::string verdict() const { return violates ? "violation" : "inconclusive"; }
};

/// Seeded simulated annealing with single-site uniform moves.
[[nodiscard]] MqSearchResult mq_witness_search(const CotypeInstance& inst,
                                               std::shared_ptr<const FiniteMetricSpace> target,
                                               const AnnealParams& params);

/// Exact lhs, rhs_integral and ratio of a labelled function.
[[nodiscard]] MqCandidate mq_evaluate(const CotypeInstance& inst, const FiniteMetricSpace& target,
                                      std::vector<std::uint32_t> labels);

struct LowerBoundRow {
    int m = 0;
    CotypeReport report;
    double analytic_ratio = 0.0;  // closed form for the sphere witness when q = 2, else NaN
    bool found_violation = false;
    [[nodiscard]] std::string status() const { return found_violation ? "violation" : "inconclusive"; }
};

struct LowerBoundTable {
    int n = 0;
    double q = 2.0;
    double gamma = 1.0;
    double bound = 0.0;  // n^{1/q} / gamma
    std::vector<LowerBoundRow> rows;
    [[nodiscard]] bool vacuous() const { return rows.empty(); }
};

struct LowerBoundOptions {
    std::vector<int> ms;  // empty: every even m with 2 <= m < bound
    CotypeOptions cotype;  // method is chosen per row: exhaustive when within budget
};

/// For each even m below n^{1/q}/gamma, evaluates the torus witness scaled onto the
/// unit sphere of l_2^n(C), a finite subset of the sphere, as a candidate violator.
[[nodiscard]] LowerBoundTable mq_lower_bound(int n, double q, double gamma, const LowerBoundOptions& opts);

}  // namespace embedlab
