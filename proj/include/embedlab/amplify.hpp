#pragma once

#include "embedlab/metric.hpp"

#include <optional>
#include <string>
#include <vector>

namespace embedlab {

// Norm used to aggregate block norms in the direct sum.
enum class Aggregation { L2, L1, Sup };

[[nodiscard]] Aggregation parse_aggregation(const std::string& name);
[[nodiscard]] std::string aggregation_name(Aggregation a);

/// Amplification of a uniformly continuous base map phi:
/// Phi_n(x) = n * phi(eps_n x / n), n = 1..n_max.
struct AmplificationConfig {
    std::vector<double> eps;  // eps[n-1] = eps_n
    PointMap phi;
    bool recenter = false;    // use phi(x) - phi(0)
    Aggregation aggregation = Aggregation::L2;

    [[nodiscard]] int n_max() const { return static_cast<int>(eps.size()); }

    // eps_n = safety / (L n 2^n), so L eps_n < 1/(n 2^n) certifies omega(eps_n).
    static std::vector<double> eps_from_lipschitz(double lipschitz, int n_max, double safety = 0.5);
};

struct EpsCertificate {
    int n = 0;
    double eps = 0.0;
    double limit = 0.0;            // 1 / (n 2^n)
    double sampled_omega = 0.0;    // omega_phi(eps_n) over sampled pairs
    std::optional<double> lipschitz_bound;  // L eps_n when L is known
    bool ok = false;
};

/// Checks omega_phi(eps_n) < 1/(n 2^n) on the sampled grid, and also through
/// the Lipschitz bound when one is supplied. Throws ViolationError on failure.
[[nodiscard]] std::vector<EpsCertificate> certify_eps(const AmplificationConfig& cfg, const SampledMap& phi_sample,
                                                      std::optional<double> lipschitz = std::nullopt);

[[nodiscard]] std::vector<NormedPoint> amplify(const AmplificationConfig& cfg, const NormedPoint& x, int truncation);

// Aggregated direct-sum distance between two amplified points.
[[nodiscard]] double aggregated_distance(const std::vector<NormedPoint>& a, const std::vector<NormedPoint>& b,
                                         Aggregation agg);

}  // namespace embedlab
