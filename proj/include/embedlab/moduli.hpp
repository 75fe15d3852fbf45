#pragma once

#include "embedlab/metric.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace embedlab {

// Source and image distance of one sampled pair (i < j).
struct PairSample {
    double source;
    double image;
};

// All pairs of a sampled map, sorted by (source, image) distance.
[[nodiscard]] std::vector<PairSample> pair_distances(const SampledMap& map);

/// sup of image distances over sampled pairs with source distance <= t
/// (0 when no pair qualifies).
[[nodiscard]] double expansion_modulus(const SampledMap& map, double t);
[[nodiscard]] double expansion_modulus(std::span<const PairSample> sorted_pairs, double t);

// Infimum of image distances over pairs with |source - t| <= half_width.
// Empty when no pair falls in the window.
[[nodiscard]] std::optional<double> exact_compression_at(std::span<const PairSample> sorted_pairs,
                                                         double t, double half_width);

struct ModulusBin {
    double t_lo = 0.0;
    double t_hi = 0.0;
    double omega = 0.0;             // omega_f(t_hi)
    std::optional<double> rho;      // rho_f(t_lo); empty when no pair has d >= t_lo
    std::optional<double> rho_bar;  // inf over pairs with d inside this bin; empty bin -> nullopt
    std::size_t pair_count = 0;

    [[nodiscard]] bool empty() const { return pair_count == 0; }
};

/// Binned moduli. Bin i is [edges[i], edges[i+1]); the last bin is closed.
struct ModulusProfile {
    std::vector<double> edges;
    std::vector<ModulusBin> bins;
    std::size_t pair_count = 0;
    double max_image_distance = 0.0;
};

// `count` uniform bins over [0, max observed source distance].
[[nodiscard]] std::vector<double> uniform_edges(std::span<const PairSample> pairs, std::size_t count = 64);

[[nodiscard]] ModulusProfile compression_moduli(const SampledMap& map, std::span<const double> edges);
[[nodiscard]] ModulusProfile compression_moduli(std::span<const PairSample> sorted_pairs,
                                                std::span<const double> edges);

struct TaxonomyParams {
    std::vector<double> edges;  // empty -> uniform_edges(pairs, bin_count)
    std::size_t bin_count = 64;
    int n_max = 8;
    std::optional<double> zero_tol;  // default 1e-9 * max image distance
};

struct SolvedScale {
    int n;
    double R;
};

/// Finite-scale verdicts of the map taxonomy. Every flag refers to the
/// sampled pairs only.
struct TaxonomyReport {
    bool coarse_at_scale = true;
    double max_omega = 0.0;
    bool expanding_at_scale = false;
    std::optional<double> expanding_witness;
    std::vector<SolvedScale> solvent_at_scale;
    bool solvent = false;  // solved for every n in 1..n_max
    bool uncollapsed = false;
    std::optional<double> uncollapsed_witness;
    bool almost_uncollapsed = false;
    std::optional<double> almost_uncollapsed_witness;
    double linear_growth_constant = 0.0;
    double zero_tol = 0.0;
    double bin_width = 0.0;
    int n_max = 8;
    ModulusProfile profile;
};

// Throws ViolationError when the taxonomy arrows fail on a report.
void check_taxonomy_arrows(const TaxonomyReport& report);

[[nodiscard]] TaxonomyReport classify(const SampledMap& map, const TaxonomyParams& params = {});

/// Greedy maximal delta-separated subset, scanning indices in order.
[[nodiscard]] std::vector<std::size_t> extract_net(const PointCloud& cloud, double delta);
[[nodiscard]] std::vector<std::size_t> extract_net(const FiniteMetricSpace& space, double delta);

struct NetTransferReport {
    double omega_delta = 0.0;
    std::size_t net_pairs_in_window = 0;
    std::size_t full_pairs_in_window = 0;
    bool hypothesis = false;
    bool conclusion = false;
};

/// Checks that solvency at (n, R) on a delta-dense net transfers to the full
/// sample: net pairs with d in [R - 2 delta, R + n + 2 delta] mapped beyond
/// n + 2 omega(delta) force full pairs with d in [R, R + n] beyond n.
/// Throws InputError if the net is not delta-dense and ViolationError if the
/// hypothesis holds while the conclusion fails.
[[nodiscard]] NetTransferReport net_transfer_check(const SampledMap& full_map,
                                                   std::span<const std::size_t> net_indices,
                                                   double delta, int n, double R);

}  // namespace embedlab
