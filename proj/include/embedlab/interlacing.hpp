#pragma once

#include "embedlab/metric.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace embedlab {

/// Strictly increasing k-subset of {1, ..., N}.
class KSubset {
public:
    KSubset() = default;
    KSubset(std::vector<int> elements, int ground);

    [[nodiscard]] int k() const { return static_cast<int>(elems_.size()); }
    [[nodiscard]] const std::vector<int>& elements() const { return elems_; }
    [[nodiscard]] int operator[](std::size_t i) const { return elems_[i]; }
    [[nodiscard]] int front() const { return elems_.front(); }
    [[nodiscard]] int back() const { return elems_.back(); }

    // Colex rank sum_i C(a_i - 1, i) with i counted from 1.
    [[nodiscard]] std::uint64_t colex_rank() const;
    static KSubset from_colex(std::uint64_t rank, int k, int ground);

    friend bool operator==(const KSubset&, const KSubset&) = default;

private:
    std::vector<int> elems_;
};

[[nodiscard]] std::uint64_t binomial(int n, int k);

/// n_1 <= m_1 <= n_2 <= ... <= n_k <= m_k, or the same with the roles swapped.
[[nodiscard]] bool interlaces(const KSubset& a, const KSubset& b);

/// a < b when a_k < b_1.
[[nodiscard]] inline bool precedes(const KSubset& a, const KSubset& b) { return a.back() < b.front(); }

/// P_k([N]) with vertices in colex order and the shortest-path metric.
class InterlacingGraph {
public:
    InterlacingGraph(int k, int ground);

    [[nodiscard]] int k() const { return k_; }
    [[nodiscard]] int ground() const { return ground_; }
    [[nodiscard]] std::size_t size() const { return vertices_.size(); }
    [[nodiscard]] const KSubset& vertex(std::size_t i) const { return vertices_[i]; }
    [[nodiscard]] const std::vector<std::uint32_t>& neighbors(std::size_t i) const { return adj_[i]; }
    [[nodiscard]] bool adjacent(std::size_t a, std::size_t b) const;

    // Breadth-first distance; throws DomainError("unreachable") for disconnected pairs.
    [[nodiscard]] int distance(std::size_t a, std::size_t b) const;
    [[nodiscard]] int distance(const KSubset& a, const KSubset& b) const;
    [[nodiscard]] int eccentricity(std::size_t v) const;
    [[nodiscard]] int diameter() const;
    // All-pairs matrix, row-major; -1 marks unreachable.
    [[nodiscard]] const std::vector<std::int16_t>& all_pairs() const;

private:
    int k_;
    int ground_;
    std::vector<KSubset> vertices_;
    std::vector<std::vector<std::uint32_t>> adj_;
    mutable std::vector<std::int16_t> dist_;
};

struct PropertyQInstance {
    int k = 1;
    int ground = 1;
    int subset_size = 2;  // finite stand-in for an infinite subset
    double epsilon = 0.0;
    double delta = 0.0;
    std::shared_ptr<const FiniteMetricSpace> target;
    std::vector<std::uint32_t> f;  // indexed by colex rank

    // max(2k, ceil(N/2)).
    [[nodiscard]] static int default_subset_size(int k, int ground);
    void validate() const;
    [[nodiscard]] double value_distance(const KSubset& a, const KSubset& b) const;
};

struct PropertyQVerdict {
    bool lipschitz_ok = true;
    double omega_1 = 0.0;                      // max over adjacent pairs
    std::optional<std::vector<int>> witness;   // ascending, maximal by greedy extension
    bool exhausted = false;
    std::uint64_t nodes = 0;
};

/// Ascending branch and bound over ground elements, pruning on the first violated pair.
[[nodiscard]] PropertyQVerdict property_q_test(const PropertyQInstance& inst, std::uint64_t node_budget = 50'000'000);

/// True when every ordered pair a < b drawn from `subset` maps epsilon-close.
[[nodiscard]] bool subset_is_good(const PropertyQInstance& inst, const std::vector<int>& subset);

/// Largest delta in `grid` such that every instance with omega_f(1) <= delta has a witness.
/// Instances share k, N, s and epsilon; their own delta fields are ignored.
[[nodiscard]] std::optional<double> empirical_delta_margin(const std::vector<PropertyQInstance>& batch,
                                                           std::vector<double> grid);

}  // namespace embedlab
