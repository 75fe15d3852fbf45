#pragma once

#include "embedlab/metric.hpp"
#include "embedlab/rational.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace embedlab {

// How coordinates whose exact nonzero phase falls below the double range are treated.
enum class UnderflowPolicy {
    Flush,   // store an exact zero and count it (absolute error < 2^-1020)
    Strict,  // throw PrecisionError("precision")
};

/// Truncation of the cocycle of the R-action on l_2(C) that rotates
/// coordinate n by exp(2 pi i t / 2^(2^n)), n = 1..N.
class CocycleConfig {
public:
    static constexpr int kMaxTruncation = 16;

    explicit CocycleConfig(int truncation, UnderflowPolicy policy = UnderflowPolicy::Flush);

    [[nodiscard]] int truncation() const { return truncation_; }
    // 2^(2^n) for n = 1..N; period(n) is 1-based.
    [[nodiscard]] const BigInt& period(int n) const { return periods_.at(static_cast<std::size_t>(n - 1)); }
    [[nodiscard]] UnderflowPolicy policy() const { return policy_; }
    // C_N = sum_{n <= N} (2 pi / 2^(2^n))^2.
    [[nodiscard]] double lipschitz_constant_sq() const;

private:
    int truncation_;
    UnderflowPolicy policy_;
    std::vector<BigInt> periods_;
};

// Exact phase of one coordinate: frac = (t mod P) / P in [0, 1), and the
// signed offset to the nearest integer theta in (-1/2, 1/2].
struct Phase {
    Rational frac;
    double theta = 0.0;
    bool exact_zero = false;
    bool flushed = false;
};

struct CocycleValue {
    std::vector<Complex> coords;     // b(t)_n = 1 - exp(2 pi i t / 2^(2^n))
    std::vector<double> magnitudes;  // |b(t)_n| = 2 |sin(pi theta_n)|
    std::vector<Phase> phases;
    int flushed = 0;

    [[nodiscard]] double norm_sq() const;
    [[nodiscard]] double norm() const;
};

[[nodiscard]] std::vector<Phase> cocycle_phases(const Rational& t, const CocycleConfig& cfg);
[[nodiscard]] CocycleValue cocycle_eval(const Rational& t, const CocycleConfig& cfg);

// Linear part U_t: coordinate n is exp(2 pi i t / 2^(2^n)).
[[nodiscard]] std::vector<Complex> rotation(const Rational& t, const CocycleConfig& cfg);
// alpha_t(x) = w + U_t(x - w) with w the all-ones vector of length N.
[[nodiscard]] std::vector<Complex> affine_action(const Rational& t, std::span<const Complex> x,
                                                 const CocycleConfig& cfg);

struct CollapseStep {
    int k = 0;
    double norm = 0.0;
    double norm_sq = 0.0;
    double bound_sq = 0.0;  // sum_{k < n <= N} (2 pi 2^(2^k) / 2^(2^n))^2
    bool low_coords_exact_zero = false;
};

struct CocycleCheckReport {
    double lipschitz_constant_sq = 0.0;
    double max_lipschitz_ratio = 0.0;  // max ||b(t)|| / (sqrt(C_N) |t|) over t != 0
    double max_identity_residual = 0.0;
    std::vector<CollapseStep> collapse;
    bool collapse_strictly_decreasing = true;
    std::vector<std::string> violations;

    [[nodiscard]] bool ok() const { return violations.empty(); }
};

// Upper bound on ||b(2^(2^k))||^2 at truncation N.
[[nodiscard]] double collapse_bound_sq(int k, int truncation);

[[nodiscard]] std::vector<CollapseStep> collapse_sequence(const CocycleConfig& cfg);

/// Lipschitz bound on every sample, cocycle identity on consecutive sample
/// pairs (and each sample with itself negated), and the collapse sequence.
[[nodiscard]] CocycleCheckReport cocycle_norm_checks(const CocycleConfig& cfg,
                                                     std::span<const Rational> t_samples,
                                                     double identity_tol = 1e-12);

struct WitnessSearch {
    std::size_t beam_width = 64;
    std::size_t window = 8;            // candidate offsets on each side of the half-period residue
    std::size_t budget = 1'000'000;    // candidate evaluations
};

struct WitnessResult {
    std::optional<Rational> t;
    double norm = 0.0;  // exact-phase re-evaluation of ||b(t)||
    int level = 0;      // coordinates fixed when the target was met
    std::size_t evaluations = 0;
};

/// Searches integer t whose residues mod 2^(2^n) sit near half periods until
/// ||b(t)|| >= target. Throws InputError("unreachable at truncation N") when
/// target >= 2 sqrt(N).
[[nodiscard]] WitnessResult cocycle_solvency_witness(const CocycleConfig& cfg, double target,
                                                     const WitnessSearch& search = {});

}  // namespace embedlab
