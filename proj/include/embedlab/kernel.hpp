#pragma once

#include "embedlab/metric.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace embedlab {

enum class KernelKind { NegativeDefinite, PositiveDefinite };

[[nodiscard]] std::string kernel_kind_name(KernelKind k);

/// Symmetric kernel matrix stored as its packed upper triangle (row by row, i <= j).
class KernelMatrix {
public:
    KernelMatrix(std::size_t n, std::vector<double> packed_upper, KernelKind kind);

    static KernelMatrix from_dense(const Eigen::MatrixXd& m, KernelKind kind, double symmetry_tol = 0.0);
    // ||x_i - x_j||^2 on real points.
    static KernelMatrix squared_distances(std::span<const std::vector<double>> points);
    static KernelMatrix squared_distances(std::span<const NormedPoint> points);

    [[nodiscard]] std::size_t size() const { return n_; }
    [[nodiscard]] KernelKind kind() const { return kind_; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const;
    [[nodiscard]] const std::vector<double>& packed() const { return packed_; }
    [[nodiscard]] bool zero_diagonal() const;
    // max |entry|, or 1 for the zero matrix.
    [[nodiscard]] double scale() const;
    [[nodiscard]] Eigen::MatrixXd dense() const;

private:
    std::size_t n_;
    std::vector<double> packed_;
    KernelKind kind_;
};

struct DefinitenessResult {
    bool verdict = true;
    double max_violation = 0.0;      // amount by which the extreme eigenvalue crosses zero
    double extreme_eigenvalue = 0.0;
    double scale = 1.0;
};

/// Largest eigenvalue of K restricted to sum(c) = 0; verdict when it is <= tol * scale.
[[nodiscard]] DefinitenessResult is_negative_definite(const KernelMatrix& k, double tol = 1e-9);

/// Entry-wise K^alpha for 0 < alpha < 1, certified negative definite before return.
[[nodiscard]] KernelMatrix snowflake_kernel(const KernelMatrix& k, double alpha, double tol = 1e-9);

struct EmbeddingResult {
    std::vector<std::vector<double>> points;  // centered, dimension <= n - 1
    double reconstruction_error = 0.0;        // max |‖g_i - g_j‖^2 - K(i,j)|
    std::size_t clipped_eigenvalues = 0;
    std::size_t dimension = 0;
};

/// Centered Gram factorisation of -K/2 on the sum-zero hyperplane.
[[nodiscard]] EmbeddingResult schoenberg_embed(const KernelMatrix& k, double tol = 1e-9);

/// Positive semidefiniteness of exp(-g(i,j)): min eigenvalue >= -tol * scale.
[[nodiscard]] DefinitenessResult exp_positive_definite_check(const KernelMatrix& g, double tol = 1e-9);

struct HolderOptions {
    std::vector<double> edges;  // empty: 64 uniform bins
    double tol = 1e-9;          // eigenvalue tolerance for the embedding
    double sandwich_tol = 1e-6;
    bool restrict_to_net = false;  // run the chain on a greedy 1-net of the sample
};

struct HolderReport {
    double alpha = 0.0;
    std::vector<std::size_t> sample_indices;  // rows of the input kept in f_alpha
    EmbeddingResult embedding;
    std::size_t pairs_checked = 0;
    double max_upper_excess = 0.0;   // max of ‖f_a(x)-f_a(y)‖ - ‖x-y‖^alpha
    double max_lower_deficit = 0.0;  // max of rho_bar(‖x-y‖)^alpha - ‖f_a(x)-f_a(y)‖
    bool sandwich_ok = true;
};

struct HolderResult {
    SampledMap f_alpha;
    HolderReport report;
};

/// Snowflakes the squared image distances of f with exponent alpha in (0, 1/2), embeds the
/// kernel and checks rho_bar(‖x-y‖)^alpha <= ‖f_a(x)-f_a(y)‖ <= ‖x-y‖^alpha on pairs
/// with ‖x-y‖ >= 1. Throws InputError listing pairs that break ‖f(x)-f(y)‖ <= ‖x-y‖ there.
[[nodiscard]] HolderResult holder_solvent_transform(const SampledMap& f, double alpha, const HolderOptions& opts = {});

}  // namespace embedlab
