#pragma once

#include "embedlab/metric.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace embedlab {

/// The discrete torus Z_m^n with row-major indexing (coordinate 0 most significant).
class Torus {
public:
    Torus(int n, int m);

    [[nodiscard]] int dim() const { return n_; }
    [[nodiscard]] int modulus() const { return m_; }
    // m^n; throws BudgetError when it does not fit in 62 bits.
    [[nodiscard]] std::uint64_t size() const;
    [[nodiscard]] std::uint64_t index(std::span<const int> x) const;
    void coords(std::uint64_t index, std::span<int> out) const;
    [[nodiscard]] std::uint64_t stride(int j) const { return strides_.at(static_cast<std::size_t>(j)); }
    // Nonzero vectors of {-1,0,1}^n in lexicographic order (3^n - 1 of them).
    [[nodiscard]] std::vector<std::vector<int>> unit_steps() const;

private:
    int n_;
    int m_;
    bool fits_ = true;
    std::vector<std::uint64_t> strides_;
};

/// A map Z_m^n -> target. Dense variants store m^n values in row-major order;
/// the lazy variant evaluates a closure and is meant for Monte Carlo.
class LatticeFunction {
public:
    using Evaluator = std::function<NormedPoint(std::span<const int>)>;

    static LatticeFunction finite(Torus torus, std::shared_ptr<const FiniteMetricSpace> space,
                                  std::vector<std::uint32_t> labels);
    static LatticeFunction normed(Torus torus, std::vector<NormedPoint> values);
    static LatticeFunction lazy(Torus torus, Evaluator eval);

    [[nodiscard]] const Torus& torus() const { return torus_; }
    [[nodiscard]] bool is_dense() const { return kind_ != Kind::Lazy; }
    [[nodiscard]] bool is_finite() const { return kind_ == Kind::Finite; }
    [[nodiscard]] const std::vector<std::uint32_t>& labels() const { return labels_; }
    [[nodiscard]] const FiniteMetricSpace& space() const { return *space_; }

    // Distance between the values at two dense indices.
    [[nodiscard]] double distance_at(std::uint64_t a, std::uint64_t b) const;
    // Distance between the values at two lattice points.
    [[nodiscard]] double distance(std::span<const int> x, std::span<const int> y) const;

    // f composed with translation by `shift` (dense only).
    [[nodiscard]] LatticeFunction translated(std::span<const int> shift) const;
    // f composed with the coordinate permutation x -> (x_{perm[0]}, ...) (dense only).
    [[nodiscard]] LatticeFunction permuted(std::span<const int> perm) const;
    // Normed values multiplied by lambda (dense normed only).
    [[nodiscard]] LatticeFunction scaled(double lambda) const;

private:
    enum class Kind { Finite, Normed, Lazy };
    LatticeFunction(Kind k, Torus t) : kind_(k), torus_(std::move(t)) {}

    Kind kind_;
    Torus torus_;
    std::shared_ptr<const FiniteMetricSpace> space_;
    std::vector<std::uint32_t> labels_;
    std::vector<NormedPoint> values_;
    Evaluator eval_;
};

struct CotypeInstance {
    int n = 1;
    int m = 2;
    double q = 2.0;
    double gamma = 1.0;

    void validate() const;
    // Gamma^q m^q.
    [[nodiscard]] double threshold() const;
};

enum class CotypeMethod { Exhaustive, MonteCarlo };

struct CotypeOptions {
    CotypeMethod method = CotypeMethod::Exhaustive;
    std::uint64_t budget = 100'000'000;  // exhaustive summands
    std::uint64_t samples = 100'000;     // Monte Carlo draws for each side
    std::uint64_t seed = 0;
};

struct CotypeReport {
    double lhs = 0.0;
    double rhs_integral = 0.0;
    double ratio = 0.0;
    double threshold = 0.0;
    bool holds = true;
    CotypeMethod method = CotypeMethod::Exhaustive;
    std::uint64_t samples = 0;
    double stderr_lhs = 0.0;
    double stderr_rhs = 0.0;
};

[[nodiscard]] std::string method_name(CotypeMethod m);

// Summands needed for exhaustive evaluation: m^n (n + 3^n).
[[nodiscard]] std::uint64_t exhaustive_summands(const Torus& torus);

/// sum_j (1/m^n) sum_x d(f(x + (m/2) e_j), f(x))^q, exhaustively.
[[nodiscard]] double cotype_lhs(const LatticeFunction& f, const CotypeInstance& inst);
/// (1/3^n)(1/m^n) sum_eps sum_x d(f(x + eps), f(x))^q, eps = 0 included.
[[nodiscard]] double cotype_rhs_integral(const LatticeFunction& f, const CotypeInstance& inst);

[[nodiscard]] CotypeReport cotype_check(const LatticeFunction& f, const CotypeInstance& inst,
                                        const CotypeOptions& opts = {});

// ratio = lhs / rhs with 0/0 = 0.
[[nodiscard]] double cotype_ratio(double lhs, double rhs);

}  // namespace embedlab
