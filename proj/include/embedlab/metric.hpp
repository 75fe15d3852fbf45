#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace embedlab {

using Complex = std::complex<double>;

/// A finite metric space given by labels and a dense distance matrix.
///
/// The constructor validates zero diagonal, symmetry and the triangle
/// inequality (up to `tol`) and throws InputError on the first failure.
class FiniteMetricSpace {
public:
    FiniteMetricSpace(std::vector<std::string> labels, std::vector<double> dist_row_major,
                      double tol = 1e-12);

    static FiniteMetricSpace from_rows(std::vector<std::string> labels,
                                       const std::vector<std::vector<double>>& rows,
                                       double tol = 1e-12);
    // Points a_0 < ... on the real line with |a_i - a_j|.
    static FiniteMetricSpace real_points(std::span<const double> xs);
    // Path metric on `count` vertices with unit edges, d(i,j) = |i - j|.
    static FiniteMetricSpace path(std::size_t count);
    // Discrete 0/1 metric.
    static FiniteMetricSpace discrete(std::size_t count);

    [[nodiscard]] std::size_t size() const { return n_; }
    [[nodiscard]] const std::string& label(std::size_t i) const { return labels_[i]; }
    [[nodiscard]] const std::vector<std::string>& labels() const { return labels_; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }
    [[nodiscard]] std::span<const double> row_major() const { return dist_; }
    [[nodiscard]] double diameter() const;

private:
    std::size_t n_;
    std::vector<std::string> labels_;
    std::vector<double> dist_;
};

enum class NormKind { Lr, LInf, EuclideanReal };

// Norm on C^d (or R^d for EuclideanReal, which ignores imaginary parts).
struct Norm {
    NormKind kind = NormKind::Lr;
    double r = 2.0;

    static Norm lr(double r);  // r = +inf maps to LInf
    static Norm linf() { return {NormKind::LInf, std::numeric_limits<double>::infinity()}; }
    static Norm euclidean() { return {NormKind::EuclideanReal, 2.0}; }

    [[nodiscard]] double operator()(std::span<const Complex> v) const;
    [[nodiscard]] std::string name() const;
    friend bool operator==(const Norm&, const Norm&) = default;
};

/// A point of a finite-dimensional normed space over C.
struct NormedPoint {
    std::vector<Complex> coords;
    Norm norm;

    NormedPoint() = default;
    NormedPoint(std::vector<Complex> c, Norm nm) : coords(std::move(c)), norm(nm) {}
    static NormedPoint real(std::span<const double> xs, Norm nm = Norm::euclidean());
    static NormedPoint scalar(double x) { return real(std::span<const double>(&x, 1)); }

    [[nodiscard]] std::size_t dim() const { return coords.size(); }
    [[nodiscard]] double length() const { return norm(coords); }
    [[nodiscard]] NormedPoint scaled(double factor) const;
};

// ||a - b|| in the common norm; throws InputError on dimension or norm mismatch.
[[nodiscard]] double distance(const NormedPoint& a, const NormedPoint& b);

/// Finite collection of points with a distance evaluator: either indices into
/// a shared FiniteMetricSpace or explicit normed vectors.
class PointCloud {
public:
    static PointCloud in_space(std::shared_ptr<const FiniteMetricSpace> space,
                               std::vector<std::size_t> indices);
    static PointCloud normed(std::vector<NormedPoint> points);
    static PointCloud real_line(std::span<const double> xs);

    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] double distance(std::size_t i, std::size_t j) const;
    [[nodiscard]] bool is_normed() const { return std::holds_alternative<Normed>(data_); }
    [[nodiscard]] const NormedPoint& point(std::size_t i) const;
    [[nodiscard]] std::size_t index(std::size_t i) const;
    [[nodiscard]] const FiniteMetricSpace& space() const;
    [[nodiscard]] std::shared_ptr<const FiniteMetricSpace> space_ptr() const;
    [[nodiscard]] PointCloud subset(std::span<const std::size_t> which) const;

private:
    struct Indexed {
        std::shared_ptr<const FiniteMetricSpace> space;
        std::vector<std::size_t> indices;
    };
    struct Normed {
        std::vector<NormedPoint> points;
    };
    explicit PointCloud(std::variant<Indexed, Normed> d) : data_(std::move(d)) {}
    std::variant<Indexed, Normed> data_;
};

/// Parallel (source, image) samples of a map f between two metric spaces.
class SampledMap {
public:
    SampledMap(PointCloud source, PointCloud image);

    [[nodiscard]] std::size_t size() const { return source_.size(); }
    [[nodiscard]] const PointCloud& source() const { return source_; }
    [[nodiscard]] const PointCloud& image() const { return image_; }
    [[nodiscard]] double source_distance(std::size_t i, std::size_t j) const {
        return source_.distance(i, j);
    }
    [[nodiscard]] double image_distance(std::size_t i, std::size_t j) const {
        return image_.distance(i, j);
    }
    // Same map with every image point multiplied by lambda (normed images only).
    [[nodiscard]] SampledMap scaled_image(double lambda) const;
    [[nodiscard]] SampledMap restricted(std::span<const std::size_t> which) const;

private:
    PointCloud source_;
    PointCloud image_;
};

using PointMap = std::function<NormedPoint(const NormedPoint&)>;

/// Piecewise-linear map from an interval of the real line into R^d with the
/// given target norm. Evaluation outside [knots.front(), knots.back()] throws
/// DomainError.
class InterpolatedMap {
public:
    InterpolatedMap(std::vector<double> knots, std::vector<std::vector<double>> values,
                    Norm target_norm = Norm::euclidean());

    [[nodiscard]] NormedPoint operator()(double x) const;
    [[nodiscard]] NormedPoint operator()(const NormedPoint& x) const;
    [[nodiscard]] PointMap as_point_map() const;

    // Exact Lipschitz constant of the interpolant: max slope over segments.
    [[nodiscard]] double lipschitz() const;
    [[nodiscard]] std::size_t target_dim() const { return values_.front().size(); }
    [[nodiscard]] const std::vector<double>& knots() const { return knots_; }
    [[nodiscard]] const std::vector<std::vector<double>>& values() const { return values_; }
    [[nodiscard]] Norm target_norm() const { return norm_; }
    [[nodiscard]] double lo() const { return knots_.front(); }
    [[nodiscard]] double hi() const { return knots_.back(); }
    // Samples the map at its knots.
    [[nodiscard]] SampledMap sample() const;

private:
    std::vector<double> knots_;
    std::vector<std::vector<double>> values_;
    Norm norm_;
};

}  // namespace embedlab
