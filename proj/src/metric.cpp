#include "embedlab/metric.hpp"

#include "embedlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace embedlab {

namespace {

std::string fmt_pair(std::size_t i, std::size_t j) {
    std::ostringstream os;
    os << "(" << i << "," << j << ")";
    return os.str();
}

}  // namespace

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> labels,
                                     std::vector<double> dist_row_major, double tol)
    : n_(labels.size()), labels_(std::move(labels)), dist_(std::move(dist_row_major)) {
    if (n_ == 0) throw InputError("metric space: no points");
    if (dist_.size() != n_ * n_) throw InputError("metric space: dist must be n x n");
    double scale = 0.0;
    for (double d : dist_) {
        if (!std::isfinite(d) || d < 0.0) throw InputError("metric space: distances must be finite and >= 0");
        scale = std::max(scale, d);
    }
    const double slack = tol * std::max(1.0, scale);
    for (std::size_t i = 0; i < n_; ++i) {
        if ((*this)(i, i) != 0.0) throw InputError("metric space: nonzero diagonal at " + fmt_pair(i, i));
        for (std::size_t j = i + 1; j < n_; ++j) {
            if ((*this)(i, j) != (*this)(j, i))
                throw InputError("metric space: asymmetric entry " + fmt_pair(i, j));
        }
    }
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            for (std::size_t k = 0; k < n_; ++k)
                if ((*this)(i, k) > (*this)(i, j) + (*this)(j, k) + slack)
                    throw InputError("metric space: triangle inequality fails at " + fmt_pair(i, k) +
                                     " via " + std::to_string(j));
}

FiniteMetricSpace FiniteMetricSpace::from_rows(std::vector<std::string> labels,
                                               const std::vector<std::vector<double>>& rows,
                                               double tol) {
    std::vector<double> flat;
    flat.reserve(rows.size() * rows.size());
    for (const auto& row : rows) {
        if (row.size() != rows.size()) throw InputError("metric space: dist rows must have length n");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    if (labels.size() != rows.size()) throw InputError("metric space: labels and dist size differ");
    return FiniteMetricSpace(std::move(labels), std::move(flat), tol);
}

FiniteMetricSpace FiniteMetricSpace::real_points(std::span<const double> xs) {
    const std::size_t n = xs.size();
    std::vector<std::string> labels(n);
    std::vector<double> dist(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = "p" + std::to_string(i);
        for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = std::abs(xs[i] - xs[j]);
    }
    return FiniteMetricSpace(std::move(labels), std::move(dist));
}

FiniteMetricSpace FiniteMetricSpace::path(std::size_t count) {
    std::vector<double> xs(count);
    for (std::size_t i = 0; i < count; ++i) xs[i] = static_cast<double>(i);
    return real_points(xs);
}

FiniteMetricSpace FiniteMetricSpace::discrete(std::size_t count) {
    std::vector<std::string> labels(count);
    std::vector<double> dist(count * count, 1.0);
    for (std::size_t i = 0; i < count; ++i) {
        labels[i] = "p" + std::to_string(i);
        dist[i * count + i] = 0.0;
    }
    return FiniteMetricSpace(std::move(labels), std::move(dist));
}

double FiniteMetricSpace::diameter() const { return *std::max_element(dist_.begin(), dist_.end()); }

Norm Norm::lr(double r) {
    if (!(r >= 1.0)) throw InputError("norm: exponent r must be >= 1");
    if (std::isinf(r)) return linf();
    return {NormKind::Lr, r};
}

double Norm::operator()(std::span<const Complex> v) const {
    switch (kind) {
        case NormKind::LInf: {
            double m = 0.0;
            for (const auto& z : v) m = std::max(m, std::abs(z));
            return m;
        }
        case NormKind::EuclideanReal: {
            double s = 0.0;
            for (const auto& z : v) s += z.real() * z.real();
            return std::sqrt(s);
        }
        case NormKind::Lr:
            break;
    }
    if (r == 1.0) {
        double s = 0.0;
        for (const auto& z : v) s += std::abs(z);
        return s;
    }
    if (r == 2.0) {
        double s = 0.0;
        for (const auto& z : v) s += std::norm(z);
        return std::sqrt(s);
    }
    double s = 0.0;
    for (const auto& z : v) s += std::pow(std::abs(z), r);
    return std::pow(s, 1.0 / r);
}

std::string Norm::name() const {
    switch (kind) {
        case NormKind::LInf:
            return "linf";
        case NormKind::EuclideanReal:
            return "euclidean";
        case NormKind::Lr:
            break;
    }
    std::ostringstream os;
    os << "l" << r;
    return os.str();
}

NormedPoint NormedPoint::real(std::span<const double> xs, Norm nm) {
    std::vector<Complex> c(xs.begin(), xs.end());
    return {std::move(c), nm};
}

NormedPoint NormedPoint::scaled(double factor) const {
    NormedPoint out = *this;
    for (auto& z : out.coords) z *= factor;
    return out;
}

double distance(const NormedPoint& a, const NormedPoint& b) {
    if (a.dim() != b.dim()) throw InputError("normed points have different dimensions");
    if (!(a.norm == b.norm)) throw InputError("normed points carry different norms");
    thread_local std::vector<Complex> diff;
    diff.resize(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) diff[i] = a.coords[i] - b.coords[i];
    return a.norm(diff);
}

PointCloud PointCloud::in_space(std::shared_ptr<const FiniteMetricSpace> space,
                                std::vector<std::size_t> indices) {
    if (!space) throw InputError("point cloud: null space");
    for (auto i : indices)
        if (i >= space->size()) throw InputError("point cloud: index out of range");
    return PointCloud(Indexed{std::move(space), std::move(indices)});
}

PointCloud PointCloud::normed(std::vector<NormedPoint> points) {
    for (const auto& p : points) {
        if (p.dim() != points.front().dim() || !(p.norm == points.front().norm))
            throw InputError("point cloud: inconsistent dimension or norm");
    }
    return PointCloud(Normed{std::move(points)});
}

PointCloud PointCloud::real_line(std::span<const double> xs) {
    std::vector<NormedPoint> pts;
    pts.reserve(xs.size());
    for (double x : xs) pts.push_back(NormedPoint::scalar(x));
    return normed(std::move(pts));
}

std::size_t PointCloud::size() const {
    return std::visit([](const auto& d) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(d)>, Indexed>)
            return d.indices.size();
        else
            return d.points.size();
    }, data_);
}

double PointCloud::distance(std::size_t i, std::size_t j) const {
    if (const auto* ix = std::get_if<Indexed>(&data_)) return (*ix->space)(ix->indices[i], ix->indices[j]);
    const auto& pts = std::get<Normed>(data_).points;
    return embedlab::distance(pts[i], pts[j]);
}

const NormedPoint& PointCloud::point(std::size_t i) const {
    const auto* nd = std::get_if<Normed>(&data_);
    if (!nd) throw InputError("point cloud: not a normed cloud");
    return nd->points.at(i);
}

std::size_t PointCloud::index(std::size_t i) const {
    const auto* ix = std::get_if<Indexed>(&data_);
    if (!ix) throw InputError("point cloud: not an indexed cloud");
    return ix->indices.at(i);
}

const FiniteMetricSpace& PointCloud::space() const { return *space_ptr(); }

std::shared_ptr<const FiniteMetricSpace> PointCloud::space_ptr() const {
    const auto* ix = std::get_if<Indexed>(&data_);
    if (!ix) throw InputError("point cloud: not an indexed cloud");
    return ix->space;
}

PointCloud PointCloud::subset(std::span<const std::size_t> which) const {
    if (const auto* ix = std::get_if<Indexed>(&data_)) {
        std::vector<std::size_t> idx;
        idx.reserve(which.size());
        for (auto w : which) idx.push_back(ix->indices.at(w));
        return in_space(ix->space, std::move(idx));
    }
    const auto& pts = std::get<Normed>(data_).points;
    std::vector<NormedPoint> out;
    out.reserve(which.size());
    for (auto w : which) out.push_back(pts.at(w));
    return normed(std::move(out));
}

SampledMap::SampledMap(PointCloud source, PointCloud image)
    : source_(std::move(source)), image_(std::move(image)) {
    if (source_.size() != image_.size()) throw InputError("sampled map: source and image lengths differ");
    if (source_.size() < 2) throw InputError("sampled map: need at least 2 samples");
}

SampledMap SampledMap::scaled_image(double lambda) const {
    if (!image_.is_normed()) throw InputError("sampled map: rescaling needs a normed image");
    std::vector<NormedPoint> pts;
    pts.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) pts.push_back(image_.point(i).scaled(lambda));
    return {source_, PointCloud::normed(std::move(pts))};
}

SampledMap SampledMap::restricted(std::span<const std::size_t> which) const {
    return {source_.subset(which), image_.subset(which)};
}

InterpolatedMap::InterpolatedMap(std::vector<double> knots, std::vector<std::vector<double>> values,
                                 Norm target_norm)
    : knots_(std::move(knots)), values_(std::move(values)), norm_(target_norm) {
    if (knots_.size() < 2) throw InputError("interpolated map: need at least 2 knots");
    if (values_.size() != knots_.size()) throw InputError("interpolated map: knots and values differ in length");
    for (std::size_t i = 1; i < knots_.size(); ++i)
        if (!(knots_[i] > knots_[i - 1])) throw InputError("interpolated map: knots must increase strictly");
    const std::size_t d = values_.front().size();
    if (d == 0) throw InputError("interpolated map: empty target");
    for (const auto& v : values_)
        if (v.size() != d) throw InputError("interpolated map: ragged values");
}

NormedPoint InterpolatedMap::operator()(double x) const {
    const double slack = 1e-12 * std::max({1.0, std::abs(lo()), std::abs(hi())});
    if (!(x >= lo() - slack && x <= hi() + slack)) {
        std::ostringstream os;
        os << "domain: " << x << " outside [" << lo() << ", " << hi() << "]";
        throw DomainError(os.str());
    }
    x = std::clamp(x, lo(), hi());
    auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    std::size_t hi_idx = std::min<std::size_t>(static_cast<std::size_t>(it - knots_.begin()), knots_.size() - 1);
    std::size_t lo_idx = hi_idx - 1;
    const double w = (x - knots_[lo_idx]) / (knots_[hi_idx] - knots_[lo_idx]);
    std::vector<Complex> out(target_dim());
    for (std::size_t c = 0; c < out.size(); ++c)
        out[c] = (1.0 - w) * values_[lo_idx][c] + w * values_[hi_idx][c];
    return {std::move(out), norm_};
}

NormedPoint InterpolatedMap::operator()(const NormedPoint& x) const {
    if (x.dim() != 1) throw DomainError("domain: interpolated map takes scalar inputs");
    return (*this)(x.coords[0].real());
}

PointMap InterpolatedMap::as_point_map() const {
    return [self = *this](const NormedPoint& x) { return self(x); };
}

double InterpolatedMap::lipschitz() const {
    double lip = 0.0;
    std::vector<Complex> diff(target_dim());
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        for (std::size_t c = 0; c < diff.size(); ++c) diff[c] = values_[i][c] - values_[i - 1][c];
        lip = std::max(lip, norm_(diff) / (knots_[i] - knots_[i - 1]));
    }
    return lip;
}

SampledMap InterpolatedMap::sample() const {
    std::vector<NormedPoint> img;
    img.reserve(knots_.size());
    for (const auto& v : values_) img.push_back(NormedPoint::real(v, norm_));
    return {PointCloud::real_line(knots_), PointCloud::normed(std::move(img))};
}

}  // namespace embedlab
