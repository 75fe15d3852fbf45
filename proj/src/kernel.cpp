#include "embedlab/kernel.hpp"

#include "embedlab/error.hpp"
#include "embedlab/moduli.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace embedlab {

namespace {

std::size_t packed_index(std::size_t n, std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    return i * n - i * (i + 1) / 2 + j;
}

// Orthonormal basis of the hyperplane orthogonal to the all-ones vector (n x (n-1)).
Eigen::MatrixXd sum_zero_basis(std::size_t n) {
    const auto N = static_cast<Eigen::Index>(n);
    Eigen::VectorXd v = Eigen::VectorXd::Constant(N, 1.0 / std::sqrt(static_cast<double>(n)));
    v(0) -= 1.0;
    const double vv = v.squaredNorm();
    Eigen::MatrixXd h = Eigen::MatrixXd::Identity(N, N);
    if (vv > 0.0) h -= (2.0 / vv) * v * v.transpose();
    return h.rightCols(N - 1);
}

Eigen::VectorXd projected_eigenvalues(const KernelMatrix& k, Eigen::MatrixXd* vectors, Eigen::MatrixXd* basis) {
    const Eigen::MatrixXd q = sum_zero_basis(k.size());
    const Eigen::MatrixXd p = q.transpose() * k.dense() * q;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw PrecisionError("precision: eigen decomposition failed");
    if (vectors) *vectors = es.eigenvectors();
    if (basis) *basis = q;
    return es.eigenvalues();
}

}  // namespace

std::string kernel_kind_name(KernelKind k) {
    return k == KernelKind::NegativeDefinite ? "negative-definite" : "positive-definite";
}

KernelMatrix::KernelMatrix(std::size_t n, std::vector<double> packed_upper, KernelKind kind)
    : n_(n), packed_(std::move(packed_upper)), kind_(kind) {
    if (n == 0) throw InputError("kernel: empty matrix");
    if (packed_.size() != n * (n + 1) / 2) throw InputError("kernel: packed size must be n(n+1)/2");
    for (double v : packed_)
        if (!std::isfinite(v)) throw InputError("kernel: non-finite entry");
}

KernelMatrix KernelMatrix::from_dense(const Eigen::MatrixXd& m, KernelKind kind, double symmetry_tol) {
    if (m.rows() != m.cols()) throw InputError("kernel: matrix must be square");
    const auto n = static_cast<std::size_t>(m.rows());
    std::vector<double> packed;
    packed.reserve(n * (n + 1) / 2);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = i; j < m.cols(); ++j) {
            if (std::abs(m(i, j) - m(j, i)) > symmetry_tol) throw InputError("kernel: matrix is not symmetric");
            packed.push_back(m(i, j));
        }
    return KernelMatrix(n, std::move(packed), kind);
}

KernelMatrix KernelMatrix::squared_distances(std::span<const std::vector<double>> points) {
    const std::size_t n = points.size();
    std::vector<double> packed;
    packed.reserve(n * (n + 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            if (points[i].size() != points[j].size()) throw InputError("kernel: points differ in dimension");
            double s = 0.0;
            for (std::size_t c = 0; c < points[i].size(); ++c) {
                const double d = points[i][c] - points[j][c];
                s += d * d;
            }
            packed.push_back(s);
        }
    return KernelMatrix(n, std::move(packed), KernelKind::NegativeDefinite);
}

KernelMatrix KernelMatrix::squared_distances(std::span<const NormedPoint> points) {
    const std::size_t n = points.size();
    std::vector<double> packed;
    packed.reserve(n * (n + 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double d = i == j ? 0.0 : distance(points[i], points[j]);
            packed.push_back(d * d);
        }
    return KernelMatrix(n, std::move(packed), KernelKind::NegativeDefinite);
}

double KernelMatrix::operator()(std::size_t i, std::size_t j) const { return packed_[packed_index(n_, i, j)]; }

bool KernelMatrix::zero_diagonal() const {
    for (std::size_t i = 0; i < n_; ++i)
        if ((*this)(i, i) != 0.0) return false;
    return true;
}

double KernelMatrix::scale() const {
    double s = 0.0;
    for (double v : packed_) s = std::max(s, std::abs(v));
    return s > 0.0 ? s : 1.0;
}

Eigen::MatrixXd KernelMatrix::dense() const {
    const auto N = static_cast<Eigen::Index>(n_);
    Eigen::MatrixXd m(N, N);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i; j < n_; ++j) {
            const double v = (*this)(i, j);
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
        }
    return m;
}

DefinitenessResult is_negative_definite(const KernelMatrix& k, double tol) {
    DefinitenessResult r;
    r.scale = k.scale();
    if (k.size() < 2) return r;
    const Eigen::VectorXd ev = projected_eigenvalues(k, nullptr, nullptr);
    r.extreme_eigenvalue = ev.maxCoeff();
    r.max_violation = std::max(0.0, r.extreme_eigenvalue);
    r.verdict = r.extreme_eigenvalue <= tol * r.scale;
    return r;
}

KernelMatrix snowflake_kernel(const KernelMatrix& k, double alpha, double tol) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("snowflake: alpha must lie in (0, 1)");
    for (double v : k.packed())
        if (v < 0.0) throw DomainError("not a squared-distance kernel: negative entry");
    if (!k.zero_diagonal()) throw DomainError("not a squared-distance kernel: nonzero diagonal");
    const auto input = is_negative_definite(k, tol);
    if (!input.verdict) {
        std::ostringstream os;
        os << "snowflake: input is not negative definite, max_violation=" << input.max_violation;
        throw ViolationError(os.str());
    }
    std::vector<double> packed;
    packed.reserve(k.packed().size());
    for (double v : k.packed()) packed.push_back(v == 0.0 ? 0.0 : std::pow(v, alpha));
    KernelMatrix out(k.size(), std::move(packed), KernelKind::NegativeDefinite);
    const auto cert = is_negative_definite(out, tol);
    if (!cert.verdict) {
        std::ostringstream os;
        os << "snowflake: certification failed, max_violation=" << cert.max_violation;
        throw ViolationError(os.str());
    }
    return out;
}

EmbeddingResult schoenberg_embed(const KernelMatrix& k, double tol) {
    if (!k.zero_diagonal()) throw DomainError("not negative type: nonzero diagonal");
    const std::size_t n = k.size();
    EmbeddingResult r;
    if (n == 1) {
        r.points.assign(1, {});
        return r;
    }
    const double scale = k.scale();
    Eigen::MatrixXd vecs;
    Eigen::MatrixXd q;
    // Eigenvalues of -K/2 on the hyperplane are those of K, negated and halved.
    Eigen::VectorXd ev = -0.5 * projected_eigenvalues(k, &vecs, &q);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < -tol * scale) {
            std::ostringstream os;
            os << "not negative type: Gram eigenvalue " << ev(i) << " below -tol*scale";
            throw DomainError(os.str());
        }
        if (ev(i) < 0.0) {
            ++r.clipped_eigenvalues;
            continue;
        }
        if (ev(i) > 0.0) keep.push_back(i);
    }
    // Largest eigenvalues first.
    std::reverse(keep.begin(), keep.end());
    r.dimension = keep.size();
    Eigen::MatrixXd coords(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c)
        coords.col(static_cast<Eigen::Index>(c)) = std::sqrt(ev(keep[c])) * (q * vecs.col(keep[c]));
    r.points.assign(n, std::vector<double>(keep.size()));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < keep.size(); ++c)
            r.points[i][c] = coords(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d2 = (coords.row(static_cast<Eigen::Index>(i)) - coords.row(static_cast<Eigen::Index>(j))).squaredNorm();
            r.reconstruction_error = std::max(r.reconstruction_error, std::abs(d2 - k(i, j)));
        }
    return r;
}

DefinitenessResult exp_positive_definite_check(const KernelMatrix& g, double tol) {
    for (double v : g.packed())
        if (v < 0.0) throw DomainError("exp check: g must be nonnegative");
    if (!g.zero_diagonal()) throw DomainError("exp check: g must have zero diagonal");
    const auto N = static_cast<Eigen::Index>(g.size());
    Eigen::MatrixXd e(N, N);
    for (Eigen::Index i = 0; i < N; ++i)
        for (Eigen::Index j = 0; j < N; ++j)
            e(i, j) = std::exp(-g(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(e, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw PrecisionError("precision: eigen decomposition failed");
    DefinitenessResult r;
    r.scale = e.cwiseAbs().maxCoeff();
    r.extreme_eigenvalue = es.eigenvalues().minCoeff();
    r.max_violation = std::max(0.0, -r.extreme_eigenvalue);
    r.verdict = r.extreme_eigenvalue >= -tol * r.scale;
    return r;
}

HolderResult holder_solvent_transform(const SampledMap& f, double alpha, const HolderOptions& opts) {
    if (!(alpha > 0.0 && alpha < 0.5)) throw InputError("holder transform: alpha must lie in (0, 1/2)");
    if (!f.image().is_normed()) throw InputError("holder transform: image must be Euclidean");
    const Norm img = f.image().point(0).norm;
    if (!(img.kind == NormKind::EuclideanReal || (img.kind == NormKind::Lr && img.r == 2.0)))
        throw InputError("holder transform: image must be Euclidean");

    const std::size_t n = f.size();
    std::ostringstream bad;
    std::size_t offending = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = f.source_distance(i, j);
            if (d < 1.0) continue;
            const double e = f.image_distance(i, j);
            if (e > d * (1.0 + 1e-12)) {
                if (offending < 10) bad << " (" << i << "," << j << "): " << e << " > " << d << ";";
                ++offending;
            }
        }
    if (offending > 0) {
        std::ostringstream os;
        os << "holder transform: normalization fails on " << offending << " pair(s) with distance >= 1:"
           << bad.str();
        throw InputError(os.str());
    }

    const auto sorted = pair_distances(f);
    const std::vector<double> edges = opts.edges.empty() ? uniform_edges(sorted) : opts.edges;
    const auto profile = compression_moduli(std::span<const PairSample>(sorted), edges);
    auto rho_bar_at = [&](double d) -> std::optional<double> {
        auto it = std::upper_bound(edges.begin(), edges.end(), d);
        if (it == edges.begin()) return std::nullopt;
        std::size_t b = static_cast<std::size_t>(it - edges.begin()) - 1;
        if (b >= profile.bins.size()) {
            if (d == edges.back() && !profile.bins.empty()) b = profile.bins.size() - 1;
            else return std::nullopt;
        }
        return profile.bins[b].rho_bar;
    };

    std::vector<std::size_t> keep;
    if (opts.restrict_to_net) {
        keep = extract_net(f.source(), 1.0);
    } else {
        keep.resize(n);
        for (std::size_t i = 0; i < n; ++i) keep[i] = i;
    }
    const SampledMap g = f.restricted(keep);
    const std::size_t m = g.size();

    std::vector<double> packed;
    packed.reserve(m * (m + 1) / 2);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
            const double e = i == j ? 0.0 : g.image_distance(i, j);
            packed.push_back(e == 0.0 ? 0.0 : std::pow(e, 2.0 * alpha));
        }
    const KernelMatrix kern(m, std::move(packed), KernelKind::NegativeDefinite);
    const auto cert = is_negative_definite(kern, opts.tol);
    if (!cert.verdict) {
        std::ostringstream os;
        os << "holder transform: snowflaked kernel not negative definite, max_violation=" << cert.max_violation;
        throw ViolationError(os.str());
    }

    HolderReport rep;
    rep.alpha = alpha;
    rep.sample_indices = keep;
    rep.embedding = schoenberg_embed(kern, opts.tol);

    std::vector<NormedPoint> pts;
    pts.reserve(m);
    for (const auto& p : rep.embedding.points) pts.push_back(NormedPoint::real(p, Norm::euclidean()));
    SampledMap fa(g.source(), PointCloud::normed(std::move(pts)));

    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            const double d = fa.source_distance(i, j);
            if (d < 1.0) continue;
            ++rep.pairs_checked;
            const double e = fa.image_distance(i, j);
            rep.max_upper_excess = std::max(rep.max_upper_excess, e - std::pow(d, alpha));
            if (const auto rb = rho_bar_at(d))
                rep.max_lower_deficit = std::max(rep.max_lower_deficit, std::pow(*rb, alpha) - e);
        }
    rep.sandwich_ok = rep.max_upper_excess <= opts.sandwich_tol && rep.max_lower_deficit <= opts.sandwich_tol;
    return {std::move(fa), std::move(rep)};
}

}  // namespace embedlab
