#include "support/oracle.hpp"

#include "embedlab/error.hpp"
#include "embedlab/kernel.hpp"
#include "embedlab/random.hpp"

#include <doctest.h>

#include <cmath>

using namespace embedlab;

namespace {

std::vector<std::vector<double>> random_points(Rng& rng, std::size_t n, std::size_t dim) {
    std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
    for (auto& p : pts)
        for (auto& v : p) v = uniform_in(rng, -1, 1);
    return pts;
}

double dist2(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

std::vector<std::vector<double>> rows(const KernelMatrix& k) {
    std::vector<std::vector<double>> out(k.size(), std::vector<double>(k.size()));
    for (std::size_t i = 0; i < k.size(); ++i)
        for (std::size_t j = 0; j < k.size(); ++j) out[i][j] = k(i, j);
    return out;
}

}  // namespace

TEST_CASE("kernel storage") {
    const KernelMatrix k(3, {0, 1, 4, 0, 1, 0}, KernelKind::NegativeDefinite);
    CHECK(k(0, 2) == 4);
    CHECK(k(2, 0) == 4);
    CHECK(k.zero_diagonal());
    CHECK(k.scale() == 4);
    CHECK(KernelMatrix(2, {0, 0, 0}, KernelKind::NegativeDefinite).scale() == 1.0);
    CHECK_THROWS_AS(KernelMatrix(3, {0, 1}, KernelKind::NegativeDefinite), InputError);
    Eigen::MatrixXd asym(2, 2);
    asym << 0, 1, 2, 0;
    CHECK_THROWS_AS((void)KernelMatrix::from_dense(asym, KernelKind::NegativeDefinite), InputError);
}

TEST_CASE("negative definiteness") {
    const std::vector<std::vector<double>> pts{{0, 0}, {1, 0}, {0, 1}, {2, 3}};
    const auto k = KernelMatrix::squared_distances(std::span<const std::vector<double>>(pts));
    const auto r = is_negative_definite(k);
    CHECK(r.verdict);
    CHECK(r.max_violation <= 1e-12 * r.scale);
    std::vector<double> neg = k.packed();
    for (auto& v : neg) v = -v;
    const auto rn = is_negative_definite(KernelMatrix(4, neg, KernelKind::NegativeDefinite));
    CHECK_FALSE(rn.verdict);
    CHECK(rn.max_violation > 0.0);

    const std::vector<double> line{0, 1, 3, 7};
    std::vector<double> packed;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i; j < 4; ++j) packed.push_back(std::abs(line[i] - line[j]));
    const KernelMatrix abs_k(4, packed, KernelKind::NegativeDefinite);
    const auto ra = is_negative_definite(abs_k);
    CHECK(ra.verdict);
    // P K P also carries the zero eigenvalue of the constant vector.
    CHECK(std::max(0.0, ra.extreme_eigenvalue) ==
          doctest::Approx(oracle::centered_max_eigenvalue(rows(abs_k))).epsilon(1e-9));
    CHECK(ra.extreme_eigenvalue < 0.0);
}

TEST_CASE("snowflakes") {
    const std::vector<std::vector<double>> line{{0}, {1}, {2}, {3}};
    const auto k = KernelMatrix::squared_distances(std::span<const std::vector<double>>(line));
    const auto s = snowflake_kernel(k, 0.5);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(s(i, j) == doctest::Approx(std::abs(double(i) - double(j))));
    const KernelMatrix zero(3, std::vector<double>(6, 0.0), KernelKind::NegativeDefinite);
    CHECK(snowflake_kernel(zero, 0.3).packed() == zero.packed());
    CHECK_THROWS_AS((void)snowflake_kernel(k, 1.0), InputError);
    const KernelMatrix neg(2, {0, -1, 0}, KernelKind::NegativeDefinite);
    CHECK_THROWS_WITH_AS((void)snowflake_kernel(neg, 0.5), doctest::Contains("not a squared-distance kernel"),
                         DomainError);

    auto rng = make_rng(11);
    const auto pts = random_points(rng, 20, 3);
    const auto k20 = KernelMatrix::squared_distances(std::span<const std::vector<double>>(pts));
    for (double alpha : {0.25, 0.4}) {
        const auto sf = snowflake_kernel(k20, alpha);
        const auto r = is_negative_definite(sf);
        CHECK(r.verdict);
        CHECK(r.max_violation <= 1e-9 * r.scale);
    }
}

TEST_CASE("Schoenberg embedding") {
    const KernelMatrix two(2, {0, 4, 0}, KernelKind::NegativeDefinite);
    const auto e2 = schoenberg_embed(two);
    REQUIRE(e2.points.size() == 2);
    CHECK(dist2(e2.points[0], e2.points[1]) == doctest::Approx(4.0));
    CHECK(e2.dimension == 1);

    const std::vector<std::vector<double>> square{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    const auto ks = KernelMatrix::squared_distances(std::span<const std::vector<double>>(square));
    const auto es = schoenberg_embed(ks);
    CHECK(es.reconstruction_error <= 1e-9);
    CHECK(es.dimension <= 3);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(dist2(es.points[i], es.points[j]) == doctest::Approx(ks(i, j)));
    // Centered coordinates.
    for (std::size_t d = 0; d < es.dimension; ++d) {
        double s = 0.0;
        for (const auto& p : es.points) s += p[d];
        CHECK(std::abs(s) <= 1e-12);
    }

    auto rng = make_rng(12);
    const auto pts = random_points(rng, 10, 4);
    const auto sf = snowflake_kernel(KernelMatrix::squared_distances(std::span<const std::vector<double>>(pts)), 0.5);
    const auto ef = schoenberg_embed(sf);
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t j = 0; j < 10; ++j)
            CHECK(std::abs(dist2(ef.points[i], ef.points[j]) - std::sqrt(dist2(pts[i], pts[j]))) <= 1e-9);
    CHECK(ef.reconstruction_error <= std::sqrt(1e-9 * sf.scale()) + 1e-9);

    std::vector<double> neg = ks.packed();
    for (auto& v : neg) v = -v;
    CHECK_THROWS_WITH_AS((void)schoenberg_embed(KernelMatrix(4, neg, KernelKind::NegativeDefinite)),
                         doctest::Contains("not negative type"), DomainError);
}

TEST_CASE("positive definite exponentials") {
    const KernelMatrix zero(3, std::vector<double>(6, 0.0), KernelKind::NegativeDefinite);
    CHECK(exp_positive_definite_check(zero).verdict);
    auto rng = make_rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        const auto pts = random_points(rng, 12, 3);
        const auto k = KernelMatrix::squared_distances(std::span<const std::vector<double>>(pts));
        REQUIRE(is_negative_definite(k).verdict);
        const auto r = exp_positive_definite_check(k);
        CHECK(r.verdict);
        std::vector<std::vector<double>> e(12, std::vector<double>(12));
        for (std::size_t i = 0; i < 12; ++i)
            for (std::size_t j = 0; j < 12; ++j) e[i][j] = std::exp(-k(i, j));
        CHECK(r.extreme_eigenvalue == doctest::Approx(oracle::min_eigenvalue(e)).epsilon(1e-9));
    }
    const KernelMatrix neg(2, {0, -1, 0}, KernelKind::NegativeDefinite);
    CHECK_THROWS_AS((void)exp_positive_definite_check(neg), DomainError);
}

TEST_CASE("Hoelder-solvent transform") {
    std::vector<double> xs;
    std::vector<NormedPoint> img;
    for (int i = 0; i < 15; ++i) {
        xs.push_back(i);
        img.push_back(NormedPoint::scalar(i));
    }
    const SampledMap id(PointCloud::real_line(xs), PointCloud::normed(img));
    const auto res = holder_solvent_transform(id, 0.4);
    CHECK(res.report.sandwich_ok);
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j)
            CHECK(std::abs(res.f_alpha.image_distance(i, j) - std::pow(std::abs(xs[i] - xs[j]), 0.4)) <= 1e-9);

    std::vector<NormedPoint> flat(xs.size(), NormedPoint::scalar(2.0));
    const SampledMap c(PointCloud::real_line(xs), PointCloud::normed(flat));
    const auto rc = holder_solvent_transform(c, 0.3);
    for (std::size_t i = 0; i < xs.size(); ++i) CHECK(rc.f_alpha.image_distance(0, i) == 0.0);

    std::vector<NormedPoint> stretched;
    for (double x : xs) stretched.push_back(NormedPoint::scalar(3 * x));
    const SampledMap s(PointCloud::real_line(xs), PointCloud::normed(stretched));
    CHECK_THROWS_WITH_AS((void)holder_solvent_transform(s, 0.4), doctest::Contains("normalization fails"), InputError);
    CHECK_THROWS_AS((void)holder_solvent_transform(id, 0.5), InputError);

    HolderOptions net;
    net.restrict_to_net = true;
    std::vector<double> fine;
    std::vector<NormedPoint> fimg;
    for (int i = 0; i < 60; ++i) {
        fine.push_back(0.25 * i);
        fimg.push_back(NormedPoint::scalar(std::floor(0.25 * i) / 2));
    }
    const auto rn = holder_solvent_transform(SampledMap(PointCloud::real_line(fine), PointCloud::normed(fimg)), 0.4, net);
    CHECK(rn.report.sample_indices.size() < fine.size());
    CHECK(rn.report.sandwich_ok);
}
