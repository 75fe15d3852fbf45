#include "embedlab/error.hpp"
#include "embedlab/metric.hpp"
#include "embedlab/moduli.hpp"
#include "embedlab/random.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace embedlab;

namespace {

SampledMap real_map(const std::vector<double>& xs, double (*f)(double)) {
    std::vector<NormedPoint> img;
    for (double x : xs) img.push_back(NormedPoint::scalar(f(x)));
    return {PointCloud::real_line(xs), PointCloud::normed(img)};
}

std::vector<double> grid(int lo, int hi, double step = 1.0) {
    std::vector<double> xs;
    for (int i = lo; i <= hi; ++i) xs.push_back(i * step);
    return xs;
}

}  // namespace

TEST_CASE("finite metric space validation") {
    CHECK_NOTHROW(FiniteMetricSpace::from_rows({"a", "b"}, {{0, 1}, {1, 0}}));
    CHECK_THROWS_AS(FiniteMetricSpace::from_rows({"a", "b"}, {{0, 1}, {2, 0}}), InputError);
    CHECK_THROWS_AS(FiniteMetricSpace::from_rows({"a", "b"}, {{1, 1}, {1, 0}}), InputError);
    CHECK_THROWS_AS(FiniteMetricSpace::from_rows({"a", "b", "c"}, {{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}), InputError);
    const auto p = FiniteMetricSpace::path(4);
    CHECK(p(0, 3) == 3.0);
    CHECK(p.diameter() == 3.0);
    CHECK(FiniteMetricSpace::discrete(3)(0, 2) == 1.0);
}

TEST_CASE("norms are homogeneous and subadditive") {
    auto rng = make_rng(3);
    for (const Norm nm : {Norm::lr(1), Norm::lr(2), Norm::lr(3.5), Norm::linf()}) {
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<Complex> a(4);
            std::vector<Complex> b(4);
            std::vector<Complex> s(4);
            std::vector<Complex> sa(4);
            const Complex lambda(uniform_in(rng, -2, 2), uniform_in(rng, -2, 2));
            for (std::size_t i = 0; i < 4; ++i) {
                a[i] = {uniform_in(rng, -1, 1), uniform_in(rng, -1, 1)};
                b[i] = {uniform_in(rng, -1, 1), uniform_in(rng, -1, 1)};
                s[i] = a[i] + b[i];
                sa[i] = lambda * a[i];
            }
            CHECK(nm(s) <= nm(a) + nm(b) + 1e-12);
            CHECK(nm(sa) == doctest::Approx(std::abs(lambda) * nm(a)).epsilon(1e-12));
        }
    }
    CHECK(Norm::lr(std::numeric_limits<double>::infinity()) == Norm::linf());
}

TEST_CASE("distance rejects mismatched points") {
    const auto a = NormedPoint::scalar(1.0);
    NormedPoint b({Complex(1, 0), Complex(0, 0)}, Norm::euclidean());
    CHECK_THROWS_AS((void)distance(a, b), InputError);
}

TEST_CASE("expansion modulus examples") {
    const auto id = real_map({0, 1, 2}, [](double x) { return x; });
    CHECK(expansion_modulus(id, 1.0) == 1.0);
    const auto twice = real_map(grid(0, 10), [](double x) { return 2 * x; });
    CHECK(expansion_modulus(twice, 3.0) == 6.0);
    CHECK(expansion_modulus(twice, 0.5) == 0.0);
    CHECK_THROWS_AS((void)expansion_modulus(twice, -1.0), InputError);
}

TEST_CASE("sampled maps need at least two points") {
    CHECK_THROWS(real_map({0}, [](double x) { return x; }));
}

TEST_CASE("compression moduli") {
    const auto id = real_map(grid(0, 10), [](double x) { return x; });
    const std::vector<double> edges{2.0, 2.5};
    const auto p = compression_moduli(id, edges);
    REQUIRE(p.bins.size() == 1);
    CHECK(p.bins[0].rho_bar.value() == 2.0);

    const auto c = real_map(grid(0, 10), [](double) { return 3.0; });
    const auto pc = compression_moduli(c, uniform_edges(pair_distances(c), 8));
    for (const auto& b : pc.bins) {
        if (b.empty()) {
            CHECK_FALSE(b.rho_bar.has_value());
            continue;
        }
        if (b.t_lo > 0) {
            CHECK(b.rho.value() == 0.0);
            CHECK(b.rho_bar.value() == 0.0);
        }
    }
    const std::vector<double> bad{1.0, 0.5};
    CHECK_THROWS_AS((void)compression_moduli(id, bad), InputError);
}

TEST_CASE("uniform bins are half open with a closed last bin") {
    const auto id = real_map({0, 1, 2, 4}, [](double x) { return x; });
    const auto pairs = pair_distances(id);
    const auto edges = uniform_edges(pairs, 4);
    REQUIRE(edges.size() == 5);
    CHECK(edges.front() == 0.0);
    CHECK(edges.back() == 4.0);
    const auto p = compression_moduli(pairs, edges);
    // Distances: 1, 2, 4, 1, 3, 2.
    CHECK(p.bins[1].pair_count == 2);  // d = 1 lands in [1, 2)
    CHECK(p.bins[2].pair_count == 2);  // d = 2
    CHECK(p.bins[3].pair_count == 2);  // d = 3 and the closed right end d = 4
    CHECK(p.bins[0].empty());
}

TEST_CASE("modulus profile invariants on random maps") {
    auto rng = make_rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> xs;
        std::vector<NormedPoint> img;
        for (int i = 0; i < 40; ++i) {
            xs.push_back(uniform_in(rng, 0, 20));
            img.push_back(NormedPoint::scalar(uniform_in(rng, -5, 5)));
        }
        const SampledMap f(PointCloud::real_line(xs), PointCloud::normed(img));
        const auto pairs = pair_distances(f);
        const auto p = compression_moduli(pairs, uniform_edges(pairs, 16));
        std::optional<double> prev_rho;
        double prev_omega = 0.0;
        for (const auto& b : p.bins) {
            CHECK(b.omega >= prev_omega);
            prev_omega = b.omega;
            if (b.rho && prev_rho) CHECK(*b.rho >= *prev_rho);
            if (b.rho) prev_rho = b.rho;
            if (b.rho && b.rho_bar) CHECK(*b.rho <= *b.rho_bar);
        }
        // Every pair sits between rho at its bin's lower edge and omega at the upper edge.
        for (const auto& pr : pairs) {
            std::size_t k = 0;
            while (k + 1 < p.bins.size() && pr.source >= p.bins[k].t_hi) ++k;
            CHECK(p.bins[k].omega >= pr.image);
            if (p.bins[k].rho) CHECK(*p.bins[k].rho <= pr.image);
        }
    }
}

TEST_CASE("rho is nondecreasing in the lower edge") {
    // A map whose image distances shrink with source distance.
    const auto f = real_map(grid(0, 20), [](double x) { return std::sqrt(x); });
    const auto pairs = pair_distances(f);
    const auto p = compression_moduli(pairs, uniform_edges(pairs, 10));
    for (std::size_t i = 1; i < p.bins.size(); ++i)
        if (p.bins[i].rho && p.bins[i - 1].rho) CHECK(*p.bins[i].rho >= *p.bins[i - 1].rho);
}

TEST_CASE("classify identity and constant maps") {
    const auto id = real_map(grid(0, 100), [](double x) { return x; });
    const auto r = classify(id);
    CHECK(r.expanding_at_scale);
    CHECK(r.solvent);
    CHECK(r.solvent_at_scale.size() == 8);
    CHECK(r.uncollapsed);
    CHECK(r.almost_uncollapsed);
    CHECK_NOTHROW(check_taxonomy_arrows(r));

    const auto c = real_map(grid(0, 100), [](double) { return 1.0; });
    const auto rc = classify(c);
    CHECK_FALSE(rc.expanding_at_scale);
    CHECK_FALSE(rc.solvent);
    CHECK(rc.solvent_at_scale.empty());
    CHECK_FALSE(rc.uncollapsed);
    CHECK_FALSE(rc.almost_uncollapsed);
    CHECK(rc.linear_growth_constant == 0.0);
}

TEST_CASE("bounded injective map is almost uncollapsed but not solvent") {
    const auto f = real_map(grid(0, 200, 0.5), [](double x) { return x / (1.0 + std::abs(x)); });
    const auto r = classify(f);
    CHECK(r.almost_uncollapsed);
    CHECK_FALSE(r.solvent);
    CHECK(std::none_of(r.solvent_at_scale.begin(), r.solvent_at_scale.end(),
                       [](const SolvedScale& s) { return s.n >= 2; }));
}

TEST_CASE("classify scales with the target") {
    auto rng = make_rng(5);
    std::vector<double> xs;
    std::vector<NormedPoint> img;
    std::vector<NormedPoint> img3;
    for (int i = 0; i < 30; ++i) {
        xs.push_back(i);
        const double v = i + uniform_in(rng, -0.4, 0.4);
        img.push_back(NormedPoint::scalar(v));
        img3.push_back(NormedPoint::scalar(v).scaled(4.0));
    }
    const SampledMap f(PointCloud::real_line(xs), PointCloud::normed(img));
    const SampledMap g(PointCloud::real_line(xs), PointCloud::normed(img3));
    TaxonomyParams p;
    p.zero_tol = 1e-3;
    TaxonomyParams q = p;
    q.zero_tol = 4e-3;
    const auto a = classify(f, p);
    const auto b = classify(g, q);
    CHECK(a.uncollapsed == b.uncollapsed);
    CHECK(a.almost_uncollapsed == b.almost_uncollapsed);
    for (std::size_t i = 0; i < a.profile.bins.size(); ++i) {
        CHECK(b.profile.bins[i].omega == doctest::Approx(4.0 * a.profile.bins[i].omega).epsilon(1e-12));
        if (a.profile.bins[i].rho_bar)
            CHECK(*b.profile.bins[i].rho_bar == doctest::Approx(4.0 * *a.profile.bins[i].rho_bar).epsilon(1e-12));
    }
}

TEST_CASE("taxonomy arrows reject inconsistent reports") {
    TaxonomyReport r;
    r.expanding_at_scale = true;
    r.uncollapsed = false;
    CHECK_THROWS_AS(check_taxonomy_arrows(r), ViolationError);
    TaxonomyReport s;
    s.uncollapsed = true;
    s.almost_uncollapsed = false;
    CHECK_THROWS_AS(check_taxonomy_arrows(s), ViolationError);
}

TEST_CASE("greedy nets") {
    const std::vector<double> xs{0, 0.5, 1, 1.5, 2};
    const auto net = extract_net(PointCloud::real_line(xs), 1.0);
    CHECK(net == std::vector<std::size_t>{0, 2, 4});
    const auto single = extract_net(FiniteMetricSpace::path(5), 10.0);
    CHECK(single == std::vector<std::size_t>{0});

    auto rng = make_rng(42);
    std::vector<NormedPoint> pts;
    for (int i = 0; i < 100; ++i) {
        const std::vector<double> c{uniform01(rng), uniform01(rng)};
        pts.push_back(NormedPoint::real(c));
    }
    const auto cloud = PointCloud::normed(pts);
    const auto got = extract_net(cloud, 0.25);
    // Independent scan.
    std::vector<std::size_t> ref;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool far = true;
        for (auto j : ref) far = far && distance(pts[i], pts[j]) >= 0.25;
        if (far) ref.push_back(i);
    }
    CHECK(got == ref);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double d = 1e9;
        for (auto j : got) d = std::min(d, distance(pts[i], pts[j]));
        CHECK(d < 0.25);
    }
    for (std::size_t a = 0; a < got.size(); ++a)
        for (std::size_t b = a + 1; b < got.size(); ++b) CHECK(distance(pts[got[a]], pts[got[b]]) >= 0.25);
    CHECK_THROWS_AS((void)extract_net(cloud, 0.0), InputError);
}

TEST_CASE("net transfer") {
    const auto xs = grid(0, 60, 0.25);
    const auto id = real_map(xs, [](double x) { return x; });
    const auto net = extract_net(id.source(), 0.5);
    const auto r = net_transfer_check(id, net, 0.5, 1, 10.0);
    CHECK(r.hypothesis);
    CHECK(r.conclusion);

    const auto c = real_map(xs, [](double) { return 0.0; });
    const auto rc = net_transfer_check(c, net, 0.5, 1, 10.0);
    CHECK_FALSE(rc.hypothesis);

    auto rng = make_rng(7);
    std::vector<NormedPoint> img;
    for (double x : xs) img.push_back(NormedPoint::scalar(x + uniform_in(rng, -0.1, 0.1)));
    const SampledMap p(PointCloud::real_line(xs), PointCloud::normed(img));
    const auto rp = net_transfer_check(p, net, 0.5, 1, 20.0);
    CHECK((!rp.hypothesis || rp.conclusion));

    const std::vector<std::size_t> sparse{0};
    CHECK_THROWS_AS((void)net_transfer_check(id, sparse, 0.5, 1, 10.0), InputError);
}
