#include "support/oracle.hpp"

#include "embedlab/amplify.hpp"
#include "embedlab/cocycle.hpp"
#include "embedlab/error.hpp"
#include "embedlab/lift.hpp"
#include "embedlab/moduli.hpp"
#include "embedlab/random.hpp"
#include "embedlab/rational.hpp"
#include "embedlab/torus_witness.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace embedlab;

TEST_CASE("rationals are reduced with positive denominators") {
    const Rational a(BigInt(6), BigInt(-4));
    CHECK(a.num() == -3);
    CHECK(a.den() == 2);
    CHECK(a.str() == "-3/2");
    CHECK(Rational::parse("10/4") == Rational(5, 2));
    CHECK(Rational::parse("-7") == Rational(-7));
    CHECK_THROWS_AS((void)Rational::parse("1/0"), InputError);
    CHECK_THROWS_AS((void)Rational::parse("x"), InputError);
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(7, 2).mod(BigInt(3)) == Rational(1, 2));
    CHECK(Rational(-1, 2).mod(BigInt(4)) == Rational(7, 2));
    CHECK(Rational(BigInt(1), pow2(2000)).to_double() == 0.0);
    CHECK(ratio_to_double(pow2(1100) * 3, pow2(1100)) == 3.0);
}

TEST_CASE("cocycle configuration") {
    const CocycleConfig cfg(5);
    for (int n = 1; n <= 5; ++n) CHECK(cfg.period(n) == pow2(1u << n));
    CHECK(cfg.lipschitz_constant_sq() == doctest::Approx(oracle::lipschitz_constant_sq(5)).epsilon(1e-15));
    CHECK_THROWS_AS(CocycleConfig(0), InputError);
    CHECK_THROWS_AS(CocycleConfig(17), InputError);
}

TEST_CASE("cocycle values") {
    const CocycleConfig cfg(6);
    const auto zero = cocycle_eval(Rational(0), cfg);
    for (const auto& c : zero.coords) CHECK(c == Complex(0, 0));
    const auto two = cocycle_eval(Rational(2), cfg);
    CHECK(std::abs(two.coords[0] - Complex(2, 0)) < 1e-15);
    CHECK(two.phases[0].frac == Rational(1, 2));
    for (int k = 1; k < 6; ++k) {
        const auto v = cocycle_eval(Rational(pow2(1u << k)), cfg);
        for (int n = 1; n <= k; ++n) {
            CHECK(v.phases[static_cast<std::size_t>(n - 1)].exact_zero);
            CHECK(v.coords[static_cast<std::size_t>(n - 1)] == Complex(0, 0));
        }
    }
    // |b(t)| is even in t.
    CHECK(cocycle_eval(Rational(-2), cfg).norm() == doctest::Approx(two.norm()).epsilon(1e-14));
    const auto t = Rational::parse("123456789/1000");
    for (int n = 1; n <= 6; ++n)
        CHECK(cocycle_eval(t, cfg).magnitudes[static_cast<std::size_t>(n - 1)] ==
              doctest::Approx(std::sqrt(oracle::cocycle_coord_sq(t, n))).epsilon(1e-14));
}

TEST_CASE("underflow policy") {
    // Phase 1/2^(2^16) underflows the double range.
    const CocycleConfig flush(16, UnderflowPolicy::Flush);
    const auto v = cocycle_eval(Rational(1), flush);
    CHECK(v.flushed > 0);
    CHECK(std::isfinite(v.norm()));
    const CocycleConfig strict(16, UnderflowPolicy::Strict);
    CHECK_THROWS_AS((void)cocycle_eval(Rational(1), strict), PrecisionError);
}

TEST_CASE("cocycle checks and collapse") {
    const CocycleConfig cfg(6);
    const std::vector<Rational> ts{Rational(3), Rational(5), Rational(1), Rational(1, 7), Rational(-40)};
    const auto rep = cocycle_norm_checks(cfg, ts);
    CHECK(rep.ok());
    CHECK(rep.max_lipschitz_ratio <= 1.0 + 1e-12);
    CHECK(rep.max_identity_residual <= 1e-12);
    CHECK(rep.collapse_strictly_decreasing);
    REQUIRE(rep.collapse.size() == 5);
    const double two_pi = 2 * std::numbers::pi;
    const double k3 = std::pow(two_pi * 256 / 65536.0, 2) + std::pow(two_pi * 256 / 4294967296.0, 2) +
                      std::pow(two_pi * 256 / 18446744073709551616.0, 2);
    CHECK(rep.collapse[2].k == 3);
    CHECK(rep.collapse[2].bound_sq == doctest::Approx(k3).epsilon(1e-14));
    CHECK(rep.collapse[2].norm_sq <= k3);
    CHECK(collapse_bound_sq(3, 6) == doctest::Approx(oracle::collapse_bound_sq(3, 6)).epsilon(1e-14));
    const auto b3 = cocycle_eval(Rational(3), cfg);
    const auto b5 = cocycle_eval(Rational(5), cfg);
    double d = 0.0;
    for (std::size_t i = 0; i < 6; ++i) d += std::norm(b3.coords[i] - b5.coords[i]);
    CHECK(std::sqrt(d) == doctest::Approx(cocycle_eval(Rational(2), cfg).norm()).epsilon(1e-12));
    CHECK(cocycle_eval(Rational(1), cfg).norm() <= std::sqrt(oracle::lipschitz_constant_sq(6)));
}

TEST_CASE("solvency witness") {
    CHECK(cocycle_solvency_witness(CocycleConfig(4), 0.0).t == Rational(0));
    const auto w = cocycle_solvency_witness(CocycleConfig(4), 2.0);
    REQUIRE(w.t);
    CHECK(cocycle_eval(*w.t, CocycleConfig(4)).norm() >= 2.0);
    CHECK(w.norm >= 2.0);
    CHECK_THROWS_WITH_AS((void)cocycle_solvency_witness(CocycleConfig(4), 4.0), doctest::Contains("unreachable at truncation"),
                         InputError);
}

TEST_CASE("affine action is isometric") {
    const CocycleConfig cfg(5);
    auto rng = make_rng(9);
    const Norm l2 = Norm::lr(2);
    for (int i = 0; i < 20; ++i) {
        std::vector<Complex> x(5);
        std::vector<Complex> y(5);
        for (auto& z : x) z = {uniform_in(rng, -3, 3), uniform_in(rng, -3, 3)};
        for (auto& z : y) z = {uniform_in(rng, -3, 3), uniform_in(rng, -3, 3)};
        const Rational t(BigInt(static_cast<long long>(uniform_below(rng, 1000))), BigInt(7));
        const auto ax = affine_action(t, x, cfg);
        const auto ay = affine_action(t, y, cfg);
        std::vector<Complex> a(5);
        std::vector<Complex> b(5);
        for (std::size_t k = 0; k < 5; ++k) {
            a[k] = ax[k] - ay[k];
            b[k] = x[k] - y[k];
        }
        CHECK(std::abs(l2(a) - l2(b)) <= 1e-12);
    }
    // alpha_t(0) = w - U_t w = b(t).
    const std::vector<Complex> origin(5);
    const auto a0 = affine_action(Rational(3), origin, cfg);
    const auto b = cocycle_eval(Rational(3), cfg);
    for (std::size_t k = 0; k < 5; ++k) CHECK(std::abs(a0[k] - b.coords[k]) < 1e-15);
}

TEST_CASE("torus witness") {
    const TorusWitnessConfig cfg{3, 6, 2.0, 1.5};
    const std::vector<int> zero(3, 0);
    const auto h0 = torus_witness(cfg, zero);
    for (const auto& c : h0.coords) CHECK(std::abs(c - Complex(1.5, 0)) < 1e-15);
    const std::vector<int> x{1, 4, 2};
    const std::vector<int> xm{7, 4, 2};
    const auto hx = torus_witness(cfg, x);
    const auto hxm = torus_witness(cfg, xm);
    for (std::size_t i = 0; i < 3; ++i) CHECK(hx.coords[i] == hxm.coords[i]);
    CHECK(cfg.unit_step_bound() == doctest::Approx(2 * std::numbers::pi * 1.5 * std::sqrt(3.0) / 6));
    TorusWitnessConfig odd{2, 5, 2.0, 1.0};
    CHECK_THROWS_AS(odd.validate(), InputError);
    TorusWitnessConfig neg{2, 4, 2.0, -1.0};
    CHECK_THROWS_AS(neg.validate(), InputError);
}

TEST_CASE("amplification") {
    AmplificationConfig cfg;
    cfg.eps = {1.0, 0.5, 1.0 / 3};
    cfg.phi = [](const NormedPoint& x) { return x; };
    const auto blocks = amplify(cfg, NormedPoint::scalar(6.0), 3);
    REQUIRE(blocks.size() == 3);
    for (int n = 1; n <= 3; ++n) CHECK(blocks[static_cast<std::size_t>(n - 1)].coords[0].real() == doctest::Approx(6.0 / n));
    const auto origin = amplify(cfg, NormedPoint::scalar(0.0), 3);
    for (const auto& b : origin) CHECK(b.length() == 0.0);
    CHECK_THROWS_AS((void)amplify(cfg, NormedPoint::scalar(1.0), 4), InputError);
    CHECK(aggregated_distance(blocks, origin, Aggregation::L1) == doctest::Approx(6.0 + 3.0 + 2.0));
    CHECK(aggregated_distance(blocks, origin, Aggregation::Sup) == doctest::Approx(6.0));
    CHECK(aggregated_distance(blocks, origin, Aggregation::L2) == doctest::Approx(std::sqrt(36.0 + 9.0 + 4.0)));
    CHECK(parse_aggregation("sup") == Aggregation::Sup);
    CHECK_THROWS_AS((void)parse_aggregation("l7"), InputError);
}

TEST_CASE("eps certification and the upper block bound") {
    const InterpolatedMap phi({0.0, 1.0, 2.0, 3.0}, {{0.0}, {0.8}, {1.1}, {2.0}});
    AmplificationConfig cfg;
    cfg.eps = AmplificationConfig::eps_from_lipschitz(phi.lipschitz(), 5);
    cfg.phi = phi.as_point_map();
    // Dense sample of phi.
    std::vector<double> xs;
    std::vector<NormedPoint> ys;
    for (int i = 0; i <= 300; ++i) {
        xs.push_back(i / 100.0);
        ys.push_back(phi(i / 100.0));
    }
    const SampledMap sample(PointCloud::real_line(xs), PointCloud::normed(ys));
    const auto certs = certify_eps(cfg, sample, phi.lipschitz());
    REQUIRE(certs.size() == 5);
    for (const auto& c : certs) {
        CHECK(c.ok);
        CHECK(c.sampled_omega < c.limit);
    }
    // Pairs with |x - y| <= n0 contribute at most 2^-n in blocks n >= n0.
    for (double x : {0.0, 0.7, 1.3}) {
        const auto a = amplify(cfg, NormedPoint::scalar(x), 5);
        const auto b = amplify(cfg, NormedPoint::scalar(x + 1.0), 5);
        for (int n = 1; n <= 5; ++n)
            CHECK(distance(a[static_cast<std::size_t>(n - 1)], b[static_cast<std::size_t>(n - 1)]) <= std::ldexp(1.0, -n));
    }
    AmplificationConfig loose = cfg;
    loose.eps = {1.0, 1.0, 1.0, 1.0, 1.0};
    CHECK_THROWS_AS((void)certify_eps(loose, sample, std::nullopt), ViolationError);
    CHECK_THROWS_AS((void)amplify(cfg, NormedPoint::scalar(1e6), 1), DomainError);
}

TEST_CASE("linf lift") {
    const InterpolatedMap id({-10.0, 10.0}, {{-10.0}, {10.0}}, Norm::linf());
    const std::vector<Rational> grid{Rational(1, 2), Rational(1), Rational(2)};
    const LinftyLift lift(id.as_point_map(), grid);
    const auto F = lift(NormedPoint::scalar(1.5));
    REQUIRE(F.dim() == 3);
    for (const auto& c : F.coords) CHECK(c.real() == doctest::Approx(1.5));
    CHECK(lift.grid_match(2.0 * (1 + 1e-14)).value() == 2);
    CHECK_FALSE(lift.grid_match(3.0).has_value());

    std::vector<double> knots;
    std::vector<std::vector<double>> vals;
    for (int i = 0; i <= 400; ++i) {
        knots.push_back(-10 + i * 0.05);
        vals.push_back({std::sin(knots.back())});
    }
    const InterpolatedMap s(knots, vals, Norm::linf());
    const LinftyLift one(s.as_point_map(), {Rational(1)});
    std::vector<std::pair<NormedPoint, NormedPoint>> pairs;
    for (double x = -4; x < 4; x += 0.7) pairs.emplace_back(NormedPoint::scalar(x), NormedPoint::scalar(x + 0.3));
    const auto rep = check_lift(one, pairs, s.lipschitz(), 1.0, 0.0);
    CHECK(rep.lipschitz_ok);
    CHECK(rep.lip_F <= 1.0 + 1e-12);
    CHECK_THROWS_AS(LinftyLift(id.as_point_map(), {Rational(-1)}), InputError);
    const InterpolatedMap euclid({0.0, 1.0}, {{0.0}, {1.0}});
    const LinftyLift wrong(euclid.as_point_map(), {Rational(1)});
    CHECK_THROWS_AS((void)wrong(NormedPoint::scalar(0.5)), InputError);
}
