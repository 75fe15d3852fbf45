#include "oracle.hpp"

#include <Eigen/Dense>
#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

namespace embedlab::oracle {

namespace {

using Float = boost::multiprecision::cpp_bin_float_100;

long double pi_ld() { return 3.141592653589793238462643383279502884L; }

std::uint64_t choose(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t c = 1;
    for (int i = 0; i < k; ++i) c = c * static_cast<std::uint64_t>(n - i) / static_cast<std::uint64_t>(i + 1);
    return c;
}

}  // namespace

double cocycle_coord_sq(const Rational& t, int n) {
    const BigInt period = BigInt(1) << (1u << n);
    const BigInt full = t.den() * period;
    BigInt r = t.num() % full;
    if (r < 0) r += full;
    const Float theta = Float(r) / Float(full);
    const Float s = boost::multiprecision::sin(boost::math::constants::pi<Float>() * theta);
    return static_cast<double>(4 * s * s);
}

double cocycle_norm_sq(const Rational& t, int truncation) {
    Float sum = 0;
    for (int n = 1; n <= truncation; ++n) {
        const BigInt period = BigInt(1) << (1u << n);
        const BigInt full = t.den() * period;
        BigInt r = t.num() % full;
        if (r < 0) r += full;
        const Float theta = Float(r) / Float(full);
        const Float s = boost::multiprecision::sin(boost::math::constants::pi<Float>() * theta);
        sum += 4 * s * s;
    }
    return static_cast<double>(sum);
}

double lipschitz_constant_sq(int truncation) {
    long double c = 0.0L;
    for (int n = 1; n <= truncation; ++n) {
        long double term = 2.0L * pi_ld();
        for (long i = 0; i < (1L << n); ++i) term /= 2.0L;
        c += term * term;
    }
    return static_cast<double>(c);
}

double collapse_bound_sq(int k, int truncation) {
    long double s = 0.0L;
    for (int n = k + 1; n <= truncation; ++n) {
        long double term = 2.0L * pi_ld();
        for (long i = 0; i < (1L << n) - (1L << k); ++i) term /= 2.0L;
        s += term * term;
    }
    return static_cast<double>(s);
}

CotypeSums cotype_sums(int n, int m, double q, const std::function<double(std::size_t, std::size_t)>& dist,
                       const std::vector<std::uint32_t>& labels) {
    std::size_t size = 1;
    for (int i = 0; i < n; ++i) size *= static_cast<std::size_t>(m);
    std::size_t three = 1;
    for (int i = 0; i < n; ++i) three *= 3;
    // Coordinates of index x, coordinate 0 most significant.
    auto digits = [&](std::size_t x) {
        std::vector<int> d(static_cast<std::size_t>(n));
        for (int i = n - 1; i >= 0; --i) {
            d[static_cast<std::size_t>(i)] = static_cast<int>(x % static_cast<std::size_t>(m));
            x /= static_cast<std::size_t>(m);
        }
        return d;
    };
    auto pack = [&](const std::vector<int>& d) {
        std::size_t x = 0;
        for (int v : d) x = x * static_cast<std::size_t>(m) + static_cast<std::size_t>(((v % m) + m) % m);
        return x;
    };
    long double left = 0.0L;
    long double right = 0.0L;
    for (std::size_t x = 0; x < size; ++x) {
        const auto d = digits(x);
        for (int j = 0; j < n; ++j) {
            auto y = d;
            y[static_cast<std::size_t>(j)] += m / 2;
            left += std::pow(static_cast<long double>(dist(labels[pack(y)], labels[x])), static_cast<long double>(q));
        }
        for (std::size_t e = 0; e < three; ++e) {
            auto y = d;
            std::size_t code = e;
            for (int j = 0; j < n; ++j) {
                y[static_cast<std::size_t>(j)] += static_cast<int>(code % 3) - 1;
                code /= 3;
            }
            right += std::pow(static_cast<long double>(dist(labels[pack(y)], labels[x])), static_cast<long double>(q));
        }
    }
    return {static_cast<double>(left / static_cast<long double>(size)),
            static_cast<double>(right / (static_cast<long double>(size) * static_cast<long double>(three)))};
}

double two_point_max_ratio() {
    // f(0), f(1) in {0, 1}; d = |f(0) - f(1)|. Half shift on Z_2 is x -> x + 1.
    double best = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const double d = std::abs(a - b);
            const double lhs = (d * d + d * d) / 2.0;  // x = 0 and x = 1
            // eps in {-1, 0, 1}: eps = +-1 both move to the other point.
            const double rhs = (2.0 * d * d + 2.0 * d * d + 0.0) / (3.0 * 2.0);
            const double ratio = rhs > 0.0 ? lhs / rhs : 0.0;
            best = std::max(best, ratio);
        }
    return best;
}

bool interlaces(const std::vector<int>& a, const std::vector<int>& b) {
    auto chain = [](const std::vector<int>& x, const std::vector<int>& y) {
        std::vector<int> seq;
        for (std::size_t i = 0; i < x.size(); ++i) {
            seq.push_back(x[i]);
            seq.push_back(y[i]);
        }
        return std::is_sorted(seq.begin(), seq.end());
    };
    return a != b && (chain(a, b) || chain(b, a));
}

std::vector<std::vector<int>> k_subsets(int ground, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int e = start; e <= ground; ++e) {
            cur.push_back(e);
            rec(e + 1);
            cur.pop_back();
        }
    };
    rec(1);
    return out;
}

std::vector<int> eccentricities(int k, int ground) {
    const auto verts = k_subsets(ground, k);
    const std::size_t n = verts.size();
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (interlaces(verts[i], verts[j])) {
                adj[i].push_back(j);
                adj[j].push_back(i);
            }
    std::vector<int> ecc(n, 0);
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<int> d(n, -1);
        std::deque<std::size_t> queue{s};
        d[s] = 0;
        while (!queue.empty()) {
            const auto v = queue.front();
            queue.pop_front();
            for (auto w : adj[v])
                if (d[w] < 0) {
                    d[w] = d[v] + 1;
                    queue.push_back(w);
                }
        }
        if (std::find(d.begin(), d.end(), -1) != d.end()) ecc[s] = -1;
        else ecc[s] = *std::max_element(d.begin(), d.end());
    }
    return ecc;
}

std::uint64_t colex_rank(const std::vector<int>& subset) {
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < subset.size(); ++i) r += choose(subset[i] - 1, static_cast<int>(i) + 1);
    return r;
}

bool property_q_subset_good(int k, int, double epsilon, const std::function<double(std::uint32_t, std::uint32_t)>& dist,
                            const std::vector<std::uint32_t>& f, const std::vector<int>& subset) {
    const int size = static_cast<int>(subset.size());
    std::vector<std::vector<int>> subs;
    for (const auto& pick : k_subsets(size, k)) {
        std::vector<int> s;
        for (int p : pick) s.push_back(subset[static_cast<std::size_t>(p - 1)]);
        subs.push_back(std::move(s));
    }
    for (const auto& a : subs)
        for (const auto& b : subs)
            if (a.back() < b.front() && dist(f[colex_rank(a)], f[colex_rank(b)]) > epsilon) return false;
    return true;
}

PropertyQBrute property_q_brute(int k, int ground, int s, double epsilon,
                                const std::function<double(std::uint32_t, std::uint32_t)>& dist,
                                const std::vector<std::uint32_t>& f) {
    PropertyQBrute out;
    const auto verts = k_subsets(ground, k);
    for (std::size_t i = 0; i < verts.size(); ++i)
        for (std::size_t j = i + 1; j < verts.size(); ++j)
            if (interlaces(verts[i], verts[j]))
                out.omega_1 = std::max(out.omega_1, dist(f[colex_rank(verts[i])], f[colex_rank(verts[j])]));
    for (const auto& cand : k_subsets(ground, s))
        if (property_q_subset_good(k, ground, epsilon, dist, f, cand)) {
            out.witness_exists = true;
            break;
        }
    return out;
}

double centered_max_eigenvalue(const std::vector<std::vector<double>>& k) {
    const auto n = static_cast<Eigen::Index>(k.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = k[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    const Eigen::MatrixXd p =
        Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
    const Eigen::MatrixXd c = p * m * p;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (c + c.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

double min_eigenvalue(const std::vector<std::vector<double>>& k) {
    const auto n = static_cast<Eigen::Index>(k.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = k[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

}  // namespace embedlab::oracle
