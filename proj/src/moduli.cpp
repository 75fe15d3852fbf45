#include "embedlab/moduli.hpp"

#include "embedlab/error.hpp"
#include "embedlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

namespace embedlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool by_source(const PairSample& a, const PairSample& b) {
    return a.source < b.source || (a.source == b.source && a.image < b.image);
}

std::size_t first_at_least(std::span<const PairSample> p, double t) {
    return static_cast<std::size_t>(
        std::lower_bound(p.begin(), p.end(), t, [](const PairSample& s, double v) { return s.source < v; }) -
        p.begin());
}

std::size_t first_above(std::span<const PairSample> p, double t) {
    return static_cast<std::size_t>(
        std::upper_bound(p.begin(), p.end(), t, [](double v, const PairSample& s) { return v < s.source; }) -
        p.begin());
}

void validate_edges(std::span<const double> edges) {
    if (edges.size() < 2) throw InputError("bins: need at least two edges");
    if (edges.front() < 0.0) throw InputError("bins: edges must be nonnegative");
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (!(edges[i] > edges[i - 1])) throw InputError("bins: edges must be strictly increasing");
}

}  // namespace

std::vector<PairSample> pair_distances(const SampledMap& map) {
    const std::size_t n = map.size();
    std::vector<PairSample> out(n * (n - 1) / 2);
    const std::size_t rows_per_block = 16;
    parallel::for_blocks(parallel::block_count(n, rows_per_block), [&](std::size_t b) {
        const std::size_t lo = b * rows_per_block;
        const std::size_t hi = std::min(n, lo + rows_per_block);
        for (std::size_t i = lo; i < hi; ++i) {
            std::size_t at = i * n - i * (i + 1) / 2;
            for (std::size_t j = i + 1; j < n; ++j, ++at) {
                const double ds = map.source_distance(i, j);
                const double di = map.image_distance(i, j);
                if (!std::isfinite(ds) || !std::isfinite(di) || ds < 0.0 || di < 0.0)
                    throw InputError("sampled map: distances must be finite and nonnegative");
                out[at] = {ds, di};
            }
        }
    });
    std::sort(out.begin(), out.end(), by_source);
    return out;
}

double expansion_modulus(std::span<const PairSample> sorted_pairs, double t) {
    if (t < 0.0) throw InputError("expansion modulus: t must be >= 0");
    const std::size_t end = first_above(sorted_pairs, t);
    double best = 0.0;
    for (std::size_t i = 0; i < end; ++i) best = std::max(best, sorted_pairs[i].image);
    return best;
}

double expansion_modulus(const SampledMap& map, double t) {
    if (map.size() == 0) throw InputError("no samples");
    const auto pairs = pair_distances(map);
    return expansion_modulus(pairs, t);
}

std::optional<double> exact_compression_at(std::span<const PairSample> sorted_pairs, double t,
                                           double half_width) {
    const std::size_t lo = first_at_least(sorted_pairs, t - half_width);
    const std::size_t hi = first_above(sorted_pairs, t + half_width);
    if (lo >= hi) return std::nullopt;
    double best = kInf;
    for (std::size_t i = lo; i < hi; ++i) best = std::min(best, sorted_pairs[i].image);
    return best;
}

std::vector<double> uniform_edges(std::span<const PairSample> pairs, std::size_t count) {
    if (count == 0) throw InputError("bins: count must be positive");
    double top = 0.0;
    for (const auto& p : pairs) top = std::max(top, p.source);
    if (top <= 0.0) top = 1.0;
    std::vector<double> edges(count + 1);
    for (std::size_t i = 0; i <= count; ++i) edges[i] = top * static_cast<double>(i) / static_cast<double>(count);
    edges.back() = top;
    return edges;
}

ModulusProfile compression_moduli(std::span<const PairSample> p, std::span<const double> edges) {
    validate_edges(edges);
    ModulusProfile prof;
    prof.edges.assign(edges.begin(), edges.end());
    prof.pair_count = p.size();

    std::vector<double> prefix_max(p.size() + 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) prefix_max[i + 1] = std::max(prefix_max[i], p[i].image);
    std::vector<double> suffix_min(p.size() + 1, kInf);
    for (std::size_t i = p.size(); i-- > 0;) suffix_min[i] = std::min(suffix_min[i + 1], p[i].image);
    prof.max_image_distance = prefix_max.back();

    const std::size_t nbins = edges.size() - 1;
    prof.bins.resize(nbins);
    for (std::size_t b = 0; b < nbins; ++b) {
        auto& bin = prof.bins[b];
        bin.t_lo = edges[b];
        bin.t_hi = edges[b + 1];
        const bool last = b + 1 == nbins;
        const std::size_t lo = first_at_least(p, bin.t_lo);
        const std::size_t hi = last ? first_above(p, bin.t_hi) : first_at_least(p, bin.t_hi);
        bin.omega = prefix_max[first_above(p, bin.t_hi)];
        if (lo < p.size()) bin.rho = suffix_min[lo];
        bin.pair_count = hi > lo ? hi - lo : 0;
        if (bin.pair_count > 0) {
            double m = kInf;
            for (std::size_t i = lo; i < hi; ++i) m = std::min(m, p[i].image);
            bin.rho_bar = m;
        }
    }
    return prof;
}

ModulusProfile compression_moduli(const SampledMap& map, std::span<const double> edges) {
    const auto pairs = pair_distances(map);
    return compression_moduli(pairs, edges);
}

void check_taxonomy_arrows(const TaxonomyReport& r) {
    if (r.expanding_at_scale && (r.solvent_at_scale.empty() || !r.uncollapsed))
        throw ViolationError("taxonomy: expanding report without solvency or uncollapsedness");
    if (r.uncollapsed && !r.almost_uncollapsed)
        throw ViolationError("taxonomy: uncollapsed report that is not almost uncollapsed");
}

TaxonomyReport classify(const SampledMap& map, const TaxonomyParams& params) {
    if (params.n_max < 1) throw InputError("classify: n_max must be >= 1");
    const auto pairs = pair_distances(map);
    const auto edges = params.edges.empty() ? uniform_edges(pairs, params.bin_count) : params.edges;

    TaxonomyReport rep;
    rep.n_max = params.n_max;
    rep.profile = compression_moduli(pairs, edges);
    const auto& prof = rep.profile;
    rep.zero_tol = params.zero_tol.value_or(1e-9 * prof.max_image_distance);
    rep.bin_width = (edges.back() - edges.front()) / static_cast<double>(edges.size() - 1);

    // omega(t) <= L t + L on the edge grid.
    double omega0 = 0.0;
    for (const auto& p : pairs) {
        if (p.source > 0.0) break;
        omega0 = std::max(omega0, p.image);
    }
    rep.linear_growth_constant = omega0;
    rep.max_omega = omega0;
    for (const auto& bin : prof.bins) {
        rep.coarse_at_scale = rep.coarse_at_scale && std::isfinite(bin.omega);
        rep.max_omega = std::max(rep.max_omega, bin.omega);
        rep.linear_growth_constant = std::max(rep.linear_growth_constant, bin.omega / (1.0 + bin.t_hi));
    }

    // Lower-edge grid t > 0 shared by the expanding and uncollapsed verdicts.
    const double expand_level = std::max(static_cast<double>(params.n_max), rep.zero_tol);
    for (const auto& bin : prof.bins) {
        if (bin.t_lo <= 0.0 || !bin.rho) continue;
        if (!rep.uncollapsed && *bin.rho > rep.zero_tol) {
            rep.uncollapsed = true;
            rep.uncollapsed_witness = bin.t_lo;
        }
        if (!rep.expanding_at_scale && *bin.rho > expand_level) {
            rep.expanding_at_scale = true;
            rep.expanding_witness = bin.t_lo;
        }
    }
    for (const auto& bin : prof.bins) {
        if (bin.t_lo <= 0.0 || !bin.rho_bar) continue;
        if (*bin.rho_bar > rep.zero_tol) {
            rep.almost_uncollapsed = true;
            rep.almost_uncollapsed_witness = bin.t_lo;
            break;
        }
    }

    // Solvency: smallest observed R with every pair in [R, R + n] above n.
    for (int n = 1; n <= params.n_max; ++n) {
        std::deque<std::size_t> window;  // indices with increasing image values
        std::size_t j = 0;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            if (i > 0 && pairs[i].source == pairs[i - 1].source) continue;
            const double R = pairs[i].source;
            while (!window.empty() && window.front() < i) window.pop_front();
            while (j < pairs.size() && pairs[j].source <= R + n) {
                while (!window.empty() && pairs[window.back()].image >= pairs[j].image) window.pop_back();
                window.push_back(j);
                ++j;
            }
            if (!window.empty() && pairs[window.front()].image > n) {
                rep.solvent_at_scale.push_back({n, R});
                break;
            }
        }
    }
    rep.solvent = rep.solvent_at_scale.size() == static_cast<std::size_t>(params.n_max);

    check_taxonomy_arrows(rep);
    return rep;
}

std::vector<std::size_t> extract_net(const PointCloud& cloud, double delta) {
    if (!(delta > 0.0)) throw InputError("extract_net: delta must be positive");
    std::vector<std::size_t> net;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        bool separated = true;
        for (auto s : net) {
            if (cloud.distance(i, s) < delta) {
                separated = false;
                break;
            }
        }
        if (separated) net.push_back(i);
    }
    return net;
}

std::vector<std::size_t> extract_net(const FiniteMetricSpace& space, double delta) {
    auto shared = std::make_shared<const FiniteMetricSpace>(space);
    std::vector<std::size_t> all(space.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return extract_net(PointCloud::in_space(shared, std::move(all)), delta);
}

NetTransferReport net_transfer_check(const SampledMap& full_map, std::span<const std::size_t> net,
                                     double delta, int n, double R) {
    if (!(delta > 0.0)) throw InputError("net transfer: delta must be positive");
    if (net.empty()) throw InputError("net transfer: empty net");
    const auto& src = full_map.source();
    for (std::size_t i = 0; i < full_map.size(); ++i) {
        double d = kInf;
        for (auto s : net) d = std::min(d, src.distance(i, s));
        if (!(d < delta)) {
            std::ostringstream os;
            os << "net transfer: net is not delta-dense (point " << i << " at distance " << d << ")";
            throw InputError(os.str());
        }
    }

    NetTransferReport rep;
    const auto pairs = pair_distances(full_map);
    rep.omega_delta = expansion_modulus(pairs, delta);

    const double lo = R - 2.0 * delta;
    const double hi = R + n + 2.0 * delta;
    const double need = n + 2.0 * rep.omega_delta;
    // Two full points may share their nearest net point; that degenerate pair
    // sits at distance 0 and can only be excluded by the window itself.
    rep.hypothesis = lo > 0.0;
    for (std::size_t a = 0; a < net.size(); ++a) {
        for (std::size_t b = a + 1; b < net.size(); ++b) {
            const double d = full_map.source_distance(net[a], net[b]);
            if (d < lo || d > hi) continue;
            ++rep.net_pairs_in_window;
            if (!(full_map.image_distance(net[a], net[b]) > need)) rep.hypothesis = false;
        }
    }

    rep.conclusion = true;
    for (const auto& p : pairs) {
        if (p.source < R || p.source > R + n) continue;
        ++rep.full_pairs_in_window;
        if (!(p.image > n)) rep.conclusion = false;
    }

    if (rep.hypothesis && !rep.conclusion)
        throw ViolationError("net transfer: hypothesis holds on the net but the conclusion fails");
    return rep;
}

}  // namespace embedlab
