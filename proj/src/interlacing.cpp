#include "embedlab/interlacing.hpp"

#include "embedlab/error.hpp"
#include "embedlab/parallel.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>

namespace embedlab {

namespace {

// Calls fn on every r-subset of pool (ascending); stops early when fn returns false.
bool for_each_combination(std::span<const int> pool, int r, const std::function<bool(const std::vector<int>&)>& fn) {
    std::vector<int> pick;
    pick.reserve(static_cast<std::size_t>(r));
    std::function<bool(std::size_t)> rec = [&](std::size_t start) -> bool {
        if (static_cast<int>(pick.size()) == r) return fn(pick);
        const std::size_t need = static_cast<std::size_t>(r) - pick.size();
        for (std::size_t i = start; i + need <= pool.size(); ++i) {
            pick.push_back(pool[i]);
            if (!rec(i + 1)) return false;
            pick.pop_back();
        }
        return true;
    };
    return rec(0);
}

}  // namespace

std::uint64_t binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t c = 1;
    for (int i = 1; i <= k; ++i) {
        const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
        if (c > std::numeric_limits<std::uint64_t>::max() / num) throw BudgetError("budget: binomial overflow");
        c = c * num / static_cast<std::uint64_t>(i);
    }
    return c;
}

KSubset::KSubset(std::vector<int> elements, int ground) : elems_(std::move(elements)) {
    if (elems_.empty()) throw InputError("k-subset: empty");
    for (std::size_t i = 0; i < elems_.size(); ++i) {
        if (elems_[i] < 1 || elems_[i] > ground) throw InputError("k-subset: element outside [1, N]");
        if (i > 0 && elems_[i] <= elems_[i - 1]) throw InputError("k-subset: elements must be strictly increasing");
    }
}

std::uint64_t KSubset::colex_rank() const {
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < elems_.size(); ++i) r += binomial(elems_[i] - 1, static_cast<int>(i) + 1);
    return r;
}

KSubset KSubset::from_colex(std::uint64_t rank, int k, int ground) {
    if (rank >= binomial(ground, k)) throw InputError("k-subset: colex rank out of range");
    std::vector<int> e(static_cast<std::size_t>(k));
    int hi = ground;
    for (int i = k; i >= 1; --i) {
        int a = hi;
        while (binomial(a - 1, i) > rank) --a;
        e[static_cast<std::size_t>(i - 1)] = a;
        rank -= binomial(a - 1, i);
        hi = a - 1;
    }
    return KSubset(std::move(e), ground);
}

bool interlaces(const KSubset& a, const KSubset& b) {
    if (a.k() != b.k()) throw InputError("interlaces: subsets have different sizes");
    auto chain = [](const KSubset& x, const KSubset& y) {
        for (std::size_t i = 0; i < x.elements().size(); ++i) {
            if (x[i] > y[i]) return false;
            if (i + 1 < x.elements().size() && y[i] > x[i + 1]) return false;
        }
        return true;
    };
    return chain(a, b) || chain(b, a);
}

InterlacingGraph::InterlacingGraph(int k, int ground) : k_(k), ground_(ground) {
    if (k < 1) throw InputError("interlacing graph: k must be >= 1");
    if (ground < k) throw InputError("interlacing graph: need N >= k");
    const std::uint64_t count = binomial(ground, k);
    if (count > 100'000) throw BudgetError("budget: interlacing graph too large");
    vertices_.reserve(count);
    for (std::uint64_t r = 0; r < count; ++r) vertices_.push_back(KSubset::from_colex(r, k, ground));
    adj_.resize(count);
    parallel::for_blocks(count, [&](std::size_t a) {
        for (std::size_t b = 0; b < count; ++b)
            if (a != b && interlaces(vertices_[a], vertices_[b])) adj_[a].push_back(static_cast<std::uint32_t>(b));
    });
}

bool InterlacingGraph::adjacent(std::size_t a, std::size_t b) const {
    return std::binary_search(adj_[a].begin(), adj_[a].end(), static_cast<std::uint32_t>(b));
}

const std::vector<std::int16_t>& InterlacingGraph::all_pairs() const {
    if (!dist_.empty()) return dist_;
    const std::size_t n = size();
    std::vector<std::int16_t> dist(n * n, -1);
    parallel::for_blocks(n, [&](std::size_t src) {
        std::int16_t* row = dist.data() + src * n;
        std::vector<std::uint32_t> frontier{static_cast<std::uint32_t>(src)};
        row[src] = 0;
        std::int16_t level = 0;
        while (!frontier.empty()) {
            ++level;
            std::vector<std::uint32_t> next;
            for (auto v : frontier)
                for (auto w : adj_[v])
                    if (row[w] < 0) {
                        row[w] = level;
                        next.push_back(w);
                    }
            frontier = std::move(next);
        }
    });
    dist_ = std::move(dist);
    return dist_;
}

int InterlacingGraph::distance(std::size_t a, std::size_t b) const {
    const int d = all_pairs()[a * size() + b];
    if (d < 0)
        throw DomainError("unreachable: no path between vertices " + std::to_string(a) + " and " + std::to_string(b));
    return d;
}

int InterlacingGraph::distance(const KSubset& a, const KSubset& b) const {
    if (a.k() != k_ || b.k() != k_ || a.back() > ground_ || b.back() > ground_)
        throw InputError("interlacing graph: subset is not a vertex");
    return distance(a.colex_rank(), b.colex_rank());
}

int InterlacingGraph::eccentricity(std::size_t v) const {
    int e = 0;
    for (std::size_t w = 0; w < size(); ++w) e = std::max(e, distance(v, w));
    return e;
}

int InterlacingGraph::diameter() const {
    int d = 0;
    for (std::size_t v = 0; v < size(); ++v) d = std::max(d, eccentricity(v));
    return d;
}

int PropertyQInstance::default_subset_size(int k, int ground) { return std::max(2 * k, (ground + 1) / 2); }

void PropertyQInstance::validate() const {
    if (k < 1) throw InputError("property Q: k must be >= 1");
    if (ground < k) throw InputError("property Q: need N >= k");
    if (subset_size < 2 * k) throw InputError("property Q: subset size s must be >= 2k");
    if (!(epsilon >= 0.0) || !(delta >= 0.0)) throw InputError("property Q: epsilon and delta must be nonnegative");
    if (!target) throw InputError("property Q: target space missing");
    if (f.size() != binomial(ground, k)) throw InputError("property Q: f must have C(N, k) values");
    for (auto v : f)
        if (v >= target->size()) throw InputError("property Q: value outside target");
}

double PropertyQInstance::value_distance(const KSubset& a, const KSubset& b) const {
    return (*target)(f[a.colex_rank()], f[b.colex_rank()]);
}

bool subset_is_good(const PropertyQInstance& inst, const std::vector<int>& subset) {
    bool good = true;
    for_each_combination(subset, inst.k, [&](const std::vector<int>& a) {
        const KSubset ka(a, inst.ground);
        for_each_combination(subset, inst.k, [&](const std::vector<int>& b) {
            if (a.back() < b.front() && inst.value_distance(ka, KSubset(b, inst.ground)) > inst.epsilon) good = false;
            return good;
        });
        return good;
    });
    return good;
}

PropertyQVerdict property_q_test(const PropertyQInstance& inst, std::uint64_t node_budget) {
    inst.validate();
    PropertyQVerdict v;
    const auto count = inst.f.size();
    std::vector<KSubset> verts;
    verts.reserve(count);
    for (std::uint64_t r = 0; r < count; ++r) verts.push_back(KSubset::from_colex(r, inst.k, inst.ground));
    for (std::size_t a = 0; a < count; ++a)
        for (std::size_t b = a + 1; b < count; ++b)
            if (interlaces(verts[a], verts[b]))
                v.omega_1 = std::max(v.omega_1, (*inst.target)(inst.f[a], inst.f[b]));
    v.lipschitz_ok = v.omega_1 <= inst.delta;

    const int N = inst.ground;
    const int s = inst.subset_size;
    const int k = inst.k;
    std::vector<int> chosen;
    bool aborted = false;
    bool found = false;

    // Pairs created by appending e: e is then the top element of the later subset.
    auto compatible = [&](int e) {
        const std::span<const int> pool(chosen);
        return for_each_combination(pool, k - 1, [&](const std::vector<int>& rest) {
            std::vector<int> later = rest;
            later.push_back(e);
            const KSubset m(later, N);
            const auto below = static_cast<std::size_t>(
                std::lower_bound(chosen.begin(), chosen.end(), later.front()) - chosen.begin());
            return for_each_combination(pool.first(below), k, [&](const std::vector<int>& earlier) {
                return inst.value_distance(KSubset(earlier, N), m) <= inst.epsilon;
            });
        });
    };

    std::function<void(int)> dfs = [&](int next) {
        for (int e = next; e <= N && !found && !aborted; ++e) {
            if (static_cast<int>(chosen.size()) + (N - e + 1) < s) return;
            if (++v.nodes > node_budget) {
                aborted = true;
                return;
            }
            if (!compatible(e)) continue;
            chosen.push_back(e);
            if (static_cast<int>(chosen.size()) >= s) {
                found = true;
                return;
            }
            dfs(e + 1);
            if (!found) chosen.pop_back();
        }
    };
    dfs(1);

    if (found) {
        std::vector<int> w = chosen;
        for (int e = 1; e <= N; ++e) {
            if (std::binary_search(w.begin(), w.end(), e)) continue;
            auto trial = w;
            trial.insert(std::upper_bound(trial.begin(), trial.end(), e), e);
            if (subset_is_good(inst, trial)) w = std::move(trial);
        }
        v.witness = std::move(w);
    }
    v.exhausted = !aborted;
    return v;
}

std::optional<double> empirical_delta_margin(const std::vector<PropertyQInstance>& batch, std::vector<double> grid) {
    std::vector<PropertyQVerdict> verdicts(batch.size());
    parallel::for_blocks(batch.size(), [&](std::size_t i) { verdicts[i] = property_q_test(batch[i]); });
    std::sort(grid.begin(), grid.end());
    std::optional<double> best;
    for (double delta : grid) {
        const bool ok = std::all_of(verdicts.begin(), verdicts.end(), [&](const PropertyQVerdict& v) {
            return v.omega_1 > delta || (v.exhausted && v.witness.has_value());
        });
        if (!ok) break;
        best = delta;
    }
    return best;
}

}  // namespace embedlab
