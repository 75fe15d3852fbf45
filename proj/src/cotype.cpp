#include "embedlab/cotype.hpp"

#include "embedlab/error.hpp"
#include "embedlab/parallel.hpp"
#include "embedlab/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace embedlab {

namespace {

constexpr std::uint64_t kMaxLattice = std::uint64_t{1} << 62;

inline double power(double d, double q) {
    if (q == 2.0) return d * d;
    if (q == 1.0) return d;
    return std::pow(d, q);
}

std::uint64_t pow3(int n) {
    std::uint64_t p = 1;
    for (int i = 0; i < n; ++i) {
        if (p > kMaxLattice / 3) throw BudgetError("budget: 3^n overflows");
        p *= 3;
    }
    return p;
}

// Index of `base` shifted by `step` with wraparound, given base coordinates.
std::uint64_t shifted_index(const Torus& t, std::uint64_t base, std::span<const int> coords, std::span<const int> step) {
    std::int64_t idx = static_cast<std::int64_t>(base);
    const int m = t.modulus();
    for (int j = 0; j < t.dim(); ++j) {
        if (step[static_cast<std::size_t>(j)] == 0) continue;
        const int xj = coords[static_cast<std::size_t>(j)];
        const int yj = ((xj + step[static_cast<std::size_t>(j)]) % m + m) % m;
        idx += static_cast<std::int64_t>(yj - xj) * static_cast<std::int64_t>(t.stride(j));
    }
    return static_cast<std::uint64_t>(idx);
}

void increment(std::span<int> coords, int m) {
    for (std::size_t j = coords.size(); j-- > 0;) {
        if (++coords[j] < m) return;
        coords[j] = 0;
    }
}

struct SideSums {
    double lhs = 0.0;  // sum_j sum_x d^q
    double rhs = 0.0;  // sum_eps sum_x d^q
};

SideSums exhaustive_sums(const LatticeFunction& f, double q, bool want_lhs, bool want_rhs) {
    const Torus& t = f.torus();
    const std::uint64_t total = t.size();
    const int n = t.dim();
    const int half = t.modulus() / 2;
    const auto steps = t.unit_steps();
    std::vector<std::vector<int>> halves(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
    for (int j = 0; j < n; ++j) halves[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] = half;

    const std::size_t blocks = parallel::block_count(total);
    std::vector<SideSums> partial(blocks);
    parallel::for_blocks(blocks, [&](std::size_t b) {
        const std::uint64_t lo = b * parallel::kBlockSize;
        const std::uint64_t hi = std::min<std::uint64_t>(total, lo + parallel::kBlockSize);
        std::vector<int> x(static_cast<std::size_t>(n));
        std::vector<int> y(static_cast<std::size_t>(n));
        t.coords(lo, x);
        SideSums s;
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            if (f.is_dense()) {
                if (want_lhs)
                    for (const auto& h : halves) s.lhs += power(f.distance_at(shifted_index(t, idx, x, h), idx), q);
                if (want_rhs)
                    for (const auto& e : steps) s.rhs += power(f.distance_at(shifted_index(t, idx, x, e), idx), q);
            } else {
                auto shift_into = [&](std::span<const int> step) {
                    for (int j = 0; j < n; ++j) {
                        const auto u = static_cast<std::size_t>(j);
                        y[u] = ((x[u] + step[u]) % t.modulus() + t.modulus()) % t.modulus();
                    }
                };
                if (want_lhs)
                    for (const auto& h : halves) {
                        shift_into(h);
                        s.lhs += power(f.distance(y, x), q);
                    }
                if (want_rhs)
                    for (const auto& e : steps) {
                        shift_into(e);
                        s.rhs += power(f.distance(y, x), q);
                    }
            }
            increment(x, t.modulus());
        }
        partial[b] = s;
    });
    SideSums out;
    for (const auto& p : partial) {
        out.lhs += p.lhs;
        out.rhs += p.rhs;
    }
    return out;
}

struct Moments {
    double sum = 0.0;
    double sum_sq = 0.0;
};

}  // namespace

Torus::Torus(int n, int m) : n_(n), m_(m) {
    if (n < 1) throw InputError("torus: n must be >= 1");
    if (m < 2 || m % 2 != 0) throw InputError("torus: m must be even and >= 2");
    strides_.assign(static_cast<std::size_t>(n), 1);
    for (int j = n - 2; j >= 0; --j) {
        const auto next = strides_[static_cast<std::size_t>(j + 1)];
        if (next > kMaxLattice / static_cast<std::uint64_t>(m)) {
            fits_ = false;
            break;
        }
        strides_[static_cast<std::size_t>(j)] = next * static_cast<std::uint64_t>(m);
    }
    if (fits_ && strides_[0] > kMaxLattice / static_cast<std::uint64_t>(m)) fits_ = false;
}

std::uint64_t Torus::size() const {
    if (!fits_) throw BudgetError("budget: m^n does not fit the index range");
    return strides_[0] * static_cast<std::uint64_t>(m_);
}

std::uint64_t Torus::index(std::span<const int> x) const {
    if (!fits_) throw BudgetError("budget: m^n does not fit the index range");
    std::uint64_t idx = 0;
    for (int j = 0; j < n_; ++j) {
        const int xj = ((x[static_cast<std::size_t>(j)] % m_) + m_) % m_;
        idx += static_cast<std::uint64_t>(xj) * strides_[static_cast<std::size_t>(j)];
    }
    return idx;
}

void Torus::coords(std::uint64_t index, std::span<int> out) const {
    for (int j = n_ - 1; j >= 0; --j) {
        out[static_cast<std::size_t>(j)] = static_cast<int>(index % static_cast<std::uint64_t>(m_));
        index /= static_cast<std::uint64_t>(m_);
    }
}

std::vector<std::vector<int>> Torus::unit_steps() const {
    std::vector<std::vector<int>> out;
    std::vector<int> e(static_cast<std::size_t>(n_), -1);
    for (;;) {
        if (std::any_of(e.begin(), e.end(), [](int v) { return v != 0; })) out.push_back(e);
        std::size_t j = e.size();
        while (j-- > 0) {
            if (++e[j] <= 1) break;
            e[j] = -1;
        }
        if (j == static_cast<std::size_t>(-1)) break;
    }
    return out;
}

LatticeFunction LatticeFunction::finite(Torus torus, std::shared_ptr<const FiniteMetricSpace> space,
                                        std::vector<std::uint32_t> labels) {
    if (!space) throw InputError("lattice function: null target");
    if (labels.size() != torus.size()) throw InputError("lattice function: expected m^n values");
    for (auto l : labels)
        if (l >= space->size()) throw InputError("lattice function: label outside target");
    LatticeFunction f(Kind::Finite, std::move(torus));
    f.space_ = std::move(space);
    f.labels_ = std::move(labels);
    return f;
}

LatticeFunction LatticeFunction::normed(Torus torus, std::vector<NormedPoint> values) {
    if (values.size() != torus.size()) throw InputError("lattice function: expected m^n values");
    for (const auto& v : values)
        if (v.dim() != values.front().dim() || !(v.norm == values.front().norm))
            throw InputError("lattice function: inconsistent target points");
    LatticeFunction f(Kind::Normed, std::move(torus));
    f.values_ = std::move(values);
    return f;
}

LatticeFunction LatticeFunction::lazy(Torus torus, Evaluator eval) {
    if (!eval) throw InputError("lattice function: missing evaluator");
    LatticeFunction f(Kind::Lazy, std::move(torus));
    f.eval_ = std::move(eval);
    return f;
}

double LatticeFunction::distance_at(std::uint64_t a, std::uint64_t b) const {
    switch (kind_) {
        case Kind::Finite:
            return (*space_)(labels_[a], labels_[b]);
        case Kind::Normed:
            return embedlab::distance(values_[a], values_[b]);
        case Kind::Lazy:
            break;
    }
    std::vector<int> x(static_cast<std::size_t>(torus_.dim()));
    std::vector<int> y(x.size());
    torus_.coords(a, x);
    torus_.coords(b, y);
    return distance(x, y);
}

double LatticeFunction::distance(std::span<const int> x, std::span<const int> y) const {
    if (kind_ == Kind::Lazy) return embedlab::distance(eval_(x), eval_(y));
    return distance_at(torus_.index(x), torus_.index(y));
}

LatticeFunction LatticeFunction::translated(std::span<const int> shift) const {
    if (!is_dense()) throw InputError("lattice function: translation needs a dense function");
    const std::uint64_t total = torus_.size();
    std::vector<int> x(static_cast<std::size_t>(torus_.dim()));
    std::vector<std::uint64_t> source(total);
    for (std::uint64_t i = 0; i < total; ++i) {
        torus_.coords(i, x);
        for (std::size_t j = 0; j < x.size(); ++j) x[j] += shift[j];
        source[i] = torus_.index(x);
    }
    LatticeFunction g(kind_, torus_);
    g.space_ = space_;
    if (kind_ == Kind::Finite) {
        g.labels_.resize(total);
        for (std::uint64_t i = 0; i < total; ++i) g.labels_[i] = labels_[source[i]];
    } else {
        g.values_.reserve(total);
        for (std::uint64_t i = 0; i < total; ++i) g.values_.push_back(values_[source[i]]);
    }
    return g;
}

LatticeFunction LatticeFunction::permuted(std::span<const int> perm) const {
    if (!is_dense()) throw InputError("lattice function: permutation needs a dense function");
    const std::uint64_t total = torus_.size();
    std::vector<int> x(static_cast<std::size_t>(torus_.dim()));
    std::vector<int> y(x.size());
    std::vector<std::uint64_t> source(total);
    for (std::uint64_t i = 0; i < total; ++i) {
        torus_.coords(i, x);
        for (std::size_t j = 0; j < x.size(); ++j) y[j] = x[static_cast<std::size_t>(perm[j])];
        source[i] = torus_.index(y);
    }
    LatticeFunction g(kind_, torus_);
    g.space_ = space_;
    if (kind_ == Kind::Finite) {
        g.labels_.resize(total);
        for (std::uint64_t i = 0; i < total; ++i) g.labels_[i] = labels_[source[i]];
    } else {
        g.values_.reserve(total);
        for (std::uint64_t i = 0; i < total; ++i) g.values_.push_back(values_[source[i]]);
    }
    return g;
}

LatticeFunction LatticeFunction::scaled(double lambda) const {
    if (kind_ != Kind::Normed) throw InputError("lattice function: scaling needs normed values");
    LatticeFunction g(kind_, torus_);
    g.values_.reserve(values_.size());
    for (const auto& v : values_) g.values_.push_back(v.scaled(lambda));
    return g;
}

void CotypeInstance::validate() const {
    if (n < 1) throw InputError("cotype: n must be >= 1");
    if (m < 2 || m % 2 != 0) throw InputError("cotype: m must be even and >= 2");
    if (!(q >= 1.0)) throw InputError("cotype: q must be >= 1");
    if (!(gamma > 0.0)) throw InputError("cotype: gamma must be positive");
}

double CotypeInstance::threshold() const { return std::pow(gamma, q) * std::pow(static_cast<double>(m), q); }

std::string method_name(CotypeMethod m) { return m == CotypeMethod::Exhaustive ? "exhaustive" : "monte-carlo"; }

std::uint64_t exhaustive_summands(const Torus& torus) {
    const std::uint64_t size = torus.size();
    const std::uint64_t per = static_cast<std::uint64_t>(torus.dim()) + pow3(torus.dim());
    if (size > kMaxLattice / per) throw BudgetError("budget: summand count overflows");
    return size * per;
}

double cotype_ratio(double lhs, double rhs) {
    if (rhs > 0.0) return lhs / rhs;
    return lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

namespace {

void check_shape(const LatticeFunction& f, const CotypeInstance& inst) {
    inst.validate();
    if (f.torus().dim() != inst.n || f.torus().modulus() != inst.m)
        throw InputError("cotype: lattice function does not live on Z_m^n of the instance");
}

}  // namespace

double cotype_lhs(const LatticeFunction& f, const CotypeInstance& inst) {
    check_shape(f, inst);
    const auto s = exhaustive_sums(f, inst.q, true, false);
    return s.lhs / static_cast<double>(f.torus().size());
}

double cotype_rhs_integral(const LatticeFunction& f, const CotypeInstance& inst) {
    check_shape(f, inst);
    const auto s = exhaustive_sums(f, inst.q, false, true);
    return s.rhs / (static_cast<double>(f.torus().size()) * static_cast<double>(pow3(inst.n)));
}

CotypeReport cotype_check(const LatticeFunction& f, const CotypeInstance& inst, const CotypeOptions& opts) {
    check_shape(f, inst);
    CotypeReport rep;
    rep.method = opts.method;
    rep.threshold = inst.threshold();

    if (opts.method == CotypeMethod::Exhaustive) {
        if (exhaustive_summands(f.torus()) > opts.budget)
            throw BudgetError("budget: exhaustive cotype evaluation exceeds the summand budget");
        const auto s = exhaustive_sums(f, inst.q, true, true);
        const double size = static_cast<double>(f.torus().size());
        rep.lhs = s.lhs / size;
        rep.rhs_integral = s.rhs / (size * static_cast<double>(pow3(inst.n)));
    } else {
        if (opts.samples < 2) throw InputError("cotype: monte-carlo needs at least 2 samples");
        const Torus& t = f.torus();
        const int n = t.dim();
        const int m = t.modulus();
        const std::size_t blocks = parallel::block_count(opts.samples);
        std::vector<Moments> lhs_parts(blocks);
        std::vector<Moments> rhs_parts(blocks);
        parallel::for_blocks(blocks, [&](std::size_t b) {
            auto rng = make_rng(opts.seed, b);
            const std::uint64_t lo = b * parallel::kBlockSize;
            const std::uint64_t hi = std::min<std::uint64_t>(opts.samples, lo + parallel::kBlockSize);
            std::vector<int> x(static_cast<std::size_t>(n));
            std::vector<int> y(x.size());
            Moments l;
            Moments r;
            for (std::uint64_t s = lo; s < hi; ++s) {
                for (auto& v : x) v = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(m)));
                // Half-period side: n * d(f(x + m/2 e_j), f(x))^q with j uniform.
                const auto j = static_cast<std::size_t>(uniform_below(rng, static_cast<std::uint64_t>(n)));
                y = x;
                y[j] = (y[j] + m / 2) % m;
                const double lv = n * power(f.distance(y, x), inst.q);
                l.sum += lv;
                l.sum_sq += lv * lv;
                // Unit-step side: eps uniform on {-1,0,1}^n, zero included.
                for (std::size_t c = 0; c < x.size(); ++c) {
                    const int e = static_cast<int>(uniform_below(rng, 3)) - 1;
                    y[c] = ((x[c] + e) % m + m) % m;
                }
                const double rv = power(f.distance(y, x), inst.q);
                r.sum += rv;
                r.sum_sq += rv * rv;
            }
            lhs_parts[b] = l;
            rhs_parts[b] = r;
        });
        auto finish = [&](const std::vector<Moments>& parts, double& mean, double& se) {
            Moments tot;
            for (const auto& p : parts) {
                tot.sum += p.sum;
                tot.sum_sq += p.sum_sq;
            }
            const double cnt = static_cast<double>(opts.samples);
            mean = tot.sum / cnt;
            const double var = std::max(0.0, (tot.sum_sq - cnt * mean * mean) / (cnt - 1.0));
            se = std::sqrt(var / cnt);
        };
        finish(lhs_parts, rep.lhs, rep.stderr_lhs);
        finish(rhs_parts, rep.rhs_integral, rep.stderr_rhs);
        rep.samples = opts.samples;
    }
    rep.ratio = cotype_ratio(rep.lhs, rep.rhs_integral);
    rep.holds = rep.lhs <= rep.threshold * rep.rhs_integral;
    return rep;
}

}  // namespace embedlab
