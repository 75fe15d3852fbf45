#include "embedlab/amplify.hpp"

#include "embedlab/error.hpp"
#include "embedlab/moduli.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace embedlab {

Aggregation parse_aggregation(const std::string& name) {
    if (name == "l2") return Aggregation::L2;
    if (name == "l1") return Aggregation::L1;
    if (name == "sup") return Aggregation::Sup;
    throw InputError("aggregation must be one of l2, l1, sup");
}

std::string aggregation_name(Aggregation a) {
    switch (a) {
        case Aggregation::L1:
            return "l1";
        case Aggregation::Sup:
            return "sup";
        case Aggregation::L2:
            break;
    }
    return "l2";
}

std::vector<double> AmplificationConfig::eps_from_lipschitz(double lipschitz, int n_max, double safety) {
    if (!(lipschitz > 0.0)) throw InputError("amplify: Lipschitz constant must be positive");
    if (!(safety > 0.0 && safety < 1.0)) throw InputError("amplify: safety factor must lie in (0, 1)");
    std::vector<double> eps(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) eps[static_cast<std::size_t>(n - 1)] = safety / (lipschitz * n * std::ldexp(1.0, n));
    return eps;
}

std::vector<EpsCertificate> certify_eps(const AmplificationConfig& cfg, const SampledMap& phi_sample,
                                        std::optional<double> lipschitz) {
    const auto pairs = pair_distances(phi_sample);
    std::vector<EpsCertificate> out;
    for (int n = 1; n <= cfg.n_max(); ++n) {
        EpsCertificate c;
        c.n = n;
        c.eps = cfg.eps[static_cast<std::size_t>(n - 1)];
        c.limit = 1.0 / (n * std::ldexp(1.0, n));
        if (!(c.eps > 0.0)) throw InputError("amplify: eps_n must be positive");
        c.sampled_omega = expansion_modulus(pairs, c.eps);
        c.ok = c.sampled_omega < c.limit;
        if (lipschitz) {
            c.lipschitz_bound = *lipschitz * c.eps;
            c.ok = c.ok && *c.lipschitz_bound < c.limit;
        }
        if (!c.ok) {
            std::ostringstream os;
            os << "amplify: eps_" << n << " = " << c.eps << " does not certify omega < " << c.limit;
            throw ViolationError(os.str());
        }
        out.push_back(c);
    }
    return out;
}

std::vector<NormedPoint> amplify(const AmplificationConfig& cfg, const NormedPoint& x, int truncation) {
    if (truncation < 1 || truncation > cfg.n_max())
        throw InputError("amplify: truncation must lie in [1, n_max]");
    if (!cfg.phi) throw InputError("amplify: base map missing");
    std::optional<NormedPoint> origin;
    if (cfg.recenter) origin = cfg.phi(x.scaled(0.0));

    std::vector<NormedPoint> blocks;
    blocks.reserve(static_cast<std::size_t>(truncation));
    for (int n = 1; n <= truncation; ++n) {
        const double e = cfg.eps[static_cast<std::size_t>(n - 1)];
        NormedPoint v = cfg.phi(x.scaled(e / n));
        if (origin) {
            if (v.dim() != origin->dim()) throw InputError("amplify: base map changed dimension");
            for (std::size_t c = 0; c < v.dim(); ++c) v.coords[c] -= origin->coords[c];
        }
        blocks.push_back(v.scaled(static_cast<double>(n)));
    }
    return blocks;
}

double aggregated_distance(const std::vector<NormedPoint>& a, const std::vector<NormedPoint>& b, Aggregation agg) {
    if (a.size() != b.size()) throw InputError("amplify: block counts differ");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = distance(a[i], b[i]);
        switch (agg) {
            case Aggregation::L2:
                acc += d * d;
                break;
            case Aggregation::L1:
                acc += d;
                break;
            case Aggregation::Sup:
                acc = std::max(acc, d);
                break;
        }
    }
    return agg == Aggregation::L2 ? std::sqrt(acc) : acc;
}

}  // namespace embedlab
