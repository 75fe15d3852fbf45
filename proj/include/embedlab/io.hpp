#pragma once

#include "embedlab/amplify.hpp"
#include "embedlab/cocycle.hpp"
#include "embedlab/cotype.hpp"
#include "embedlab/error.hpp"
#include "embedlab/interlacing.hpp"
#include "embedlab/kernel.hpp"
#include "embedlab/lift.hpp"
#include "embedlab/metric.hpp"
#include "embedlab/moduli.hpp"
#include "embedlab/mq_search.hpp"

#include <json.hpp>

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <type_traits>

namespace embedlab::io {

using Json = nlohmann::ordered_json;

/// Reads fields of one JSON object and rejects any field left unread.
class ObjectReader {
public:
    ObjectReader(const Json& obj, std::string path);

    [[nodiscard]] bool has(const std::string& key) const { return obj_.contains(key); }
    [[nodiscard]] const Json& at(const std::string& key);
    [[nodiscard]] const Json* find(const std::string& key);

    template <class T>
    [[nodiscard]] T get(const std::string& key) {
        return convert<T>(at(key), key);
    }
    template <class T>
    [[nodiscard]] T get_or(const std::string& key, T fallback) {
        const Json* v = find(key);
        return v ? convert<T>(*v, key) : fallback;
    }
    template <class T>
    [[nodiscard]] std::optional<T> get_opt(const std::string& key) {
        const Json* v = find(key);
        if (!v) return std::nullopt;
        return convert<T>(*v, key);
    }

    [[nodiscard]] std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    // Throws InputError naming the first unknown field.
    void finish() const;

private:
    template <class T>
    T convert(const Json& v, const std::string& key) const {
        if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
            if (!v.is_number_unsigned()) throw InputError("field '" + field(key) + "': expected a nonnegative integer");
        }
        try {
            return v.get<T>();
        } catch (const nlohmann::json::exception& e) {
            throw InputError("field '" + field(key) + "': " + e.what());
        }
    }

    const Json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

// Parses text; parse errors become InputError with line and column. Empty text is an error.
[[nodiscard]] Json parse_json(const std::string& text, const std::string& source_name);
[[nodiscard]] Json read_json_file(const std::string& path);

// "l1", "l2", "linf", "euclidean" or "l<r>" for a real r >= 1.
[[nodiscard]] Norm parse_norm(const std::string& name);
[[nodiscard]] Rational parse_rational(const Json& v, const std::string& field);

/// {"labels": [...], "dist": [[...]]}, {"kind": "path"|"discrete", "size": n}
/// or {"kind": "real", "points": [...]}.
[[nodiscard]] FiniteMetricSpace parse_metric_space(const Json& v, const std::string& path);
/// {"norm": ..., "points": [...]} or {"space": <metric space>, "indices": [...]}.
[[nodiscard]] PointCloud parse_point_cloud(const Json& v, const std::string& path);
[[nodiscard]] SampledMap parse_sampled_map(const Json& v, const std::string& path);
/// {"knots": [...], "values": [[...]], "norm": ...}.
[[nodiscard]] InterpolatedMap parse_interpolated_map(const Json& v, const std::string& path);
/// {"size": n, "packed": [...], "kind": ...}, {"matrix": [[...]], "kind": ...} or {"points": [[...]]}.
[[nodiscard]] KernelMatrix parse_kernel(const Json& v, const std::string& path);

[[nodiscard]] Json to_json(const FiniteMetricSpace& s);
[[nodiscard]] Json to_json(const ModulusProfile& p);
[[nodiscard]] Json to_json(const TaxonomyReport& r);
[[nodiscard]] Json to_json(const NetTransferReport& r);
[[nodiscard]] Json to_json(const Rational& t, const CocycleValue& v);
[[nodiscard]] Json to_json(const CollapseStep& s);
[[nodiscard]] Json to_json(const CocycleCheckReport& r);
[[nodiscard]] Json to_json(const WitnessResult& r);
[[nodiscard]] Json to_json(const EpsCertificate& c);
[[nodiscard]] Json to_json(const LiftCheckReport& r);
[[nodiscard]] Json to_json(const CotypeReport& r);
[[nodiscard]] Json to_json(const MqCandidate& c);
[[nodiscard]] Json to_json(const MqExhaustiveResult& r);
[[nodiscard]] Json to_json(const MqSearchResult& r);
[[nodiscard]] Json to_json(const LowerBoundTable& t);
[[nodiscard]] Json to_json(const PropertyQVerdict& v, int subset_size);
[[nodiscard]] Json to_json(const KernelMatrix& k);
[[nodiscard]] Json to_json(const DefinitenessResult& r);
[[nodiscard]] Json to_json(const EmbeddingResult& r);
[[nodiscard]] Json to_json(const HolderReport& r);
[[nodiscard]] Json to_json(const NormedPoint& p);

// Shortest round-trip decimal form; "NA" for empty optionals in CSV.
[[nodiscard]] std::string format_double(double v);

// t_lo,t_hi,omega,rho,rho_bar,empty_flag
[[nodiscard]] std::string profile_csv(const ModulusProfile& p);
// k,norm,paper_bound
[[nodiscard]] std::string collapse_csv(std::span<const CollapseStep> steps);
// n,m,bound,method,samples,lhs,rhs_integral,ratio,threshold,analytic_ratio,status
[[nodiscard]] std::string lower_bound_csv(const LowerBoundTable& t);

}  // namespace embedlab::io
