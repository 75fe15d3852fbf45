#include "embedlab/io.hpp"

#include "embedlab/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace embedlab::io {

namespace {

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::vector<double> real_vector(const Json& v, const std::string& field) {
    if (v.is_number()) return {v.get<double>()};
    if (!v.is_array()) throw InputError("field '" + field + "': expected a number or an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) throw InputError("field '" + field + "': expected numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

std::vector<std::vector<double>> real_rows(const Json& v, const std::string& field) {
    if (!v.is_array() || v.empty()) throw InputError("field '" + field + "': expected a non-empty array");
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < v.size(); ++i) rows.push_back(real_vector(v[i], field + "[" + std::to_string(i) + "]"));
    return rows;
}

std::string csv_opt(const std::optional<double>& v) { return v ? format_double(*v) : "NA"; }

}  // namespace

ObjectReader::ObjectReader(const Json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object())
        throw InputError("field '" + (path_.empty() ? std::string("<root>") : path_) + "': expected an object");
}

const Json& ObjectReader::at(const std::string& key) {
    if (!obj_.contains(key)) throw InputError("field '" + field(key) + "': missing");
    seen_.insert(key);
    return obj_.at(key);
}

const Json* ObjectReader::find(const std::string& key) {
    if (!obj_.contains(key)) return nullptr;
    seen_.insert(key);
    return &obj_.at(key);
}

void ObjectReader::finish() const {
    for (const auto& [key, value] : obj_.items())
        if (!seen_.contains(key)) throw InputError("field '" + field(key) + "': unknown field");
}

Json parse_json(const std::string& text, const std::string& source_name) {
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw InputError(source_name + ": empty input");
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // Byte offset to line/column.
        std::size_t line = 1;
        std::size_t col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw InputError(source_name + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str(), path);
}

Norm parse_norm(const std::string& name) {
    if (name == "euclidean") return Norm::euclidean();
    if (name == "linf" || name == "l_inf" || name == "inf") return Norm::linf();
    if (name.size() > 1 && name[0] == 'l') {
        double r = 0.0;
        const auto* first = name.data() + 1;
        const auto* last = name.data() + name.size();
        const auto res = std::from_chars(first, last, r);
        if (res.ec == std::errc() && res.ptr == last) return Norm::lr(r);
    }
    throw InputError("unknown norm '" + name + "'");
}

Rational parse_rational(const Json& v, const std::string& field) {
    try {
        if (v.is_number_integer()) return Rational(BigInt(v.get<std::int64_t>()));
        if (v.is_string()) return Rational::parse(v.get<std::string>());
    } catch (const InputError& e) {
        throw InputError("field '" + field + "': " + e.what());
    }
    throw InputError("field '" + field + "': expected an integer or a \"num/den\" string");
}

FiniteMetricSpace parse_metric_space(const Json& v, const std::string& path) {
    ObjectReader r(v, path);
    if (r.has("kind")) {
        const auto kind = r.get<std::string>("kind");
        if (kind == "path" || kind == "discrete") {
            const auto size = r.get<std::size_t>("size");
            r.finish();
            if (size == 0) throw InputError("field '" + r.field("size") + "': must be positive");
            return kind == "path" ? FiniteMetricSpace::path(size) : FiniteMetricSpace::discrete(size);
        }
        if (kind == "real") {
            const auto pts = real_vector(r.at("points"), r.field("points"));
            r.finish();
            return FiniteMetricSpace::real_points(pts);
        }
        throw InputError("field '" + r.field("kind") + "': unknown metric space kind '" + kind + "'");
    }
    const auto rows = real_rows(r.at("dist"), r.field("dist"));
    std::vector<std::string> labels;
    if (const Json* l = r.find("labels")) {
        try {
            labels = l->get<std::vector<std::string>>();
        } catch (const nlohmann::json::exception&) {
            throw InputError("field '" + r.field("labels") + "': expected strings");
        }
    } else {
        for (std::size_t i = 0; i < rows.size(); ++i) labels.push_back(std::to_string(i));
    }
    r.finish();
    try {
        return FiniteMetricSpace::from_rows(std::move(labels), rows);
    } catch (const InputError& e) {
        throw InputError("field '" + (path.empty() ? std::string("<root>") : path) + "': " + e.what());
    }
}

PointCloud parse_point_cloud(const Json& v, const std::string& path) {
    ObjectReader r(v, path);
    if (r.has("space")) {
        auto space = std::make_shared<const FiniteMetricSpace>(parse_metric_space(r.at("space"), r.field("space")));
        std::vector<std::size_t> idx;
        if (const Json* i = r.find("indices")) {
            idx = r.get<std::vector<std::size_t>>("indices");
            (void)i;
        } else {
            for (std::size_t k = 0; k < space->size(); ++k) idx.push_back(k);
        }
        r.finish();
        return PointCloud::in_space(std::move(space), std::move(idx));
    }
    const Norm norm = parse_norm(r.get_or<std::string>("norm", "euclidean"));
    const auto rows = real_rows(r.at("points"), r.field("points"));
    r.finish();
    std::vector<NormedPoint> pts;
    pts.reserve(rows.size());
    for (const auto& row : rows) pts.push_back(NormedPoint::real(row, norm));
    return PointCloud::normed(std::move(pts));
}

SampledMap parse_sampled_map(const Json& v, const std::string& path) {
    ObjectReader r(v, path);
    auto src = parse_point_cloud(r.at("source"), r.field("source"));
    auto img = parse_point_cloud(r.at("image"), r.field("image"));
    r.finish();
    return SampledMap(std::move(src), std::move(img));
}

InterpolatedMap parse_interpolated_map(const Json& v, const std::string& path) {
    ObjectReader r(v, path);
    const auto knots = real_vector(r.at("knots"), r.field("knots"));
    const auto values = real_rows(r.at("values"), r.field("values"));
    const Norm norm = parse_norm(r.get_or<std::string>("norm", "euclidean"));
    r.finish();
    return InterpolatedMap(knots, values, norm);
}

KernelMatrix parse_kernel(const Json& v, const std::string& path) {
    ObjectReader r(v, path);
    KernelKind kind = KernelKind::NegativeDefinite;
    if (const Json* k = r.find("kind")) {
        const auto name = k->is_string() ? k->get<std::string>() : std::string();
        if (name == "negative-definite") kind = KernelKind::NegativeDefinite;
        else if (name == "positive-definite") kind = KernelKind::PositiveDefinite;
        else throw InputError("field '" + r.field("kind") + "': expected negative-definite or positive-definite");
    }
    if (r.has("points")) {
        const auto rows = real_rows(r.at("points"), r.field("points"));
        r.finish();
        return KernelMatrix::squared_distances(std::span<const std::vector<double>>(rows));
    }
    if (r.has("matrix")) {
        const auto rows = real_rows(r.at("matrix"), r.field("matrix"));
        r.finish();
        Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.size()));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows.size()) throw InputError("field '" + r.field("matrix") + "': matrix must be square");
            for (std::size_t j = 0; j < rows.size(); ++j)
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
        return KernelMatrix::from_dense(m, kind);
    }
    const auto n = r.get<std::size_t>("size");
    const auto packed = real_vector(r.at("packed"), r.field("packed"));
    r.finish();
    return KernelMatrix(n, packed, kind);
}

Json to_json(const FiniteMetricSpace& s) {
    Json dist = Json::array();
    for (std::size_t i = 0; i < s.size(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < s.size(); ++j) row.push_back(s(i, j));
        dist.push_back(std::move(row));
    }
    return {{"labels", s.labels()}, {"dist", std::move(dist)}};
}

Json to_json(const ModulusProfile& p) {
    Json bins = Json::array();
    for (const auto& b : p.bins)
        bins.push_back({{"t_lo", b.t_lo},
                        {"t_hi", b.t_hi},
                        {"omega", b.omega},
                        {"rho", opt(b.rho)},
                        {"rho_bar", opt(b.rho_bar)},
                        {"pair_count", b.pair_count},
                        {"empty", b.empty()}});
    return {{"pair_count", p.pair_count}, {"max_image_distance", p.max_image_distance}, {"edges", p.edges},
            {"bins", std::move(bins)}};
}

Json to_json(const TaxonomyReport& r) {
    Json solved = Json::array();
    for (const auto& s : r.solvent_at_scale) solved.push_back({{"n", s.n}, {"R", s.R}});
    return {{"coarse_at_scale", r.coarse_at_scale},
            {"max_omega", r.max_omega},
            {"expanding_at_scale", r.expanding_at_scale},
            {"expanding_witness", opt(r.expanding_witness)},
            {"solvent", r.solvent},
            {"solvent_at_scale", std::move(solved)},
            {"uncollapsed", r.uncollapsed},
            {"uncollapsed_witness", opt(r.uncollapsed_witness)},
            {"almost_uncollapsed", r.almost_uncollapsed},
            {"almost_uncollapsed_witness", opt(r.almost_uncollapsed_witness)},
            {"linear_growth_constant", r.linear_growth_constant},
            {"zero_tol", r.zero_tol},
            {"bin_width", r.bin_width},
            {"n_max", r.n_max},
            {"profile", to_json(r.profile)}};
}

Json to_json(const NetTransferReport& r) {
    return {{"omega_delta", r.omega_delta},
            {"net_pairs_in_window", r.net_pairs_in_window},
            {"full_pairs_in_window", r.full_pairs_in_window},
            {"hypothesis", r.hypothesis},
            {"conclusion", r.conclusion}};
}

Json to_json(const Rational& t, const CocycleValue& v) {
    Json coords = Json::array();
    for (std::size_t i = 0; i < v.coords.size(); ++i) {
        const auto& p = v.phases[i];
        coords.push_back({{"n", i + 1},
                          {"phase", p.frac.str()},
                          {"theta", p.theta},
                          {"exact_zero", p.exact_zero},
                          {"flushed", p.flushed},
                          {"re", v.coords[i].real()},
                          {"im", v.coords[i].imag()},
                          {"magnitude", v.magnitudes[i]}});
    }
    return {{"t", t.str()}, {"norm", v.norm()}, {"norm_sq", v.norm_sq()}, {"flushed", v.flushed},
            {"coordinates", std::move(coords)}};
}

Json to_json(const CollapseStep& s) {
    return {{"k", s.k},
            {"norm", s.norm},
            {"norm_sq", s.norm_sq},
            {"bound_sq", s.bound_sq},
            {"paper_bound", std::sqrt(s.bound_sq)},
            {"within_bound", s.norm_sq <= s.bound_sq},
            {"low_coords_exact_zero", s.low_coords_exact_zero}};
}

Json to_json(const CocycleCheckReport& r) {
    Json collapse = Json::array();
    for (const auto& s : r.collapse) collapse.push_back(to_json(s));
    return {{"lipschitz_constant_sq", r.lipschitz_constant_sq},
            {"max_lipschitz_ratio", r.max_lipschitz_ratio},
            {"max_identity_residual", r.max_identity_residual},
            {"collapse", std::move(collapse)},
            {"collapse_strictly_decreasing", r.collapse_strictly_decreasing},
            {"violations", r.violations},
            {"ok", r.ok()}};
}

Json to_json(const WitnessResult& r) {
    return {{"t", r.t ? Json(r.t->str()) : Json(nullptr)},
            {"norm", r.norm},
            {"level", r.level},
            {"evaluations", r.evaluations}};
}

Json to_json(const EpsCertificate& c) {
    return {{"n", c.n},
            {"eps", c.eps},
            {"limit", c.limit},
            {"sampled_omega", c.sampled_omega},
            {"lipschitz_bound", opt(c.lipschitz_bound)},
            {"ok", c.ok}};
}

Json to_json(const LiftCheckReport& r) {
    return {{"lip_f", r.lip_f},
            {"lip_F", r.lip_F},
            {"lipschitz_ok", r.lipschitz_ok},
            {"t", r.t},
            {"rho_bar_t", r.rho_bar_t},
            {"lower_bound_pairs", r.lower_bound_pairs},
            {"min_lower_margin", r.min_lower_margin},
            {"lower_ok", r.lower_ok}};
}

Json to_json(const CotypeReport& r) {
    Json out = {{"lhs", r.lhs},
                {"rhs_integral", r.rhs_integral},
                {"ratio", number(r.ratio)},
                {"threshold", r.threshold},
                {"holds", r.holds},
                {"method", method_name(r.method)}};
    if (r.method == CotypeMethod::MonteCarlo) {
        out["samples"] = r.samples;
        out["stderr_lhs"] = r.stderr_lhs;
        out["stderr_rhs"] = r.stderr_rhs;
    }
    return out;
}

Json to_json(const MqCandidate& c) {
    return {{"ratio", number(c.ratio)}, {"lhs", c.lhs}, {"rhs_integral", c.rhs_integral}, {"f", c.labels}};
}

Json to_json(const MqExhaustiveResult& r) { return {{"functions", r.functions}, {"best", to_json(r.best)}}; }

Json to_json(const MqSearchResult& r) {
    return {{"best", to_json(r.best)},
            {"restart_ratios", r.restart_ratios},
            {"threshold", r.threshold},
            {"violates", r.violates},
            {"verdict", r.verdict()}};
}

Json to_json(const LowerBoundTable& t) {
    Json rows = Json::array();
    for (const auto& row : t.rows)
        rows.push_back({{"m", row.m},
                        {"report", to_json(row.report)},
                        {"analytic_ratio", number(row.analytic_ratio)},
                        {"found_violation", row.found_violation},
                        {"status", row.status()}});
    return {{"n", t.n}, {"q", t.q}, {"gamma", t.gamma}, {"bound", t.bound}, {"vacuous", t.vacuous()},
            {"rows", std::move(rows)}};
}

Json to_json(const PropertyQVerdict& v, int subset_size) {
    return {{"subset_size", subset_size},
            {"lipschitz_ok", v.lipschitz_ok},
            {"omega_1", v.omega_1},
            {"witness", v.witness ? Json(*v.witness) : Json(nullptr)},
            {"exhausted", v.exhausted},
            {"nodes", v.nodes}};
}

Json to_json(const KernelMatrix& k) {
    return {{"size", k.size()}, {"packed", k.packed()}, {"kind", kernel_kind_name(k.kind())}};
}

Json to_json(const DefinitenessResult& r) {
    return {{"verdict", r.verdict},
            {"max_violation", r.max_violation},
            {"extreme_eigenvalue", r.extreme_eigenvalue},
            {"scale", r.scale}};
}

Json to_json(const EmbeddingResult& r) {
    return {{"coordinates", r.points},
            {"dimension", r.dimension},
            {"reconstruction_error", r.reconstruction_error},
            {"clipped_eigenvalues", r.clipped_eigenvalues}};
}

Json to_json(const HolderReport& r) {
    return {{"alpha", r.alpha},
            {"sample_indices", r.sample_indices},
            {"embedding", to_json(r.embedding)},
            {"pairs_checked", r.pairs_checked},
            {"max_upper_excess", r.max_upper_excess},
            {"max_lower_deficit", r.max_lower_deficit},
            {"sandwich_ok", r.sandwich_ok}};
}

Json to_json(const NormedPoint& p) {
    Json c = Json::array();
    bool real = true;
    for (const auto& z : p.coords) real = real && z.imag() == 0.0;
    for (const auto& z : p.coords) {
        if (real) c.push_back(z.real());
        else c.push_back(Json::array({z.real(), z.imag()}));
    }
    return {{"norm", p.norm.name()}, {"coords", std::move(c)}};
}

std::string format_double(double v) {
    if (std::isnan(v)) return "NaN";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string profile_csv(const ModulusProfile& p) {
    std::ostringstream os;
    os << "t_lo,t_hi,omega,rho,rho_bar,empty_flag\n";
    for (const auto& b : p.bins)
        os << format_double(b.t_lo) << ',' << format_double(b.t_hi) << ',' << format_double(b.omega) << ','
           << csv_opt(b.rho) << ',' << csv_opt(b.rho_bar) << ',' << (b.empty() ? 1 : 0) << '\n';
    return os.str();
}

std::string collapse_csv(std::span<const CollapseStep> steps) {
    std::ostringstream os;
    os << "k,norm,paper_bound\n";
    for (const auto& s : steps)
        os << s.k << ',' << format_double(s.norm) << ',' << format_double(std::sqrt(s.bound_sq)) << '\n';
    return os.str();
}

std::string lower_bound_csv(const LowerBoundTable& t) {
    std::ostringstream os;
    os << "n,m,bound,method,samples,lhs,rhs_integral,ratio,threshold,analytic_ratio,status\n";
    for (const auto& row : t.rows)
        os << t.n << ',' << row.m << ',' << format_double(t.bound) << ',' << method_name(row.report.method) << ','
           << row.report.samples << ',' << format_double(row.report.lhs) << ','
           << format_double(row.report.rhs_integral) << ',' << format_double(row.report.ratio) << ','
           << format_double(row.report.threshold) << ','
           << (std::isnan(row.analytic_ratio) ? std::string("NA") : format_double(row.analytic_ratio)) << ','
           << row.status() << '\n';
    return os.str();
}

}  // namespace embedlab::io
