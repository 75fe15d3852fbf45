#include "acceptance/acceptance.hpp"

#include "embedlab/error.hpp"
#include "embedlab/io.hpp"
#include "embedlab/parallel.hpp"
#include "embedlab/random.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#ifndef EMBEDLAB_VERSION
#define EMBEDLAB_VERSION "0.0.0"
#endif
#ifndef EMBEDLAB_FIXTURE_DIR
#define EMBEDLAB_FIXTURE_DIR "fixtures"
#endif

namespace {

using namespace embedlab;
using io::Json;

constexpr int kOk = 0;
constexpr int kFindings = 1;
constexpr int kInputError = 2;

struct Flags {
    std::string command;
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<double> tol;
    std::string out;
    std::string format = "json";
    bool selftest = false;
    bool collapse = false;
    std::optional<int> truncation;
    std::string fixtures = EMBEDLAB_FIXTURE_DIR;
};

// Reads one command's fields and records every resolved value, defaults included.
class Context {
public:
    Context(const Json& cfg, const Flags& flags) : reader_(cfg, ""), flags_(flags) {}

    template <class T>
    T req(const std::string& key) {
        T v = reader_.get<T>(key);
        resolved_[key] = v;
        return v;
    }
    template <class T>
    T opt(const std::string& key, T fallback) {
        T v = reader_.get_or<T>(key, fallback);
        resolved_[key] = v;
        return v;
    }
    template <class T>
    std::optional<T> maybe(const std::string& key) {
        auto v = reader_.get_opt<T>(key);
        resolved_[key] = v ? Json(*v) : Json(nullptr);
        return v;
    }
    const Json& raw(const std::string& key) {
        const Json& v = reader_.at(key);
        resolved_[key] = v;
        return v;
    }
    const Json* raw_opt(const std::string& key) {
        const Json* v = reader_.find(key);
        if (v) resolved_[key] = *v;
        return v;
    }
    bool has(const std::string& key) const { return reader_.has(key); }
    std::string field(const std::string& key) const { return reader_.field(key); }

    // A flag wins over the config value.
    double tol(double fallback) {
        const double v = flags_.tol ? *flags_.tol : reader_.get_or<double>("tol", fallback);
        resolved_["tol"] = v;
        return v;
    }
    std::uint64_t seed(const std::string& command) {
        std::optional<std::uint64_t> s = reader_.get_opt<std::uint64_t>("seed");
        if (flags_.seed) s = flags_.seed;
        if (!s) throw InputError(command + ": a seed is mandatory for this command (--seed or \"seed\")");
        resolved_["seed"] = *s;
        seed_ = s;
        return *s;
    }
    void ignore(const std::string& key) { (void)reader_.find(key); }
    void set(const std::string& key, Json v) { resolved_[key] = std::move(v); }

    void finish() { reader_.finish(); }
    [[nodiscard]] const Json& resolved() const { return resolved_; }
    [[nodiscard]] std::optional<std::uint64_t> used_seed() const { return seed_; }
    [[nodiscard]] const Flags& flags() const { return flags_; }

private:
    io::ObjectReader reader_;
    const Flags& flags_;
    Json resolved_ = Json::object();
    std::optional<std::uint64_t> seed_;
};

struct Outcome {
    Json result = Json::object();
    int status = kOk;
    std::optional<std::string> csv;
};

void require_json(const Flags& f, const std::string& command) {
    if (f.format != "json") throw InputError(command + ": CSV output is not available for this command");
}

std::vector<double> edges_from(Context& c, std::span<const PairSample> pairs) {
    if (const auto e = c.maybe<std::vector<double>>("edges")) return *e;
    c.ignore("edges");
    return uniform_edges(pairs, c.opt<std::size_t>("bins", 64));
}

std::vector<Rational> rationals(const Json& v, const std::string& field) {
    if (!v.is_array()) throw InputError("field '" + field + "': expected an array");
    std::vector<Rational> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(io::parse_rational(v[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

std::shared_ptr<const FiniteMetricSpace> metric_space(Context& c, const std::string& key) {
    return std::make_shared<const FiniteMetricSpace>(io::parse_metric_space(c.raw(key), c.field(key)));
}

CotypeInstance cotype_instance(Context& c) {
    CotypeInstance inst;
    inst.n = c.req<int>("n");
    inst.m = c.req<int>("m");
    inst.q = c.opt<double>("q", 2.0);
    inst.gamma = c.opt<double>("gamma", 1.0);
    inst.validate();
    return inst;
}

CotypeMethod cotype_method(const std::string& name) {
    if (name == "exhaustive") return CotypeMethod::Exhaustive;
    if (name == "monte-carlo") return CotypeMethod::MonteCarlo;
    throw InputError("method must be exhaustive or monte-carlo");
}

Outcome run_moduli(Context& c) {
    const auto map = io::parse_sampled_map(c.raw("map"), c.field("map"));
    const auto pairs = pair_distances(map);
    const auto edges = edges_from(c, pairs);
    c.finish();
    const auto profile = compression_moduli(pairs, edges);
    Outcome o;
    o.result = io::to_json(profile);
    if (c.flags().format == "csv") o.csv = io::profile_csv(profile);
    return o;
}

Outcome run_classify(Context& c) {
    const auto map = io::parse_sampled_map(c.raw("map"), c.field("map"));
    TaxonomyParams p;
    p.edges = edges_from(c, pair_distances(map));
    p.n_max = c.opt<int>("n_max", 8);
    p.zero_tol = c.maybe<double>("zero_tol");
    c.finish();
    const auto rep = classify(map, p);
    Outcome o;
    o.result = io::to_json(rep);
    try {
        check_taxonomy_arrows(rep);
        o.result["violations"] = Json::array();
    } catch (const ViolationError& e) {
        o.result["violations"] = Json::array({e.what()});
        o.status = kFindings;
    }
    if (c.flags().format == "csv") o.csv = io::profile_csv(rep.profile);
    return o;
}

Outcome run_cocycle(Context& c) {
    const Flags& f = c.flags();
    int truncation = 8;
    if (f.truncation) {
        truncation = *f.truncation;
        c.ignore("N");
        c.set("N", truncation);
    } else {
        truncation = c.opt<int>("N", truncation);
    }
    const bool collapse = c.opt<bool>("collapse", false) || f.collapse;
    c.set("collapse", collapse);
    const auto policy_name = c.opt<std::string>("underflow", "flush");
    UnderflowPolicy policy = UnderflowPolicy::Flush;
    if (policy_name == "strict") policy = UnderflowPolicy::Strict;
    else if (policy_name != "flush") throw InputError("field 'underflow': expected flush or strict");
    std::vector<Rational> ts;
    if (const Json* t = c.raw_opt("t")) ts = rationals(*t, c.field("t"));
    const auto target = c.maybe<double>("target");
    const double identity_tol = c.tol(1e-12);
    c.finish();
    if (truncation < 1 || truncation > CocycleConfig::kMaxTruncation)
        throw InputError("field 'N': truncation must lie in [1, 16]");
    const CocycleConfig cfg(truncation, policy);

    Outcome o;
    o.result["N"] = truncation;
    o.result["lipschitz_constant_sq"] = cfg.lipschitz_constant_sq();
    if (collapse) {
        const auto seq = collapse_sequence(cfg);
        Json steps = Json::array();
        for (const auto& s : seq) {
            steps.push_back(io::to_json(s));
            if (s.norm_sq > s.bound_sq) o.status = kFindings;
        }
        o.result["collapse"] = steps;
        if (f.format == "csv") o.csv = io::collapse_csv(seq);
    } else if (f.format == "csv") {
        throw InputError("cocycle: CSV output needs --collapse");
    }
    if (!ts.empty()) {
        Json values = Json::array();
        for (const auto& t : ts) values.push_back(io::to_json(t, cocycle_eval(t, cfg)));
        o.result["values"] = values;
        const auto checks = cocycle_norm_checks(cfg, ts, identity_tol);
        o.result["checks"] = io::to_json(checks);
        if (!checks.ok()) o.status = kFindings;
    }
    if (target) {
        const auto w = cocycle_solvency_witness(cfg, *target);
        o.result["witness"] = io::to_json(w);
        if (!w.t) o.status = kFindings;
    }
    return o;
}

Outcome run_amplify(Context& c) {
    require_json(c.flags(), "amplify");
    const auto phi = io::parse_interpolated_map(c.raw("phi"), c.field("phi"));
    const double lip = c.opt<double>("lipschitz", phi.lipschitz());
    AmplificationConfig cfg;
    if (const auto eps = c.maybe<std::vector<double>>("eps")) {
        cfg.eps = *eps;
        c.ignore("n_max");
    } else {
        cfg.eps = AmplificationConfig::eps_from_lipschitz(lip, c.opt<int>("n_max", 6), c.opt<double>("safety", 0.5));
    }
    cfg.phi = phi.as_point_map();
    cfg.recenter = c.opt<bool>("recenter", false);
    cfg.aggregation = parse_aggregation(c.opt<std::string>("aggregation", "l2"));
    const auto xs = c.opt<std::vector<double>>("points", {});
    c.finish();

    Outcome o;
    o.result["eps"] = cfg.eps;
    try {
        Json certs = Json::array();
        for (const auto& e : certify_eps(cfg, phi.sample(), lip)) certs.push_back(io::to_json(e));
        o.result["certificates"] = certs;
    } catch (const ViolationError& e) {
        o.result["certificates"] = nullptr;
        o.result["violation"] = e.what();
        o.status = kFindings;
        return o;
    }
    std::vector<std::vector<NormedPoint>> amp;
    Json points = Json::array();
    for (double x : xs) {
        amp.push_back(amplify(cfg, NormedPoint::scalar(x), cfg.n_max()));
        Json blocks = Json::array();
        for (const auto& b : amp.back()) blocks.push_back(io::to_json(b));
        points.push_back({{"x", x}, {"blocks", blocks}});
    }
    Json dists = Json::array();
    for (std::size_t i = 0; i < amp.size(); ++i)
        for (std::size_t j = i + 1; j < amp.size(); ++j)
            dists.push_back({{"i", i}, {"j", j}, {"source", std::abs(xs[i] - xs[j])},
                             {"aggregated", aggregated_distance(amp[i], amp[j], cfg.aggregation)}});
    o.result["points"] = points;
    o.result["distances"] = dists;
    return o;
}

CotypeOptions cotype_options(Context& c, const std::string& command) {
    CotypeOptions opts;
    opts.method = cotype_method(c.opt<std::string>("method", "exhaustive"));
    opts.budget = c.opt<std::uint64_t>("budget", opts.budget);
    opts.samples = c.opt<std::uint64_t>("samples", opts.samples);
    if (opts.method == CotypeMethod::MonteCarlo) opts.seed = c.seed(command);
    else c.ignore("seed");
    return opts;
}

Outcome run_cotype(Context& c) {
    require_json(c.flags(), "cotype");
    const auto inst = cotype_instance(c);
    const auto target = metric_space(c, "target");
    const auto labels = c.req<std::vector<std::uint32_t>>("labels");
    const auto opts = cotype_options(c, "cotype");
    c.finish();
    for (auto l : labels)
        if (l >= target->size()) throw InputError("field 'labels': label outside the target space");
    const auto f = LatticeFunction::finite(Torus(inst.n, inst.m), target, labels);
    if (labels.size() != f.torus().size()) throw InputError("field 'labels': need m^n labels");
    const auto rep = cotype_check(f, inst, opts);
    Outcome o;
    o.result = io::to_json(rep);
    o.status = rep.holds ? kOk : kFindings;
    return o;
}

Outcome run_mq_search(Context& c) {
    const auto mode = c.opt<std::string>("mode", "anneal");
    Outcome o;
    if (mode == "lower-bound") {
        const int n = c.req<int>("n");
        const double q = c.opt<double>("q", 2.0);
        const double gamma = c.req<double>("gamma");
        LowerBoundOptions lb;
        lb.ms = c.opt<std::vector<int>>("ms", {});
        lb.cotype = cotype_options(c, "mq-search");
        c.finish();
        const auto table = mq_lower_bound(n, q, gamma, lb);
        o.result = io::to_json(table);
        for (const auto& row : table.rows)
            if (row.found_violation) o.status = kFindings;
        if (c.flags().format == "csv") o.csv = io::lower_bound_csv(table);
        return o;
    }
    require_json(c.flags(), "mq-search");
    const auto inst = cotype_instance(c);
    const auto target = metric_space(c, "target");
    MqCandidate best;
    double threshold = inst.threshold();
    if (mode == "exhaustive") {
        const auto budget = c.opt<std::uint64_t>("budget", 100'000'000);
        c.ignore("seed");
        c.finish();
        const auto ex = mq_exhaustive(inst, target, budget);
        o.result = io::to_json(ex);
        best = ex.best;
        o.result["threshold"] = threshold;
        o.result["violates"] = best.ratio > threshold;
    } else if (mode == "anneal") {
        AnnealParams p;
        p.proposals = c.opt<std::uint64_t>("proposals", p.proposals);
        p.restarts = c.opt<int>("restarts", p.restarts);
        p.cooling = c.opt<double>("cooling", p.cooling);
        p.initial_temperature = c.opt<double>("initial_temperature", p.initial_temperature);
        p.seed = c.seed("mq-search");
        c.finish();
        const auto res = mq_witness_search(inst, target, p);
        o.result = io::to_json(res);
        best = res.best;
    } else {
        throw InputError("field 'mode': expected anneal, exhaustive or lower-bound");
    }
    // Re-evaluate the returned witness through the cotype functional.
    const auto check = cotype_check(LatticeFunction::finite(Torus(inst.n, inst.m), target, best.labels), inst);
    o.result["witness_check"] = io::to_json(check);
    o.status = check.holds ? kOk : kFindings;
    return o;
}

Outcome run_propq(Context& c) {
    require_json(c.flags(), "propq");
    PropertyQInstance inst;
    inst.k = c.req<int>("k");
    inst.ground = c.req<int>("N");
    inst.subset_size = c.opt<int>("subset_size", PropertyQInstance::default_subset_size(inst.k, inst.ground));
    inst.epsilon = c.req<double>("epsilon");
    inst.delta = c.req<double>("delta");
    inst.target = metric_space(c, "target");
    const bool random_f = !c.has("f");
    if (!random_f) {
        inst.f = c.req<std::vector<std::uint32_t>>("f");
        c.ignore("seed");
    } else {
        auto rng = make_rng(c.seed("propq"));
        inst.f.resize(binomial(inst.ground, inst.k));
        for (auto& v : inst.f) v = static_cast<std::uint32_t>(uniform_below(rng, inst.target->size()));
    }
    const auto budget = c.opt<std::uint64_t>("node_budget", 50'000'000);
    const bool graph = c.opt<bool>("graph", false);
    c.finish();
    inst.validate();
    const auto v = property_q_test(inst, budget);
    Outcome o;
    o.result = io::to_json(v, inst.subset_size);
    if (random_f) o.result["f"] = inst.f;
    if (graph) {
        const InterlacingGraph g(inst.k, inst.ground);
        std::map<int, std::size_t> hist;
        for (std::size_t i = 0; i < g.size(); ++i) ++hist[g.eccentricity(i)];
        Json h = Json::object();
        for (const auto& [e, count] : hist) h[std::to_string(e)] = count;
        o.result["graph"] = {{"vertices", g.size()}, {"diameter", g.diameter()}, {"eccentricity_histogram", h}};
    }
    // A Lipschitz f with no good subset after a complete search is a counterexample.
    if (v.lipschitz_ok && v.exhausted && !v.witness) o.status = kFindings;
    return o;
}

Outcome run_kernel(Context& c) {
    require_json(c.flags(), "kernel");
    const auto mode = c.opt<std::string>("mode", "certify");
    Outcome o;
    if (mode == "holder") {
        const auto map = io::parse_sampled_map(c.raw("map"), c.field("map"));
        const double alpha = c.req<double>("alpha");
        HolderOptions opts;
        opts.tol = c.tol(opts.tol);
        opts.sandwich_tol = c.opt<double>("sandwich_tol", opts.sandwich_tol);
        opts.restrict_to_net = c.opt<bool>("restrict_to_net", false);
        if (const auto e = c.maybe<std::vector<double>>("edges")) opts.edges = *e;
        c.finish();
        try {
            const auto res = holder_solvent_transform(map, alpha, opts);
            o.result = io::to_json(res.report);
            o.status = res.report.sandwich_ok ? kOk : kFindings;
        } catch (const ViolationError& e) {
            o.result["violation"] = e.what();
            o.status = kFindings;
        }
        return o;
    }
    const auto k = io::parse_kernel(c.raw("kernel"), c.field("kernel"));
    const double tol = c.tol(1e-9);
    if (mode == "certify") {
        c.finish();
        const auto r = k.kind() == KernelKind::NegativeDefinite ? is_negative_definite(k, tol)
                                                                  : exp_positive_definite_check(k, tol);
        o.result = io::to_json(r);
        o.status = r.verdict ? kOk : kFindings;
    } else if (mode == "snowflake") {
        const double alpha = c.req<double>("alpha");
        c.finish();
        try {
            const auto s = snowflake_kernel(k, alpha, tol);
            o.result["kernel"] = io::to_json(s);
            o.result["certificate"] = io::to_json(is_negative_definite(s, tol));
        } catch (const ViolationError& e) {
            o.result["violation"] = e.what();
            o.status = kFindings;
        }
    } else if (mode == "embed") {
        c.finish();
        try {
            o.result = io::to_json(schoenberg_embed(k, tol));
        } catch (const DomainError& e) {
            o.result["violation"] = e.what();
            o.status = kFindings;
        }
    } else if (mode == "exp") {
        c.finish();
        const auto r = exp_positive_definite_check(k, tol);
        o.result = io::to_json(r);
        o.status = r.verdict ? kOk : kFindings;
    } else {
        throw InputError("field 'mode': expected certify, snowflake, embed, exp or holder");
    }
    return o;
}

Outcome run_lift(Context& c) {
    require_json(c.flags(), "lift");
    const auto f = io::parse_interpolated_map(c.raw("f"), c.field("f"));
    const auto grid = rationals(c.raw("q_grid"), c.field("q_grid"));
    const double t = c.req<double>("t");
    const auto xs = c.req<std::vector<double>>("points");
    const double lip = c.opt<double>("lipschitz", f.lipschitz());
    auto rho = c.maybe<double>("rho_bar");
    const double tol = c.tol(1e-9);
    c.finish();

    const LinftyLift lift(f.as_point_map(), grid);
    std::vector<std::pair<NormedPoint, NormedPoint>> pairs;
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j)
            pairs.emplace_back(NormedPoint::scalar(xs[i]), NormedPoint::scalar(xs[j]));
    Outcome o;
    if (!rho) {
        std::vector<double> scaled;
        std::vector<NormedPoint> img;
        for (const auto& q : grid)
            for (double x : xs) {
                scaled.push_back(q.to_double() * x);
                img.push_back(f(scaled.back()));
            }
        const SampledMap sample(PointCloud::real_line(scaled), PointCloud::normed(img));
        rho = exact_compression_at(pair_distances(sample), t, 1e-9);
        if (!rho) throw InputError("lift: no sampled pair at distance t; supply rho_bar");
        o.result["rho_bar_source"] = "sample";
    } else {
        o.result["rho_bar_source"] = "config";
    }
    const auto rep = check_lift(lift, pairs, lip, t, *rho, tol);
    o.result["report"] = io::to_json(rep);
    o.status = rep.lipschitz_ok && rep.lower_ok ? kOk : kFindings;
    return o;
}

using Runner = Outcome (*)(Context&);

const std::map<std::string, Runner>& runners() {
    static const std::map<std::string, Runner> table{
        {"moduli", run_moduli}, {"classify", run_classify}, {"cocycle", run_cocycle}, {"amplify", run_amplify},
        {"cotype", run_cotype}, {"mq-search", run_mq_search}, {"propq", run_propq}, {"kernel", run_kernel},
        {"lift", run_lift}};
    return table;
}

struct Run {
    Json report;
    Outcome outcome;
};

// Resolves the command, applies the thread count and runs it.
Run run_config(const Json& cfg, const Flags& flags) {
    if (!cfg.is_object()) throw InputError("config: expected a JSON object");
    std::string command = flags.command;
    if (cfg.contains("command")) {
        const auto& c = cfg.at("command");
        if (!c.is_string()) throw InputError("field 'command': expected a string");
        if (!command.empty() && command != c.get<std::string>())
            throw InputError("field 'command': config is for '" + c.get<std::string>() + "', not '" + command + "'");
        command = c.get<std::string>();
    }
    const auto it = runners().find(command);
    if (it == runners().end()) throw InputError("unknown command '" + command + "'");

    Context ctx(cfg, flags);
    ctx.ignore("command");
    unsigned threads = 1;
    if (flags.threads) {
        threads = *flags.threads;
        ctx.ignore("threads");
    } else {
        threads = ctx.opt<unsigned>("threads", threads);
    }
    if (threads < 1) throw InputError("threads must be >= 1");
    parallel::set_thread_count(threads);

    Run run;
    run.outcome = it->second(ctx);
    Json provenance = {{"tool", "embedlab"}, {"version", EMBEDLAB_VERSION}};
    provenance["seed"] = ctx.used_seed() ? Json(*ctx.used_seed()) : Json(nullptr);
    run.report = {{"command", command},
                  {"config", ctx.resolved()},
                  {"status", run.outcome.status == kOk ? "ok" : "findings"},
                  {"result", run.outcome.result},
                  {"provenance", provenance}};
    return run;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError(path + ": cannot write");
    out << text;
}

void write_meta(const Flags& flags, const std::string& command, double seconds) {
    if (flags.out.empty()) return;
    const Json meta = {{"command", command},
                       {"wall_seconds", seconds},
                       {"threads", parallel::thread_count()},
                       {"version", EMBEDLAB_VERSION}};
    write_text(flags.out + ".meta.json", meta.dump(2) + "\n");
}

int selftest(const Flags& flags) {
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t seed = flags.seed.value_or(acceptance::kDefaultSeed);
    const unsigned threads = flags.threads.value_or(4);

    // Every bundled fixture must parse and run.
    std::vector<std::filesystem::path> files;
    std::error_code ec;
    for (const auto& e : std::filesystem::directory_iterator(flags.fixtures, ec))
        if (e.path().extension() == ".json") files.push_back(e.path());
    if (ec) {
        std::cerr << "error: fixtures directory '" << flags.fixtures << "': " << ec.message() << '\n';
        return kInputError;
    }
    std::sort(files.begin(), files.end());
    Json fixtures = Json::array();
    Flags sub;
    sub.seed = seed;
    sub.threads = threads;
    for (const auto& path : files) {
        try {
            const auto run = run_config(io::read_json_file(path.string()), sub);
            fixtures.push_back({{"fixture", path.filename().string()}, {"status", run.report["status"]}});
            std::cout << "fixture " << path.filename().string() << ": " << run.report["status"].get<std::string>()
                      << '\n';
        } catch (const Error& e) {
            std::cerr << "error: fixture " << path.filename().string() << ": " << e.what() << '\n';
            return kInputError;
        }
    }

    parallel::set_thread_count(threads);
    const auto results = acceptance::run_all(seed);
    std::cout << acceptance::table(results);
    const bool ok = acceptance::all_ok(results);
    std::cout << (ok ? "selftest passed" : "selftest FAILED") << '\n';

    if (!flags.out.empty()) {
        Json report = acceptance::report(results, seed);
        report["fixtures"] = fixtures;
        report["provenance"] = {{"tool", "embedlab"}, {"version", EMBEDLAB_VERSION}, {"seed", seed}};
        write_text(flags.out, report.dump(2) + "\n");
        Json timing = Json::array();
        for (const auto& c : results) timing.push_back({{"id", c.id}, {"seconds", c.seconds}, {"limit", c.time_limit}});
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_text(flags.out + ".meta.json",
                   Json{{"command", "selftest"}, {"wall_seconds", seconds}, {"threads", threads}, {"criteria", timing}}
                           .dump(2) +
                       "\n");
    }
    return ok ? kOk : kFindings;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-sample experiments on coarse and uniform embeddings of metric spaces."};
    Flags flags;
    app.add_option("command", flags.command,
                   "moduli, classify, cocycle, amplify, cotype, mq-search, propq, kernel or lift");
    app.add_option("--config", flags.config, "JSON configuration file");
    app.add_option("--seed", flags.seed, "master seed for stochastic commands");
    app.add_option("--threads", flags.threads, "worker threads")->check(CLI::Range(1u, 1024u));
    app.add_option("--tol", flags.tol, "numerical tolerance");
    app.add_option("--out", flags.out, "report path (default stdout); timing goes to <out>.meta.json");
    app.add_option("--format", flags.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--selftest", flags.selftest, "run the bundled fixtures and the acceptance suite");
    app.add_flag("--collapse", flags.collapse, "cocycle: emit the collapse sequence");
    app.add_option("--N", flags.truncation, "cocycle: truncation");
    app.add_option("--fixtures", flags.fixtures, "selftest: fixture directory");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    if (flags.selftest || flags.command == "selftest") return selftest(flags);
    try {
        const auto start = std::chrono::steady_clock::now();
        Json cfg = Json::object();
        if (!flags.config.empty()) cfg = io::read_json_file(flags.config);
        else if (flags.command.empty()) throw InputError("no command given (see --help)");
        const auto run = run_config(cfg, flags);
        if (run.outcome.csv) write_text(flags.out, *run.outcome.csv);
        else write_text(flags.out, run.report.dump(2) + "\n");
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_meta(flags, run.report["command"].get<std::string>(), seconds);
        return run.outcome.status;
    } catch (const ViolationError& e) {
        std::cerr << "violation: " << e.what() << '\n';
        return kFindings;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    }
}
