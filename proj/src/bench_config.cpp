#include <fstream>
#include <set>

#include "ammroute/bench.hpp"
#include "ammroute/error.hpp"

namespace ammroute::bench {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return fallback;
    try {
        return it->get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& where) {
    std::set<std::string> allowed(known.begin(), known.end());
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.contains(key)) throw ConfigError("unknown " + where + " field '" + key + "'");
    }
}

IterationOrder::Kind parse_strategy(const std::string& s) {
    if (s == "bfs") return IterationOrder::Kind::kBfs;
    if (s == "random") return IterationOrder::Kind::kRandom;
    throw ConfigError("unknown strategy '" + s + "' (expected bfs or random)");
}

Method parse_method(const json& doc) {
    json obj = doc.is_string() ? json{{"name", doc}} : doc;
    if (!obj.is_object() || !obj.contains("name")) throw ConfigError("method needs a name");
    reject_unknown(obj, {"name", "seed", "k", "strategy", "max_hops", "scope"}, "method");

    const auto name = obj["name"].get<std::string>();
    Method m;
    if (name == "lg" || name == "lg_random") {
        m.kind = MethodKind::kLgRandom;
    } else if (name == "lg_bfs") {
        m.kind = MethodKind::kLgBfs;
    } else if (name == "lg_split" || name == "lg_routesplit") {
        m.kind = MethodKind::kLgSplit;
    } else if (name == "lg_aggregator") {
        m.kind = MethodKind::kLgAggregator;
        m.scope = Scope::kAggregate;
    } else if (name == "lg_aggregator_bfs") {
        m.kind = MethodKind::kLgAggregatorBfs;
        m.scope = Scope::kAggregate;
    } else if (name == "dfs") {
        m.kind = MethodKind::kDfs;
    } else {
        throw ConfigError("unknown method '" + name + "'");
    }
    m.seed = get_or<std::uint64_t>(obj, "seed", 0);
    m.splits = get_or<int>(obj, "k", 2);
    if (m.splits < 1) throw ConfigError("lg_split k must be at least 1");
    m.split_order = parse_strategy(get_or<std::string>(obj, "strategy", "random"));
    m.max_hops = get_or<int>(obj, "max_hops", kDefaultDfsHops);
    if (m.max_hops < 1) throw ConfigError("dfs max_hops must be at least 1");
    if (obj.contains("scope")) {
        const auto scope = obj["scope"].get<std::string>();
        if (scope == "single") {
            m.scope = Scope::kSingle;
        } else if (scope == "aggregate") {
            m.scope = Scope::kAggregate;
        } else {
            throw ConfigError("unknown scope '" + scope + "'");
        }
    }
    return m;
}

ordered_json method_json(const Method& m) {
    static const char* names[] = {"lg_random", "lg_bfs", "lg_split", "lg_aggregator", "lg_aggregator_bfs", "dfs"};
    ordered_json j;
    j["name"] = names[static_cast<int>(m.kind)];
    j["scope"] = m.scope == Scope::kSingle ? "single" : "aggregate";
    switch (m.kind) {
        case MethodKind::kLgRandom:
        case MethodKind::kLgAggregator:
            j["seed"] = m.seed;
            break;
        case MethodKind::kLgSplit:
            j["k"] = m.splits;
            j["strategy"] = m.split_order == IterationOrder::Kind::kBfs ? "bfs" : "random";
            j["seed"] = m.seed;
            break;
        case MethodKind::kDfs:
            j["max_hops"] = m.max_hops;
            break;
        default:
            break;
    }
    return j;
}

}  // namespace

std::string Method::label() const {
    std::string base;
    switch (kind) {
        case MethodKind::kLgRandom: base = "lg_random"; break;
        case MethodKind::kLgBfs: base = "lg_bfs"; break;
        case MethodKind::kLgSplit:
            base = "lg_split(k=" + std::to_string(splits) +
                   (split_order == IterationOrder::Kind::kBfs ? ",bfs)" : ",random)");
            break;
        case MethodKind::kLgAggregator: base = "lg_aggregator"; break;
        case MethodKind::kLgAggregatorBfs: base = "lg_aggregator_bfs"; break;
        case MethodKind::kDfs: base = "dfs(max_hops=" + std::to_string(max_hops) + ")"; break;
    }
    const bool default_aggregate = kind == MethodKind::kLgAggregator || kind == MethodKind::kLgAggregatorBfs;
    if ((scope == Scope::kAggregate) != default_aggregate) {
        base += scope == Scope::kAggregate ? "@aggregate" : "@single";
    }
    return base;
}

ExperimentConfig parse_experiment_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("experiment config must be a JSON object");
    reject_unknown(doc,
                   {"graph", "capital_usd", "methods", "trials", "fee_bps", "min_rel_improvement",
                    "max_rounds", "all_pairs_max_tokens", "sample_pairs", "pair_seed", "threads", "sizes",
                    "pools_per_token", "repeats"},
                   "config");
    ExperimentConfig cfg;

    const json graph = doc.value("graph", json{{"type", "synthetic"}});
    const auto type = get_or<std::string>(graph, "type", "synthetic");
    if (type == "synthetic") {
        reject_unknown(graph,
                       {"type", "n_tokens", "n_pools", "seed", "reserve_min", "reserve_max", "skew",
                        "n_dexes", "embed_fraction"},
                       "synthetic graph");
        SyntheticSource s;
        s.n_tokens = get_or<std::size_t>(graph, "n_tokens", s.n_tokens);
        s.n_pools = get_or<std::size_t>(graph, "n_pools", 2 * s.n_tokens);
        s.seed = get_or<std::uint64_t>(graph, "seed", s.seed);
        s.reserves.min = get_or<double>(graph, "reserve_min", s.reserves.min);
        s.reserves.max = get_or<double>(graph, "reserve_max", s.reserves.max);
        s.reserves.skew = get_or<double>(graph, "skew", s.reserves.skew);
        s.n_dexes = get_or<std::size_t>(graph, "n_dexes", s.n_dexes);
        s.embed_fraction = get_or<double>(graph, "embed_fraction", s.embed_fraction);
        if (s.n_dexes < 1) throw ConfigError("n_dexes must be at least 1");
        cfg.graph_source = s;
    } else if (type == "snapshot") {
        reject_unknown(graph, {"type", "paths", "dexes", "prices", "min_reserve_usd", "top_n_tokens"},
                       "snapshot graph");
        SnapshotSource s;
        s.paths = get_or<std::vector<std::string>>(graph, "paths", {});
        s.dexes = get_or<std::vector<std::string>>(graph, "dexes", {});
        s.prices = get_or<std::string>(graph, "prices", "");
        s.filter.min_reserve_usd = get_or<double>(graph, "min_reserve_usd", 0.0);
        if (graph.contains("top_n_tokens") && !graph["top_n_tokens"].is_null()) {
            s.filter.top_n_tokens = get_or<std::size_t>(graph, "top_n_tokens", 0);
        }
        if (s.paths.empty()) throw ConfigError("snapshot graph needs at least one path");
        if (s.dexes.empty()) {
            for (std::size_t i = 0; i < s.paths.size(); ++i) s.dexes.push_back("dex" + std::to_string(i + 1));
        }
        if (s.dexes.size() != s.paths.size()) throw ConfigError("paths and dexes must pair up");
        cfg.graph_source = s;
    } else {
        throw ConfigError("unknown graph type '" + type + "'");
    }

    cfg.capital_usd = get_or<double>(doc, "capital_usd", cfg.capital_usd);
    if (!(cfg.capital_usd > 0.0)) throw ConfigError("capital_usd must be positive");
    if (doc.contains("methods")) {
        for (const auto& m : doc["methods"]) cfg.methods.push_back(parse_method(m));
    }
    cfg.trials = get_or<int>(doc, "trials", cfg.trials);
    if (cfg.trials < 1) throw ConfigError("trials must be at least 1");
    if (doc.contains("fee_bps") && !doc["fee_bps"].is_null()) {
        cfg.fee_bps = get_or<int>(doc, "fee_bps", kDefaultFeeBps);
        if (*cfg.fee_bps < 0 || *cfg.fee_bps >= 10000) throw ConfigError("fee_bps outside [0, 10000)");
    }
    cfg.convergence.min_rel_improvement =
        get_or<double>(doc, "min_rel_improvement", cfg.convergence.min_rel_improvement);
    cfg.convergence.max_rounds = get_or<int>(doc, "max_rounds", cfg.convergence.max_rounds);
    if (cfg.convergence.max_rounds < 1) throw ConfigError("max_rounds must be at least 1");
    cfg.all_pairs_max_tokens = get_or<std::size_t>(doc, "all_pairs_max_tokens", cfg.all_pairs_max_tokens);
    cfg.sample_pairs = get_or<std::size_t>(doc, "sample_pairs", cfg.sample_pairs);
    cfg.pair_seed = get_or<std::uint64_t>(doc, "pair_seed", cfg.pair_seed);
    cfg.threads = get_or<unsigned>(doc, "threads", cfg.threads);
    cfg.sizes = get_or<std::vector<std::size_t>>(doc, "sizes", {});
    cfg.pools_per_token = get_or<double>(doc, "pools_per_token", cfg.pools_per_token);
    cfg.repeats = get_or<int>(doc, "repeats", cfg.repeats);
    if (cfg.repeats < 1) throw ConfigError("repeats must be at least 1");
    return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    ExperimentConfig cfg = parse_experiment_config(doc);
    if (auto* snap = std::get_if<SnapshotSource>(&cfg.graph_source)) {
        const auto base = path.parent_path();
        auto resolve = [&](std::string& p) {
            if (!p.empty() && std::filesystem::path(p).is_relative()) p = (base / p).string();
        };
        for (auto& p : snap->paths) resolve(p);
        resolve(snap->prices);
    }
    return cfg;
}

ordered_json to_json(const ExperimentConfig& cfg) {
    ordered_json j;
    if (const auto* s = std::get_if<SyntheticSource>(&cfg.graph_source)) {
        j["graph"] = {{"type", "synthetic"},
                      {"n_tokens", s->n_tokens},
                      {"n_pools", s->n_pools},
                      {"seed", s->seed},
                      {"reserve_min", s->reserves.min},
                      {"reserve_max", s->reserves.max},
                      {"skew", s->reserves.skew},
                      {"n_dexes", s->n_dexes},
                      {"embed_fraction", s->embed_fraction}};
    } else {
        const auto& snap = std::get<SnapshotSource>(cfg.graph_source);
        ordered_json g{{"type", "snapshot"},
                       {"paths", snap.paths},
                       {"dexes", snap.dexes},
                       {"prices", snap.prices},
                       {"min_reserve_usd", snap.filter.min_reserve_usd}};
        g["top_n_tokens"] = snap.filter.top_n_tokens ? ordered_json(*snap.filter.top_n_tokens) : ordered_json();
        j["graph"] = g;
    }
    j["capital_usd"] = cfg.capital_usd;
    auto& methods = j["methods"] = ordered_json::array();
    for (const auto& m : cfg.methods) methods.push_back(method_json(m));
    j["trials"] = cfg.trials;
    j["fee_bps"] = cfg.fee_bps ? ordered_json(*cfg.fee_bps) : ordered_json();
    j["min_rel_improvement"] = cfg.convergence.min_rel_improvement;
    j["max_rounds"] = cfg.convergence.max_rounds;
    j["all_pairs_max_tokens"] = cfg.all_pairs_max_tokens;
    j["sample_pairs"] = cfg.sample_pairs;
    j["pair_seed"] = cfg.pair_seed;
    j["sizes"] = cfg.sizes;
    j["pools_per_token"] = cfg.pools_per_token;
    j["repeats"] = cfg.repeats;
    return j;
}

}  // namespace ammroute::bench
