// ammroute: route trades over constant-product DEX snapshots and run the
// benchmark experiments.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ammroute/bench.hpp"
#include "ammroute/error.hpp"
#include "ammroute/log.hpp"
#include "ammroute/router.hpp"
#include "ammroute/splitter.hpp"

using namespace ammroute;
using nlohmann::ordered_json;

namespace {

struct MarketArgs {
    std::vector<std::string> snapshots;
    std::vector<std::string> dexes;
    std::string prices;
    double min_reserve_usd = 0.0;
    std::optional<std::size_t> top_n;
    std::optional<int> fee_bps;
};

void add_market_options(CLI::App* cmd, MarketArgs& m, bool many) {
    if (many) {
        cmd->add_option("--snapshot", m.snapshots, "Pool snapshot files (JSON Lines), one per DEX")->required();
        cmd->add_option("--dex", m.dexes, "DEX name for each snapshot (default dex1, dex2, ...)");
    } else {
        cmd->add_option("--snapshot", m.snapshots, "Pool snapshot file (JSON Lines)")->required()->expected(1);
        cmd->add_option("--dex", m.dexes, "DEX name")->expected(1);
    }
    cmd->add_option("--prices", m.prices, "Token price table (JSON object)");
    cmd->add_option("--min-reserve-usd", m.min_reserve_usd, "Drop pools shallower than this (needs --prices)");
    cmd->add_option("--top-n", m.top_n, "Keep pools among the n deepest tokens (needs --prices)");
    cmd->add_option("--fee-bps", m.fee_bps, "Override every pool's fee")->check(CLI::Range(0, 9999));
}

bench::Market load_market(const MarketArgs& m) {
    bench::SnapshotSource src;
    src.paths = m.snapshots;
    src.dexes = m.dexes;
    if (src.dexes.empty()) {
        for (std::size_t i = 0; i < src.paths.size(); ++i) src.dexes.push_back("dex" + std::to_string(i + 1));
    }
    if (src.dexes.size() != src.paths.size()) throw ConfigError("give one --dex per --snapshot");
    src.prices = m.prices;
    src.filter.min_reserve_usd = m.min_reserve_usd;
    src.filter.top_n_tokens = m.top_n;
    bench::ExperimentConfig cfg;
    cfg.graph_source = src;
    cfg.fee_bps = m.fee_bps;
    return bench::build_market(cfg, 0);
}

ordered_json plan_json(const TradePlan& plan) {
    ordered_json hops = ordered_json::array();
    for (const auto& h : plan) {
        hops.push_back({{"dex", h.pool.dex},
                        {"token_in", h.pool.token_in.str()},
                        {"token_out", h.pool.token_out.str()},
                        {"reserve_in", h.pool.reserve_in},
                        {"reserve_out", h.pool.reserve_out},
                        {"fee_bps", h.pool.fee_bps},
                        {"amount_in", h.amount_in},
                        {"amount_out", h.amount_out},
                        {"final", h.final_leg}});
    }
    return hops;
}

double micros(std::chrono::nanoseconds ns) { return static_cast<double>(ns.count()) / 1e3; }

// --- route -----------------------------------------------------------------

struct RouteArgs {
    MarketArgs market;
    std::string src, dst;
    std::optional<double> amount;
    std::optional<double> capital_usd;
    std::string strategy = "bfs";
    std::uint64_t seed = 0;
    int splits = 1;
    int max_rounds = ConvergenceConfig{}.max_rounds;
    bool allow_unembedded = false;
};

int run_route(const RouteArgs& a) {
    if (a.amount.has_value() == a.capital_usd.has_value()) {
        throw ConfigError("give exactly one of --amount or --capital-usd");
    }
    if (a.capital_usd && a.market.prices.empty()) throw ConfigError("--capital-usd needs --prices");

    const auto market = load_market(a.market);
    const TokenId source(a.src), target(a.dst);
    double amount_in = 0.0;
    if (a.amount) {
        amount_in = *a.amount;
    } else {
        const auto price = market.prices.find(source);
        if (price == market.prices.end()) throw ConfigError("no price for source token '" + a.src + "'");
        amount_in = *a.capital_usd / price->second;
    }

    std::shared_ptr<const LineGraphTopology> topo = market.aggregate;
    if (market.dex_graphs.size() > 1 && a.allow_unembedded) {
        topo = std::make_shared<const LineGraphTopology>(
            std::make_shared<const TokenGraph>(merge_graphs(market.dex_graphs, true)), LinkCut::kSameTokenPair);
    } else if (market.dex_graphs.size() > 1) {
        merge_graphs(market.dex_graphs, false);  // validates embedding
    }
    const LineGraph lg(topo, source);
    const IterationOrder order = a.strategy == "random" ? IterationOrder::random(a.seed) : IterationOrder::bfs();
    ConvergenceConfig cfg;
    cfg.max_rounds = a.max_rounds;

    const auto split = split_route(lg, amount_in, a.splits, target, order, cfg);
    ordered_json out;
    out["source"] = a.src;
    out["target"] = a.dst;
    out["amount_in"] = amount_in;
    out["amount_out"] = split.total_out;
    out["strategy"] = a.strategy;
    if (a.strategy == "random") out["seed"] = a.seed;
    out["splits"] = a.splits;
    out["dexes"] = lg.graph().dexes();
    out["aggregator"] = split.aggregator;
    int rounds = 0;
    bool truncated = false;
    double elapsed = 0.0;
    auto& parts = out["parts"] = ordered_json::array();
    for (const auto& p : split.parts) {
        rounds += p.rounds;
        truncated |= p.truncated;
        elapsed += micros(p.elapsed);
        parts.push_back({{"amount_out", p.amount_out}, {"rounds", p.rounds}, {"truncated", p.truncated}});
    }
    out["rounds"] = rounds;
    out["truncated"] = truncated;
    out["elapsed_us"] = elapsed;
    out["plan"] = plan_json(split.merged_plan);
    std::cout << out.dump(2) << '\n';
    if (truncated) log::warn("round cap reached before quiescence; result may be suboptimal");
    return 0;
}

// --- dfs -------------------------------------------------------------------

struct DfsArgs {
    MarketArgs market;
    std::string src, dst;
    double amount = 0.0;
    int max_hops = kDefaultDfsHops;
};

int run_dfs(const DfsArgs& a) {
    const auto market = load_market(a.market);
    const auto r = dfs_route(market.single_graph(), TokenId(a.src), TokenId(a.dst), a.amount, a.max_hops);
    ordered_json out;
    out["source"] = a.src;
    out["target"] = a.dst;
    out["amount_in"] = a.amount;
    out["amount_out"] = r.amount_out;
    out["max_hops"] = a.max_hops;
    out["elapsed_us"] = micros(r.elapsed);
    out["plan"] = plan_json(r.path);
    std::cout << out.dump(2) << '\n';
    return 0;
}

// --- bench -----------------------------------------------------------------

int run_bench_ratio(const std::string& config, const std::string& dir) {
    const auto cfg = bench::load_experiment_config(config);
    const auto result = bench::run_ratio_experiment(cfg);
    bench::write_ratio_outputs(cfg, result, dir);
    log::info("ratio: ", result.records.size(), " pairs, ", result.included, " included");
    return 0;
}

int run_bench_scaling(const std::string& config, const std::string& dir) {
    const auto cfg = bench::load_experiment_config(config);
    const auto result = bench::run_scaling_experiment(cfg);
    bench::write_scaling_outputs(cfg, result, dir);
    for (const auto& [method, fit] : result.fits) {
        log::info("scaling fit ", method, ": slope ", fit.slope, ", r2 ", fit.r2);
    }
    return 0;
}

// --- graph stats -----------------------------------------------------------

int run_graph_stats(const MarketArgs& m, const std::string& src) {
    const auto market = load_market(m);
    const TokenGraph& g = market.aggregate_graph();
    const TokenId source = src.empty() ? g.tokens().front() : TokenId(src);
    ordered_json out;
    ordered_json per_dex = ordered_json::array();
    for (const auto& dg : market.dex_graphs) {
        per_dex.push_back({{"dex", dg.dexes().front()}, {"tokens", dg.token_count()}, {"pools", dg.pool_count()}});
    }
    out["per_dex"] = per_dex;
    out["line_graph"] = ordered_json::parse(LineGraph(market.aggregate, source).stats_json());
    std::cout << out.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Line-graph token routing for constant-product DEXs"};
    app.require_subcommand(1);
    std::string log_level;
    app.add_option("--log-level", log_level, "off, warn, info or debug (default from AMM_PATHFINDER_LOG)");

    RouteArgs route_args;
    auto* route_cmd = app.add_subcommand("route", "Best linear or split route between two tokens");
    add_market_options(route_cmd, route_args.market, true);
    route_cmd->add_option("--src", route_args.src, "Token to sell")->required();
    route_cmd->add_option("--dst", route_args.dst, "Token to buy")->required();
    route_cmd->add_option("--amount", route_args.amount, "Input amount in source token units");
    route_cmd->add_option("--capital-usd", route_args.capital_usd, "Input value in quote currency");
    route_cmd->add_option("--strategy", route_args.strategy, "Link iteration order")
        ->check(CLI::IsMember({"bfs", "random"}));
    route_cmd->add_option("--seed", route_args.seed, "Seed for random order");
    route_cmd->add_option("--splits", route_args.splits, "Equal parts to route one after another")
        ->check(CLI::PositiveNumber);
    route_cmd->add_option("--max-rounds", route_args.max_rounds, "Relaxation round cap")->check(CLI::PositiveNumber);
    route_cmd->add_flag("--allow-unembedded", route_args.allow_unembedded,
                        "Accept DEXs listing tokens the first DEX lacks");

    DfsArgs dfs_args;
    auto* dfs_cmd = app.add_subcommand("dfs", "Depth-first search baseline over simple paths");
    add_market_options(dfs_cmd, dfs_args.market, false);
    dfs_cmd->add_option("--src", dfs_args.src, "Token to sell")->required();
    dfs_cmd->add_option("--dst", dfs_args.dst, "Token to buy")->required();
    dfs_cmd->add_option("--amount", dfs_args.amount, "Input amount")->required()->check(CLI::PositiveNumber);
    dfs_cmd->add_option("--max-hops", dfs_args.max_hops, "Longest path in pools")->check(CLI::PositiveNumber);

    std::string config, out_dir;
    auto* bench_cmd = app.add_subcommand("bench", "Benchmark experiments");
    bench_cmd->require_subcommand(1);
    auto* ratio_cmd = bench_cmd->add_subcommand("ratio", "Pairwise profitability ratio of two methods");
    auto* scaling_cmd = bench_cmd->add_subcommand("scaling", "Routing cost against graph size");
    for (auto* cmd : {ratio_cmd, scaling_cmd}) {
        cmd->add_option("--config", config, "Experiment config (JSON)")->required();
        cmd->add_option("--out", out_dir, "Output directory")->required();
    }

    MarketArgs stats_args;
    std::string stats_src;
    auto* graph_cmd = app.add_subcommand("graph", "Graph inspection");
    graph_cmd->require_subcommand(1);
    auto* stats_cmd = graph_cmd->add_subcommand("stats", "Token-graph and line-graph statistics");
    add_market_options(stats_cmd, stats_args, true);
    stats_cmd->add_option("--src", stats_src, "Source token for the line graph (default: first token)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(ExitCode::kConfig);
    }

    try {
        if (!log_level.empty()) log::set_level(log::parse_level(log_level));
        if (route_cmd->parsed()) return run_route(route_args);
        if (dfs_cmd->parsed()) return run_dfs(dfs_args);
        if (ratio_cmd->parsed()) return run_bench_ratio(config, out_dir);
        if (scaling_cmd->parsed()) return run_bench_scaling(config, out_dir);
        if (stats_cmd->parsed()) return run_graph_stats(stats_args, stats_src);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(e.exit_code());
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::kData);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::kData);
    }
    return static_cast<int>(ExitCode::kConfig);
}
