#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ammroute/line_graph.hpp"
#include "ammroute/marketdata.hpp"
#include "ammroute/router.hpp"

namespace ammroute::bench {

// ---------------------------------------------------------------------------
// Synthetic markets

/// Pool depth is drawn log-uniformly from [min, max]. With skew 0 both
/// reserves equal the depth, so every token trades at the same price and no
/// cycle is profitable; skew s multiplies reserve1 by exp(U(-s, s)).
struct ReserveDistribution {
    double min = 1e3;
    double max = 1e7;
    double skew = 0.0;
};

/// Connected random pool topology: a random spanning tree plus extra random
/// pairs, never two pools on one pair. Tokens are named T000, T001, ...
/// Throws ConfigError if n_pools is outside [n_tokens - 1, C(n_tokens, 2)].
std::vector<PoolSnapshot> gen_synthetic_graph(std::size_t n_tokens, std::size_t n_pools,
                                              std::uint64_t seed, const ReserveDistribution& dist = {},
                                              const std::string& dex = "dex1",
                                              int fee_bps = kDefaultFeeBps);

/// Name used for token i in a market of n tokens.
std::string synthetic_token_name(std::size_t i, std::size_t n_tokens);

// ---------------------------------------------------------------------------
// Experiment configuration

struct SyntheticSource {
    std::size_t n_tokens = 30;
    std::size_t n_pools = 60;
    std::uint64_t seed = 1;
    ReserveDistribution reserves;
    /// Extra DEXs list a random `embed_fraction` of the first DEX's pairs
    /// with independently drawn reserves.
    std::size_t n_dexes = 1;
    double embed_fraction = 0.5;
};

/// Pools of every DEX of a synthetic market; entry 0 is the full DEX.
std::vector<std::vector<PoolSnapshot>> gen_synthetic_market(const SyntheticSource& src,
                                                            int fee_bps = kDefaultFeeBps);

struct SnapshotSource {
    std::vector<std::string> paths;
    std::vector<std::string> dexes;
    std::string prices;
    FilterPolicy filter;
};

enum class MethodKind { kLgRandom, kLgBfs, kLgSplit, kLgAggregator, kLgAggregatorBfs, kDfs };

/// Which token graph a method routes over: the first DEX alone or all DEXs.
enum class Scope { kSingle, kAggregate };

struct Method {
    MethodKind kind = MethodKind::kLgBfs;
    std::uint64_t seed = 0;
    int splits = 2;
    IterationOrder::Kind split_order = IterationOrder::Kind::kRandom;
    int max_hops = kDefaultDfsHops;
    Scope scope = Scope::kSingle;

    std::string label() const;
};

struct ExperimentConfig {
    std::variant<SyntheticSource, SnapshotSource> graph_source = SyntheticSource{};
    double capital_usd = 1000.0;
    std::vector<Method> methods;
    int trials = 1;
    std::optional<int> fee_bps;
    ConvergenceConfig convergence;
    /// All ordered pairs up to this many tokens, else a seeded sample.
    std::size_t all_pairs_max_tokens = 40;
    std::size_t sample_pairs = 1500;
    std::uint64_t pair_seed = 1;
    /// 0 = hardware concurrency.
    unsigned threads = 0;

    // Scaling experiments only.
    std::vector<std::size_t> sizes;
    double pools_per_token = 2.0;
    int repeats = 3;
};

/// Parses the JSON config accepted by `bench ratio` and `bench scaling`.
/// Throws ConfigError on unknown methods or invalid values.
ExperimentConfig parse_experiment_config(const nlohmann::json& doc);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
nlohmann::ordered_json to_json(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// Markets

/// Token graphs for one trial: one per DEX plus their union.
struct Market {
    std::vector<TokenGraph> dex_graphs;
    std::shared_ptr<const LineGraphTopology> single;     // first DEX
    std::shared_ptr<const LineGraphTopology> aggregate;  // all DEXs
    PriceTable prices;
    bool synthetic = true;

    const TokenGraph& single_graph() const { return single->graph(); }
    const TokenGraph& aggregate_graph() const { return aggregate->graph(); }
};

/// Builds trial `trial` of the configured graph source. Synthetic trials
/// use independent seeds; snapshot trials reload the same data.
Market build_market(const ExperimentConfig& cfg, int trial);

// ---------------------------------------------------------------------------
// Ratio experiments

struct MethodOutcome {
    double amount_out = 0.0;
    int rounds = 0;
    bool truncated = false;
    std::chrono::nanoseconds elapsed{0};
    /// "ok", "no_route" or an error description.
    std::string status = "ok";
    bool ok() const { return status == "ok"; }
};

/// Runs `method` from `source` with `amount_in` to each of `targets`.
/// Line-graph methods without splitting route once and answer every target.
std::vector<MethodOutcome> evaluate_method(const Market& market, const Method& method,
                                           const TokenId& source, const std::vector<TokenId>& targets,
                                           double amount_in, const ConvergenceConfig& cfg,
                                           std::uint64_t stream);

struct RatioRecord {
    int trial = 0;
    TokenId source;
    TokenId target;
    double amount_in = 0.0;
    MethodOutcome numerator;
    MethodOutcome denominator;
    double ratio = 0.0;
    /// Included in the CDF (the denominator found a route).
    bool included = false;
};

struct RatioExperimentResult {
    std::vector<RatioRecord> records;
    /// (cumulative fraction, ratio) at 1% steps.
    std::vector<std::pair<double, double>> cdf;
    std::size_t included = 0;
    std::size_t excluded_denominator_no_route = 0;
    std::size_t numerator_no_route = 0;
};

/// Ordered (source, target) pairs for one trial, sorted.
std::vector<std::pair<TokenId, TokenId>> sample_pairs(const std::vector<TokenId>& tokens,
                                                      const ExperimentConfig& cfg, int trial);

/// Compares methods[0] (numerator) against methods[1] (denominator) on
/// identical pristine state for every sampled pair.
RatioExperimentResult run_ratio_experiment(const ExperimentConfig& cfg);

/// Lower empirical quantiles at fractions 1/steps, 2/steps, ..., 1.
std::vector<std::pair<double, double>> empirical_cdf(std::vector<double> values, int steps = 100);

// ---------------------------------------------------------------------------
// Scaling experiments

struct ScalingSample {
    std::size_t n_tokens = 0;
    int trial = 0;
    std::string method;
    TokenId source;
    int rounds = 0;
    bool truncated = false;
    std::size_t vertices = 0;
    std::size_t links = 0;
    std::chrono::nanoseconds elapsed{0};  // median over repeats
    std::chrono::nanoseconds build_elapsed{0};
};

struct ScalingRow {
    std::size_t n_tokens = 0;
    std::size_t n_pools = 0;
    std::string method;
    int trials = 0;
    double mean_rounds = 0.0;
    double mean_vertices = 0.0;
    double mean_links = 0.0;
    int truncated_runs = 0;
    double mean_elapsed_us = 0.0;
    double mean_build_us = 0.0;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

struct ScalingResult {
    std::vector<ScalingRow> rows;
    std::vector<ScalingSample> samples;
    /// Per method: least-squares fit of log(mean elapsed) on log(n_tokens).
    std::vector<std::pair<std::string, LinearFit>> fits;
};

/// Synthetic source only; each size uses round(pools_per_token * n) pools.
ScalingResult run_scaling_experiment(const ExperimentConfig& cfg);

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// One-sided exact sign test: P(X >= wins) for X ~ Binomial(wins + losses, 1/2).
double sign_test_p_value(std::size_t wins, std::size_t losses);

// ---------------------------------------------------------------------------
// Output

/// ratio.csv, cdf.csv, manifest.json (deterministic) and timing.json (wall clock).
void write_ratio_outputs(const ExperimentConfig& cfg, const RatioExperimentResult& result,
                         const std::filesystem::path& dir);

/// scaling.csv, scaling_trials.csv, manifest.json (deterministic) and
/// timing.json (wall clock and fits).
void write_scaling_outputs(const ExperimentConfig& cfg, const ScalingResult& result,
                           const std::filesystem::path& dir);

std::string ratio_csv(const RatioExperimentResult& result);
std::string cdf_csv(const RatioExperimentResult& result);
std::string scaling_csv(const ScalingResult& result);
std::string scaling_trials_csv(const ScalingResult& result);

}  // namespace ammroute::bench
