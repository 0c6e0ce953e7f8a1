#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <vector>

#include "ammroute/line_graph.hpp"

namespace ammroute {

struct ConvergenceConfig {
    /// A relaxation only counts if it beats the stored amount by this
    /// relative margin.
    double min_rel_improvement = 1e-12;
    int max_rounds = 64;
};

/// Order in which each relaxation round visits the links.
struct IterationOrder {
    enum class Kind { kRandom, kBfs };

    Kind kind = Kind::kBfs;
    std::uint64_t seed = 0;

    static IterationOrder random(std::uint64_t seed) { return {Kind::kRandom, seed}; }
    static IterationOrder bfs() { return {Kind::kBfs, 0}; }
};

/// Links in breadth-first layers from the source vertex: all source links,
/// then the links leaving vertices first reached in layer one, and so on.
/// Links unreachable from the source follow in (from, to) order. Every link
/// appears exactly once.
std::vector<LGLink> bfs_link_order(const LineGraph& lg);

/// One leg of an executable plan.
struct TradeHop {
    DirectedPool pool;  // reserves as seen right before this leg
    double amount_in = 0.0;
    double amount_out = 0.0;
    /// Output is delivered to the trader rather than fed to the next leg.
    bool final_leg = false;
};

using TradePlan = std::vector<TradeHop>;

struct ReplayResult {
    TradePlan plan;  // recomputed outputs and pre-trade reserves
    double total_out = 0.0;
};

/// Executes `plan` leg by leg against a copy of `book`, updating reserves
/// after every leg. Each leg trades its recorded amount_in; total_out sums
/// the outputs of final legs.
ReplayResult replay_plan(const TokenGraph& g, const TradePlan& plan, ReserveBook book);

/// Per-vertex routing state. Every stored amount has an immutable path
/// snapshot that reproduces it exactly.
class RouteState {
public:
    RouteState() = default;
    explicit RouteState(std::size_t vertex_count);

    double best_amount(VertexId v) const { return best_[v]; }
    std::span<const double> best_amounts() const { return best_; }

    /// Vertex ids from the source vertex (inclusive) to `v`; empty if v is unreached.
    std::vector<VertexId> path(VertexId v) const;
    std::size_t path_length(VertexId v) const;

    /// Number of accepted relaxations.
    std::size_t updates() const noexcept { return nodes_.size(); }

private:
    friend class Relaxer;

    struct Node {
        VertexId vertex;
        std::int32_t prev;
        std::uint32_t depth;
        double amount_in;
        double amount_out;
        std::uint64_t pool_mask;  // one bit per pool id mod 64 on this path
    };

    std::vector<double> best_;
    std::vector<std::int32_t> head_;
    std::vector<Node> nodes_;
};

/// Output of a relaxation run, answering every target at once.
struct RouteRun {
    RouteState state;
    double amount_in = 0.0;
    int rounds = 0;
    /// The round cap was reached while amounts were still improving.
    bool truncated = false;
    std::chrono::nanoseconds elapsed{0};
};

struct RouteResult {
    double amount_out = 0.0;
    TradePlan path;
    std::vector<VertexId> vertex_path;  // starts at the source vertex
    int rounds = 0;
    bool truncated = false;
    std::chrono::nanoseconds elapsed{0};
};

/// Relaxes every link until a full round changes nothing or the round cap is
/// hit. A link u->w offers the amount held at u to w's pool, priced at the
/// reserves left by u's own path. Throws DomainError for amount_in <= 0.
RouteRun route(const LineGraph& lg, double amount_in, const IterationOrder& order,
               const ConvergenceConfig& cfg = {});
RouteRun route(const LineGraph& lg, const ReserveBook& book, double amount_in,
               const IterationOrder& order, const ConvergenceConfig& cfg = {});

/// Best vertex whose output token is `target`: highest amount, then fewer
/// hops, then lexicographically smaller vertex path. The plan is replayed
/// against `book`. Throws NoRouteError if no such vertex holds a positive amount.
RouteResult extract_result(const LineGraph& lg, const RouteRun& run, const TokenId& target);
RouteResult extract_result(const LineGraph& lg, const ReserveBook& book, const RouteRun& run,
                           const TokenId& target);

/// route + extract_result.
RouteResult route_to(const LineGraph& lg, double amount_in, const TokenId& target,
                     const IterationOrder& order, const ConvergenceConfig& cfg = {});
RouteResult route_to(const LineGraph& lg, const ReserveBook& book, double amount_in,
                     const TokenId& target, const IterationOrder& order,
                     const ConvergenceConfig& cfg = {});

inline constexpr int kDefaultDfsHops = 3;

/// Exhaustive search over token-simple paths of at most `max_hops` pools.
/// Throws NoRouteError when source == target or nothing is reachable.
RouteResult dfs_route(const TokenGraph& g, const TokenId& source, const TokenId& target,
                      double amount_in, int max_hops = kDefaultDfsHops);
RouteResult dfs_route(const TokenGraph& g, const ReserveBook& book, const TokenId& source,
                      const TokenId& target, double amount_in, int max_hops = kDefaultDfsHops);

}  // namespace ammroute
