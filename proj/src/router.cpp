#include "ammroute/router.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ammroute/error.hpp"
#include "ammroute/rng.hpp"

namespace ammroute {

std::vector<LGLink> bfs_link_order(const LineGraph& lg) {
    const std::size_t n = lg.vertex_count();
    std::vector<LGLink> order;
    order.reserve(lg.link_count());
    std::vector<char> expanded(n, 0);
    std::vector<char> reached(n, 0);

    std::vector<VertexId> layer{LineGraph::kSource};
    reached[LineGraph::kSource] = 1;
    while (!layer.empty()) {
        std::vector<VertexId> next;
        for (VertexId q : layer) {
            expanded[q] = 1;
            for (VertexId w : lg.successors(q)) {
                order.push_back({q, w});
                if (!reached[w]) {
                    reached[w] = 1;
                    next.push_back(w);
                }
            }
        }
        layer = std::move(next);
    }
    for (VertexId v = 0; v < n; ++v) {
        if (expanded[v]) continue;
        for (VertexId w : lg.successors(v)) order.push_back({v, w});
    }
    return order;
}

ReplayResult replay_plan(const TokenGraph& g, const TradePlan& plan, ReserveBook book) {
    ReplayResult result;
    result.plan.reserve(plan.size());
    for (const TradeHop& hop : plan) {
        if (hop.pool.pool_ref >= g.pool_count()) throw ConsistencyError("plan references unknown pool");
        PoolReserves& reserves = book[hop.pool.pool_ref];
        TradeHop leg = hop;
        leg.pool = with_reserves(hop.pool, reserves);
        leg.amount_out = swap_out(leg.pool, hop.amount_in);
        apply_swap(reserves, hop.pool.zero_for_one, hop.amount_in, leg.amount_out);
        if (leg.final_leg) result.total_out += leg.amount_out;
        result.plan.push_back(std::move(leg));
    }
    return result;
}

RouteState::RouteState(std::size_t vertex_count) : best_(vertex_count, 0.0), head_(vertex_count, -1) {}

std::vector<VertexId> RouteState::path(VertexId v) const {
    std::vector<VertexId> out;
    for (std::int32_t i = head_[v]; i >= 0; i = nodes_[i].prev) out.push_back(nodes_[i].vertex);
    if (out.empty()) return out;
    out.push_back(LineGraph::kSource);
    std::reverse(out.begin(), out.end());
    return out;
}

std::size_t RouteState::path_length(VertexId v) const {
    return head_[v] < 0 ? 0 : nodes_[head_[v]].depth;
}

class Relaxer {
public:
    Relaxer(const LineGraph& lg, const ReserveBook& book, double amount_in, const ConvergenceConfig& cfg)
        : topo_(lg.topology()),
          book_(book),
          amount_in_(amount_in),
          threshold_(1.0 + cfg.min_rel_improvement),
          state_(lg.vertex_count()) {}

    bool relax(LGLink link) {
        double in = amount_in_;
        std::int32_t prev = -1;
        std::uint64_t mask = 0;
        std::uint32_t depth = 0;
        if (link.from != LineGraph::kSource) {
            in = state_.best_[link.from];
            if (in <= 0.0) return false;
            prev = state_.head_[link.from];
            const auto& node = state_.nodes_[prev];
            mask = node.pool_mask;
            depth = node.depth;
        }

        const VertexId w = link.to;
        const std::uint32_t pool = topo_.pool_of(w);
        const bool zero_for_one = topo_.zero_for_one(w);
        const std::uint64_t bit = std::uint64_t{1} << (pool & 63);

        double candidate;
        if ((mask & bit) == 0) {
            const PoolReserves& r = book_[pool];
            candidate = zero_for_one
                            ? constant_product_out(r.reserve0, r.reserve1, topo_.fee_bps(w), in)
                            : constant_product_out(r.reserve1, r.reserve0, topo_.fee_bps(w), in);
        } else {
            candidate = reused_pool_out(prev, pool, w, in);
        }

        double& best = state_.best_[w];
        if (!(candidate > best * threshold_)) return false;
        best = candidate;
        state_.head_[w] = static_cast<std::int32_t>(state_.nodes_.size());
        state_.nodes_.push_back({w, prev, depth + 1, in, candidate, mask | bit});
        return true;
    }

    RouteState take_state() { return std::move(state_); }

private:
    // Output of w's pool after the trades the path ending at `prev` already
    // made through that same pool.
    double reused_pool_out(std::int32_t prev, std::uint32_t pool, VertexId w, double in) {
        scratch_.clear();
        for (std::int32_t i = prev; i >= 0; i = state_.nodes_[i].prev) {
            if (topo_.pool_of(state_.nodes_[i].vertex) == pool) scratch_.push_back(i);
        }
        PoolReserves r = book_[pool];
        for (auto it = scratch_.rbegin(); it != scratch_.rend(); ++it) {
            const auto& node = state_.nodes_[*it];
            double& rin = topo_.zero_for_one(node.vertex) ? r.reserve0 : r.reserve1;
            double& rout = topo_.zero_for_one(node.vertex) ? r.reserve1 : r.reserve0;
            rin += node.amount_in;
            rout -= node.amount_out;
        }
        return topo_.zero_for_one(w) ? constant_product_out(r.reserve0, r.reserve1, topo_.fee_bps(w), in)
                                     : constant_product_out(r.reserve1, r.reserve0, topo_.fee_bps(w), in);
    }

    const LineGraphTopology& topo_;
    const ReserveBook& book_;
    double amount_in_;
    double threshold_;
    RouteState state_;
    std::vector<std::int32_t> scratch_;
};

RouteRun route(const LineGraph& lg, const ReserveBook& book, double amount_in,
               const IterationOrder& order, const ConvergenceConfig& cfg) {
    if (!(amount_in > 0.0) || !std::isfinite(amount_in)) {
        throw DomainError("route: amount_in must be positive and finite");
    }
    if (book.size() != lg.graph().pool_count()) throw ConsistencyError("reserve book does not match graph");
    if (cfg.max_rounds < 1) throw ConfigError("max_rounds must be at least 1");

    const auto start = std::chrono::steady_clock::now();
    Relaxer relaxer(lg, book, amount_in, cfg);
    RouteRun run;
    run.amount_in = amount_in;

    std::vector<LGLink> links =
        order.kind == IterationOrder::Kind::kBfs ? bfs_link_order(lg) : lg.links();
    Rng rng(order.seed);

    bool changed = true;
    while (changed && run.rounds < cfg.max_rounds) {
        changed = false;
        ++run.rounds;
        if (order.kind == IterationOrder::Kind::kRandom) shuffle(std::span<LGLink>(links), rng);
        for (const LGLink& link : links) changed |= relaxer.relax(link);
    }
    run.truncated = changed;
    run.state = relaxer.take_state();
    run.elapsed = std::chrono::steady_clock::now() - start;
    return run;
}

RouteRun route(const LineGraph& lg, double amount_in, const IterationOrder& order,
               const ConvergenceConfig& cfg) {
    return route(lg, lg.graph().pristine_reserves(), amount_in, order, cfg);
}

namespace {

// Replays a single linear path leg by leg, chaining each output into the
// next input.
ReplayResult replay_linear(const TokenGraph& g, const std::vector<VertexId>& vertex_path,
                           double amount_in, ReserveBook book) {
    ReplayResult result;
    double carried = amount_in;
    for (std::size_t i = 1; i < vertex_path.size(); ++i) {
        TradeHop hop;
        hop.pool = g.edge_at(vertex_path[i] - 1, book);
        hop.amount_in = carried;
        hop.amount_out = swap_out(hop.pool, carried);
        hop.final_leg = i + 1 == vertex_path.size();
        apply_swap(book[hop.pool.pool_ref], hop.pool.zero_for_one, hop.amount_in, hop.amount_out);
        carried = hop.amount_out;
        result.plan.push_back(std::move(hop));
    }
    result.total_out = carried;
    return result;
}

bool close(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace

RouteResult extract_result(const LineGraph& lg, const ReserveBook& book, const RouteRun& run,
                           const TokenId& target) {
    const TokenGraph& g = lg.graph();
    const auto target_index = g.token_index(target);
    if (!target_index) throw NoRouteError("target token '" + target.str() + "' is not in the graph");

    const RouteState& state = run.state;
    VertexId best = LineGraph::kSource;
    std::vector<VertexId> best_path;
    for (VertexId v = 1; v < lg.vertex_count(); ++v) {
        if (lg.topology().token_out(v) != *target_index) continue;
        const double amount = state.best_amount(v);
        if (!(amount > 0.0)) continue;
        if (best != LineGraph::kSource) {
            const double incumbent = state.best_amount(best);
            if (amount < incumbent) continue;
            if (amount == incumbent) {
                const auto len = state.path_length(v);
                const auto best_len = state.path_length(best);
                if (len > best_len) continue;
                if (len == best_len) {
                    auto path = state.path(v);
                    if (!(path < best_path)) continue;
                    best = v;
                    best_path = std::move(path);
                    continue;
                }
            }
        }
        best = v;
        best_path = state.path(v);
    }
    if (best == LineGraph::kSource) {
        throw NoRouteError("no route from '" + lg.source_token().str() + "' to '" + target.str() + "'");
    }

    auto replay = replay_linear(g, best_path, run.amount_in, book);
    if (!close(replay.total_out, state.best_amount(best), 1e-9)) {
        throw ConsistencyError("path replay disagrees with relaxed amount");
    }
    RouteResult result;
    result.amount_out = replay.total_out;
    result.path = std::move(replay.plan);
    result.vertex_path = std::move(best_path);
    result.rounds = run.rounds;
    result.truncated = run.truncated;
    result.elapsed = run.elapsed;
    return result;
}

RouteResult extract_result(const LineGraph& lg, const RouteRun& run, const TokenId& target) {
    return extract_result(lg, lg.graph().pristine_reserves(), run, target);
}

RouteResult route_to(const LineGraph& lg, const ReserveBook& book, double amount_in,
                     const TokenId& target, const IterationOrder& order, const ConvergenceConfig& cfg) {
    return extract_result(lg, book, route(lg, book, amount_in, order, cfg), target);
}

RouteResult route_to(const LineGraph& lg, double amount_in, const TokenId& target,
                     const IterationOrder& order, const ConvergenceConfig& cfg) {
    const ReserveBook book = lg.graph().pristine_reserves();
    return route_to(lg, book, amount_in, target, order, cfg);
}

namespace {

class DepthFirst {
public:
    DepthFirst(const TokenGraph& g, const ReserveBook& book, std::uint32_t target, int max_hops)
        : g_(g), book_(book), target_(target), max_hops_(max_hops), visited_(g.token_count(), 0) {}

    void search(std::uint32_t token, double amount) {
        visited_[token] = 1;
        const auto [first, last] = g_.out_edge_range(token);
        for (std::uint32_t e = first; e < last; ++e) {
            const std::uint32_t next = g_.edge_to(e);
            if (visited_[next]) continue;
            const DirectedPool pool = g_.edge_at(e, book_);
            const double out = constant_product_out(pool.reserve_in, pool.reserve_out, pool.fee_bps, amount);
            stack_.push_back(e + 1);
            if (next == target_) {
                if (out > best_amount_) {
                    best_amount_ = out;
                    best_path_ = stack_;
                }
            } else if (static_cast<int>(stack_.size()) < max_hops_) {
                search(next, out);
            }
            stack_.pop_back();
        }
        visited_[token] = 0;
    }

    double best_amount() const { return best_amount_; }
    const std::vector<VertexId>& best_path() const { return best_path_; }

private:
    const TokenGraph& g_;
    const ReserveBook& book_;
    std::uint32_t target_;
    int max_hops_;
    std::vector<char> visited_;
    std::vector<VertexId> stack_;
    std::vector<VertexId> best_path_;
    double best_amount_ = 0.0;
};

}  // namespace

RouteResult dfs_route(const TokenGraph& g, const ReserveBook& book, const TokenId& source,
                      const TokenId& target, double amount_in, int max_hops) {
    if (max_hops < 1) throw ConfigError("dfs max_hops must be at least 1");
    if (!(amount_in > 0.0) || !std::isfinite(amount_in)) {
        throw DomainError("dfs_route: amount_in must be positive and finite");
    }
    const auto src = g.token_index(source);
    if (!src) throw ConfigError("unknown source token '" + source.str() + "'");
    if (source == target) throw NoRouteError("dfs_route: source and target are the same token");
    const auto dst = g.token_index(target);
    if (!dst) throw NoRouteError("target token '" + target.str() + "' is not in the graph");

    const auto start = std::chrono::steady_clock::now();
    DepthFirst dfs(g, book, *dst, max_hops);
    dfs.search(*src, amount_in);
    if (!(dfs.best_amount() > 0.0)) {
        throw NoRouteError("no path from '" + source.str() + "' to '" + target.str() + "' within " +
                           std::to_string(max_hops) + " hops");
    }
    std::vector<VertexId> vertex_path{LineGraph::kSource};
    vertex_path.insert(vertex_path.end(), dfs.best_path().begin(), dfs.best_path().end());
    auto replay = replay_linear(g, vertex_path, amount_in, book);

    RouteResult result;
    result.amount_out = replay.total_out;
    result.path = std::move(replay.plan);
    result.vertex_path = std::move(vertex_path);
    result.elapsed = std::chrono::steady_clock::now() - start;
    return result;
}

RouteResult dfs_route(const TokenGraph& g, const TokenId& source, const TokenId& target,
                      double amount_in, int max_hops) {
    return dfs_route(g, g.pristine_reserves(), source, target, amount_in, max_hops);
}

}  // namespace ammroute
