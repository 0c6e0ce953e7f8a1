#include "ammroute/splitter.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ammroute/error.hpp"

namespace ammroute {
namespace {

bool close(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

bool same_leg(const TradeHop& a, const TradeHop& b) {
    return a.pool.pool_ref == b.pool.pool_ref && a.pool.zero_for_one == b.pool.zero_for_one &&
           a.final_leg == b.final_leg;
}

}  // namespace

TradePlan merge_plans(const TokenGraph& g, const ReserveBook& book, const std::vector<RouteResult>& parts) {
    if (parts.empty()) throw ConfigError("merge_plans needs at least one part");

    double expected = 0.0;
    TradePlan plan;
    for (const auto& part : parts) {
        expected += part.amount_out;
        plan.insert(plan.end(), part.path.begin(), part.path.end());
    }

    std::size_t i = 0;
    while (i + 1 < plan.size()) {
        if (!same_leg(plan[i], plan[i + 1])) {
            ++i;
            continue;
        }
        TradePlan candidate = plan;
        candidate[i].amount_in += candidate[i + 1].amount_in;
        candidate.erase(candidate.begin() + static_cast<std::ptrdiff_t>(i) + 1);
        if (close(replay_plan(g, candidate, book).total_out, expected, 1e-9)) {
            plan = std::move(candidate);
        } else {
            ++i;
        }
    }

    auto replay = replay_plan(g, plan, book);
    if (!close(replay.total_out, expected, 1e-9)) {
        throw ConsistencyError("merged plan replays to " + std::to_string(replay.total_out) +
                               ", parts sum to " + std::to_string(expected));
    }
    return std::move(replay.plan);
}

SplitResult split_route(const LineGraph& lg, double amount_in, int splits, const TokenId& target,
                        const IterationOrder& order, const ConvergenceConfig& cfg) {
    if (splits < 1) throw ConfigError("split count must be at least 1");
    if (!(amount_in > 0.0) || !std::isfinite(amount_in)) {
        throw DomainError("split_route: amount_in must be positive and finite");
    }

    const TokenGraph& g = lg.graph();
    const ReserveBook pristine = g.pristine_reserves();
    ReserveBook working = pristine;
    const double part_in = amount_in / splits;

    SplitResult result;
    result.splits = splits;
    result.aggregator = g.dexes().size() > 1;
    for (int k = 0; k < splits; ++k) {
        IterationOrder part_order = order;
        part_order.seed = order.seed + static_cast<std::uint64_t>(k);
        RouteResult part;
        try {
            part = route_to(lg, working, part_in, target, part_order, cfg);
        } catch (const NoRouteError& e) {
            std::string what = e.what();
            if (splits > 1) {
                what = "split part " + std::to_string(k + 1) + " of " + std::to_string(splits) + ": " + what;
            }
            throw SplitError(what, std::move(result.parts));
        }
        for (const TradeHop& hop : part.path) {
            apply_swap(working[hop.pool.pool_ref], hop.pool.zero_for_one, hop.amount_in, hop.amount_out);
        }
        result.total_out += part.amount_out;
        result.parts.push_back(std::move(part));
    }
    result.merged_plan = merge_plans(g, pristine, result.parts);
    return result;
}

}  // namespace ammroute
