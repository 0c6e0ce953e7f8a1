#pragma once

#include <vector>

#include "ammroute/error.hpp"
#include "ammroute/router.hpp"

namespace ammroute {

struct SplitResult {
    double total_out = 0.0;
    std::vector<RouteResult> parts;
    TradePlan merged_plan;
    int splits = 1;
    /// Routed over an aggregator line graph (reporting only; the procedure is the same).
    bool aggregator = false;
};

/// Thrown when a part after the first finds no route. Carries the parts
/// that completed.
class SplitError : public NoRouteError {
public:
    SplitError(const std::string& what, std::vector<RouteResult> completed)
        : NoRouteError(what), completed_(std::move(completed)) {}

    const std::vector<RouteResult>& completed() const noexcept { return completed_; }

private:
    std::vector<RouteResult> completed_;
};

/// Routes `splits` equal parts of `amount_in` one after another. After each
/// part its legs are applied to a private copy of the reserves, so the next
/// part sees the moved prices. Part k uses seed order.seed + k under random
/// order; with splits == 1 the result equals route_to bit for bit.
SplitResult split_route(const LineGraph& lg, double amount_in, int splits, const TokenId& target,
                        const IterationOrder& order, const ConvergenceConfig& cfg = {});

/// Concatenates part plans in execution order. Adjacent legs through the
/// same pool and direction are merged into one leg when replaying the
/// merged plan on `book` leaves the total unchanged to 1e-9 relative.
/// Throws ConsistencyError if the final plan does not reproduce the parts' total.
TradePlan merge_plans(const TokenGraph& g, const ReserveBook& book, const std::vector<RouteResult>& parts);

}  // namespace ammroute
