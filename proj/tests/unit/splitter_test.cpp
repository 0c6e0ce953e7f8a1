#include <gtest/gtest.h>

#include <cmath>

#include "ammroute/bench.hpp"
#include "ammroute/splitter.hpp"
#include "fixtures.hpp"

using namespace ammroute;

namespace {

LineGraph fixture_lg(const std::string& name) {
    return build_line_graph(fixtures::load_fixture(name).graph(), TokenId("A"));
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST(SplitRoute, OnePartIsBitwiseUnsplit) {
    const auto g = build_graph(bench::gen_synthetic_graph(25, 50, 6));
    const auto lg = build_line_graph(g, g.tokens()[0]);
    for (auto order : {IterationOrder::bfs(), IterationOrder::random(4)}) {
        const auto whole = route_to(lg, 2000.0, g.tokens()[7], order);
        const auto split = split_route(lg, 2000.0, 1, g.tokens()[7], order);
        EXPECT_EQ(split.total_out, whole.amount_out);
        ASSERT_EQ(split.parts.size(), 1u);
        EXPECT_EQ(split.parts[0].vertex_path, whole.vertex_path);
        ASSERT_EQ(split.merged_plan.size(), whole.path.size());
        for (std::size_t i = 0; i < whole.path.size(); ++i) {
            EXPECT_EQ(split.merged_plan[i].amount_out, whole.path[i].amount_out);
        }
    }
}

TEST(SplitRoute, SamePoolSplitIsNeutral) {
    const auto lg = fixture_lg("single_pool");
    const auto r = split_route(lg, 10.0, 2, TokenId("B"), IterationOrder::bfs());
    ASSERT_EQ(r.parts.size(), 2u);
    EXPECT_NEAR(r.parts[0].amount_out, 100.0 * 5.0 / 105.0, 1e-12);
    // (100 - 4.7619...) * 5 / 110
    EXPECT_NEAR(r.parts[1].amount_out, (100.0 - 100.0 * 5.0 / 105.0) * 5.0 / 110.0, 1e-12);
    EXPECT_LE(rel(r.total_out, 100.0 * 10.0 / 110.0), 1e-9);
    ASSERT_EQ(r.merged_plan.size(), 1u);
    EXPECT_DOUBLE_EQ(r.merged_plan[0].amount_in, 10.0);
    EXPECT_LE(rel(r.merged_plan[0].amount_out, 100.0 * 10.0 / 110.0), 1e-9);
}

TEST(SplitRoute, TwoPathFixtureDivertsSecondPart) {
    const auto lg = fixture_lg("two_path");
    const auto whole = split_route(lg, 100.0, 1, TokenId("C"), IterationOrder::bfs());
    const auto two = split_route(lg, 100.0, 2, TokenId("C"), IterationOrder::bfs());
    EXPECT_NEAR(whole.total_out, 82.89619330616799, 1e-9);
    EXPECT_NEAR(two.total_out, 87.82846184890485, 1e-9);
    EXPECT_GT(two.total_out, whole.total_out);
    EXPECT_EQ(two.parts[0].path[0].pool.token_out, TokenId("B"));
    EXPECT_EQ(two.parts[1].path[0].pool.token_out, TokenId("D"));
    EXPECT_EQ(two.merged_plan.size(), 4u);
    EXPECT_FALSE(two.aggregator);
}

TEST(SplitRoute, MergedPlanReplaysToTotal) {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const auto g = build_graph(bench::gen_synthetic_graph(12, 24, seed, {.min = 1e3, .max = 1e4}));
        const auto lg = build_line_graph(g, g.tokens()[0]);
        for (int k : {1, 2, 4, 8}) {
            const auto r = split_route(lg, 500.0, k, g.tokens()[5], IterationOrder::random(seed));
            EXPECT_EQ(r.parts.size(), static_cast<std::size_t>(k));
            const auto replay = replay_plan(g, r.merged_plan, g.pristine_reserves());
            EXPECT_LE(rel(replay.total_out, r.total_out), 1e-9) << "seed " << seed << " k " << k;
        }
    }
}

TEST(SplitRoute, LeavesSnapshotUntouched) {
    const auto lg = fixture_lg("two_path");
    const auto before = lg.graph().pristine_reserves();
    split_route(lg, 100.0, 4, TokenId("C"), IterationOrder::bfs());
    EXPECT_EQ(lg.graph().pristine_reserves(), before);
}

TEST(SplitRoute, NoRouteCarriesCompletedParts) {
    auto pools = fixtures::load_fixture("single_pool").pools;
    pools.push_back({"dex1", TokenId("Y"), TokenId("Z"), 10, 10, 0});
    const auto lg = build_line_graph(build_graph(pools), TokenId("A"));
    try {
        split_route(lg, 10.0, 2, TokenId("Z"), IterationOrder::bfs());
        FAIL() << "expected SplitError";
    } catch (const SplitError& e) {
        EXPECT_TRUE(e.completed().empty());
    }
    EXPECT_THROW(split_route(lg, 10.0, 0, TokenId("B"), IterationOrder::bfs()), ConfigError);
}

TEST(MergePlans, SinglePartIsIdentity) {
    const auto lg = fixture_lg("triangle");
    const auto part = route_to(lg, 10.0, TokenId("C"), IterationOrder::bfs());
    const auto plan = merge_plans(lg.graph(), lg.graph().pristine_reserves(), {part});
    ASSERT_EQ(plan.size(), part.path.size());
    for (std::size_t i = 0; i < plan.size(); ++i) EXPECT_EQ(plan[i].amount_out, part.path[i].amount_out);
}

TEST(SplitRoute, AggregatorFlag) {
    std::vector<TokenGraph> graphs{fixtures::load_fixture("two_path", "dex1").graph(),
                                   fixtures::load_fixture("two_path", "dex2").graph()};
    const auto lg = build_aggregator_line_graph(graphs, TokenId("A"));
    const auto r = split_route(lg, 100.0, 2, TokenId("C"), IterationOrder::bfs());
    EXPECT_TRUE(r.aggregator);
}
