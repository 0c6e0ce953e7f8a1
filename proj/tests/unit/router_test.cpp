#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "ammroute/bench.hpp"
#include "ammroute/error.hpp"
#include "ammroute/router.hpp"
#include "fixtures.hpp"

using namespace ammroute;

namespace {

LineGraph fixture_lg(const std::string& name, const std::string& source = "A") {
    return build_line_graph(fixtures::load_fixture(name).graph(), TokenId(source));
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST(BfsLinkOrder, PathAppendsUnreachableLinkLast) {
    const auto lg = fixture_lg("path_abc");
    EXPECT_EQ(bfs_link_order(lg), (std::vector<LGLink>{{0, 1}, {1, 3}, {4, 2}}));
}

TEST(BfsLinkOrder, SinglePool) {
    EXPECT_EQ(bfs_link_order(fixture_lg("single_pool")), (std::vector<LGLink>{{0, 1}}));
}

TEST(BfsLinkOrder, TriangleLayers) {
    const auto lg = fixture_lg("triangle");
    const auto order = bfs_link_order(lg);
    ASSERT_EQ(order.size(), 8u);
    EXPECT_EQ(order[0].from, LineGraph::kSource);
    EXPECT_EQ(order[1].from, LineGraph::kSource);
    // layer two leaves the two vertices the source reached
    for (int i = 2; i < 4; ++i) EXPECT_TRUE(order[i].from == order[0].to || order[i].from == order[1].to);
}

TEST(BfsLinkOrder, IsPermutationOfLinks) {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto g = build_graph(bench::gen_synthetic_graph(12, 18, seed));
        const auto lg = build_line_graph(g, g.tokens()[seed % 12]);
        auto order = bfs_link_order(lg);
        std::sort(order.begin(), order.end());
        EXPECT_EQ(order, lg.links());
    }
}

TEST(Route, SinglePoolTwoRounds) {
    const auto lg = fixture_lg("single_pool");
    for (auto order : {IterationOrder::bfs(), IterationOrder::random(5)}) {
        const auto r = route_to(lg, 10.0, TokenId("B"), order);
        EXPECT_NEAR(r.amount_out, 100.0 * 10.0 / 110.0, 1e-12);
        EXPECT_EQ(r.vertex_path, (std::vector<VertexId>{0, 1}));
        EXPECT_EQ(r.rounds, 2);
        EXPECT_FALSE(r.truncated);
    }
}

TEST(Route, TrianglePrefersTwoHops) {
    const auto lg = fixture_lg("triangle");
    const auto r = route_to(lg, 10.0, TokenId("C"), IterationOrder::bfs());
    EXPECT_NEAR(r.amount_out, 25.0 / 3.0, 1e-12);
    ASSERT_EQ(r.path.size(), 2u);
    EXPECT_EQ(r.path[0].pool.token_out, TokenId("B"));
    EXPECT_EQ(r.path[1].pool.token_out, TokenId("C"));
    EXPECT_TRUE(r.path[1].final_leg);
    EXPECT_FALSE(r.path[0].final_leg);
}

TEST(Route, HopsCompose) {
    const auto g = build_graph(bench::gen_synthetic_graph(20, 40, 3));
    const auto lg = build_line_graph(g, g.tokens()[0]);
    const auto run = route(lg, 100.0, IterationOrder::random(1));
    for (const auto& target : g.tokens()) {
        if (target == g.tokens()[0]) continue;
        const auto r = extract_result(lg, run, target);
        EXPECT_EQ(r.path.front().pool.token_in, g.tokens()[0]);
        EXPECT_EQ(r.path.back().pool.token_out, target);
        for (std::size_t i = 1; i < r.path.size(); ++i) {
            EXPECT_EQ(r.path[i - 1].pool.token_out, r.path[i].pool.token_in);
            EXPECT_EQ(r.path[i - 1].amount_out, r.path[i].amount_in);
        }
    }
}

TEST(Route, RoundTripToSourceLosesValueWithoutArbitrage) {
    const auto f = fixtures::load_fixture("two_path");
    const auto lg = build_line_graph(f.graph(), TokenId("A"));
    const auto r = route_to(lg, 10.0, TokenId("A"), IterationOrder::bfs());
    EXPECT_GE(r.path.size(), 2u);
    EXPECT_LT(r.amount_out, 10.0);
    const auto oracle = fixtures::brute_force_best_path(f.graph(), TokenId("A"), TokenId("A"), 10.0, 6);
    EXPECT_LE(rel(r.amount_out, oracle.amount_out), 1e-9);
}

TEST(Route, UnreachableTargetIsNoRoute) {
    auto pools = fixtures::load_fixture("single_pool").pools;
    pools.push_back({"dex1", TokenId("Y"), TokenId("Z"), 10, 10, 0});
    const auto lg = build_line_graph(build_graph(pools), TokenId("A"));
    EXPECT_THROW(route_to(lg, 1.0, TokenId("Z"), IterationOrder::bfs()), NoRouteError);
    EXPECT_THROW(route_to(lg, 1.0, TokenId("Q"), IterationOrder::bfs()), NoRouteError);
}

TEST(Route, RejectsNonPositiveAmount) {
    const auto lg = fixture_lg("single_pool");
    EXPECT_THROW(route(lg, 0.0, IterationOrder::bfs()), DomainError);
    EXPECT_THROW(route(lg, -1.0, IterationOrder::bfs()), DomainError);
}

TEST(Route, ExactTieGoesToLowerVertexPath) {
    auto pools = fixtures::load_fixture("single_pool", "dexa").pools;
    auto copy = fixtures::load_fixture("single_pool", "dexb").pools;
    pools.insert(pools.end(), copy.begin(), copy.end());
    const auto lg = build_line_graph(build_graph(pools), TokenId("A"));
    const auto r = route_to(lg, 10.0, TokenId("B"), IterationOrder::random(9));
    EXPECT_EQ(r.vertex_path.size(), 2u);
    EXPECT_EQ(r.path[0].pool.dex, "dexa");
}

TEST(Route, SeededRunsAreBitwiseIdentical) {
    const auto g = build_graph(bench::gen_synthetic_graph(30, 60, 11));
    const auto lg = build_line_graph(g, g.tokens()[3]);
    for (auto order : {IterationOrder::bfs(), IterationOrder::random(77)}) {
        const auto a = route(lg, 500.0, order);
        const auto b = route(lg, 500.0, order);
        ASSERT_EQ(a.rounds, b.rounds);
        EXPECT_TRUE(std::equal(a.state.best_amounts().begin(), a.state.best_amounts().end(),
                               b.state.best_amounts().begin()));
    }
}

TEST(Route, ReplayMatchesStoredAmounts) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        bench::ReserveDistribution dist;
        dist.skew = 0.3;
        const auto g = build_graph(bench::gen_synthetic_graph(15, 30, seed, dist));
        const auto lg = build_line_graph(g, g.tokens()[0]);
        const auto run = route(lg, 1000.0, IterationOrder::random(seed));
        for (VertexId v = 1; v < lg.vertex_count(); ++v) {
            const double stored = run.state.best_amount(v);
            if (stored <= 0.0) continue;
            const auto path = run.state.path(v);
            TradePlan plan;
            double carried = 1000.0;
            ReserveBook book = g.pristine_reserves();
            for (std::size_t i = 1; i < path.size(); ++i) {
                TradeHop hop{g.edge_at(path[i] - 1, book), carried, 0.0, i + 1 == path.size()};
                hop.amount_out = swap_out(hop.pool, carried);
                apply_swap(book[hop.pool.pool_ref], hop.pool.zero_for_one, carried, hop.amount_out);
                carried = hop.amount_out;
            }
            EXPECT_LE(rel(carried, stored), 1e-9);
        }
    }
}

TEST(Route, DominatesDepthFirstSearch) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto pools = fixtures::random_cycle_free_pools(seed, 7, 10, 0.2, 50.0);
        const auto g = build_graph(pools);
        for (const auto& source : g.tokens()) {
            const auto lg = build_line_graph(g, source);
            const auto run = route(lg, 50.0, IterationOrder::bfs());
            ASSERT_FALSE(run.truncated);
            for (const auto& target : g.tokens()) {
                if (target == source) continue;
                const double lg_out = extract_result(lg, run, target).amount_out;
                for (int h = 1; h <= 3; ++h) {
                    try {
                        const double dfs_out = dfs_route(g, source, target, 50.0, h).amount_out;
                        EXPECT_GE(lg_out, dfs_out * (1 - 1e-9));
                    } catch (const NoRouteError&) {
                    }
                }
            }
        }
    }
}

TEST(Route, RoundCapFlagsTruncation) {
    const auto lg = fixture_lg("triangle");
    const auto run = route(lg, 10.0, IterationOrder::bfs(), {.max_rounds = 1});
    EXPECT_EQ(run.rounds, 1);
    EXPECT_TRUE(run.truncated);
}

TEST(Route, ProfitableCycleStillTerminates) {
    // A/C is mispriced against A/B and B/C, so A -> B -> C -> A gains.
    const auto lg = fixture_lg("triangle");
    const auto run = route(lg, 10.0, IterationOrder::random(3));
    EXPECT_LE(run.rounds, ConvergenceConfig{}.max_rounds);
    const auto back = extract_result(lg, run, TokenId("A"));
    EXPECT_GT(back.amount_out, 10.0);
}

TEST(Dfs, TriangleExamples) {
    const auto g = fixtures::load_fixture("triangle").graph();
    EXPECT_NEAR(dfs_route(g, TokenId("A"), TokenId("C"), 10.0, 3).amount_out, 25.0 / 3.0, 1e-12);
    EXPECT_NEAR(dfs_route(g, TokenId("A"), TokenId("C"), 10.0, 1).amount_out, 50.0 * 10.0 / 110.0, 1e-12);
}

TEST(Dfs, Errors) {
    const auto g = fixtures::load_fixture("triangle").graph();
    EXPECT_THROW(dfs_route(g, TokenId("A"), TokenId("A"), 10.0), NoRouteError);
    EXPECT_THROW(dfs_route(g, TokenId("A"), TokenId("C"), 10.0, 0), ConfigError);
    EXPECT_THROW(dfs_route(g, TokenId("A"), TokenId("Z"), 10.0), NoRouteError);
    const auto path = fixtures::load_fixture("path_abc").graph();
    EXPECT_THROW(dfs_route(path, TokenId("A"), TokenId("C"), 10.0, 1), NoRouteError);
}
