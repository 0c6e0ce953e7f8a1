#include <gtest/gtest.h>

#include <algorithm>
#include <json.hpp>

#include "ammroute/bench.hpp"
#include "ammroute/error.hpp"
#include "ammroute/line_graph.hpp"
#include "ammroute/rng.hpp"
#include "fixtures.hpp"

using namespace ammroute;

namespace {

TokenGraph triangle(const std::string& dex) { return fixtures::load_fixture("triangle", dex).graph(); }

}  // namespace

TEST(LineGraph, TriangleCounts) {
    const auto lg = build_line_graph(triangle("dex1"), TokenId("A"));
    EXPECT_EQ(lg.vertex_count() - 1, 6u);
    EXPECT_EQ(lg.non_source_link_count(), 6u);
    EXPECT_EQ(lg.successors(LineGraph::kSource).size(), 2u);
}

TEST(LineGraph, SinglePoolHasNoLinks) {
    const auto lg = build_line_graph(fixtures::load_fixture("single_pool").graph(), TokenId("A"));
    EXPECT_EQ(lg.vertex_count() - 1, 2u);
    EXPECT_EQ(lg.non_source_link_count(), 0u);
}

TEST(LineGraph, PathLinksAreExactlyTheForwardCompositions) {
    const auto lg = build_line_graph(fixtures::load_fixture("path_abc").graph(), TokenId("A"));
    // vertices: 1 A->B, 2 B->A, 3 B->C, 4 C->B
    EXPECT_EQ(lg.vertex_count() - 1, 4u);
    EXPECT_EQ(lg.links(), (std::vector<LGLink>{{0, 1}, {1, 3}, {4, 2}}));
    EXPECT_EQ(lg.edge(3).token_in, TokenId("B"));
    EXPECT_EQ(lg.edge(3).token_out, TokenId("C"));
}

TEST(LineGraph, CountsMatchBruteForceAndClosedForm) {
    Rng rng(2024);
    for (int i = 0; i < 100; ++i) {
        const std::size_t n = 4 + uniform_index(rng, 27);
        const std::size_t max_pools = n * (n - 1) / 2;
        const std::size_t pools = n - 1 + uniform_index(rng, std::min<std::size_t>(max_pools, 3 * n) - (n - 1) + 1);
        const auto g = build_graph(bench::gen_synthetic_graph(n, pools, rng()));
        const auto lg = build_line_graph(g, g.tokens().front());
        const auto brute = fixtures::brute_force_line_graph_counts(g);
        const auto closed = fixtures::closed_form_counts(g);
        EXPECT_EQ(lg.vertex_count() - 1, brute.vertices);
        EXPECT_EQ(lg.non_source_link_count(), brute.links);
        EXPECT_EQ(brute.vertices, closed.vertices);
        EXPECT_EQ(brute.links, closed.links);
    }
}

TEST(LineGraph, EveryLinkComposesAndNoneBacktracks) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto g = build_graph(bench::gen_synthetic_graph(15, 30, seed));
        const auto lg = build_line_graph(g, g.tokens()[seed % 15]);
        for (const auto& [from, to] : lg.links()) {
            if (from == LineGraph::kSource) {
                EXPECT_EQ(lg.edge(to).token_in, lg.source_token());
                continue;
            }
            EXPECT_EQ(lg.edge(from).token_out, lg.edge(to).token_in);
            EXPECT_NE(lg.edge(from).pool_ref, lg.edge(to).pool_ref);
        }
    }
}

TEST(LineGraph, LinksSortedAndSourceSharesTopology) {
    const auto lg = build_line_graph(triangle("dex1"), TokenId("A"));
    const auto links = lg.links();
    EXPECT_TRUE(std::is_sorted(links.begin(), links.end()));
    const auto other = lg.with_source(TokenId("C"));
    EXPECT_EQ(&other.topology(), &lg.topology());
    for (auto v : other.successors(LineGraph::kSource)) EXPECT_EQ(other.edge(v).token_in, TokenId("C"));
}

TEST(LineGraph, UnknownSourceIsConfigError) {
    EXPECT_THROW(build_line_graph(triangle("dex1"), TokenId("Z")), ConfigError);
}

TEST(LineGraph, StatsJson) {
    const auto doc = nlohmann::json::parse(build_line_graph(triangle("dex1"), TokenId("A")).stats_json());
    EXPECT_EQ(doc["vertices"], 6);
    EXPECT_EQ(doc["links"], 6);
    EXPECT_EQ(doc["degree_square_sum"], 12);
    EXPECT_EQ(doc["source_links"], 2);
}

TEST(Aggregator, IdenticalCopiesScaleLinksQuadratically) {
    const std::size_t single = build_line_graph(triangle("dex1"), TokenId("A")).non_source_link_count();
    for (std::size_t n : {2u, 3u}) {
        std::vector<TokenGraph> graphs;
        for (std::size_t k = 1; k <= n; ++k) graphs.push_back(triangle("dex" + std::to_string(k)));
        const auto lg = build_aggregator_line_graph(graphs, TokenId("A"));
        EXPECT_EQ(lg.non_source_link_count(), n * n * single) << n;
        EXPECT_EQ(lg.vertex_count() - 1, n * 6);
        EXPECT_EQ(lg.non_source_link_count(),
                  fixtures::brute_force_line_graph_counts(lg.graph(), LinkCut::kSameTokenPair).links);
    }
}

TEST(Aggregator, PerPoolCutKeepsCrossDexReversal) {
    const auto lg = build_aggregator_line_graph({triangle("dex1"), triangle("dex2")}, TokenId("A"),
                                                {.cut = LinkCut::kSamePool});
    EXPECT_EQ(lg.non_source_link_count(), 36u);
    bool found = false;
    for (const auto& [from, to] : lg.links()) {
        if (from == LineGraph::kSource) continue;
        const auto& a = lg.edge(from);
        const auto& b = lg.edge(to);
        if (a.dex == "dex1" && b.dex == "dex2" && a.token_in == TokenId("A") && a.token_out == TokenId("B") &&
            b.token_out == TokenId("A")) {
            found = true;
        }
        EXPECT_NE(a.pool_ref, b.pool_ref);
    }
    EXPECT_TRUE(found);
}

TEST(Aggregator, SingleGraphMatchesPlainBuild) {
    const auto plain = build_line_graph(triangle("dex1"), TokenId("A"), LinkCut::kSameTokenPair);
    const auto agg = build_aggregator_line_graph({triangle("dex1")}, TokenId("A"));
    EXPECT_EQ(plain.links(), agg.links());
}

TEST(Aggregator, RejectsUnembeddedTokensAndSharedTags) {
    auto star = fixtures::load_fixture("star", "dex2").graph();
    EXPECT_THROW(build_aggregator_line_graph({triangle("dex1"), star}, TokenId("A")), ValidationError);
    EXPECT_NO_THROW(build_aggregator_line_graph({triangle("dex1"), star}, TokenId("A"), {.allow_unembedded = true}));
    EXPECT_THROW(build_aggregator_line_graph({triangle("dex1"), triangle("dex1")}, TokenId("A")), ValidationError);
}
