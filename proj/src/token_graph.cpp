#include "ammroute/token_graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>

#include <json.hpp>

#include "ammroute/error.hpp"

namespace ammroute {

std::optional<std::uint32_t> TokenGraph::token_index(const TokenId& token) const {
    auto it = token_lookup_.find(token);
    if (it == token_lookup_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> TokenGraph::dexes() const {
    std::set<std::string> tags;
    for (const auto& pool : pools_) tags.insert(pool.dex);
    return {tags.begin(), tags.end()};
}

ReserveBook TokenGraph::pristine_reserves() const {
    ReserveBook book;
    book.reserve(pools_.size());
    for (const auto& pool : pools_) book.push_back({pool.reserve0, pool.reserve1});
    return book;
}

std::string TokenGraph::dump_json() const {
    nlohmann::ordered_json doc;
    auto& tokens = doc["tokens"] = nlohmann::ordered_json::array();
    for (const auto& t : tokens_) tokens.push_back(t.str());
    auto& edges = doc["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : edges_) {
        edges.push_back({{"in", e.token_in.str()},
                         {"out", e.token_out.str()},
                         {"dex", e.dex},
                         {"reserve_in", e.reserve_in},
                         {"reserve_out", e.reserve_out},
                         {"fee_bps", e.fee_bps}});
    }
    return doc.dump(2);
}

TokenGraph build_graph(std::vector<PoolSnapshot> pools) {
    for (const auto& p : pools) {
        if (p.token0 == p.token1) throw DataError("pool with identical tokens: " + p.token0.str());
        if (!(p.reserve0 > 0.0) || !(p.reserve1 > 0.0)) {
            throw DataError("pool " + p.dex + ":" + p.token0.str() + "/" + p.token1.str() +
                            " has a non-positive reserve");
        }
    }
    std::stable_sort(pools.begin(), pools.end(), [](const PoolSnapshot& a, const PoolSnapshot& b) {
        return std::tie(a.dex, a.token0, a.token1) < std::tie(b.dex, b.token0, b.token1);
    });

    TokenGraph g;
    std::set<TokenId> token_set;
    for (const auto& p : pools) {
        token_set.insert(p.token0);
        token_set.insert(p.token1);
    }
    g.tokens_.assign(token_set.begin(), token_set.end());
    for (std::uint32_t i = 0; i < g.tokens_.size(); ++i) g.token_lookup_.emplace(g.tokens_[i], i);

    g.edges_.reserve(2 * pools.size());
    for (std::size_t ref = 0; ref < pools.size(); ++ref) {
        g.edges_.push_back(direct(pools[ref], ref, true));
        g.edges_.push_back(direct(pools[ref], ref, false));
    }
    std::sort(g.edges_.begin(), g.edges_.end(), [](const DirectedPool& a, const DirectedPool& b) {
        return std::tie(a.token_in, a.token_out, a.dex, a.pool_ref) <
               std::tie(b.token_in, b.token_out, b.dex, b.pool_ref);
    });

    const std::size_t n_edges = g.edges_.size();
    g.edge_from_.resize(n_edges);
    g.edge_to_.resize(n_edges);
    g.reverse_.resize(n_edges);
    std::vector<std::uint32_t> by_direction(2 * pools.size());
    for (std::uint32_t e = 0; e < n_edges; ++e) {
        const auto& edge = g.edges_[e];
        g.edge_from_[e] = g.token_lookup_.at(edge.token_in);
        g.edge_to_[e] = g.token_lookup_.at(edge.token_out);
        by_direction[2 * edge.pool_ref + (edge.zero_for_one ? 0 : 1)] = e;
    }
    for (std::uint32_t e = 0; e < n_edges; ++e) {
        const auto& edge = g.edges_[e];
        g.reverse_[e] = by_direction[2 * edge.pool_ref + (edge.zero_for_one ? 1 : 0)];
    }

    g.out_offsets_.assign(g.tokens_.size() + 1, 0);
    for (auto from : g.edge_from_) ++g.out_offsets_[from + 1];
    std::partial_sum(g.out_offsets_.begin(), g.out_offsets_.end(), g.out_offsets_.begin());

    g.pools_ = std::move(pools);
    return g;
}

std::map<TokenId, std::size_t> degree_profile(const TokenGraph& g) {
    std::map<TokenId, std::size_t> degree;
    for (const auto& t : g.tokens()) degree[t] = 0;
    for (const auto& p : g.pools()) {
        ++degree[p.token0];
        ++degree[p.token1];
    }
    return degree;
}

}  // namespace ammroute
