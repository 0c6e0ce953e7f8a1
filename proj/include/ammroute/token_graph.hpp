#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ammroute/amm.hpp"
#include "ammroute/marketdata.hpp"

namespace ammroute {

using ReserveBook = std::vector<PoolReserves>;

/// Directed token multigraph: every pool contributes one edge per trade
/// direction. Pools from different DEXs on the same pair are parallel edges.
///
/// Pools are held sorted by (dex, token0, token1) and `pool_ref` indexes that
/// order. Edges are sorted by (token_in, token_out, dex, pool_ref), so the
/// out-edges of a token form one contiguous range.
class TokenGraph {
public:
    TokenGraph() = default;

    const std::vector<TokenId>& tokens() const noexcept { return tokens_; }
    const std::vector<PoolSnapshot>& pools() const noexcept { return pools_; }
    const std::vector<DirectedPool>& edges() const noexcept { return edges_; }

    std::size_t token_count() const noexcept { return tokens_.size(); }
    std::size_t pool_count() const noexcept { return pools_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    std::optional<std::uint32_t> token_index(const TokenId& token) const;
    bool contains(const TokenId& token) const { return token_index(token).has_value(); }

    std::uint32_t edge_from(std::size_t edge) const { return edge_from_[edge]; }
    std::uint32_t edge_to(std::size_t edge) const { return edge_to_[edge]; }
    /// Index of the opposite direction of the same pool.
    std::uint32_t reverse_edge(std::size_t edge) const { return reverse_[edge]; }

    /// Edge indices [first, last) leaving token `t`.
    std::pair<std::uint32_t, std::uint32_t> out_edge_range(std::uint32_t t) const {
        return {out_offsets_[t], out_offsets_[t + 1]};
    }

    /// Distinct DEX tags present, sorted.
    std::vector<std::string> dexes() const;

    /// Reserves of every pool as loaded; the starting point for any
    /// query-private working copy.
    ReserveBook pristine_reserves() const;

    /// Edge `edge` priced against a working reserve book.
    DirectedPool edge_at(std::size_t edge, const ReserveBook& book) const {
        return with_reserves(edges_[edge], book[edges_[edge].pool_ref]);
    }

    /// {tokens:[...], edges:[{in,out,dex,reserve_in,reserve_out,fee_bps}]}
    std::string dump_json() const;

private:
    friend TokenGraph build_graph(std::vector<PoolSnapshot> pools);

    std::vector<TokenId> tokens_;
    std::map<TokenId, std::uint32_t> token_lookup_;
    std::vector<PoolSnapshot> pools_;
    std::vector<DirectedPool> edges_;
    std::vector<std::uint32_t> edge_from_;
    std::vector<std::uint32_t> edge_to_;
    std::vector<std::uint32_t> reverse_;
    std::vector<std::uint32_t> out_offsets_;
};

/// Expects filtered pools with positive reserves. Pools may come from several
/// DEXs; the token set is the union of pool endpoints.
TokenGraph build_graph(std::vector<PoolSnapshot> pools);

/// Undirected degree: number of pools incident to each token, parallel pools
/// counted separately.
std::map<TokenId, std::size_t> degree_profile(const TokenGraph& g);

}  // namespace ammroute
