#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ammroute/token_graph.hpp"

namespace ammroute {

using VertexId = std::uint32_t;

/// A composable trade pair: the output token of `from` is the input token of `to`.
struct LGLink {
    VertexId from = 0;
    VertexId to = 0;

    auto operator<=>(const LGLink&) const = default;
};

/// Which immediate reversals are left out of the line graph.
enum class LinkCut {
    /// Only a pool traded straight back through itself.
    kSamePool,
    /// Any return to the token just left, whichever pool carries it.
    kSameTokenPair,
};

/// Source-independent part of a line graph. Vertex v >= 1 is directed edge
/// v - 1 of the token graph; vertex 0 is reserved for the per-query source.
class LineGraphTopology {
public:
    LineGraphTopology(std::shared_ptr<const TokenGraph> graph, LinkCut cut);

    const TokenGraph& graph() const noexcept { return *graph_; }
    const std::shared_ptr<const TokenGraph>& graph_ptr() const noexcept { return graph_; }
    LinkCut cut() const noexcept { return cut_; }

    std::size_t pool_vertex_count() const noexcept { return graph_->edge_count(); }
    std::size_t link_count() const noexcept { return targets_.size(); }

    std::span<const VertexId> successors(VertexId v) const {
        return {targets_.data() + offsets_[v - 1], targets_.data() + offsets_[v]};
    }

    // Hot-loop accessors, indexed by vertex id (v >= 1).
    std::uint32_t pool_of(VertexId v) const { return pool_[v]; }
    bool zero_for_one(VertexId v) const { return zero_for_one_[v] != 0; }
    int fee_bps(VertexId v) const { return fee_bps_[v]; }
    std::uint32_t token_out(VertexId v) const { return graph_->edge_to(v - 1); }
    std::uint32_t token_in(VertexId v) const { return graph_->edge_from(v - 1); }

private:
    std::shared_ptr<const TokenGraph> graph_;
    LinkCut cut_;
    std::vector<std::uint32_t> offsets_;
    std::vector<VertexId> targets_;
    std::vector<std::uint32_t> pool_;
    std::vector<std::uint8_t> zero_for_one_;
    std::vector<int> fee_bps_;
};

/// Line graph wired to one source token. Copies share the topology, so
/// attaching another source does not rebuild links.
class LineGraph {
public:
    static constexpr VertexId kSource = 0;

    LineGraph(std::shared_ptr<const LineGraphTopology> topology, const TokenId& source);

    LineGraph with_source(const TokenId& source) const { return LineGraph(topology_, source); }

    const LineGraphTopology& topology() const noexcept { return *topology_; }
    const TokenGraph& graph() const noexcept { return topology_->graph(); }
    const TokenId& source_token() const noexcept { return source_; }

    /// Includes the source vertex.
    std::size_t vertex_count() const noexcept { return topology_->pool_vertex_count() + 1; }
    std::size_t link_count() const noexcept { return source_links_.size() + topology_->link_count(); }
    std::size_t non_source_link_count() const noexcept { return topology_->link_count(); }

    std::span<const VertexId> successors(VertexId v) const {
        if (v == kSource) return source_links_;
        return topology_->successors(v);
    }

    /// The directed pool behind vertex v (v >= 1).
    const DirectedPool& edge(VertexId v) const { return graph().edges()[v - 1]; }

    /// All links ordered by (from, to).
    std::vector<LGLink> links() const;

    /// Vertex/link counts and degree histograms as JSON.
    std::string stats_json() const;

private:
    std::shared_ptr<const LineGraphTopology> topology_;
    TokenId source_;
    std::vector<VertexId> source_links_;
};

/// Throws ConfigError if `source` is not a token of `g`.
LineGraph build_line_graph(std::shared_ptr<const TokenGraph> g, const TokenId& source,
                           LinkCut cut = LinkCut::kSamePool);
LineGraph build_line_graph(TokenGraph g, const TokenId& source, LinkCut cut = LinkCut::kSamePool);

struct AggregatorOptions {
    /// Accept graphs whose tokens are not all present in the first graph.
    bool allow_unembedded = false;
    /// Token-pair cut keeps the n-copies link count at exactly n^2 times the
    /// single-DEX count.
    LinkCut cut = LinkCut::kSameTokenPair;
};

/// Integrated line graph over several DEXs: composable vertices are linked
/// across every DEX combination. Each graph must carry its own DEX tags, and
/// every token of graphs[1..] must exist in graphs[0] unless overridden.
LineGraph build_aggregator_line_graph(const std::vector<TokenGraph>& graphs, const TokenId& source,
                                      const AggregatorOptions& options = {});

/// Token graph holding the pools of all `graphs`, validated as above.
TokenGraph merge_graphs(const std::vector<TokenGraph>& graphs, bool allow_unembedded = false);

}  // namespace ammroute
