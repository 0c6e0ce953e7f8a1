#include "ammroute/line_graph.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

#include "ammroute/error.hpp"

namespace ammroute {

LineGraphTopology::LineGraphTopology(std::shared_ptr<const TokenGraph> graph, LinkCut cut)
    : graph_(std::move(graph)), cut_(cut) {
    const TokenGraph& g = *graph_;
    const std::size_t n = g.edge_count();

    offsets_.reserve(n + 1);
    offsets_.push_back(0);
    for (std::uint32_t e = 0; e < n; ++e) {
        const auto [first, last] = g.out_edge_range(g.edge_to(e));
        const std::uint32_t back = g.reverse_edge(e);
        const std::uint32_t origin = g.edge_from(e);
        for (std::uint32_t next = first; next < last; ++next) {
            const bool reversal =
                cut_ == LinkCut::kSamePool ? next == back : g.edge_to(next) == origin;
            if (!reversal) targets_.push_back(next + 1);
        }
        offsets_.push_back(static_cast<std::uint32_t>(targets_.size()));
    }

    pool_.assign(n + 1, 0);
    zero_for_one_.assign(n + 1, 0);
    fee_bps_.assign(n + 1, 0);
    for (std::uint32_t e = 0; e < n; ++e) {
        const auto& edge = g.edges()[e];
        pool_[e + 1] = static_cast<std::uint32_t>(edge.pool_ref);
        zero_for_one_[e + 1] = edge.zero_for_one ? 1 : 0;
        fee_bps_[e + 1] = edge.fee_bps;
    }
}

LineGraph::LineGraph(std::shared_ptr<const LineGraphTopology> topology, const TokenId& source)
    : topology_(std::move(topology)), source_(source) {
    const auto index = graph().token_index(source);
    if (!index) throw ConfigError("unknown source token '" + source.str() + "'");
    const auto [first, last] = graph().out_edge_range(*index);
    for (std::uint32_t e = first; e < last; ++e) source_links_.push_back(e + 1);
}

std::vector<LGLink> LineGraph::links() const {
    std::vector<LGLink> out;
    out.reserve(link_count());
    for (VertexId v = 0; v < vertex_count(); ++v) {
        for (VertexId w : successors(v)) out.push_back({v, w});
    }
    return out;
}

std::string LineGraph::stats_json() const {
    const TokenGraph& g = graph();
    const auto degrees = degree_profile(g);
    std::map<std::size_t, std::size_t> degree_hist;
    std::size_t degree_sq = 0;
    for (const auto& [_, d] : degrees) {
        ++degree_hist[d];
        degree_sq += d * d;
    }
    std::map<std::size_t, std::size_t> out_hist;
    for (VertexId v = 1; v < vertex_count(); ++v) ++out_hist[successors(v).size()];

    nlohmann::ordered_json doc;
    doc["source"] = source_.str();
    doc["tokens"] = g.token_count();
    doc["pools"] = g.pool_count();
    doc["dexes"] = g.dexes();
    doc["directed_edges"] = g.edge_count();
    doc["vertices"] = vertex_count() - 1;
    doc["links"] = non_source_link_count();
    doc["source_links"] = link_count() - non_source_link_count();
    doc["degree_square_sum"] = degree_sq;
    doc["link_cut"] = topology().cut() == LinkCut::kSamePool ? "same_pool" : "same_token_pair";
    auto& dh = doc["token_degree_histogram"] = nlohmann::ordered_json::object();
    for (auto [d, c] : degree_hist) dh[std::to_string(d)] = c;
    auto& oh = doc["vertex_out_degree_histogram"] = nlohmann::ordered_json::object();
    for (auto [d, c] : out_hist) oh[std::to_string(d)] = c;
    return doc.dump(2);
}

LineGraph build_line_graph(std::shared_ptr<const TokenGraph> g, const TokenId& source, LinkCut cut) {
    if (!g->contains(source)) throw ConfigError("unknown source token '" + source.str() + "'");
    auto topology = std::make_shared<const LineGraphTopology>(std::move(g), cut);
    return LineGraph(std::move(topology), source);
}

LineGraph build_line_graph(TokenGraph g, const TokenId& source, LinkCut cut) {
    return build_line_graph(std::make_shared<const TokenGraph>(std::move(g)), source, cut);
}

TokenGraph merge_graphs(const std::vector<TokenGraph>& graphs, bool allow_unembedded) {
    if (graphs.empty()) throw ConfigError("aggregator needs at least one token graph");

    std::set<std::string> claimed;
    for (const auto& g : graphs) {
        for (const auto& dex : g.dexes()) {
            if (!claimed.insert(dex).second) {
                throw ValidationError("DEX tag '" + dex + "' appears in more than one graph");
            }
        }
    }
    if (!allow_unembedded) {
        for (std::size_t k = 1; k < graphs.size(); ++k) {
            for (const auto& token : graphs[k].tokens()) {
                if (!graphs.front().contains(token)) {
                    throw ValidationError("token '" + token.str() + "' of graph " +
                                          std::to_string(k) + " is missing from the first graph");
                }
            }
        }
    }

    std::vector<PoolSnapshot> pools;
    for (const auto& g : graphs) pools.insert(pools.end(), g.pools().begin(), g.pools().end());
    return build_graph(std::move(pools));
}

LineGraph build_aggregator_line_graph(const std::vector<TokenGraph>& graphs, const TokenId& source,
                                      const AggregatorOptions& options) {
    return build_line_graph(merge_graphs(graphs, options.allow_unembedded), source, options.cut);
}

}  // namespace ammroute
