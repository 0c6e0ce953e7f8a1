#pragma once

// Deterministic fixtures and brute-force oracles shared by the unit and
// acceptance suites. Nothing here calls into the router or line-graph code.

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "ammroute/error.hpp"
#include "ammroute/line_graph.hpp"
#include "ammroute/token_graph.hpp"

namespace ammroute::fixtures {

class OracleScopeError : public Error {
public:
    using Error::Error;
};

std::filesystem::path fixtures_dir();

/// A hand-computed expectation, checked against the oracle at load time.
struct Expectation {
    std::string note;
    TokenId source;
    TokenId target;
    double amount_in = 0.0;
    int max_hops = 3;
    double expected = 0.0;
};

struct Fixture {
    std::string name;
    std::vector<PoolSnapshot> pools;
    std::vector<Expectation> expectations;

    TokenGraph graph() const { return build_graph(pools); }
};

/// Loads fixtures/<name>.jsonl through the production parser and verifies
/// every recorded expectation with brute_force_best_path.
Fixture load_fixture(const std::string& name, const std::string& dex = "dex1");

struct OracleResult {
    double amount_out = 0.0;
    std::vector<std::uint32_t> edges;  // TokenGraph edge indices, in order
};

/// Exhaustive search over pool sequences that never trade straight back
/// through the pool just used, evaluated with sequential reserve updates.
/// max_hops <= 6 and at most 12 pools. max_hops == 0 or no reachable path
/// throws NoRouteError.
OracleResult brute_force_best_path(const TokenGraph& g, const TokenId& source, const TokenId& target,
                                   double amount_in, int max_hops);

struct LineGraphCounts {
    std::size_t vertices = 0;
    std::size_t links = 0;
};

/// Vertex and link counts by direct enumeration of all ordered edge pairs.
LineGraphCounts brute_force_line_graph_counts(const TokenGraph& g, LinkCut cut = LinkCut::kSamePool);

/// Closed forms valid for bidirectional pools without parallel edges:
/// vertices = directed edges, links = sum(d^2) - 2 * pools.
LineGraphCounts closed_form_counts(const TokenGraph& g);

/// True when no token can be traded around a cycle of at most `max_hops`
/// pools back into more than `amount` of itself.
bool cycle_profit_free(const TokenGraph& g, double amount, int max_hops);

/// Random connected desk-scale pool set (consistent prices perturbed by
/// `skew`) that passes cycle_profit_free. Draws successive seeds until one passes.
std::vector<PoolSnapshot> random_cycle_free_pools(std::uint64_t seed, std::size_t n_tokens, std::size_t n_pools,
                                                  double skew, double probe_amount, int fee_bps = 30);

/// Closed-form CPMM output written out independently of the library.
double cpmm_out(double reserve_in, double reserve_out, int fee_bps, double amount_in);

}  // namespace ammroute::fixtures
