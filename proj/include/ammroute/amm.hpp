#pragma once

#include <cstddef>
#include <string>

#include "ammroute/marketdata.hpp"

namespace ammroute {

/// Reserves of a pool in its canonical (token0, token1) orientation.
struct PoolReserves {
    double reserve0 = 0.0;
    double reserve1 = 0.0;

    bool operator==(const PoolReserves&) const = default;
};

/// One trade direction of a pool.
struct DirectedPool {
    std::size_t pool_ref = 0;  // index of the pool in its TokenGraph
    std::string dex;
    TokenId token_in;
    TokenId token_out;
    double reserve_in = 0.0;
    double reserve_out = 0.0;
    int fee_bps = kDefaultFeeBps;
    bool zero_for_one = true;  // token_in is the pool's token0

    bool operator==(const DirectedPool&) const = default;
};

/// Constant-product output with the fee taken from the input:
///   out = R_out * g*in / (R_in + g*in),  g = 1 - fee_bps/10000.
/// Hot-loop form; no argument checking.
inline double constant_product_out(double reserve_in, double reserve_out, int fee_bps,
                                   double amount_in) noexcept {
    const double effective = amount_in * (1.0 - fee_bps / 10000.0);
    return reserve_out * effective / (reserve_in + effective);
}

/// Throws DomainError for negative or non-finite input.
double swap_out(const DirectedPool& pool, double amount_in);

/// Pool state after trading `amount_in` for `amount_out`. The full input
/// stays in the pool (fee accrues to liquidity). Throws InsolvencyError if
/// `amount_out` would empty the output reserve.
DirectedPool apply_swap(const DirectedPool& pool, double amount_in, double amount_out);

/// Same update expressed on canonical reserves, so both directions of the
/// pool observe it.
void apply_swap(PoolReserves& reserves, bool zero_for_one, double amount_in, double amount_out);

/// The two trade directions of a snapshot.
DirectedPool direct(const PoolSnapshot& pool, std::size_t pool_ref, bool zero_for_one);

/// `pool` re-priced against `reserves` (canonical orientation).
DirectedPool with_reserves(const DirectedPool& pool, const PoolReserves& reserves);

}  // namespace ammroute
