#include "ammroute/amm.hpp"

#include <cmath>
#include <string>

#include "ammroute/error.hpp"

namespace ammroute {

double swap_out(const DirectedPool& pool, double amount_in) {
    if (!(amount_in >= 0.0) || !std::isfinite(amount_in)) {
        throw DomainError("swap_out: amount_in must be finite and non-negative, got " +
                          std::to_string(amount_in));
    }
    return constant_product_out(pool.reserve_in, pool.reserve_out, pool.fee_bps, amount_in);
}

DirectedPool apply_swap(const DirectedPool& pool, double amount_in, double amount_out) {
    if (amount_out >= pool.reserve_out) {
        throw InsolvencyError("apply_swap: output " + std::to_string(amount_out) +
                              " would drain reserve " + std::to_string(pool.reserve_out));
    }
    DirectedPool next = pool;
    next.reserve_in += amount_in;
    next.reserve_out -= amount_out;
    return next;
}

void apply_swap(PoolReserves& reserves, bool zero_for_one, double amount_in, double amount_out) {
    double& in = zero_for_one ? reserves.reserve0 : reserves.reserve1;
    double& out = zero_for_one ? reserves.reserve1 : reserves.reserve0;
    if (amount_out >= out) {
        throw InsolvencyError("apply_swap: output " + std::to_string(amount_out) +
                              " would drain reserve " + std::to_string(out));
    }
    in += amount_in;
    out -= amount_out;
}

DirectedPool direct(const PoolSnapshot& pool, std::size_t pool_ref, bool zero_for_one) {
    DirectedPool d;
    d.pool_ref = pool_ref;
    d.dex = pool.dex;
    d.token_in = zero_for_one ? pool.token0 : pool.token1;
    d.token_out = zero_for_one ? pool.token1 : pool.token0;
    d.reserve_in = zero_for_one ? pool.reserve0 : pool.reserve1;
    d.reserve_out = zero_for_one ? pool.reserve1 : pool.reserve0;
    d.fee_bps = pool.fee_bps;
    d.zero_for_one = zero_for_one;
    return d;
}

DirectedPool with_reserves(const DirectedPool& pool, const PoolReserves& reserves) {
    DirectedPool d = pool;
    d.reserve_in = pool.zero_for_one ? reserves.reserve0 : reserves.reserve1;
    d.reserve_out = pool.zero_for_one ? reserves.reserve1 : reserves.reserve0;
    return d;
}

}  // namespace ammroute
