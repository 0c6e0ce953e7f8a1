#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "ammroute/bench.hpp"
#include "ammroute/error.hpp"
#include "ammroute/rng.hpp"

namespace ammroute::bench {
namespace {

double draw_depth(Rng& rng, const ReserveDistribution& dist) {
    const double lo = std::log(dist.min);
    const double hi = std::log(dist.max);
    return std::exp(lo + uniform01(rng) * (hi - lo));
}

PoolSnapshot make_pool(Rng& rng, const ReserveDistribution& dist, const std::string& dex, int fee_bps,
                       TokenId a, TokenId b) {
    PoolSnapshot pool;
    pool.dex = dex;
    pool.token0 = std::move(a);
    pool.token1 = std::move(b);
    pool.reserve0 = draw_depth(rng, dist);
    const double tilt = dist.skew * (2.0 * uniform01(rng) - 1.0);
    pool.reserve1 = pool.reserve0 * std::exp(tilt);
    pool.fee_bps = fee_bps;
    return pool;
}

}  // namespace

std::string synthetic_token_name(std::size_t i, std::size_t n_tokens) {
    std::size_t width = 3;
    for (std::size_t cap = 1000; cap < n_tokens; cap *= 10) ++width;
    std::string digits = std::to_string(i);
    return "T" + std::string(width > digits.size() ? width - digits.size() : 0, '0') + digits;
}

std::vector<PoolSnapshot> gen_synthetic_graph(std::size_t n_tokens, std::size_t n_pools, std::uint64_t seed,
                                              const ReserveDistribution& dist, const std::string& dex,
                                              int fee_bps) {
    if (n_tokens < 2) throw ConfigError("synthetic graph needs at least 2 tokens");
    const std::size_t max_pools = n_tokens * (n_tokens - 1) / 2;
    if (n_pools + 1 < n_tokens) {
        throw ConfigError("n_pools must be at least n_tokens - 1 for a connected graph");
    }
    if (n_pools > max_pools) {
        throw ConfigError("n_pools " + std::to_string(n_pools) + " exceeds C(n_tokens, 2) = " +
                          std::to_string(max_pools));
    }
    if (!(dist.min > 0.0) || !(dist.max >= dist.min)) throw ConfigError("invalid reserve range");
    if (fee_bps < 0 || fee_bps >= 10000) throw ConfigError("fee_bps outside [0, 10000)");

    Rng rng(seed);
    std::vector<std::size_t> order(n_tokens);
    for (std::size_t i = 0; i < n_tokens; ++i) order[i] = i;
    shuffle(std::span<std::size_t>(order), rng);

    std::set<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<std::pair<std::size_t, std::size_t>> picked;
    auto add = [&](std::size_t a, std::size_t b) {
        auto key = std::minmax(a, b);
        if (pairs.insert(key).second) {
            picked.emplace_back(key.first, key.second);
            return true;
        }
        return false;
    };

    for (std::size_t i = 1; i < n_tokens; ++i) add(order[i], order[uniform_index(rng, i)]);

    const std::size_t extra = n_pools - picked.size();
    if (2 * extra > max_pools - picked.size()) {
        std::vector<std::pair<std::size_t, std::size_t>> absent;
        for (std::size_t a = 0; a < n_tokens; ++a) {
            for (std::size_t b = a + 1; b < n_tokens; ++b) {
                if (!pairs.contains({a, b})) absent.emplace_back(a, b);
            }
        }
        shuffle(std::span(absent), rng);
        for (std::size_t i = 0; i < extra; ++i) add(absent[i].first, absent[i].second);
    } else {
        while (picked.size() < n_pools) {
            const auto a = static_cast<std::size_t>(uniform_index(rng, n_tokens));
            const auto b = static_cast<std::size_t>(uniform_index(rng, n_tokens));
            if (a != b) add(a, b);
        }
    }

    std::vector<PoolSnapshot> pools;
    pools.reserve(picked.size());
    for (auto [a, b] : picked) {
        pools.push_back(make_pool(rng, dist, dex, fee_bps, TokenId(synthetic_token_name(a, n_tokens)),
                                  TokenId(synthetic_token_name(b, n_tokens))));
    }
    return pools;
}

std::vector<std::vector<PoolSnapshot>> gen_synthetic_market(const SyntheticSource& src, int fee_bps) {
    std::vector<std::vector<PoolSnapshot>> dexes;
    dexes.push_back(gen_synthetic_graph(src.n_tokens, src.n_pools, src.seed, src.reserves, "dex1", fee_bps));
    for (std::size_t k = 1; k < src.n_dexes; ++k) {
        Rng rng(mix_seed(src.seed, k));
        const std::string dex = "dex" + std::to_string(k + 1);
        std::vector<PoolSnapshot> pools;
        for (const auto& base : dexes.front()) {
            if (uniform01(rng) < src.embed_fraction) {
                pools.push_back(make_pool(rng, src.reserves, dex, fee_bps, base.token0, base.token1));
            }
        }
        if (pools.empty()) {
            const auto& base = dexes.front()[uniform_index(rng, dexes.front().size())];
            pools.push_back(make_pool(rng, src.reserves, dex, fee_bps, base.token0, base.token1));
        }
        dexes.push_back(std::move(pools));
    }
    return dexes;
}

}  // namespace ammroute::bench
