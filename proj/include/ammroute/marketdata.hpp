#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ammroute {

/// Token identifier (ticker or contract address). Compared bytewise.
class TokenId {
public:
    TokenId() = default;
    explicit TokenId(std::string symbol) : symbol_(std::move(symbol)) {}

    const std::string& str() const noexcept { return symbol_; }
    bool empty() const noexcept { return symbol_.empty(); }

    auto operator<=>(const TokenId&) const = default;

private:
    std::string symbol_;
};

std::ostream& operator<<(std::ostream& os, const TokenId& token);

inline constexpr int kDefaultFeeBps = 30;

/// One liquidity pool's reserves and fee as scraped from a DEX.
struct PoolSnapshot {
    std::string dex;
    TokenId token0;
    TokenId token1;
    double reserve0 = 0.0;
    double reserve1 = 0.0;
    int fee_bps = kDefaultFeeBps;

    bool operator==(const PoolSnapshot&) const = default;
};

/// Quote-currency price per token unit.
using PriceTable = std::map<TokenId, double>;

struct FilterPolicy {
    double min_reserve_usd = 0.0;
    /// Keep only pools whose two tokens are among the n tokens with the
    /// highest summed USD depth.
    std::optional<std::size_t> top_n_tokens;
};

/// Parses JSON Lines pool records. Every record is tagged with `dex`,
/// overriding any dex field in the file. Duplicate (dex, token0, token1)
/// rows keep the last occurrence.
std::vector<PoolSnapshot> parse_snapshot(std::istream& in, const std::string& dex);
std::vector<PoolSnapshot> load_snapshot(const std::filesystem::path& path, const std::string& dex);

/// One JSON object per line, numbers at 17 significant digits.
std::string serialize_snapshot(const std::vector<PoolSnapshot>& pools);

PriceTable parse_prices(std::istream& in);
PriceTable load_prices(const std::filesystem::path& path);

/// USD value of both reserves. Throws ConfigError when either token has no price.
double pool_depth_usd(const PoolSnapshot& pool, const PriceTable& prices);

/// Drops zero-reserve pools and applies `policy`. Prices are only consulted
/// when the policy has a nonzero threshold or a top-n cut. Output is sorted
/// by (dex, token0, token1).
std::vector<PoolSnapshot> filter_pools(const std::vector<PoolSnapshot>& pools,
                                       const FilterPolicy& policy,
                                       const PriceTable& prices = {});

/// Sets every pool's fee, e.g. for fee-free experiments.
void override_fee(std::vector<PoolSnapshot>& pools, int fee_bps);

}  // namespace ammroute

template <>
struct std::hash<ammroute::TokenId> {
    std::size_t operator()(const ammroute::TokenId& t) const noexcept {
        return std::hash<std::string>{}(t.str());
    }
};
