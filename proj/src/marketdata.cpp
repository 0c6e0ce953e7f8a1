#include "ammroute/marketdata.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "ammroute/error.hpp"
#include "ammroute/log.hpp"

namespace ammroute {

using nlohmann::json;

std::ostream& operator<<(std::ostream& os, const TokenId& token) { return os << token.str(); }

namespace {

std::string require_token(const json& record, std::size_t line, const char* field) {
    auto it = record.find(field);
    if (it == record.end()) throw ParseError(line, field, "missing");
    if (!it->is_string()) throw ParseError(line, field, "expected a string");
    std::string value = it->get<std::string>();
    if (value.empty()) throw ParseError(line, field, "empty token id");
    return value;
}

double require_reserve(const json& record, std::size_t line, const char* field) {
    auto it = record.find(field);
    if (it == record.end()) throw ParseError(line, field, "missing");
    double value = 0.0;
    if (it->is_number()) {
        value = it->get<double>();
    } else if (it->is_string()) {
        const std::string text = it->get<std::string>();
        char* end = nullptr;
        value = std::strtod(text.c_str(), &end);
        if (text.empty() || end != text.c_str() + text.size()) {
            throw ParseError(line, field, "not a number: '" + text + "'");
        }
    } else {
        throw ParseError(line, field, "expected a number or numeric string");
    }
    if (!std::isfinite(value)) throw ParseError(line, field, "not finite");
    if (value < 0.0) throw ParseError(line, field, "negative reserve");
    return value;
}

int optional_fee(const json& record, std::size_t line) {
    auto it = record.find("fee_bps");
    if (it == record.end() || it->is_null()) return kDefaultFeeBps;
    if (!it->is_number_integer()) throw ParseError(line, "fee_bps", "expected an integer");
    const auto fee = it->get<long long>();
    if (fee < 0 || fee >= 10000) throw ParseError(line, "fee_bps", "outside [0, 10000)");
    return static_cast<int>(fee);
}

json to_json(const PoolSnapshot& pool) {
    return json{{"dex", pool.dex},           {"token0", pool.token0.str()},
                {"token1", pool.token1.str()}, {"reserve0", pool.reserve0},
                {"reserve1", pool.reserve1}, {"fee_bps", pool.fee_bps}};
}

}  // namespace

std::vector<PoolSnapshot> parse_snapshot(std::istream& in, const std::string& dex) {
    std::vector<PoolSnapshot> pools;
    std::map<std::tuple<std::string, TokenId, TokenId>, std::size_t> seen;
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) {
            continue;
        }
        json record;
        try {
            record = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ParseError(line, "<record>", e.what());
        }
        if (!record.is_object()) throw ParseError(line, "<record>", "expected a JSON object");

        PoolSnapshot pool;
        pool.dex = dex;
        pool.token0 = TokenId(require_token(record, line, "token0"));
        pool.token1 = TokenId(require_token(record, line, "token1"));
        if (pool.token0 == pool.token1) throw ParseError(line, "token1", "same token as token0");
        pool.reserve0 = require_reserve(record, line, "reserve0");
        pool.reserve1 = require_reserve(record, line, "reserve1");
        pool.fee_bps = optional_fee(record, line);

        auto key = std::make_tuple(pool.dex, pool.token0, pool.token1);
        if (auto it = seen.find(key); it != seen.end()) {
            log::warn("duplicate pool ", pool.dex, ":", pool.token0, "/", pool.token1, " at line ",
                      line, " replaces earlier record");
            pools[it->second] = std::move(pool);
        } else {
            seen.emplace(std::move(key), pools.size());
            pools.push_back(std::move(pool));
        }
    }
    if (in.bad()) throw DataError("snapshot read failed after line " + std::to_string(line));
    return pools;
}

std::vector<PoolSnapshot> load_snapshot(const std::filesystem::path& path, const std::string& dex) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open snapshot " + path.string());
    try {
        return parse_snapshot(in, dex);
    } catch (const ParseError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

std::string serialize_snapshot(const std::vector<PoolSnapshot>& pools) {
    std::string out;
    for (const auto& pool : pools) {
        out += to_json(pool).dump();
        out += '\n';
    }
    return out;
}

PriceTable parse_prices(std::istream& in) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw DataError(std::string("price file: ") + e.what());
    }
    if (!doc.is_object()) throw DataError("price file: expected a JSON object");
    PriceTable prices;
    for (const auto& [token, value] : doc.items()) {
        if (!value.is_number()) throw DataError("price file: price of '" + token + "' is not a number");
        const double price = value.get<double>();
        if (!(price > 0.0) || !std::isfinite(price)) {
            throw DataError("price file: price of '" + token + "' must be positive");
        }
        prices.emplace(TokenId(token), price);
    }
    return prices;
}

PriceTable load_prices(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open price file " + path.string());
    return parse_prices(in);
}

double pool_depth_usd(const PoolSnapshot& pool, const PriceTable& prices) {
    auto price_of = [&](const TokenId& token) {
        auto it = prices.find(token);
        if (it == prices.end()) throw ConfigError("no price for token '" + token.str() + "'");
        return it->second;
    };
    return pool.reserve0 * price_of(pool.token0) + pool.reserve1 * price_of(pool.token1);
}

std::vector<PoolSnapshot> filter_pools(const std::vector<PoolSnapshot>& pools,
                                       const FilterPolicy& policy, const PriceTable& prices) {
    const bool priced = policy.min_reserve_usd > 0.0 || policy.top_n_tokens.has_value();

    std::vector<PoolSnapshot> kept;
    std::vector<double> depth;
    for (const auto& pool : pools) {
        if (!(pool.reserve0 > 0.0) || !(pool.reserve1 > 0.0)) continue;
        double d = 0.0;
        if (priced) {
            d = pool_depth_usd(pool, prices);
            if (d < policy.min_reserve_usd) continue;
        }
        kept.push_back(pool);
        depth.push_back(d);
    }

    if (policy.top_n_tokens) {
        std::map<TokenId, double> token_depth;
        for (std::size_t i = 0; i < kept.size(); ++i) {
            token_depth[kept[i].token0] += depth[i];
            token_depth[kept[i].token1] += depth[i];
        }
        std::vector<std::pair<TokenId, double>> ranked(token_depth.begin(), token_depth.end());
        std::stable_sort(ranked.begin(), ranked.end(),
                         [](const auto& a, const auto& b) { return a.second > b.second; });
        if (ranked.size() > *policy.top_n_tokens) ranked.resize(*policy.top_n_tokens);
        std::set<TokenId> keep;
        for (auto& [token, _] : ranked) keep.insert(token);
        std::erase_if(kept, [&](const PoolSnapshot& p) {
            return !keep.contains(p.token0) || !keep.contains(p.token1);
        });
    }

    std::stable_sort(kept.begin(), kept.end(), [](const PoolSnapshot& a, const PoolSnapshot& b) {
        return std::tie(a.dex, a.token0, a.token1) < std::tie(b.dex, b.token0, b.token1);
    });
    return kept;
}

void override_fee(std::vector<PoolSnapshot>& pools, int fee_bps) {
    if (fee_bps < 0 || fee_bps >= 10000) throw ConfigError("fee_bps outside [0, 10000)");
    for (auto& pool : pools) pool.fee_bps = fee_bps;
}

}  // namespace ammroute
