#include "ammroute/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <set>
#include <thread>

#include "ammroute/error.hpp"
#include "ammroute/log.hpp"
#include "ammroute/rng.hpp"
#include "ammroute/splitter.hpp"

namespace ammroute::bench {

namespace {

std::shared_ptr<const LineGraphTopology> topology_for(TokenGraph g, LinkCut cut) {
    return std::make_shared<const LineGraphTopology>(std::make_shared<const TokenGraph>(std::move(g)), cut);
}

Market assemble(std::vector<TokenGraph> graphs, PriceTable prices, bool synthetic) {
    Market market;
    market.single = topology_for(graphs.front(), LinkCut::kSamePool);
    market.aggregate = graphs.size() == 1 ? market.single
                                          : topology_for(merge_graphs(graphs), LinkCut::kSameTokenPair);
    market.dex_graphs = std::move(graphs);
    market.prices = std::move(prices);
    market.synthetic = synthetic;
    return market;
}

Market synthetic_market(const SyntheticSource& src, std::optional<int> fee_bps) {
    std::vector<TokenGraph> graphs;
    for (auto& pools : gen_synthetic_market(src, fee_bps.value_or(kDefaultFeeBps))) {
        graphs.push_back(build_graph(std::move(pools)));
    }
    PriceTable prices;
    for (const auto& t : graphs.front().tokens()) prices.emplace(t, 1.0);
    return assemble(std::move(graphs), std::move(prices), true);
}

Market snapshot_market(const SnapshotSource& src, std::optional<int> fee_bps) {
    PriceTable prices;
    if (!src.prices.empty()) prices = load_prices(src.prices);
    std::vector<std::string> order;
    std::map<std::string, std::vector<PoolSnapshot>> by_dex;
    for (std::size_t i = 0; i < src.paths.size(); ++i) {
        auto pools = load_snapshot(src.paths[i], src.dexes[i]);
        if (fee_bps) override_fee(pools, *fee_bps);
        auto& bucket = by_dex[src.dexes[i]];
        if (bucket.empty()) order.push_back(src.dexes[i]);
        bucket.insert(bucket.end(), pools.begin(), pools.end());
    }
    std::vector<TokenGraph> graphs;
    for (const auto& dex : order) {
        auto kept = filter_pools(by_dex[dex], src.filter, prices);
        if (kept.empty()) throw DataError("no pools left for DEX '" + dex + "' after filtering");
        graphs.push_back(build_graph(std::move(kept)));
    }
    return assemble(std::move(graphs), std::move(prices), false);
}

bool aggregate_scope(const Method& m) { return m.scope == Scope::kAggregate; }

IterationOrder order_for(const Method& m, std::uint64_t stream) {
    switch (m.kind) {
        case MethodKind::kLgBfs:
        case MethodKind::kLgAggregatorBfs:
            return IterationOrder::bfs();
        case MethodKind::kLgSplit:
            if (m.split_order == IterationOrder::Kind::kBfs) return IterationOrder::bfs();
            return IterationOrder::random(mix_seed(m.seed, stream));
        default:
            return IterationOrder::random(mix_seed(m.seed, stream));
    }
}

MethodOutcome failed(std::string status) {
    MethodOutcome o;
    o.status = std::move(status);
    return o;
}

}  // namespace

Market build_market(const ExperimentConfig& cfg, int trial) {
    if (const auto* s = std::get_if<SyntheticSource>(&cfg.graph_source)) {
        SyntheticSource src = *s;
        if (trial > 0) src.seed = mix_seed(s->seed, static_cast<std::uint64_t>(trial));
        return synthetic_market(src, cfg.fee_bps);
    }
    return snapshot_market(std::get<SnapshotSource>(cfg.graph_source), cfg.fee_bps);
}

std::vector<MethodOutcome> evaluate_method(const Market& market, const Method& method, const TokenId& source,
                                           const std::vector<TokenId>& targets, double amount_in,
                                           const ConvergenceConfig& cfg, std::uint64_t stream) {
    const auto& topo = aggregate_scope(method) ? market.aggregate : market.single;
    const TokenGraph& graph = topo->graph();
    if (!graph.contains(source)) {
        return std::vector<MethodOutcome>(targets.size(), failed("source_not_in_graph"));
    }

    std::vector<MethodOutcome> outcomes;
    outcomes.reserve(targets.size());
    auto guarded = [&](auto&& body) {
        try {
            outcomes.push_back(body());
        } catch (const NoRouteError&) {
            outcomes.push_back(failed("no_route"));
        } catch (const Error& e) {
            outcomes.push_back(failed(std::string("error: ") + e.what()));
        }
    };

    const LineGraph lg(topo, source);
    switch (method.kind) {
        case MethodKind::kDfs:
            for (const auto& target : targets) {
                guarded([&] {
                    const auto r = dfs_route(graph, source, target, amount_in, method.max_hops);
                    return MethodOutcome{r.amount_out, r.rounds, r.truncated, r.elapsed, "ok"};
                });
            }
            break;
        case MethodKind::kLgSplit:
            for (const auto& target : targets) {
                guarded([&] {
                    const auto r = split_route(lg, amount_in, method.splits, target, order_for(method, stream), cfg);
                    MethodOutcome o{r.total_out, 0, false, std::chrono::nanoseconds{0}, "ok"};
                    for (const auto& part : r.parts) {
                        o.rounds += part.rounds;
                        o.truncated = o.truncated || part.truncated;
                        o.elapsed += part.elapsed;
                    }
                    return o;
                });
            }
            break;
        default: {
            const RouteRun run = route(lg, amount_in, order_for(method, stream), cfg);
            const ReserveBook book = graph.pristine_reserves();
            for (const auto& target : targets) {
                guarded([&] {
                    const auto r = extract_result(lg, book, run, target);
                    return MethodOutcome{r.amount_out, r.rounds, r.truncated, r.elapsed, "ok"};
                });
                outcomes.back().rounds = run.rounds;
                outcomes.back().truncated = run.truncated;
                outcomes.back().elapsed = run.elapsed;
            }
            break;
        }
    }
    return outcomes;
}

std::vector<std::pair<TokenId, TokenId>> sample_pairs(const std::vector<TokenId>& tokens,
                                                      const ExperimentConfig& cfg, int trial) {
    std::vector<std::pair<TokenId, TokenId>> pairs;
    const std::size_t n = tokens.size();
    const std::size_t total = n < 2 ? 0 : n * (n - 1);
    if (n <= cfg.all_pairs_max_tokens || cfg.sample_pairs >= total) {
        for (const auto& s : tokens) {
            for (const auto& t : tokens) {
                if (s != t) pairs.emplace_back(s, t);
            }
        }
        return pairs;
    }
    Rng rng(mix_seed(cfg.pair_seed, static_cast<std::uint64_t>(trial)));
    std::set<std::pair<std::size_t, std::size_t>> chosen;
    while (chosen.size() < cfg.sample_pairs) {
        const auto s = static_cast<std::size_t>(uniform_index(rng, n));
        const auto t = static_cast<std::size_t>(uniform_index(rng, n));
        if (s != t) chosen.emplace(s, t);
    }
    for (auto [s, t] : chosen) pairs.emplace_back(tokens[s], tokens[t]);
    return pairs;
}

std::vector<std::pair<double, double>> empirical_cdf(std::vector<double> values, int steps) {
    std::vector<std::pair<double, double>> cdf;
    if (values.empty()) return cdf;
    std::sort(values.begin(), values.end());
    const auto n = static_cast<double>(values.size());
    for (int q = 1; q <= steps; ++q) {
        const double fraction = static_cast<double>(q) / steps;
        auto rank = static_cast<std::size_t>(std::ceil(fraction * n - 1e-9));
        rank = std::clamp<std::size_t>(rank, 1, values.size());
        cdf.emplace_back(fraction, values[rank - 1]);
    }
    return cdf;
}

namespace {

template <typename Task>
void run_parallel(std::size_t count, unsigned threads, Task task) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                task(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace

RatioExperimentResult run_ratio_experiment(const ExperimentConfig& cfg) {
    if (cfg.methods.size() != 2) throw ConfigError("ratio experiments compare exactly two methods");
    RatioExperimentResult result;

    for (int trial = 0; trial < cfg.trials; ++trial) {
        const Market market = build_market(cfg, trial);
        const auto& tokens = market.aggregate_graph().tokens();
        const auto pairs = sample_pairs(tokens, cfg, trial);

        std::vector<TokenId> sources;
        std::vector<std::vector<TokenId>> targets;
        for (const auto& [s, t] : pairs) {
            if (sources.empty() || sources.back() != s) {
                sources.push_back(s);
                targets.emplace_back();
            }
            targets.back().push_back(t);
        }
        for (const auto& s : sources) {
            if (!market.prices.contains(s)) throw ConfigError("no price for source token '" + s.str() + "'");
        }

        std::vector<std::vector<RatioRecord>> per_source(sources.size());
        run_parallel(sources.size(), cfg.threads, [&](std::size_t i) {
            const TokenId& source = sources[i];
            const double amount_in = cfg.capital_usd / market.prices.at(source);
            const auto index = market.aggregate_graph().token_index(source).value();
            const std::uint64_t stream = static_cast<std::uint64_t>(trial) * 1000003ULL + index;
            const auto num = evaluate_method(market, cfg.methods[0], source, targets[i], amount_in,
                                             cfg.convergence, stream);
            const auto den = evaluate_method(market, cfg.methods[1], source, targets[i], amount_in,
                                             cfg.convergence, stream);
            auto& records = per_source[i];
            for (std::size_t k = 0; k < targets[i].size(); ++k) {
                RatioRecord r;
                r.trial = trial;
                r.source = source;
                r.target = targets[i][k];
                r.amount_in = amount_in;
                r.numerator = num[k];
                r.denominator = den[k];
                r.included = den[k].ok() && den[k].amount_out > 0.0;
                if (r.included) r.ratio = num[k].ok() ? num[k].amount_out / den[k].amount_out : 0.0;
                records.push_back(std::move(r));
            }
        });
        for (auto& records : per_source) {
            for (auto& r : records) result.records.push_back(std::move(r));
        }
    }

    std::vector<double> ratios;
    for (const auto& r : result.records) {
        if (!r.included) {
            ++result.excluded_denominator_no_route;
            continue;
        }
        ++result.included;
        if (!r.numerator.ok()) ++result.numerator_no_route;
        ratios.push_back(r.ratio);
    }
    result.cdf = empirical_cdf(std::move(ratios));
    log::info("ratio experiment: ", result.included, " pairs included, ", result.excluded_denominator_no_route,
              " excluded");
    return result;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    LinearFit fit;
    const std::size_t n = std::min(x.size(), y.size());
    if (n < 2) return fit;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) return fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

double sign_test_p_value(std::size_t wins, std::size_t losses) {
    const std::size_t n = wins + losses;
    if (n == 0) return 1.0;
    const double log_half_n = -static_cast<double>(n) * std::log(2.0);
    double p = 0.0;
    for (std::size_t k = wins; k <= n; ++k) {
        const double log_choose = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
        p += std::exp(log_choose + log_half_n);
    }
    return std::min(p, 1.0);
}

ScalingResult run_scaling_experiment(const ExperimentConfig& cfg) {
    const auto* base = std::get_if<SyntheticSource>(&cfg.graph_source);
    if (!base) throw ConfigError("scaling experiments need a synthetic graph source");
    if (cfg.sizes.empty()) throw ConfigError("scaling experiments need at least one size");
    if (!std::is_sorted(cfg.sizes.begin(), cfg.sizes.end())) throw ConfigError("sizes must be ascending");
    if (cfg.methods.empty()) throw ConfigError("scaling experiments need at least one method");
    for (const auto& m : cfg.methods) {
        if (m.kind == MethodKind::kDfs || m.kind == MethodKind::kLgSplit) {
            throw ConfigError("scaling experiments support line-graph routing methods only, not " + m.label());
        }
    }

    ScalingResult result;
    for (std::size_t n : cfg.sizes) {
        if (n < 2) throw ConfigError("scaling sizes must be at least 2");
        const std::size_t max_pools = n * (n - 1) / 2;
        const auto wanted = static_cast<std::size_t>(std::llround(cfg.pools_per_token * static_cast<double>(n)));
        const std::size_t n_pools = std::clamp(wanted, n - 1, max_pools);

        std::vector<ScalingRow> rows(cfg.methods.size());
        for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
            rows[m].n_tokens = n;
            rows[m].n_pools = n_pools;
            rows[m].method = cfg.methods[m].label();
            rows[m].trials = cfg.trials;
        }

        for (int trial = 0; trial < cfg.trials; ++trial) {
            SyntheticSource src = *base;
            src.n_tokens = n;
            src.n_pools = n_pools;
            src.seed = mix_seed(base->seed, n * 100003ULL + static_cast<std::uint64_t>(trial));
            const Market market = synthetic_market(src, cfg.fee_bps);
            Rng pick(mix_seed(src.seed, 17));
            const auto& tokens = market.single_graph().tokens();
            const TokenId source = tokens[uniform_index(pick, tokens.size())];

            for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
                const Method& method = cfg.methods[m];
                const bool aggregate = aggregate_scope(method);
                const auto& topo = aggregate ? market.aggregate : market.single;

                const auto build_start = std::chrono::steady_clock::now();
                const LineGraph lg(std::make_shared<const LineGraphTopology>(topo->graph_ptr(), topo->cut()), source);
                const auto build_elapsed = std::chrono::steady_clock::now() - build_start;

                const auto order = order_for(method, n * 100003ULL + static_cast<std::uint64_t>(trial));
                const double amount_in = cfg.capital_usd / market.prices.at(source);
                std::vector<std::chrono::nanoseconds> times;
                RouteRun first;
                for (int rep = 0; rep < cfg.repeats; ++rep) {
                    RouteRun run = route(lg, amount_in, order, cfg.convergence);
                    times.push_back(run.elapsed);
                    if (rep == 0) first = std::move(run);
                }
                std::nth_element(times.begin(), times.begin() + times.size() / 2, times.end());

                ScalingSample sample;
                sample.n_tokens = n;
                sample.trial = trial;
                sample.method = method.label();
                sample.source = source;
                sample.rounds = first.rounds;
                sample.truncated = first.truncated;
                sample.vertices = lg.vertex_count() - 1;
                sample.links = lg.non_source_link_count();
                sample.elapsed = times[times.size() / 2];
                sample.build_elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(build_elapsed);

                auto& row = rows[m];
                row.mean_rounds += sample.rounds;
                row.mean_vertices += static_cast<double>(sample.vertices);
                row.mean_links += static_cast<double>(sample.links);
                row.truncated_runs += sample.truncated ? 1 : 0;
                row.mean_elapsed_us += static_cast<double>(sample.elapsed.count()) / 1e3;
                row.mean_build_us += static_cast<double>(sample.build_elapsed.count()) / 1e3;
                result.samples.push_back(std::move(sample));
            }
        }
        for (auto& row : rows) {
            const double t = cfg.trials;
            row.mean_rounds /= t;
            row.mean_vertices /= t;
            row.mean_links /= t;
            row.mean_elapsed_us /= t;
            row.mean_build_us /= t;
            result.rows.push_back(std::move(row));
        }
    }

    for (const auto& method : cfg.methods) {
        std::vector<double> x, y;
        for (const auto& row : result.rows) {
            if (row.method != method.label() || !(row.mean_elapsed_us > 0.0)) continue;
            x.push_back(std::log(static_cast<double>(row.n_tokens)));
            y.push_back(std::log(row.mean_elapsed_us));
        }
        result.fits.emplace_back(method.label(), fit_line(x, y));
    }
    return result;
}

}  // namespace ammroute::bench
