#include <cstdio>
#include <fstream>
#include <sstream>

#include "ammroute/bench.hpp"
#include "ammroute/error.hpp"

namespace ammroute::bench {

using nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << content;
    if (!out) throw DataError("write failed: " + path.string());
}

void prepare_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw DataError("cannot create output directory " + dir.string() + ": " + ec.message());
}

double micros(std::chrono::nanoseconds ns) { return static_cast<double>(ns.count()) / 1e3; }

}  // namespace

std::string ratio_csv(const RatioExperimentResult& result) {
    std::ostringstream os;
    os << "trial,source,target,amount_in,numerator_out,denominator_out,ratio,included,"
          "numerator_status,denominator_status,numerator_rounds,denominator_rounds,"
          "numerator_truncated,denominator_truncated\n";
    for (const auto& r : result.records) {
        os << r.trial << ',' << r.source << ',' << r.target << ',' << num(r.amount_in) << ','
           << num(r.numerator.amount_out) << ',' << num(r.denominator.amount_out) << ','
           << (r.included ? num(r.ratio) : "") << ',' << (r.included ? 1 : 0) << ',' << r.numerator.status << ','
           << r.denominator.status << ',' << r.numerator.rounds << ',' << r.denominator.rounds << ','
           << (r.numerator.truncated ? 1 : 0) << ',' << (r.denominator.truncated ? 1 : 0) << '\n';
    }
    return os.str();
}

std::string cdf_csv(const RatioExperimentResult& result) {
    std::ostringstream os;
    os << "cumulative_fraction,ratio\n";
    for (auto [fraction, ratio] : result.cdf) os << num(fraction) << ',' << num(ratio) << '\n';
    return os.str();
}

std::string scaling_csv(const ScalingResult& result) {
    std::ostringstream os;
    os << "n_tokens,n_pools,method,trials,mean_rounds,mean_vertices,mean_links,truncated_runs\n";
    for (const auto& r : result.rows) {
        os << r.n_tokens << ',' << r.n_pools << ',' << r.method << ',' << r.trials << ',' << num(r.mean_rounds)
           << ',' << num(r.mean_vertices) << ',' << num(r.mean_links) << ',' << r.truncated_runs << '\n';
    }
    return os.str();
}

std::string scaling_trials_csv(const ScalingResult& result) {
    std::ostringstream os;
    os << "n_tokens,trial,method,source,rounds,truncated,vertices,links\n";
    for (const auto& s : result.samples) {
        os << s.n_tokens << ',' << s.trial << ',' << s.method << ',' << s.source << ',' << s.rounds << ','
           << (s.truncated ? 1 : 0) << ',' << s.vertices << ',' << s.links << '\n';
    }
    return os.str();
}

void write_ratio_outputs(const ExperimentConfig& cfg, const RatioExperimentResult& result,
                         const std::filesystem::path& dir) {
    prepare_dir(dir);
    write_file(dir / "ratio.csv", ratio_csv(result));
    write_file(dir / "cdf.csv", cdf_csv(result));

    ordered_json manifest;
    manifest["tool"] = "ammroute";
    manifest["version"] = kVersion;
    manifest["experiment"] = "ratio";
    manifest["numerator"] = cfg.methods.at(0).label();
    manifest["denominator"] = cfg.methods.at(1).label();
    manifest["config"] = to_json(cfg);
    manifest["pairs"] = result.records.size();
    manifest["included"] = result.included;
    manifest["excluded_denominator_no_route"] = result.excluded_denominator_no_route;
    manifest["numerator_no_route"] = result.numerator_no_route;
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");

    double num_us = 0.0, den_us = 0.0;
    for (const auto& r : result.records) {
        num_us += micros(r.numerator.elapsed);
        den_us += micros(r.denominator.elapsed);
    }
    const double n = result.records.empty() ? 1.0 : static_cast<double>(result.records.size());
    ordered_json timing;
    timing["note"] = "wall-clock measurements; not reproducible byte for byte";
    timing["numerator_mean_elapsed_us"] = num_us / n;
    timing["denominator_mean_elapsed_us"] = den_us / n;
    write_file(dir / "timing.json", timing.dump(2) + "\n");
}

void write_scaling_outputs(const ExperimentConfig& cfg, const ScalingResult& result,
                           const std::filesystem::path& dir) {
    prepare_dir(dir);
    write_file(dir / "scaling.csv", scaling_csv(result));
    write_file(dir / "scaling_trials.csv", scaling_trials_csv(result));

    ordered_json manifest;
    manifest["tool"] = "ammroute";
    manifest["version"] = kVersion;
    manifest["experiment"] = "scaling";
    manifest["config"] = to_json(cfg);
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");

    ordered_json timing;
    timing["note"] = "wall-clock measurements; not reproducible byte for byte";
    auto& rows = timing["rows"] = ordered_json::array();
    for (const auto& r : result.rows) {
        rows.push_back({{"n_tokens", r.n_tokens},
                        {"method", r.method},
                        {"mean_elapsed_us", r.mean_elapsed_us},
                        {"mean_build_us", r.mean_build_us}});
    }
    auto& fits = timing["loglog_fit"] = ordered_json::object();
    for (const auto& [method, fit] : result.fits) {
        fits[method] = {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r2", fit.r2}};
    }
    write_file(dir / "timing.json", timing.dump(2) + "\n");
}

}  // namespace ammroute::bench
