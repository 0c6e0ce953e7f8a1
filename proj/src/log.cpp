#include "ammroute/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace ammroute::log {
namespace {

Level from_env() {
    const char* raw = std::getenv("AMM_PATHFINDER_LOG");
    return raw ? parse_level(raw) : Level::kWarn;
}

std::atomic<Level>& current() {
    static std::atomic<Level> lvl{from_env()};
    return lvl;
}

std::mutex& sink_mutex() {
    static std::mutex m;
    return m;
}

const char* tag(Level lvl) {
    switch (lvl) {
        case Level::kWarn: return "warn";
        case Level::kInfo: return "info";
        case Level::kDebug: return "debug";
        case Level::kOff: break;
    }
    return "";
}

}  // namespace

Level level() { return current().load(std::memory_order_relaxed); }

void set_level(Level lvl) { current().store(lvl, std::memory_order_relaxed); }

Level parse_level(std::string_view text) {
    if (text == "off") return Level::kOff;
    if (text == "info") return Level::kInfo;
    if (text == "debug") return Level::kDebug;
    return Level::kWarn;
}

void write(Level lvl, std::string_view message) {
    std::lock_guard lock(sink_mutex());
    std::cerr << "[ammroute " << tag(lvl) << "] " << message << '\n';
}

}  // namespace ammroute::log
