#pragma once

#include <sstream>
#include <string_view>

namespace ammroute::log {

enum class Level { kOff = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

/// Current verbosity. Read once from AMM_PATHFINDER_LOG (off|warn|info|debug);
/// defaults to warn.
Level level();
void set_level(Level lvl);
Level parse_level(std::string_view text);

void write(Level lvl, std::string_view message);

template <typename... Args>
void emit(Level lvl, const Args&... args) {
    if (lvl > level()) return;
    std::ostringstream os;
    (os << ... << args);
    write(lvl, os.str());
}

template <typename... Args>
void warn(const Args&... args) { emit(Level::kWarn, args...); }
template <typename... Args>
void info(const Args&... args) { emit(Level::kInfo, args...); }
template <typename... Args>
void debug(const Args&... args) { emit(Level::kDebug, args...); }

}  // namespace ammroute::log
