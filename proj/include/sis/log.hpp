#pragma once

#include <cstdarg>

namespace sis::log {

enum class Level { error = 0, warn = 1, info = 2, debug = 3 };

/// Current level, read once from the SIS_LOG environment variable
/// (error|warn|info|debug), default warn.
Level level();

void error(const char* fmt, ...);
void warn(const char* fmt, ...);
void info(const char* fmt, ...);
void debug(const char* fmt, ...);

} // namespace sis::log
