#include "sis/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace sis::log {

Level level() {
    static const Level lvl = [] {
        const char* env = std::getenv("SIS_LOG");
        if (!env) return Level::warn;
        if (std::strcmp(env, "error") == 0) return Level::error;
        if (std::strcmp(env, "info") == 0) return Level::info;
        if (std::strcmp(env, "debug") == 0) return Level::debug;
        return Level::warn;
    }();
    return lvl;
}

static void emit(Level lvl, const char* tag, const char* fmt, std::va_list args) {
    if (lvl > level()) return;
    std::fprintf(stderr, "[%s] ", tag);
    std::vfprintf(stderr, fmt, args);
    std::fputc('\n', stderr);
}

#define SIS_LOG_IMPL(name, lvl, tag)            \
    void name(const char* fmt, ...) {           \
        std::va_list args;                      \
        va_start(args, fmt);                    \
        emit(lvl, tag, fmt, args);              \
        va_end(args);                           \
    }

SIS_LOG_IMPL(error, Level::error, "error")
SIS_LOG_IMPL(warn, Level::warn, "warn")
SIS_LOG_IMPL(info, Level::info, "info")
SIS_LOG_IMPL(debug, Level::debug, "debug")

#undef SIS_LOG_IMPL

} // namespace sis::log
