#pragma once

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

namespace gssr {

enum class LogLevel : int { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

/// Global log threshold, read once from the GSSR_LOG environment variable
/// (error|warn|info|debug). Defaults to info.
inline LogLevel log_threshold() {
    static const LogLevel level = [] {
        const char* env = std::getenv("GSSR_LOG");
        if (!env) return LogLevel::kInfo;
        if (std::strcmp(env, "error") == 0) return LogLevel::kError;
        if (std::strcmp(env, "warn") == 0) return LogLevel::kWarn;
        if (std::strcmp(env, "debug") == 0) return LogLevel::kDebug;
        return LogLevel::kInfo;
    }();
    return level;
}

template <class... Args>
void log_at(LogLevel level, const char* tag, const char* fmt, Args... args) {
    if (int(level) > int(log_threshold())) return;
    std::fprintf(stderr, "[%s] ", tag);
    if constexpr (sizeof...(Args) == 0)
        std::fprintf(stderr, "%s", fmt);
    else
        std::fprintf(stderr, fmt, args...);
    std::fprintf(stderr, "\n");
}

template <class... Args>
void log_error(const char* fmt, Args... args) {
    log_at(LogLevel::kError, "error", fmt, args...);
}
template <class... Args>
void log_warn(const char* fmt, Args... args) {
    log_at(LogLevel::kWarn, "warn", fmt, args...);
}
template <class... Args>
void log_info(const char* fmt, Args... args) {
    log_at(LogLevel::kInfo, "info", fmt, args...);
}
template <class... Args>
void log_debug(const char* fmt, Args... args) {
    log_at(LogLevel::kDebug, "debug", fmt, args...);
}

}  // namespace gssr
