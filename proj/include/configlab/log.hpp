#pragma once

#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace configlab {

// 0 = off, 1 = warn, 2 = info, 3 = debug; CONFIGLAB_LOG selects the level.
inline int log_level() {
  static const int level = [] {
    const char* env = std::getenv("CONFIGLAB_LOG");
    if (!env) return 1;
    if (std::strcmp(env, "off") == 0) return 0;
    if (std::strcmp(env, "warn") == 0) return 1;
    if (std::strcmp(env, "info") == 0) return 2;
    if (std::strcmp(env, "debug") == 0) return 3;
    return 1;
  }();
  return level;
}

inline void log_at(int level, const char* tag, const char* fmt, va_list args) {
  if (log_level() < level) return;
  std::fprintf(stderr, "[configlab %s] ", tag);
  std::vfprintf(stderr, fmt, args);
  std::fputc('\n', stderr);
}

inline void log_warn(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  log_at(1, "warn", fmt, args);
  va_end(args);
}

inline void log_info(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  log_at(2, "info", fmt, args);
  va_end(args);
}

inline void log_debug(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  log_at(3, "debug", fmt, args);
  va_end(args);
}

}  // namespace configlab
