// Copyright 2026 The ouqnn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <atomic>
#include <cstddef>
#include <iostream>
#include <mutex>
#include <string_view>

namespace ouq::log {

enum class Level { Quiet = 0, Warn = 1, Info = 2 };

inline std::atomic<Level>& level() {
  static std::atomic<Level> lvl{Level::Warn};
  return lvl;
}

inline std::atomic<std::size_t>& warning_count() {
  static std::atomic<std::size_t> n{0};
  return n;
}

inline std::mutex& sink_mutex() {
  static std::mutex mu;
  return mu;
}

inline void warn(std::string_view msg) {
  warning_count().fetch_add(1, std::memory_order_relaxed);
  if (level().load() >= Level::Warn) {
    std::lock_guard lock(sink_mutex());
    std::cerr << "warning: " << msg << '\n';
  }
}

inline void info(std::string_view msg) {
  if (level().load() >= Level::Info) {
    std::lock_guard lock(sink_mutex());
    std::cerr << msg << '\n';
  }
}

}  // namespace ouq::log
