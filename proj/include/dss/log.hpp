// Copyright 2026 The DSS Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <sstream>
#include <string>

namespace dss::log {

enum class Level { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

// Threshold comes from the DSS_LOG environment variable
// (error|warn|info|debug); default is warn.
Level threshold();
void set_threshold(Level level);
void write(Level level, const std::string& message);

namespace detail {
template <typename... Args>
std::string concat(Args&&... args) {
  std::ostringstream os;
  (os << ... << args);
  return os.str();
}
}  // namespace detail

// The first argument names the emitting module; the rest form the message.
template <typename... Args>
void error(const char* module, Args&&... args) {
  write(Level::kError, detail::concat(module, ": ", std::forward<Args>(args)...));
}
template <typename... Args>
void warn(const char* module, Args&&... args) {
  write(Level::kWarn, detail::concat(module, ": ", std::forward<Args>(args)...));
}
template <typename... Args>
void info(const char* module, Args&&... args) {
  write(Level::kInfo, detail::concat(module, ": ", std::forward<Args>(args)...));
}
template <typename... Args>
void debug(const char* module, Args&&... args) {
  write(Level::kDebug, detail::concat(module, ": ", std::forward<Args>(args)...));
}

}  // namespace dss::log
