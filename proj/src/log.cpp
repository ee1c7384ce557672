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

#include "dss/log.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <mutex>

namespace dss::log {
namespace {

Level parse_env() {
  const char* env = std::getenv("DSS_LOG");
  if (env == nullptr) return Level::kWarn;
  const std::string v(env);
  if (v == "error") return Level::kError;
  if (v == "warn") return Level::kWarn;
  if (v == "info") return Level::kInfo;
  if (v == "debug") return Level::kDebug;
  return Level::kWarn;
}

std::atomic<int>& threshold_storage() {
  static std::atomic<int> value{static_cast<int>(parse_env())};
  return value;
}

const char* tag(Level level) {
  switch (level) {
    case Level::kError: return "error";
    case Level::kWarn: return "warn";
    case Level::kInfo: return "info";
    case Level::kDebug: return "debug";
  }
  return "?";
}

}  // namespace

Level threshold() { return static_cast<Level>(threshold_storage().load()); }

void set_threshold(Level level) { threshold_storage().store(static_cast<int>(level)); }

void write(Level level, const std::string& message) {
  if (static_cast<int>(level) > threshold_storage().load()) return;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  std::fprintf(stderr, "[dss %s] %s\n", tag(level), message.c_str());
}

}  // namespace dss::log
