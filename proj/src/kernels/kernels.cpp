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

#include "dss/kernels.hpp"

#include <atomic>
#include <cstdlib>

#include "dss/log.hpp"

namespace dss::kernels {
namespace {

const Ops* detect_best() {
  if (const Ops* ops = detail::avx2_ops()) return ops;
  if (const Ops* ops = detail::neon_ops()) return ops;
  return &detail::scalar_ops;
}

const Ops* lookup(const std::string& name) {
  if (name == "scalar") return &detail::scalar_ops;
  if (name == "avx2") return detail::avx2_ops();
  if (name == "neon") return detail::neon_ops();
  if (name == "auto") return detect_best();
  return nullptr;
}

std::atomic<const Ops*>& active_storage() {
  static std::atomic<const Ops*> storage{[] {
    const Ops* ops = nullptr;
    if (const char* env = std::getenv("DSS_KERNELS")) {
      ops = lookup(env);
      if (ops == nullptr) {
        log::warn("kernels", "DSS_KERNELS=", env, " not usable on this CPU; falling back to auto");
      }
    }
    if (ops == nullptr) ops = detect_best();
    log::debug("kernels", "backend: ", ops->name);
    return ops;
  }()};
  return storage;
}

}  // namespace

const Ops& active() { return *active_storage().load(); }

bool select(const std::string& name) {
  const Ops* ops = lookup(name);
  if (ops == nullptr) return false;
  active_storage().store(ops);
  return true;
}

std::string available() {
  std::string names;
  if (detail::avx2_ops() != nullptr) names += "avx2 ";
  if (detail::neon_ops() != nullptr) names += "neon ";
  names += "scalar";
  return names;
}

}  // namespace dss::kernels
