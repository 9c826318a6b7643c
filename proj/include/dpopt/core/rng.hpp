// Copyright 2026 The dpopt Authors
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

#ifndef DPOPT_CORE_RNG_HPP_
#define DPOPT_CORE_RNG_HPP_

#include <cstdint>

namespace dpopt::core {

/// Counter-based deterministic generator (splitmix64 core).
///
/// Identical seed + identical call sequence produces an identical stream on
/// every platform. Independent substreams are derived from (seed, stream) so
/// that e.g. batch sampling and noise draws never interleave. Single-owner
/// mutable state: never share one instance across concurrent tasks.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : SeededRng(seed, 0) {}
  SeededRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1).
  double next_double();

  /// Standard normal via Box-Muller. Draws come in pairs; the spare is
  /// cached, so the uniform stream advances every other call.
  double next_gaussian();

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace dpopt::core

#endif  // DPOPT_CORE_RNG_HPP_
