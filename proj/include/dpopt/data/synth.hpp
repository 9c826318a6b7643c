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

#ifndef DPOPT_DATA_SYNTH_HPP_
#define DPOPT_DATA_SYNTH_HPP_

#include <cstdint>

#include "dpopt/data/dataset.hpp"

namespace dpopt::data {

/// Gaussian class blobs (unit variance) whose centers sit `margin` apart.
/// Deterministic in the seed; labels cycle round-robin over the classes.
Dataset synth_classification(std::uint64_t seed, std::size_t n, std::size_t features,
                             std::size_t classes, double margin);

}  // namespace dpopt::data

#endif  // DPOPT_DATA_SYNTH_HPP_
