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

#ifndef DPOPT_DATA_IDX_HPP_
#define DPOPT_DATA_IDX_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpopt/data/dataset.hpp"

namespace dpopt::data {

// IDX container (the MNIST/FMNIST on-disk format), big-endian throughout:
//   offset 0: 4-byte magic (0x00000801 = labels / 1 dim,
//                           0x00000803 = images / 3 dims)
//   then one 4-byte size per dimension, then the unsigned-byte payload.
// The product of the dimension sizes must equal the payload byte count.

enum class IdxErrorKind { kBadMagic, kTruncated, kSizeMismatch };

class IdxError : public std::runtime_error {
 public:
  IdxError(IdxErrorKind kind, std::size_t offset, const std::string& msg)
      : std::runtime_error(msg + " (byte offset " + std::to_string(offset) + ")"),
        kind_(kind),
        offset_(offset) {}

  IdxErrorKind kind() const { return kind_; }
  std::size_t offset() const { return offset_; }

 private:
  IdxErrorKind kind_;
  std::size_t offset_;
};

struct IdxImages {
  std::size_t count = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> pixels;  // count * rows * cols, each byte / 255 in [0,1]
};

IdxImages parse_idx_images(std::span<const std::uint8_t> bytes);
std::vector<int> parse_idx_labels(std::span<const std::uint8_t> bytes);

// Bit-exact inverses of the parsers above.
std::vector<std::uint8_t> serialize_idx_images(const IdxImages& images);
std::vector<std::uint8_t> serialize_idx_labels(std::span<const int> labels);

std::vector<std::uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, std::span<const std::uint8_t> bytes);

/// Joins an image file and a label file into one Dataset.
Dataset load_idx_dataset(const std::string& images_path, const std::string& labels_path,
                         std::size_t num_classes = 10);

}  // namespace dpopt::data

#endif  // DPOPT_DATA_IDX_HPP_
