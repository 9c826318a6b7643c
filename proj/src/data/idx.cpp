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

#include "dpopt/data/idx.hpp"

#include <cmath>
#include <fstream>

namespace dpopt::data {

namespace {

constexpr std::uint32_t kLabelsMagic = 0x00000801u;
constexpr std::uint32_t kImagesMagic = 0x00000803u;

std::string format_hex(std::uint32_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(8, '0');
  for (int i = 7; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return s;
}

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t offset) {
  if (offset + 4 > bytes.size()) {
    throw IdxError(IdxErrorKind::kTruncated, bytes.size(),
                   "idx: file ends inside a 4-byte field starting at offset " +
                       std::to_string(offset));
  }
  return (std::uint32_t(bytes[offset]) << 24) | (std::uint32_t(bytes[offset + 1]) << 16) |
         (std::uint32_t(bytes[offset + 2]) << 8) | std::uint32_t(bytes[offset + 3]);
}

void write_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

// Shared header/payload walk; returns the dims and the payload view.
std::span<const std::uint8_t> parse_payload(std::span<const std::uint8_t> bytes,
                                            std::uint32_t expected_magic,
                                            std::size_t num_dims,
                                            std::vector<std::size_t>& dims_out) {
  const std::uint32_t magic = read_be32(bytes, 0);
  if (magic != expected_magic) {
    throw IdxError(IdxErrorKind::kBadMagic, 0,
                   "idx: bad magic 0x" + format_hex(magic) + ", expected 0x" +
                       format_hex(expected_magic));
  }
  dims_out.clear();
  std::size_t product = 1;
  for (std::size_t i = 0; i < num_dims; ++i) {
    const std::size_t off = 4 + 4 * i;
    dims_out.push_back(read_be32(bytes, off));
    product *= dims_out.back();
  }
  const std::size_t header_end = 4 + 4 * num_dims;
  const std::size_t payload = bytes.size() - header_end;
  if (payload < product) {
    throw IdxError(IdxErrorKind::kTruncated, bytes.size(),
                   "idx: payload truncated, need " + std::to_string(product) +
                       " bytes after offset " + std::to_string(header_end) + ", have " +
                       std::to_string(payload));
  }
  if (payload > product) {
    throw IdxError(IdxErrorKind::kSizeMismatch, header_end + product,
                   "idx: " + std::to_string(payload - product) +
                       " trailing bytes beyond the declared dimensions");
  }
  return bytes.subspan(header_end);
}

}  // namespace

IdxImages parse_idx_images(std::span<const std::uint8_t> bytes) {
  std::vector<std::size_t> dims;
  const auto payload = parse_payload(bytes, kImagesMagic, 3, dims);
  IdxImages out;
  out.count = dims[0];
  out.rows = dims[1];
  out.cols = dims[2];
  out.pixels.resize(payload.size());
  for (std::size_t i = 0; i < payload.size(); ++i) {
    out.pixels[i] = static_cast<double>(payload[i]) / 255.0;
  }
  return out;
}

std::vector<int> parse_idx_labels(std::span<const std::uint8_t> bytes) {
  std::vector<std::size_t> dims;
  const auto payload = parse_payload(bytes, kLabelsMagic, 1, dims);
  std::vector<int> labels(payload.size());
  for (std::size_t i = 0; i < payload.size(); ++i) labels[i] = payload[i];
  return labels;
}

std::vector<std::uint8_t> serialize_idx_images(const IdxImages& images) {
  std::vector<std::uint8_t> out;
  out.reserve(16 + images.pixels.size());
  write_be32(out, kImagesMagic);
  write_be32(out, static_cast<std::uint32_t>(images.count));
  write_be32(out, static_cast<std::uint32_t>(images.rows));
  write_be32(out, static_cast<std::uint32_t>(images.cols));
  for (double p : images.pixels) {
    out.push_back(static_cast<std::uint8_t>(std::llround(p * 255.0)));
  }
  return out;
}

std::vector<std::uint8_t> serialize_idx_labels(std::span<const int> labels) {
  std::vector<std::uint8_t> out;
  out.reserve(8 + labels.size());
  write_be32(out, kLabelsMagic);
  write_be32(out, static_cast<std::uint32_t>(labels.size()));
  for (int l : labels) out.push_back(static_cast<std::uint8_t>(l));
  return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

Dataset load_idx_dataset(const std::string& images_path, const std::string& labels_path,
                         std::size_t num_classes) {
  const auto image_bytes = read_file_bytes(images_path);
  const auto label_bytes = read_file_bytes(labels_path);
  const IdxImages images = parse_idx_images(image_bytes);
  const std::vector<int> labels = parse_idx_labels(label_bytes);
  if (images.count != labels.size()) {
    throw std::runtime_error("idx: " + std::to_string(images.count) + " images but " +
                             std::to_string(labels.size()) + " labels");
  }
  Dataset ds;
  ds.num_features = images.rows * images.cols;
  ds.num_classes = num_classes;
  ds.features = images.pixels;
  ds.labels = labels;
  ds.validate();
  return ds;
}

}  // namespace dpopt::data
