// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the mcbench authors

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace mcbench {

/// Incremental SHA-256 (FIPS 180-4). Used to fingerprint inputs and outputs
/// in run manifests so reruns can be compared byte for byte.
class Sha256 {
 public:
  Sha256();

  void update(const void* data, std::size_t size);
  void update(std::string_view text) { update(text.data(), text.size()); }

  /// Finalizes and returns the digest as 64 lowercase hex characters.
  /// The instance must not be reused afterwards.
  std::string hex_digest();

 private:
  void process_block(const std::uint8_t* block);

  std::uint32_t state_[8];
  std::uint8_t buffer_[64];
  std::size_t buffered_ = 0;
  std::uint64_t total_bytes_ = 0;
};

/// One-shot convenience wrapper.
std::string sha256_hex(std::string_view text);

}  // namespace mcbench
