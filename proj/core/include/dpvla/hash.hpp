#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dpvla {

using Digest256 = std::array<uint8_t, 32>;

// SHA-256 over a byte stream. Used for all provenance keys.
class Sha256 {
 public:
  Sha256();
  void update(const void* data, size_t len);
  void update(std::span<const uint8_t> bytes) { update(bytes.data(), bytes.size()); }
  void update(const std::string& s) { update(s.data(), s.size()); }
  Digest256 finish();

 private:
  void process_block(const uint8_t* block);
  std::array<uint32_t, 8> h_;
  std::array<uint8_t, 64> buf_;
  size_t buf_len_ = 0;
  uint64_t total_len_ = 0;
};

Digest256 sha256_bytes(std::span<const uint8_t> bytes);
Digest256 sha256_string(const std::string& s);
Digest256 sha256_file(const std::string& path);

std::string hex_digest(const Digest256& d);

// 64-bit convenience key (first 8 digest bytes, big-endian).
uint64_t digest_prefix64(const Digest256& d);
uint64_t hash64_string(const std::string& s);
uint64_t hash64_bytes(std::span<const uint8_t> bytes);

}  // namespace dpvla
