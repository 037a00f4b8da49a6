#pragma once

// Streaming SHA-256 (FIPS 180-4), used to checksum output files so a run
// manifest can pin the exact bytes it produced.

#include <cstdint>
#include <string>

namespace qfel {

class Sha256 {
 public:
  Sha256();
  void update(const void* data, size_t len);
  // Finalizes and returns the lowercase hex digest; the object must not be
  // updated afterwards.
  std::string hex_digest();

 private:
  void process_block(const uint8_t* block);

  uint32_t state_[8];
  uint64_t bit_count_ = 0;
  uint8_t buffer_[64];
  size_t buffer_len_ = 0;
  bool finalized_ = false;
};

// Hex digest of a whole buffer.
std::string sha256_hex(const std::string& data);

// Hex digest of a file's bytes; throws IoError if the file cannot be read.
std::string sha256_file(const std::string& path);

}  // namespace qfel
