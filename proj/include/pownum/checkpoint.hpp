#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace pownum::cli {

/// Resumable progress for a partitioned range search. cursor is the first
/// unprocessed range value; hits_emitted counts records already produced.
struct Checkpoint {
  uint64_t format_version = 1;
  std::string command_signature;
  uint64_t cursor = 0;
  uint64_t hits_emitted = 0;
};

/// FNV-1a over the canonical command description, as 16 hex digits.
std::string signature_hash(const std::string& canonical);

/// nullopt when the file does not exist; throws std::runtime_error on a
/// malformed or wrong-version file.
std::optional<Checkpoint> load_checkpoint(const std::string& path);

/// Write-ahead: temp file in the same directory, then atomic rename.
void save_checkpoint(const std::string& path, const Checkpoint& cp);

}  // namespace pownum::cli
