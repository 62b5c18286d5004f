#ifndef AUTORISK_MANIFEST_HPP
#define AUTORISK_MANIFEST_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace autorisk {

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);
std::string fnv1a_hex(std::string_view bytes);

// Accumulates labelled inputs (flag values, input file bytes) into one
// order-sensitive digest. Callers add entries in a fixed order so equal
// configurations hash equally.
class DigestBuilder {
 public:
  void add(std::string_view key, std::string_view value);
  void add_file(std::string_view key, const std::string& path);
  std::string hex() const;

 private:
  std::string buffer_;
};

std::string read_bytes(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

// Run metadata. Timestamps live only here so the data outputs themselves
// stay byte-identical across reruns.
struct RunManifest {
  std::string command;
  std::string config_digest;
  std::uint64_t seed = 0;
  std::string started_at;   // ISO 8601 UTC
  std::string finished_at;  // ISO 8601 UTC
  std::vector<std::string> outputs;
};

std::string utc_timestamp();

std::string manifest_json(const RunManifest& manifest);
void write_manifest(const std::string& path, const RunManifest& manifest);

}  // namespace autorisk

#endif
