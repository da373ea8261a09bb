#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace auginf::cli {

/// Lowercase hex SHA-256 of a file's bytes. Throws DataError if unreadable.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(const std::string& bytes);

struct FileHash {
  std::string path;
  std::string sha256;
  friend bool operator==(const FileHash&, const FileHash&) = default;
};

/// Written as manifest.json at the root of every command's output directory.
/// Output paths are relative to that directory; input paths are as given.
struct RunManifest {
  static constexpr int kVersion = 1;

  std::string command;
  std::vector<std::string> args;  // the full argument list after the program name
  nlohmann::json config = nlohmann::json::object();
  std::vector<std::uint64_t> seeds;
  std::vector<FileHash> inputs;
  std::vector<FileHash> outputs;

  void add_input(const std::filesystem::path& p);
  /// Hashes `out_dir / rel`.
  void add_output(const std::filesystem::path& out_dir, const std::string& rel);

  nlohmann::ordered_json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& out_dir) const;
  static RunManifest load(const std::filesystem::path& path);
};

}  // namespace auginf::cli
