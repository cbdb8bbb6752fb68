#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace adelim {

/// Formats a double as scientific notation with 17 significant digits,
/// locale-independent. NaN becomes an empty cell.
std::string csv_number(double x);

/// SHA-256 of a file's bytes, lowercase hex.
std::string sha256_file(const std::filesystem::path& path);

/// Current time as an RFC 3339 UTC string.
std::string utc_timestamp_now();

/// CSV emitter with a fixed header row, UTF-8, '\n' line endings.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  void write_row(const std::vector<std::string>& cells);
  void close();
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream stream_;
  std::size_t columns_;
};

/// Provenance record written next to every command output. Re-running a
/// deterministic command with the manifest's params reproduces the CSV bytes.
struct RunManifest {
  std::string command;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 0;
  nlohmann::json tolerances = nlohmann::json::object();
  std::string timestamp_utc;
  std::vector<std::pair<std::string, std::string>> outputs;  ///< (path, sha256)
  nlohmann::json extras = nlohmann::json::object();

  void add_output(const std::filesystem::path& path);
  nlohmann::json to_json() const;
  void write(const std::filesystem::path& path) const;
};

}  // namespace adelim
