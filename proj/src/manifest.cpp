#include "adelim/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <stdexcept>

#include "adelim/version.hpp"

namespace adelim {

std::string csv_number(double x) {
  if (std::isnan(x)) return {};
  std::array<char, 40> buf{};
  const int len = std::snprintf(buf.data(), buf.size(), "%.16e", x);
  return {buf.data(), static_cast<std::size_t>(len)};
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("sha256_file: cannot open " + path.string());

  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr) throw std::runtime_error("sha256_file: EVP context allocation failed");
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);

  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest.data(), &len);
  EVP_MD_CTX_free(ctx);

  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0x0F]);
  }
  return out;
}

std::string utc_timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::array<char, 32> buf{};
  std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf.data();
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), columns_(header.size()) {
  stream_.open(path, std::ios::binary | std::ios::trunc);
  if (!stream_) throw std::runtime_error("CsvWriter: cannot open " + path.string());
  write_row(header);
}

void CsvWriter::write_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_)
    throw std::logic_error("CsvWriter: row width does not match the header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) stream_ << ',';
    stream_ << cells[i];
  }
  stream_ << '\n';
}

void CsvWriter::close() {
  stream_.close();
  if (stream_.fail()) throw std::runtime_error("CsvWriter: write failed for " + path_.string());
}

void RunManifest::add_output(const std::filesystem::path& path) {
  outputs.emplace_back(path.filename().string(), sha256_file(path));
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json outs = nlohmann::json::array();
  for (const auto& [path, digest] : outputs)
    outs.push_back({{"path", path}, {"sha256", digest}});
  nlohmann::json j{{"command", command},    {"params", params},
                   {"seed", seed},          {"tolerances", tolerances},
                   {"version", kVersion},   {"timestamp_utc", timestamp_utc},
                   {"outputs", outs}};
  if (!extras.empty()) j["extras"] = extras;
  return j;
}

void RunManifest::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("RunManifest: cannot open " + path.string());
  out << to_json().dump(2) << '\n';
  out.close();
  if (out.fail()) throw std::runtime_error("RunManifest: write failed for " + path.string());
}

}  // namespace adelim
