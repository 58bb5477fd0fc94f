#pragma once

#include "json.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <map>
#include <string>
#include <system_error>
#include <unistd.h>
#include <vector>

#include "si_euler/core/error.hpp"

namespace si_euler::cli {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kCsvSchema = 1;
inline constexpr int kJsonSchema = 1;

inline constexpr const char* kDiagnosticsHeader = "t,S,h1dual,mean,l2,min,max";
inline constexpr const char* kSnapshotsHeader = "t,theta,g,G";
inline constexpr const char* kMarkersHeader = "t,label,chi,dchi,F,y";
inline constexpr const char* kContourHeader = "t,jump,position,velocity";
inline constexpr const char* kOdeHeader = "t,y,dy";

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// Comma-separated rows, every number with 17 significant digits.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& header) : text_(header + "\n") {}

  void row(std::initializer_list<double> values) {
    bool first = true;
    char buf[32];
    for (double v : values) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      if (!first) text_ += ',';
      text_ += buf;
      first = false;
    }
    text_ += '\n';
  }

  const std::string& text() const noexcept { return text_; }

 private:
  std::string text_;
};

/**
 * @brief In-memory output bundle written atomically: files go to a sibling
 * temporary directory which is renamed onto the target only when complete.
 */
class Bundle {
 public:
  void add(const std::string& name, std::string content) { files_[name] = std::move(content); }
  const std::map<std::string, std::string>& files() const noexcept { return files_; }

  /// Writes manifest.json (with checksums of every other file) and commits.
  void commit(const std::filesystem::path& target, nlohmann::ordered_json manifest) const {
    namespace fs = std::filesystem;
    nlohmann::ordered_json list = nlohmann::ordered_json::object();
    for (const auto& [name, content] : files_) {
      list[name] = {{"bytes", content.size()}, {"fnv1a64", hex64(fnv1a(content))}};
    }
    manifest["files"] = list;

    const fs::path dest = fs::absolute(target).lexically_normal();
    const fs::path parent = dest.parent_path();
    std::error_code ec;
    fs::create_directories(parent, ec);
    if (ec) throw ConfigError("cannot create " + parent.string() + ": " + ec.message());
    const std::string tag = ".tmp-" + std::to_string(::getpid());
    const fs::path tmp = parent / (dest.filename().string() + tag);
    fs::remove_all(tmp, ec);
    fs::create_directory(tmp, ec);
    if (ec) throw ConfigError("cannot create " + tmp.string() + ": " + ec.message());

    auto write = [&](const std::string& name, const std::string& content) {
      std::ofstream out(tmp / name, std::ios::binary);
      out << content;
      if (!out) throw ConfigError("failed writing " + (tmp / name).string());
    };
    for (const auto& [name, content] : files_) write(name, content);
    write("manifest.json", manifest.dump(2) + "\n");

    if (fs::exists(dest)) {
      const fs::path old = parent / (dest.filename().string() + ".old" + tag);
      fs::rename(dest, old, ec);
      if (ec) throw ConfigError("cannot replace " + dest.string() + ": " + ec.message());
      fs::rename(tmp, dest, ec);
      if (ec) {
        fs::rename(old, dest);
        throw ConfigError("cannot move bundle into " + dest.string() + ": " + ec.message());
      }
      fs::remove_all(old, ec);
    } else {
      fs::rename(tmp, dest, ec);
      if (ec) throw ConfigError("cannot move bundle into " + dest.string() + ": " + ec.message());
    }
  }

 private:
  std::map<std::string, std::string> files_;
};

}  // namespace si_euler::cli
