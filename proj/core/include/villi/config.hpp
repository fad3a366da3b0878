#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace villi {

/// Sectioned key/value configuration with a canonical text form: sections
/// and keys serialize in sorted order, so equal configurations produce
/// byte-identical files and a stable hash.
class Config {
 public:
  void set(const std::string& section, const std::string& key,
           std::string value);

  std::optional<std::string> find(const std::string& section,
                                  const std::string& key) const;
  /// Throws std::invalid_argument when the key is absent.
  std::string get(const std::string& section, const std::string& key) const;

  int get_int(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key) const;
  bool get_bool(const std::string& section, const std::string& key) const;
  std::uint64_t get_u64(const std::string& section,
                        const std::string& key) const;

  bool has_section(const std::string& section) const {
    return sections_.count(section) != 0;
  }

  std::string serialize() const;
  std::uint64_t hash() const;

  /// Accepts `[section]` headers, `key = value` lines, blank lines, and
  /// comments starting with '#' or ';'. Whitespace around tokens is trimmed.
  static Config parse(const std::string& text);
  static Config load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  bool operator==(const Config& o) const = default;

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

}  // namespace villi
