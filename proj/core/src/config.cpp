#include "villi/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "villi/rng.hpp"

namespace villi {

namespace {

std::string trim(const std::string& s) {
  const auto from = s.find_first_not_of(" \t\r\n");
  if (from == std::string::npos) return "";
  const auto to = s.find_last_not_of(" \t\r\n");
  return s.substr(from, to - from + 1);
}

}  // namespace

void Config::set(const std::string& section, const std::string& key,
                 std::string value) {
  if (section.empty() || key.empty())
    throw std::invalid_argument("Config::set: empty section or key");
  sections_[section][key] = std::move(value);
}

std::optional<std::string> Config::find(const std::string& section,
                                        const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return std::nullopt;
  const auto k = s->second.find(key);
  if (k == s->second.end()) return std::nullopt;
  return k->second;
}

std::string Config::get(const std::string& section,
                        const std::string& key) const {
  auto v = find(section, key);
  if (!v)
    throw std::invalid_argument("Config: missing key [" + section + "] " +
                                key);
  return *v;
}

int Config::get_int(const std::string& section, const std::string& key) const {
  const std::string v = get(section, key);
  try {
    std::size_t used = 0;
    const int out = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw std::invalid_argument("Config: [" + section + "] " + key +
                                " is not an integer: " + v);
  }
}

double Config::get_double(const std::string& section,
                          const std::string& key) const {
  const std::string v = get(section, key);
  try {
    std::size_t used = 0;
    const double out = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw std::invalid_argument("Config: [" + section + "] " + key +
                                " is not a number: " + v);
  }
}

bool Config::get_bool(const std::string& section,
                      const std::string& key) const {
  const std::string v = get(section, key);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument("Config: [" + section + "] " + key +
                              " is not a boolean: " + v);
}

std::uint64_t Config::get_u64(const std::string& section,
                              const std::string& key) const {
  const std::string v = get(section, key);
  try {
    std::size_t used = 0;
    const unsigned long long out = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw std::invalid_argument("Config: [" + section + "] " + key +
                                " is not an unsigned integer: " + v);
  }
}

std::string Config::serialize() const {
  std::ostringstream out;
  bool first = true;
  for (const auto& [section, entries] : sections_) {
    if (!first) out << "\n";
    first = false;
    out << "[" << section << "]\n";
    for (const auto& [key, value] : entries)
      out << key << " = " << value << "\n";
  }
  return out.str();
}

std::uint64_t Config::hash() const { return fnv1a64(serialize()); }

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']' || t.size() < 3)
        throw std::invalid_argument("Config: bad section header at line " +
                                    std::to_string(line_no));
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty())
        throw std::invalid_argument("Config: empty section name at line " +
                                    std::to_string(line_no));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos || section.empty())
      throw std::invalid_argument("Config: expected key = value at line " +
                                  std::to_string(line_no));
    const std::string key = trim(t.substr(0, eq));
    if (key.empty())
      throw std::invalid_argument("Config: empty key at line " +
                                  std::to_string(line_no));
    cfg.set(section, key, trim(t.substr(eq + 1)));
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void Config::save(const std::filesystem::path& path) const {
  if (!path.parent_path().empty())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path.string());
  out << serialize();
}

}  // namespace villi
