#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace aggdiff {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat "[section]" + "key = value" text; '#' starts a comment; repeated keys
// within a section are an error. Lookups remember line numbers so validation
// can point at the offending line.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text,
                             const std::string& name = "<string>");

  bool has(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  std::int64_t get_int(const std::string& section, const std::string& key,
                       std::int64_t fallback) const;
  // "a, b, c" lists
  std::vector<std::string> get_list(const std::string& section,
                                    const std::string& key) const;

  // error text prefixed with file:line of the key (or the file name when the
  // key is absent)
  [[noreturn]] void fail(const std::string& section, const std::string& key,
                         const std::string& message) const;

  std::vector<std::string> sections() const;
  std::vector<std::string> keys(const std::string& section) const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::string name_;
  std::map<std::string, std::map<std::string, Entry>> data_;
};

}  // namespace aggdiff
