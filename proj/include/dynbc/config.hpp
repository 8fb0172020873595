#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace dynbc {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// INI-style configuration: [section] headers, key = value lines, '#' or ';'
// comments. Keys are unique per section.
class ConfigFile {
  public:
    static ConfigFile parse(const std::string& text);

    bool has_section(const std::string& section) const;
    bool has(const std::string& section, const std::string& key) const;

    std::string get_string(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key) const;
    int get_int(const std::string& section, const std::string& key) const;
    bool get_bool(const std::string& section, const std::string& key) const;

    std::string get_string_or(const std::string& section, const std::string& key,
                              const std::string& fallback) const;
    double get_double_or(const std::string& section, const std::string& key,
                         double fallback) const;
    int get_int_or(const std::string& section, const std::string& key, int fallback) const;
    bool get_bool_or(const std::string& section, const std::string& key, bool fallback) const;

    std::optional<double> get_double_opt(const std::string& section,
                                         const std::string& key) const;

    const std::map<std::string, std::map<std::string, std::string>>& sections() const {
        return sections_;
    }

  private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

} // namespace dynbc
