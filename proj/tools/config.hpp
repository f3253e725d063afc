#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace laxkit::tools {

/// Line-oriented run configuration: `[section]` headers, `key = value` pairs,
/// `#` comments; expressions are double-quoted strings.
class RunConfig {
public:
    static RunConfig parse_file(const std::string& path);
    static RunConfig parse_text(const std::string& text);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double_or(const std::string& section, const std::string& key,
                         double fallback) const;
    long get_int(const std::string& section, const std::string& key) const;
    long get_int_or(const std::string& section, const std::string& key, long fallback) const;
    std::vector<double> get_list_or(const std::string& section, const std::string& key,
                                    std::vector<double> fallback) const;

    const std::string& raw_text() const { return raw_; }

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
    std::string raw_;
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace laxkit::tools
