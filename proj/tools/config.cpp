#include "config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace laxkit::tools {

namespace {

std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

/// Remove a trailing comment that is not inside double quotes.
std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') quoted = !quoted;
        else if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

}  // namespace

RunConfig RunConfig::parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str());
}

RunConfig RunConfig::parse_text(const std::string& text) {
    RunConfig cfg;
    cfg.raw_ = text;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
            section = strip(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
            cfg.sections_[section];
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = strip(line.substr(0, eq));
        std::string value = strip(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        if (section.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": key outside any [section]");
        cfg.sections_[section][key] = value;
    }
    return cfg;
}

bool RunConfig::has(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string RunConfig::get(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    if (s == sections_.end() || !s->second.count(key))
        throw ConfigError("missing config key [" + section + "] " + key);
    return s->second.at(key);
}

std::string RunConfig::get_or(const std::string& section, const std::string& key,
                              const std::string& fallback) const {
    return has(section, key) ? get(section, key) : fallback;
}

double RunConfig::get_double(const std::string& section, const std::string& key) const {
    const std::string v = get(section, key);
    try {
        size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config key [" + section + "] " + key + " is not a number: " + v);
    }
}

double RunConfig::get_double_or(const std::string& section, const std::string& key,
                                double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

long RunConfig::get_int(const std::string& section, const std::string& key) const {
    const std::string v = get(section, key);
    try {
        size_t used = 0;
        const long n = std::stol(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return n;
    } catch (const std::exception&) {
        throw ConfigError("config key [" + section + "] " + key + " is not an integer: " + v);
    }
}

long RunConfig::get_int_or(const std::string& section, const std::string& key,
                           long fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
}

std::vector<double> RunConfig::get_list_or(const std::string& section, const std::string& key,
                                           std::vector<double> fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get(section, key);
    std::vector<double> out;
    std::istringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = strip(item);
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError("config key [" + section + "] " + key + ": bad list entry " + item);
        }
    }
    return out;
}

}  // namespace laxkit::tools
