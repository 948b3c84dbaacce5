#include "smv/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

namespace smv {

namespace {

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(const std::string& text)
{
    if (text.empty()) return std::nullopt;
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

}  // namespace

ConfigError::ConfigError(const std::string& source, std::size_t line, const std::string& message)
    : InvalidInput(line ? source + ":" + std::to_string(line) + ": " + message
                        : source + ": " + message),
      line_(line)
{
}

ConfigDoc ConfigDoc::parse(std::istream& is, const std::string& source)
{
    ConfigDoc doc;
    doc.source_ = source;
    std::string raw;
    std::string current;
    bool in_section = false;
    std::size_t line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                throw ConfigError(source, line_no, "malformed section header '" + line + "'");
            }
            current = trim(line.substr(1, line.size() - 2));
            if (doc.sections_.count(current)) {
                throw ConfigError(source, line_no, "duplicate section [" + current + "]");
            }
            doc.sections_[current].line = line_no;
            in_section = true;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(source, line_no, "expected 'key = value', got '" + line + "'");
        }
        if (!in_section) {
            throw ConfigError(source, line_no, "key outside of any [section]");
        }
        const std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (const auto hash = value.find(" #"); hash != std::string::npos) {
            value = trim(value.substr(0, hash));
        }
        if (key.empty()) {
            throw ConfigError(source, line_no, "empty key");
        }
        auto& entries = doc.sections_[current].entries;
        if (entries.count(key)) {
            throw ConfigError(source, line_no, "duplicate key '" + key + "' in [" + current + "]");
        }
        entries[key] = Entry{value, line_no, false};
    }
    return doc;
}

ConfigDoc ConfigDoc::load(const std::string& path)
{
    std::ifstream is(path);
    if (!is) {
        throw ConfigError(path, 0, "cannot open config file");
    }
    return parse(is, path);
}

bool ConfigDoc::has_section(const std::string& section) const
{
    return sections_.count(section) != 0;
}

bool ConfigDoc::has(const std::string& section, const std::string& key) const
{
    return find(section, key) != nullptr;
}

const ConfigDoc::Entry* ConfigDoc::find(const std::string& section, const std::string& key) const
{
    auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    auto e = s->second.entries.find(key);
    if (e == s->second.entries.end()) return nullptr;
    e->second.used = true;
    return &e->second;
}

void ConfigDoc::fail(const Entry& e, const std::string& message) const
{
    throw ConfigError(source_, e.line, message);
}

std::optional<std::string> ConfigDoc::get_string(const std::string& section,
                                                 const std::string& key) const
{
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    if (e->value.empty()) fail(*e, "empty value for '" + key + "'");
    return e->value;
}

std::optional<double> ConfigDoc::get_double(const std::string& section,
                                            const std::string& key) const
{
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    auto v = parse_number(e->value);
    if (!v) fail(*e, "'" + key + "' must be a finite number, got '" + e->value + "'");
    return v;
}

std::optional<std::size_t> ConfigDoc::get_count(const std::string& section,
                                                const std::string& key) const
{
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    const std::string& t = e->value;
    if (t.empty() || !std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        fail(*e, "'" + key + "' must be a non-negative integer, got '" + t + "'");
    }
    return static_cast<std::size_t>(std::stoull(t));
}

std::optional<std::vector<double>> ConfigDoc::get_list(const std::string& section,
                                                       const std::string& key) const
{
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    std::vector<double> out;
    std::stringstream ss(e->value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto v = parse_number(trim(item));
        if (!v) fail(*e, "'" + key + "' has a non-numeric item '" + trim(item) + "'");
        out.push_back(*v);
    }
    if (out.empty()) fail(*e, "'" + key + "' must list at least one value");
    return out;
}

void ConfigDoc::reject_unknown(const std::vector<std::string>& allowed_sections) const
{
    for (const auto& [name, section] : sections_) {
        if (std::find(allowed_sections.begin(), allowed_sections.end(), name) ==
            allowed_sections.end()) {
            throw ConfigError(source_, section.line, "unknown section [" + name + "]");
        }
        for (const auto& [key, entry] : section.entries) {
            if (!entry.used) {
                throw ConfigError(source_, entry.line,
                                  "unknown key '" + key + "' in [" + name + "]");
            }
        }
    }
}

}  // namespace smv
