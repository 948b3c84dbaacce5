#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "smv/error.hpp"

namespace smv {

/// Config-file error carrying the offending file and line (0 when not line-specific).
class ConfigError : public InvalidInput {
public:
    ConfigError(const std::string& source, std::size_t line, const std::string& message);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/**
 * Flat sectioned key-value document:
 *
 *     # comment
 *     [section]
 *     key = value
 *     list = 1e-1, 1e-2, 1e-3
 *
 * Keys are unique within a section; blank lines and `#`/`;` comments are
 * ignored. Lookups record which keys were consumed so unknown keys can be
 * reported with their line numbers.
 */
class ConfigDoc {
public:
    static ConfigDoc parse(std::istream& is, const std::string& source = "<config>");
    static ConfigDoc load(const std::string& path);

    bool has_section(const std::string& section) const;
    bool has(const std::string& section, const std::string& key) const;

    std::optional<std::string> get_string(const std::string& section, const std::string& key) const;
    std::optional<double> get_double(const std::string& section, const std::string& key) const;
    std::optional<std::size_t> get_count(const std::string& section, const std::string& key) const;
    std::optional<std::vector<double>> get_list(const std::string& section,
                                                const std::string& key) const;

    /// Throws ConfigError for the first section or key that no lookup has touched
    /// and that is not in `allowed_sections`.
    void reject_unknown(const std::vector<std::string>& allowed_sections) const;

    const std::string& source() const { return source_; }

private:
    struct Entry {
        std::string value;
        std::size_t line = 0;
        mutable bool used = false;
    };
    struct Section {
        std::size_t line = 0;
        std::map<std::string, Entry> entries;
    };

    const Entry* find(const std::string& section, const std::string& key) const;
    [[noreturn]] void fail(const Entry& e, const std::string& message) const;

    std::string source_;
    std::map<std::string, Section> sections_;
};

}  // namespace smv
