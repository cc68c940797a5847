#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "igmtf/matrix.hpp"

namespace igmtf {

/// Flat ordered key-value document, one `key value` line each. Doubles are
/// written with 17 significant digits so every field parses back bitwise.
class Report {
public:
    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, double value);
    void set(const std::string& key, std::int64_t value);
    void set(const std::string& key, std::uint64_t value);

    bool has(const std::string& key) const;
    const std::string& get(const std::string& key) const;
    double get_double(const std::string& key) const;
    std::int64_t get_int(const std::string& key) const;

    const std::vector<std::pair<std::string, std::string>>& items() const { return items_; }

    std::string text() const;
    static Report parse(const std::string& text);

private:
    std::vector<std::pair<std::string, std::string>> items_;
};

std::string format_double(double v);

void write_report_file(const std::string& path, const Report& report);
Report read_report_file(const std::string& path);

}  // namespace igmtf
