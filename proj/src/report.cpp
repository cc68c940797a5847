#include "igmtf/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace igmtf {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void Report::set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : items_)
        if (k == key) {
            v = value;
            return;
        }
    items_.emplace_back(key, value);
}

void Report::set(const std::string& key, double value) { set(key, format_double(value)); }
void Report::set(const std::string& key, std::int64_t value) { set(key, std::to_string(value)); }
void Report::set(const std::string& key, std::uint64_t value) { set(key, std::to_string(value)); }

bool Report::has(const std::string& key) const {
    for (const auto& [k, v] : items_)
        if (k == key) return true;
    return false;
}

const std::string& Report::get(const std::string& key) const {
    for (const auto& [k, v] : items_)
        if (k == key) return v;
    throw Error("report: missing key '" + key + "'");
}

double Report::get_double(const std::string& key) const {
    const std::string& s = get(key);
    if (s == "nan") return std::nan("");
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw Error("report: key '" + key + "' is not a number: " + s);
    return v;
}

std::int64_t Report::get_int(const std::string& key) const {
    const std::string& s = get(key);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw Error("report: key '" + key + "' is not an integer: " + s);
    return v;
}

std::string Report::text() const {
    std::ostringstream out;
    out << "igmtf-report v1\n";
    for (const auto& [k, v] : items_) out << k << " " << v << "\n";
    return out.str();
}

Report Report::parse(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "igmtf-report v1")
        throw Error("report: bad header '" + line + "'");
    Report r;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::size_t space = line.find(' ');
        if (space == std::string::npos || space == 0)
            throw Error("report: malformed line " + std::to_string(line_no) + ": " + line);
        r.items_.emplace_back(line.substr(0, space), line.substr(space + 1));
    }
    return r;
}

void write_report_file(const std::string& path, const Report& report) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open report file for writing: " + path);
    out << report.text();
    if (!out) throw Error("failed writing report file: " + path);
}

Report read_report_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open report file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return Report::parse(buf.str());
}

}  // namespace igmtf
