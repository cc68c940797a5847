#include "igmtf/data.hpp"

#include <zlib.h>

#include <charconv>
#include <cmath>
#include <cstring>
#include <string_view>

namespace igmtf {

NormScheme parse_norm_scheme(const std::string& s) {
    if (s == "max") return NormScheme::max;
    if (s == "none") return NormScheme::none;
    throw ConfigError("unknown normalization scheme '" + s + "' (expected max|none)");
}

const char* norm_scheme_name(NormScheme s) {
    return s == NormScheme::max ? "max" : "none";
}

namespace {

// gzread passes uncompressed bytes through untouched, so one reader covers
// both plain text and .gz.
std::string read_file_maybe_gzip(const std::string& path) {
    gzFile f = gzopen(path.c_str(), "rb");
    if (f == nullptr) throw ConfigError("cannot open dataset file: " + path);
    std::string content;
    char buf[1 << 16];
    int got;
    while ((got = gzread(f, buf, sizeof(buf))) > 0) content.append(buf, static_cast<size_t>(got));
    const bool read_error = got < 0;
    gzclose(f);
    if (read_error) throw ConfigError("error while reading dataset file: " + path);
    return content;
}

double parse_field(std::string_view field, const std::string& path, Index line_no) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw ConfigError(path + ":" + std::to_string(line_no) + ": unparsable value '" +
                          std::string(field) + "'");
    if (!std::isfinite(v))
        throw ConfigError(path + ":" + std::to_string(line_no) + ": non-finite value");
    return v;
}

}  // namespace

SeriesMatrix load_matrix(const std::string& path) {
    const std::string content = read_file_maybe_gzip(path);

    std::vector<double> data;
    Index cols = -1;
    Index rows = 0;
    std::size_t pos = 0;
    Index line_no = 0;
    while (pos < content.size()) {
        std::size_t eol = content.find('\n', pos);
        if (eol == std::string::npos) eol = content.size();
        std::string_view line(content.data() + pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;

        Index fields = 0;
        std::size_t start = 0;
        while (true) {
            std::size_t comma = line.find(',', start);
            std::string_view field =
                comma == std::string_view::npos ? line.substr(start) : line.substr(start, comma - start);
            data.push_back(parse_field(field, path, line_no));
            ++fields;
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (cols == -1) {
            cols = fields;
        } else if (fields != cols) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": ragged row, expected " +
                              std::to_string(cols) + " fields, got " + std::to_string(fields));
        }
        ++rows;
    }
    if (rows == 0) throw ConfigError(path + ": empty dataset file");

    SeriesMatrix out;
    out.values = Matrix(rows, cols, std::move(data));
    out.scalers.assign(static_cast<std::size_t>(cols), 1.0);
    return out;
}

SeriesMatrix normalize(const SeriesMatrix& raw, NormScheme scheme) {
    SeriesMatrix out;
    out.values = raw.values;
    out.scalers.assign(static_cast<std::size_t>(raw.variables()), 1.0);
    if (scheme == NormScheme::none) return out;

    for (Index j = 0; j < raw.variables(); ++j) {
        double max_abs = 0.0;
        for (Index t = 0; t < raw.timestamps(); ++t)
            max_abs = std::max(max_abs, std::abs(raw.values(t, j)));
        if (max_abs == 0.0)
            throw Error("normalize: column " + std::to_string(j) +
                        " is all zeros, cannot scale by max");
        out.scalers[static_cast<std::size_t>(j)] = max_abs;
        for (Index t = 0; t < raw.timestamps(); ++t) out.values(t, j) /= max_abs;
    }
    return out;
}

Matrix denormalize(const Matrix& values_by_variable_rows, const std::vector<double>& scalers) {
    if (static_cast<std::size_t>(values_by_variable_rows.rows()) != scalers.size())
        throw Error("denormalize: row count does not match scaler count");
    Matrix out = values_by_variable_rows;
    for (Index i = 0; i < out.rows(); ++i)
        for (Index j = 0; j < out.cols(); ++j) out(i, j) *= scalers[static_cast<std::size_t>(i)];
    return out;
}

SplitSpec split_chronological(Index total, std::array<double, 3> fractions, Index window,
                              Index horizon) {
    const double sum = fractions[0] + fractions[1] + fractions[2];
    if (std::abs(sum - 1.0) > 1e-9)
        throw ConfigError("split fractions must sum to 1, got " + std::to_string(sum));
    SplitSpec s;
    s.total = total;
    s.train_end = static_cast<Index>(std::floor(fractions[0] * static_cast<double>(total)));
    s.valid_end =
        static_cast<Index>(std::floor((fractions[0] + fractions[1]) * static_cast<double>(total)));

    const Index min_len = window + horizon;
    const std::array<std::pair<const char*, Index>, 3> lens = {
        std::pair{"train", s.train_end},
        std::pair{"valid", s.valid_end - s.train_end},
        std::pair{"test", s.total - s.valid_end}};
    for (const auto& [name, len] : lens)
        if (len < min_len)
            throw ConfigError(std::string("split: ") + name + " segment has " +
                              std::to_string(len) + " timestamps, need at least d+h = " +
                              std::to_string(min_len));
    return s;
}

Segment train_segment(const SplitSpec& s) { return {0, s.train_end}; }
Segment valid_segment(const SplitSpec& s) { return {s.train_end, s.valid_end}; }
Segment test_segment(const SplitSpec& s) { return {s.valid_end, s.total}; }

std::vector<Index> valid_timestamps(const Segment& seg, Index window, Index horizon) {
    if (window < 1 || horizon < 1) throw ConfigError("window and horizon must be >= 1");
    const Index first = std::max(seg.begin, window - 1);
    const Index last = seg.end - 1 - horizon;
    std::vector<Index> out;
    for (Index t = first; t <= last; ++t) out.push_back(t);
    if (out.empty())
        throw Error("segment [" + std::to_string(seg.begin) + "," + std::to_string(seg.end) +
                    ") has no valid timestamps for d=" + std::to_string(window) +
                    ", h=" + std::to_string(horizon));
    return out;
}

InstanceBatch make_batch(const SeriesMatrix& series, Index t, Index window, Index horizon) {
    const Index n = series.variables();
    if (t - window + 1 < 0 || t + horizon >= series.timestamps())
        throw Error("make_batch: timestamp " + std::to_string(t) + " out of range");
    InstanceBatch b;
    b.timestamp = t;
    b.window = window;
    b.horizon = horizon;
    b.features = Matrix(n, window);
    b.labels = Matrix(n, 1);
    for (Index i = 0; i < n; ++i) {
        for (Index s = 0; s < window; ++s) b.features(i, s) = series.values(t - window + 1 + s, i);
        b.labels(i, 0) = series.values(t + horizon, i);
    }
    return b;
}

}  // namespace igmtf
