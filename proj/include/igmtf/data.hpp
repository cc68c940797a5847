#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "igmtf/matrix.hpp"

namespace igmtf {

enum class NormScheme { max, none };

NormScheme parse_norm_scheme(const std::string& s);
const char* norm_scheme_name(NormScheme s);

/// T×n observation matrix, rows in chronological order, one column per
/// variable. scalers[i] is the factor column i was divided by (all 1 before
/// normalization or under scheme "none").
struct SeriesMatrix {
    Matrix values;
    std::vector<double> scalers;

    Index timestamps() const { return values.rows(); }
    Index variables() const { return values.cols(); }
};

/// Chronological split boundaries: train = [0, train_end), valid =
/// [train_end, valid_end), test = [valid_end, total).
struct SplitSpec {
    Index train_end = 0;
    Index valid_end = 0;
    Index total = 0;
};

struct Segment {
    Index begin = 0;
    Index end = 0;

    Index length() const { return end - begin; }
};

/// All n instances of one timestamp t.
///
/// Window convention: the feature of variable i is the d observations ending
/// at t, rows t−d+1 .. t of the series, oldest first, so the last feature
/// entry is values[t, i]. The label is values[t+h, i]. A window may reach
/// back across a split's left boundary into earlier data (rolling-forecast
/// convention); only the label index is confined to the split.
struct InstanceBatch {
    Index timestamp = 0;
    Matrix features;  // n×d
    Matrix labels;    // n×1
    Index window = 0;
    Index horizon = 0;
};

/// Reads a plain or gzip-compressed (detected by magic bytes) text file: one
/// timestamp per line, comma-separated decimal values. Scalers come back as
/// all ones.
SeriesMatrix load_matrix(const std::string& path);

SeriesMatrix normalize(const SeriesMatrix& raw, NormScheme scheme);
Matrix denormalize(const Matrix& values_by_variable_rows, const std::vector<double>& scalers);

SplitSpec split_chronological(Index total, std::array<double, 3> fractions, Index window,
                              Index horizon);

Segment train_segment(const SplitSpec& s);
Segment valid_segment(const SplitSpec& s);
Segment test_segment(const SplitSpec& s);

/// Timestamps t in the segment with a full window (t ≥ d−1) and an in-segment
/// label (t+h < segment end), in chronological order. Throws if none exist.
std::vector<Index> valid_timestamps(const Segment& seg, Index window, Index horizon);

InstanceBatch make_batch(const SeriesMatrix& series, Index t, Index window, Index horizon);

}  // namespace igmtf
