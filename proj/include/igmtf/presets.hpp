#pragma once

#include <optional>
#include <string>

#include "igmtf/matrix.hpp"

namespace igmtf {

/// Tuned hyper-parameters for the standard benchmark datasets, per horizon.
struct Preset {
    Index hidden;
    double lr;
    Index k;
    Index top_n;
};

/// Grid midpoints used when the dataset is not recognized.
inline constexpr Preset kDefaultPreset{256, 1e-4, 10, 10};

/// Lowercased file stem: directories and .txt/.gz suffixes stripped.
std::string dataset_basename(const std::string& path);

/// Preset for a known dataset name (traffic, electricity, exchange_rate) and
/// horizon in {3, 6, 12, 24}; nullopt otherwise.
std::optional<Preset> dataset_preset(const std::string& name, Index horizon);

}  // namespace igmtf
