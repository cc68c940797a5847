#include "igmtf/presets.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstring>
#include <filesystem>

namespace igmtf {

std::string dataset_basename(const std::string& path) {
    std::string name = std::filesystem::path(path).filename().string();
    for (const char* suffix : {".gz", ".txt", ".csv"}) {
        if (name.size() > std::strlen(suffix) && name.ends_with(suffix))
            name.resize(name.size() - std::strlen(suffix));
    }
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::replace(name.begin(), name.end(), '-', '_');
    return name;
}

std::optional<Preset> dataset_preset(const std::string& name, Index horizon) {
    struct Row {
        const char* dataset;
        Index hidden;
        double lr;
        std::array<Index, 4> k;      // horizons 3, 6, 12, 24
        std::array<Index, 4> top_n;
    };
    static constexpr Row rows[] = {
        {"traffic", 256, 1e-4, {30, 5, 10, 3}, {20, 30, 30, 10}},
        {"electricity", 512, 1e-4, {5, 3, 10, 5}, {20, 3, 5, 20}},
        {"exchange_rate", 512, 1e-4, {20, 5, 10, 5}, {20, 10, 10, 20}},
    };
    static constexpr std::array<Index, 4> horizons = {3, 6, 12, 24};

    const auto h_it = std::find(horizons.begin(), horizons.end(), horizon);
    if (h_it == horizons.end()) return std::nullopt;
    const std::size_t h_idx = static_cast<std::size_t>(h_it - horizons.begin());
    for (const Row& row : rows) {
        if (name == row.dataset)
            return Preset{row.hidden, row.lr, row.k[h_idx], row.top_n[h_idx]};
    }
    return std::nullopt;
}

}  // namespace igmtf
