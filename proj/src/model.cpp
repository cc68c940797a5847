#include "igmtf/model.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "igmtf/rng.hpp"

namespace igmtf {

Variant parse_variant(const std::string& s) {
    if (s == "full") return Variant::full;
    if (s == "ns") return Variant::ns;
    if (s == "nw") return Variant::nw;
    throw ConfigError("unknown variant '" + s + "' (expected full|ns|nw)");
}

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::full: return "full";
        case Variant::ns: return "ns";
        case Variant::nw: return "nw";
    }
    return "?";
}

HeadParams HeadParams::init(Index hidden, std::mt19937_64& rng) {
    HeadParams p;
    p.weight = init_weight(2 * hidden, 1, 2 * hidden, rng);
    p.bias = Matrix(1, 1);
    return p;
}

ModelParams ModelParams::init(Index hidden, std::uint64_t seed) {
    if (hidden < 1) throw ConfigError("hidden size must be >= 1");
    std::mt19937_64 rng = make_rng(seed, rng_tag::init);
    ModelParams p;
    p.hidden = hidden;
    p.gru = GruParams::init(hidden, rng);
    p.mlp = MlpParams::init(hidden, rng);
    p.maps = MappingParams::init(hidden, rng);
    p.head = HeadParams::init(hidden, rng);
    return p;
}

std::vector<ParamEntry> ModelParams::entries(bool include_maps) {
    std::vector<ParamEntry> e = {
        {"gru.w_r", &gru.w_r}, {"gru.w_z", &gru.w_z}, {"gru.w_c", &gru.w_c},
        {"gru.u_r", &gru.u_r}, {"gru.u_z", &gru.u_z}, {"gru.u_c", &gru.u_c},
        {"gru.b_r", &gru.b_r}, {"gru.b_z", &gru.b_z}, {"gru.b_c", &gru.b_c},
    };
    for (std::size_t i = 0; i < 3; ++i) {
        e.push_back({"mlp.w" + std::to_string(i), &mlp.weights[i]});
        e.push_back({"mlp.b" + std::to_string(i), &mlp.biases[i]});
    }
    if (include_maps) {
        e.push_back({"maps.map_h", &maps.map_h});
        e.push_back({"maps.map_e", &maps.map_e});
    }
    e.push_back({"head.weight", &head.weight});
    e.push_back({"head.bias", &head.bias});
    return e;
}

std::vector<ParamEntry> ModelParams::entries(bool include_maps) const {
    return const_cast<ModelParams*>(this)->entries(include_maps);
}

void save_checkpoint(const std::string& path, const ModelParams& params) {
    std::ofstream out(path);
    if (!out) throw Error("save_checkpoint: cannot open " + path);
    out << "igmtf-checkpoint v1\n";
    out << "hidden " << params.hidden << "\n";
    out.precision(17);
    for (const ParamEntry& e : params.entries(true)) {
        out << "matrix " << e.name << " " << e.matrix->rows() << " " << e.matrix->cols() << "\n";
        for (Index i = 0; i < e.matrix->rows(); ++i) {
            for (Index j = 0; j < e.matrix->cols(); ++j)
                out << (*e.matrix)(i, j) << (j + 1 < e.matrix->cols() ? ' ' : '\n');
        }
    }
    if (!out) throw Error("save_checkpoint: write failed for " + path);
}

ModelParams load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("load_checkpoint: cannot open " + path);
    std::string header;
    std::getline(in, header);
    if (header != "igmtf-checkpoint v1")
        throw Error("load_checkpoint: unsupported header '" + header + "' in " + path);
    std::string key;
    Index hidden = 0;
    in >> key >> hidden;
    if (key != "hidden" || hidden < 1) throw Error("load_checkpoint: bad hidden line in " + path);

    ModelParams params;
    params.hidden = hidden;
    std::vector<ParamEntry> entries = params.entries(true);
    for (ParamEntry& e : entries) {
        std::string tag, name;
        Index rows = 0, cols = 0;
        if (!(in >> tag >> name >> rows >> cols) || tag != "matrix" || name != e.name)
            throw Error("load_checkpoint: expected matrix " + e.name + " in " + path);
        Matrix m(rows, cols);
        for (Index i = 0; i < m.size(); ++i)
            if (!(in >> m.data()[i]))
                throw Error("load_checkpoint: truncated values for " + e.name + " in " + path);
        *e.matrix = std::move(m);
    }
    return params;
}

}  // namespace igmtf
