#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "igmtf/presets.hpp"
#include "igmtf/report.hpp"
#include "igmtf/trainer.hpp"

namespace {

using namespace igmtf;

struct CliOptions {
    std::string data;
    Index horizon = 3;
    Index window = 168;
    Index hidden = 0;
    Index k = 0;
    Index neighbors = 0;
    double lr = 0.0;
    double lambda = 1e-4;
    Index epochs = 100;
    std::uint64_t seed = 1;
    std::string variant = "full";
    std::string normalize = "max";
    std::string out = "report.txt";
    std::vector<Index> sweep_k;
    std::vector<Index> sweep_n;
    std::string checkpoint;
    Index patience = 0;
    bool exclude_self = false;
    std::string dump_adjacency_path;

    bool hidden_given = false;
    bool k_given = false;
    bool neighbors_given = false;
    bool lr_given = false;
};

std::string resolve_data_path(const std::string& data) {
    namespace fs = std::filesystem;
    if (fs::exists(data)) return data;
    if (const char* root = std::getenv("IGMTF_DATA_DIR")) {
        for (const std::string candidate :
             {std::string(root) + "/" + data, std::string(root) + "/" + data + ".txt",
              std::string(root) + "/" + data + ".txt.gz"}) {
            if (fs::exists(candidate)) return candidate;
        }
    }
    throw ConfigError("dataset not found: " + data +
                      " (also searched IGMTF_DATA_DIR candidates)");
}

TrainConfig build_train_config(const CliOptions& opt) {
    const Preset preset =
        dataset_preset(dataset_basename(opt.data), opt.horizon).value_or(kDefaultPreset);
    TrainConfig cfg;
    cfg.window = opt.window;
    cfg.horizon = opt.horizon;
    cfg.hidden = opt.hidden_given ? opt.hidden : preset.hidden;
    cfg.k = opt.k_given ? opt.k : preset.k;
    cfg.top_n = opt.neighbors_given ? opt.neighbors : preset.top_n;
    cfg.lr = opt.lr_given ? opt.lr : preset.lr;
    cfg.lambda = opt.lambda;
    cfg.epochs = opt.epochs;
    cfg.seed = opt.seed;
    cfg.variant = parse_variant(opt.variant);
    cfg.norm = parse_norm_scheme(opt.normalize);
    cfg.patience = opt.patience;
    cfg.exclude_self = opt.exclude_self;
    cfg.validate();
    return cfg;
}

void maybe_dump_adjacency(const CliOptions& opt, const SeriesMatrix& series,
                          const TrainConfig& cfg, const ModelParams& params) {
    if (opt.dump_adjacency_path.empty()) return;
    const SplitSpec split =
        split_chronological(series.timestamps(), cfg.fractions, cfg.window, cfg.horizon);
    const Segment te = test_segment(split);
    const Index t = valid_timestamps(te, cfg.window, cfg.horizon).front();
    const InstanceBatch batch = make_batch(series, t, cfg.window, cfg.horizon);
    const EmbeddingBank bank = build_bank(series, train_segment(split), params.gru, params.mlp,
                                          cfg.window, cfg.horizon, -1);
    const Matrix emb = encode_batch_detached(batch.features, params.gru, params.mlp);
    const SampleSelection sel = select_top_k(bank, batch_mean(emb), cfg.k);
    const bool use_maps = cfg.variant != Variant::nw;
    const Adjacency adj =
        build_adjacency(emb, sel.embeddings, use_maps ? &params.maps : nullptr, cfg.top_n);
    dump_adjacency(opt.dump_adjacency_path, adj);
}

int run_single(const CliOptions& opt) {
    const TrainConfig cfg = build_train_config(opt);
    const std::string path = resolve_data_path(opt.data);
    const SeriesMatrix series = normalize(load_matrix(path), cfg.norm);

    const TrainResult result = train(series, cfg);
    write_report_file(opt.out, assemble_report(cfg, result.report, opt.data));
    if (!opt.checkpoint.empty()) save_checkpoint(opt.checkpoint, result.params);
    maybe_dump_adjacency(opt, series, cfg, result.params);

    std::cout << "rrse " << format_double(result.report.test_rrse) << "\n"
              << "corr " << format_double(result.report.test_corr) << "\n"
              << "report " << opt.out << "\n";
    return 0;
}

std::string cell_report_path(const std::string& out, Index k, Index n) {
    namespace fs = std::filesystem;
    fs::path p(out);
    const std::string stem = p.stem().string();
    const std::string ext = p.extension().string();
    fs::path dir = p.parent_path();
    const std::string name =
        stem + "_k" + std::to_string(k) + "_n" + std::to_string(n) + (ext.empty() ? ".txt" : ext);
    return (dir / name).string();
}

int run_sweep(const CliOptions& opt) {
    const TrainConfig base = build_train_config(opt);
    const std::string path = resolve_data_path(opt.data);
    const SeriesMatrix series = normalize(load_matrix(path), base.norm);

    std::vector<Index> ks = opt.sweep_k.empty() ? std::vector<Index>{base.k} : opt.sweep_k;
    std::vector<Index> ns = opt.sweep_n.empty() ? std::vector<Index>{base.top_n} : opt.sweep_n;

    struct Cell {
        Index k, n;
        double rrse = std::nan("");
        double corr = std::nan("");
        std::string error;
    };
    std::vector<Cell> cells;
    for (const Index k : ks)
        for (const Index n : ns) {
            Cell cell{k, n};
            TrainConfig cfg = base;
            cfg.k = k;
            cfg.top_n = n;
            try {
                cfg.validate();
                const TrainResult result = train(series, cfg);
                cell.rrse = result.report.test_rrse;
                cell.corr = result.report.test_corr;
                write_report_file(cell_report_path(opt.out, k, n),
                                  assemble_report(cfg, result.report, opt.data));
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
            std::cout << "sweep cell k=" << cell.k << " N=" << cell.n << " "
                      << (cell.error.empty() ? "rrse " + format_double(cell.rrse)
                                             : "failed: " + cell.error)
                      << std::endl;
            cells.push_back(std::move(cell));
        }

    std::stable_sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
        const bool a_ok = a.error.empty() && !std::isnan(a.rrse);
        const bool b_ok = b.error.empty() && !std::isnan(b.rrse);
        if (a_ok != b_ok) return a_ok;
        if (!a_ok) return false;
        return a.rrse < b.rrse;
    });

    std::ofstream summary(opt.out);
    if (!summary) throw Error("cannot open sweep summary for writing: " + opt.out);
    summary << "k\tN\trrse\tcorr\n";
    for (const Cell& c : cells) {
        if (c.error.empty())
            summary << c.k << "\t" << c.n << "\t" << format_double(c.rrse) << "\t"
                    << format_double(c.corr) << "\n";
        else
            summary << c.k << "\t" << c.n << "\tfailed\t" << c.error << "\n";
    }
    std::cout << "summary " << opt.out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Instance-wise graph forecaster for multivariate time series"};
    app.set_config("--config");

    CliOptions opt;
    app.add_option("--data", opt.data, "Dataset path or name under IGMTF_DATA_DIR")->required();
    app.add_option("--horizon", opt.horizon, "Forecast horizon h");
    app.add_option("--window", opt.window, "Input window length d");
    auto* hidden_opt = app.add_option("--hidden", opt.hidden, "Hidden units l (default: preset)");
    auto* k_opt = app.add_option("--k", opt.k, "Sampled training timestamps (default: preset)");
    auto* n_opt = app.add_option("--neighbors", opt.neighbors,
                                 "Top-N neighbors per instance (default: preset)");
    auto* lr_opt = app.add_option("--lr", opt.lr, "Learning rate (default: preset)");
    app.add_option("--lambda", opt.lambda, "L2 coefficient");
    app.add_option("--epochs", opt.epochs, "Training epochs");
    app.add_option("--seed", opt.seed, "Run seed");
    app.add_option("--variant", opt.variant, "Model variant: full|ns|nw");
    app.add_option("--normalize", opt.normalize, "Normalization: max|none");
    app.add_option("--out", opt.out, "Report (or sweep summary) output path");
    app.add_option("--sweep-k", opt.sweep_k, "k values for a grid sweep")->delimiter(',');
    app.add_option("--sweep-n", opt.sweep_n, "N values for a grid sweep")->delimiter(',');
    app.add_option("--checkpoint", opt.checkpoint, "Write best parameters to this path");
    app.add_option("--patience", opt.patience, "Early-stop patience on validation RRSE (0 = off)");
    app.add_flag("--exclude-self", opt.exclude_self,
                 "Exclude the batch's own timestamp from the sampler pool during training");
    app.add_option("--dump-adjacency", opt.dump_adjacency_path,
                   "Dump the first test batch's adjacency and mask to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    opt.hidden_given = hidden_opt->count() > 0;
    opt.k_given = k_opt->count() > 0;
    opt.neighbors_given = n_opt->count() > 0;
    opt.lr_given = lr_opt->count() > 0;

    try {
        const bool sweep = !opt.sweep_k.empty() || !opt.sweep_n.empty();
        return sweep ? run_sweep(opt) : run_single(opt);
    } catch (const igmtf::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
