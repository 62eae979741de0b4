// ipsae — command-line front end for the IP-SAE pipeline.
//
// Subcommands: gen-data, fit, eval, sweep, denoise.
// Exit codes: 0 success, 2 usage/config error, 3 I/O error, 4 numeric failure.

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ipsae/data.hpp"
#include "ipsae/eval.hpp"
#include "ipsae/model.hpp"
#include "ipsae/report_io.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace ipsae;

namespace {

enum class LogLevel { kError = 0, kInfo = 1, kDebug = 2 };

LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("IPSAE_LOG");
        if (env == nullptr) return LogLevel::kError;
        const std::string v(env);
        if (v == "debug") return LogLevel::kDebug;
        if (v == "info") return LogLevel::kInfo;
        return LogLevel::kError;
    }();
    return level;
}

void log_info(const std::string& msg) {
    if (log_level() >= LogLevel::kInfo) std::cerr << "ipsae: " << msg << "\n";
}

void log_debug(const std::string& msg) {
    if (log_level() >= LogLevel::kDebug) std::cerr << "ipsae: " << msg << "\n";
}

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumeric = 4;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::map<std::string, std::string> parse_kv_pairs(const std::string& text, char sep) {
    std::map<std::string, std::string> out;
    std::string item;
    std::stringstream ss(text);
    while (std::getline(ss, item, sep)) {
        if (item.empty() || item[0] == '#') continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw UsageError("expected key=value, got '" + item + "'");
        }
        std::string key = item.substr(0, eq);
        std::string value = item.substr(eq + 1);
        const auto trim = [](std::string& s) {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
                s.pop_back();
            }
        };
        trim(key);
        trim(value);
        out[key] = value;
    }
    return out;
}

SyntheticConfig parse_synthetic(const std::string& spec) {
    SyntheticConfig cfg;
    for (const auto& [key, value] : parse_kv_pairs(spec, ',')) {
        try {
            if (key == "d") cfg.d = std::stoul(value);
            else if (key == "k") cfg.k = std::stoul(value);
            else if (key == "n_per_class") cfg.n_per_class = std::stoul(value);
            else if (key == "c_seen") cfg.c_seen = std::stoul(value);
            else if (key == "c_unseen") cfg.c_unseen = std::stoul(value);
            else if (key == "noise_sigma") cfg.noise_sigma = std::stod(value);
            else if (key == "attribute_density") cfg.attribute_density = std::stod(value);
            else if (key == "seed") cfg.seed = std::stoull(value);
            else throw UsageError("unknown synthetic key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw UsageError("bad value for synthetic key '" + key + "': " + value);
        }
    }
    return cfg;
}

std::vector<double> parse_grid(const std::string& grid) {
    std::vector<double> out;
    std::string item;
    std::stringstream ss(grid);
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::invalid_argument&) {
            throw UsageError("bad grid value '" + item + "'");
        }
    }
    if (out.empty()) {
        throw UsageError("empty lambda grid");
    }
    return out;
}

struct DataSource {
    std::string dataset_dir;
    std::string synthetic_spec;

    ZslDataset load() const {
        const bool have_dir = !dataset_dir.empty();
        const bool have_synth = !synthetic_spec.empty();
        if (have_dir == have_synth) {
            throw UsageError("exactly one of --dataset / --synthetic is required");
        }
        if (have_dir) {
            log_info("loading dataset from " + dataset_dir);
            return load_dataset(dataset_dir);
        }
        log_info("generating synthetic dataset: " + synthetic_spec);
        return generate_synthetic(parse_synthetic(synthetic_spec));
    }
};

SpaceMode parse_space(const std::string& s) {
    if (s == "enriched") return SpaceMode::kEnriched;
    if (s == "original") return SpaceMode::kOriginal;
    throw UsageError("bad --space value '" + s + "'");
}

ClassifyMode parse_mode(const std::string& s) {
    if (s == "oracle") return ClassifyMode::kOracleEnriched;
    if (s == "candidate") return ClassifyMode::kCandidateConditioned;
    if (s == "visual") return ClassifyMode::kVisualSlice;
    throw UsageError("bad --mode value '" + s + "'");
}

void write_text(const fs::path& file, const std::string& content) {
    std::ofstream out(file);
    if (!out) {
        throw IoError("cannot write " + file.string());
    }
    out << content;
    if (!out) {
        throw IoError("write failed for " + file.string());
    }
}

std::vector<std::size_t> training_indices(const ZslDataset& ds, const std::string& protocol,
                                          double seen_fraction, std::uint64_t seed) {
    if (protocol == "zsl") {
        return seen_sample_indices(ds);
    }
    if (protocol == "gzsl") {
        return split_gzsl(ds, seen_fraction, seed).train_indices;
    }
    throw UsageError("bad --protocol value '" + protocol + "'");
}

int cmd_gen_data(const std::string& synthetic_spec, const std::string& out_dir) {
    const SyntheticConfig cfg = parse_synthetic(synthetic_spec);
    const ZslDataset ds = generate_synthetic(cfg);
    save_dataset(ds, out_dir);
    std::printf("d=%zu k=%zu C=%zu n=%zu seen=%zu unseen=%zu out=%s\n", ds.visual_dim(),
                ds.semantic_dim(), ds.class_count(), ds.sample_count(), ds.seen_classes.size(),
                ds.unseen_classes.size(), out_dir.c_str());
    return 0;
}

int cmd_fit(const DataSource& source, double lambda, const std::string& space,
            const std::string& protocol, double seen_fraction, std::uint64_t seed,
            const std::string& out_path) {
    if (!(lambda > 0.0)) {
        throw UsageError("--lambda must be > 0");
    }
    const ZslDataset ds = source.load();
    const auto train = training_indices(ds, protocol, seen_fraction, seed);
    log_debug("fitting on " + std::to_string(train.size()) + " samples");
    const IpSaeModel model = fit(ds, train, lambda, parse_space(space));
    save_model(model, out_path);

    nlohmann::json diag = {
        {"lambda", model.lambda},
        {"space", space},
        {"protocol", protocol},
        {"d", model.visual_dim},
        {"k", model.semantic_dim},
        {"m", model.input_dim()},
        {"train_samples", train.size()},
        {"nullified_modes", model.nullified_modes},
        {"residual", model.residual},
    };
    write_text(out_path + ".json", diag.dump(2) + "\n");
    std::printf("model=%s nullified_modes=%zu residual=%.6g\n", out_path.c_str(),
                model.nullified_modes, model.residual);
    return 0;
}

int cmd_eval(const DataSource& source, const std::string& model_path, const std::string& protocol,
             const std::string& mode_name, double seen_fraction, std::uint64_t seed,
             const std::string& out_path) {
    const ZslDataset ds = source.load();
    const IpSaeModel model = load_model(model_path);
    const ClassifyMode mode = parse_mode(mode_name);

    ReportDiagnostics diag;
    diag.nullified_modes = model.nullified_modes;
    diag.residual = model.residual;
    {
        const auto train = training_indices(ds, protocol, seen_fraction, seed);
        const Matrix s_train = sample_attributes_for(ds, train);
        diag.hubness_bound = hubness_bound(s_train, model.lambda).bound;
    }

    std::string json_doc;
    std::string confusion;
    std::string last_line;
    if (protocol == "zsl") {
        const ZslReport report = run_zsl(model, ds, mode);
        json_doc = zsl_report_json(report, mode_name, model.lambda, diag);
        confusion = confusion_csv(report.confusion);
        char buf[64];
        std::snprintf(buf, sizeof(buf), "mean_per_class_accuracy=%.4f",
                      report.mean_per_class_accuracy);
        last_line = buf;
    } else if (protocol == "gzsl") {
        const GzslSplit split = split_gzsl(ds, seen_fraction, seed);
        const GzslReport report = run_gzsl(model, ds, split, mode);
        json_doc = gzsl_report_json(report, mode_name, model.lambda, diag);
        confusion = confusion_csv(report.unseen_report.confusion);
        char buf[128];
        std::snprintf(buf, sizeof(buf),
                      "acc_seen=%.4f acc_unseen=%.4f harmonic_mean=%.4f", report.acc_seen,
                      report.acc_unseen, report.harmonic_mean);
        last_line = buf;
    } else {
        throw UsageError("bad --protocol value '" + protocol + "'");
    }

    if (!out_path.empty()) {
        write_text(out_path, json_doc + "\n");
        write_text(out_path + ".confusion.csv", confusion);
        log_info("report written to " + out_path);
    }
    std::printf("%s\n", last_line.c_str());
    return 0;
}

int cmd_sweep(const DataSource& source, const std::string& grid_spec, const std::string& space,
              const std::string& mode_name, const std::string& out_path) {
    const ZslDataset ds = source.load();
    const std::vector<double> grid = parse_grid(grid_spec);
    const auto train = seen_sample_indices(ds);
    const auto points = lambda_sweep(ds, train, grid, parse_mode(mode_name), parse_space(space));
    const std::string csv = sweep_csv(points);
    if (!out_path.empty()) {
        write_text(out_path, csv);
    } else {
        std::fputs(csv.c_str(), stdout);
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "best_accuracy=%.4f",
                  std::max_element(points.begin(), points.end(),
                                   [](const SweepPoint& a, const SweepPoint& b) {
                                       return a.mean_per_class_accuracy <
                                              b.mean_per_class_accuracy;
                                   })
                      ->mean_per_class_accuracy);
    std::printf("%s\n", buf);
    return 0;
}

int cmd_denoise(const std::string& raw_path, const std::string& labels_path, double threshold,
                const std::string& out_dir) {
    const fs::path raw(raw_path);
    const Matrix raw_attrs =
        raw.extension() == ".bin" ? read_matrix_bin(raw) : read_matrix_csv(raw);
    const std::vector<int> labels = read_labels_csv(labels_path);
    const auto [class_attrs, kept] = denoise_attributes(raw_attrs, labels, threshold);

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw IoError("cannot create directory " + out_dir);
    }
    write_matrix_csv(class_attrs, fs::path(out_dir) / "attributes.csv");
    std::ostringstream kept_csv;
    for (std::size_t idx : kept) {
        kept_csv << idx << "\n";
    }
    write_text(fs::path(out_dir) / "kept.csv", kept_csv.str());
    std::printf("attributes=%zu classes=%zu kept=%zu\n", class_attrs.rows(), class_attrs.cols(),
                kept.size());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"IP-SAE zero-shot learning pipeline"};
    app.require_subcommand(1);

    // Shared options, seeded from an optional flat key=value config file.
    std::string config_file;
    std::string dataset_dir;
    std::string synthetic_spec;
    std::string model_path;
    std::string out_path;
    std::string space = "enriched";
    std::string mode = "candidate";
    std::string protocol = "zsl";
    std::string grid_spec;
    std::string raw_path;
    std::string labels_path;
    double lambda = 1.0;
    double seen_fraction = 0.2;
    double threshold = 0.5;
    std::uint64_t seed = 42;

    // Pre-scan for --config so file values become defaults that flags override.
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            config_file = argv[i + 1];
        }
    }
    if (!config_file.empty()) {
        std::ifstream in(config_file);
        if (!in) {
            std::cerr << "ipsae: cannot open config " << config_file << "\n";
            return kExitIo;
        }
        std::stringstream buffer;
        buffer << in.rdbuf();
        try {
            for (const auto& [key, value] : parse_kv_pairs(buffer.str(), '\n')) {
                if (key == "dataset") dataset_dir = value;
                else if (key == "synthetic") synthetic_spec = value;
                else if (key == "model") model_path = value;
                else if (key == "out") out_path = value;
                else if (key == "space") space = value;
                else if (key == "mode") mode = value;
                else if (key == "protocol") protocol = value;
                else if (key == "grid") grid_spec = value;
                else if (key == "lambda") lambda = std::stod(value);
                else if (key == "seen_fraction") seen_fraction = std::stod(value);
                else if (key == "threshold") threshold = std::stod(value);
                else if (key == "seed") seed = std::stoull(value);
                else {
                    std::cerr << "ipsae: unknown config key '" << key << "'\n";
                    return kExitConfig;
                }
            }
        } catch (const std::exception& e) {
            std::cerr << "ipsae: bad config: " << e.what() << "\n";
            return kExitConfig;
        }
    }

    const auto add_common = [&](CLI::App* cmd, bool needs_data) {
        cmd->add_option("--config", config_file, "flat key=value config file");
        if (needs_data) {
            cmd->add_option("--dataset", dataset_dir, "dataset directory");
            cmd->add_option("--synthetic", synthetic_spec,
                            "synthetic config, e.g. d=32,k=12,seed=42");
        }
        cmd->add_option("--seed", seed, "RNG seed");
        cmd->add_option("--out", out_path, "output path");
    };

    auto* gen = app.add_subcommand("gen-data", "generate a synthetic dataset directory");
    add_common(gen, false);
    gen->add_option("--synthetic", synthetic_spec, "synthetic config, e.g. d=32,k=12,seed=42");

    auto* fit_cmd = app.add_subcommand("fit", "fit the transformation matrix");
    add_common(fit_cmd, true);
    fit_cmd->add_option("--lambda", lambda, "regularization weight (> 0)");
    fit_cmd->add_option("--space", space, "enriched|original");
    fit_cmd->add_option("--protocol", protocol, "zsl|gzsl (selects the training set)");
    fit_cmd->add_option("--seen-fraction", seen_fraction, "GZSL seen holdout fraction");

    auto* eval_cmd = app.add_subcommand("eval", "evaluate a fitted model");
    add_common(eval_cmd, true);
    eval_cmd->add_option("--model", model_path, "model.bin path")->required();
    eval_cmd->add_option("--protocol", protocol, "zsl|gzsl");
    eval_cmd->add_option("--mode", mode, "oracle|candidate|visual");
    eval_cmd->add_option("--seen-fraction", seen_fraction, "GZSL seen holdout fraction");

    auto* sweep_cmd = app.add_subcommand("sweep", "lambda sweep over the ZSL protocol");
    add_common(sweep_cmd, true);
    sweep_cmd->add_option("--grid", grid_spec, "comma-separated lambdas")->required();
    sweep_cmd->add_option("--space", space, "enriched|original");
    sweep_cmd->add_option("--mode", mode, "oracle|candidate|visual");

    auto* denoise_cmd = app.add_subcommand("denoise", "binarize per-image attributes per class");
    add_common(denoise_cmd, false);
    denoise_cmd->add_option("--raw", raw_path, "per-image attribute matrix (csv/bin)")->required();
    denoise_cmd->add_option("--labels", labels_path, "labels.csv")->required();
    denoise_cmd->add_option("--threshold", threshold, "presence threshold in (0, 1]");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    const DataSource source{dataset_dir, synthetic_spec};
    try {
        if (gen->parsed()) {
            if (out_path.empty()) throw UsageError("gen-data requires --out DIR");
            return cmd_gen_data(synthetic_spec, out_path);
        }
        if (fit_cmd->parsed()) {
            if (out_path.empty()) throw UsageError("fit requires --out MODEL_PATH");
            return cmd_fit(source, lambda, space, protocol, seen_fraction, seed, out_path);
        }
        if (eval_cmd->parsed()) {
            return cmd_eval(source, model_path, protocol, mode, seen_fraction, seed, out_path);
        }
        if (sweep_cmd->parsed()) {
            return cmd_sweep(source, grid_spec, space, mode, out_path);
        }
        if (denoise_cmd->parsed()) {
            if (out_path.empty()) throw UsageError("denoise requires --out DIR");
            return cmd_denoise(raw_path, labels_path, threshold, out_path);
        }
    } catch (const UsageError& e) {
        std::cerr << "ipsae: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DimensionMismatch& e) {
        std::cerr << "ipsae: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InvariantViolation& e) {
        std::cerr << "ipsae: " << e.what() << "\n";
        return kExitConfig;
    } catch (const BadThreshold& e) {
        std::cerr << "ipsae: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InfeasibleConfig& e) {
        std::cerr << "ipsae: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NonPositiveLambda& e) {
        std::cerr << "ipsae: " << e.what() << "\n";
        return kExitConfig;
    } catch (const MissingFile& e) {
        std::cerr << "ipsae: " << e.what() << "\n";
        return kExitIo;
    } catch (const FormatError& e) {
        std::cerr << "ipsae: " << e.what() << "\n";
        return kExitIo;
    } catch (const IoError& e) {
        std::cerr << "ipsae: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        // Remaining library errors are numeric contract failures.
        std::cerr << "ipsae: numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "ipsae: " << e.what() << "\n";
        return kExitNumeric;
    }
    return 0;
}
