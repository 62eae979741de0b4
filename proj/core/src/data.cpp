#include "ipsae/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "ipsae/rng.hpp"

namespace fs = std::filesystem;

namespace ipsae {

namespace {

double parse_double(const std::string& token, const fs::path& file, std::size_t line) {
    double value = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw FormatError(file.string() + ":" + std::to_string(line) + ": bad number '" + token +
                          "'");
    }
    if (!std::isfinite(value)) {
        throw FormatError(file.string() + ":" + std::to_string(line) + ": non-finite value");
    }
    return value;
}

long parse_int(const std::string& token, const fs::path& file, std::size_t line) {
    long value = 0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw FormatError(file.string() + ":" + std::to_string(line) + ": bad integer '" + token +
                          "'");
    }
    return value;
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::string token;
    std::stringstream ss(line);
    while (std::getline(ss, token, ',')) {
        out.push_back(token);
    }
    return out;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

constexpr char kDatasetMagic[4] = {'I', 'P', 'S', 'A'};

void write_u32(std::ostream& os, std::uint32_t v) {
    unsigned char buf[4];
    for (int i = 0; i < 4; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(buf), 4);
}

std::uint32_t read_u32(std::istream& is, const fs::path& file) {
    unsigned char buf[4];
    if (!is.read(reinterpret_cast<char*>(buf), 4)) {
        throw FormatError(file.string() + ": truncated header");
    }
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf[i]) << (8 * i);
    return v;
}

void write_f64(std::ostream& os, double x) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, 8);
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(buf), 8);
}

double read_f64(std::istream& is, const fs::path& file, std::size_t offset) {
    unsigned char buf[8];
    if (!is.read(reinterpret_cast<char*>(buf), 8)) {
        throw FormatError(file.string() + ": truncated at value " + std::to_string(offset));
    }
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    double x;
    std::memcpy(&x, &bits, 8);
    return x;
}

std::vector<int> parse_split_line(const std::string& line, const std::string& tag,
                                  const fs::path& file, std::size_t line_no) {
    const auto colon = line.find(':');
    if (colon == std::string::npos || line.substr(0, colon) != tag) {
        throw FormatError(file.string() + ":" + std::to_string(line_no) + ": expected '" + tag +
                          ": ...'");
    }
    std::vector<int> out;
    const std::string rest = line.substr(colon + 1);
    for (const auto& token : split_commas(rest)) {
        std::string t = token;
        t.erase(std::remove_if(t.begin(), t.end(), [](char c) { return c == ' ' || c == '\t'; }),
                t.end());
        if (t.empty()) continue;
        out.push_back(static_cast<int>(parse_int(t, file, line_no)));
    }
    return out;
}

}  // namespace

bool ZslDataset::is_seen(int cls) const {
    return std::find(seen_classes.begin(), seen_classes.end(), cls) != seen_classes.end();
}

bool ZslDataset::is_unseen(int cls) const {
    return std::find(unseen_classes.begin(), unseen_classes.end(), cls) != unseen_classes.end();
}

void ZslDataset::validate() const {
    if (labels.size() != features.cols()) {
        throw InvariantViolation("dataset '" + name + "': label count " +
                                 std::to_string(labels.size()) + " != sample count " +
                                 std::to_string(features.cols()));
    }
    for (int cls : seen_classes) {
        if (is_unseen(cls)) {
            throw InvariantViolation("dataset '" + name + "': class " + std::to_string(cls) +
                                     " is both seen and unseen");
        }
    }
    const int c = static_cast<int>(class_attributes.cols());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int label = labels[i];
        if (label < 0 || label >= c) {
            throw InvariantViolation("dataset '" + name + "': label " + std::to_string(label) +
                                     " out of range [0, " + std::to_string(c) + ")");
        }
        if (!is_seen(label) && !is_unseen(label)) {
            throw InvariantViolation("dataset '" + name + "': label " + std::to_string(label) +
                                     " belongs to neither split");
        }
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const std::size_t cls = static_cast<std::size_t>(labels[i]);
        bool all_zero = true;
        for (std::size_t r = 0; r < class_attributes.rows(); ++r) {
            if (class_attributes(r, cls) != 0.0) {
                all_zero = false;
                break;
            }
        }
        if (all_zero) {
            throw InvariantViolation("dataset '" + name + "': class " + std::to_string(labels[i]) +
                                     " occurs in labels but has an all-zero attribute vector");
        }
    }
}

Matrix read_matrix_csv(const fs::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw MissingFile("cannot open " + file.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw FormatError(file.string() + ": empty file");
    }
    const auto header = split_commas(strip_cr(line));
    if (header.size() != 2) {
        throw FormatError(file.string() + ":1: header must be 'rows,cols'");
    }
    const long rows = parse_int(header[0], file, 1);
    const long cols = parse_int(header[1], file, 1);
    if (rows <= 0 || cols <= 0) {
        throw FormatError(file.string() + ":1: non-positive dimensions");
    }
    std::vector<double> entries;
    entries.reserve(static_cast<std::size_t>(rows * cols));
    for (long r = 0; r < rows; ++r) {
        if (!std::getline(in, line)) {
            throw FormatError(file.string() + ": expected " + std::to_string(rows) +
                              " data rows, got " + std::to_string(r));
        }
        const auto tokens = split_commas(strip_cr(line));
        if (static_cast<long>(tokens.size()) != cols) {
            throw FormatError(file.string() + ":" + std::to_string(r + 2) + ": expected " +
                              std::to_string(cols) + " values, got " +
                              std::to_string(tokens.size()));
        }
        for (const auto& token : tokens) {
            entries.push_back(parse_double(token, file, static_cast<std::size_t>(r + 2)));
        }
    }
    return Matrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols),
                  std::move(entries));
}

void write_matrix_csv(const Matrix& m, const fs::path& file) {
    std::ofstream out(file);
    if (!out) {
        throw IoError("cannot write " + file.string());
    }
    out << m.rows() << "," << m.cols() << "\n";
    char buf[64];
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
            out << (j ? "," : "") << buf;
        }
        out << "\n";
    }
    if (!out) {
        throw IoError("write failed for " + file.string());
    }
}

Matrix read_matrix_bin(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw MissingFile("cannot open " + file.string());
    }
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kDatasetMagic, 4) != 0) {
        throw FormatError(file.string() + ": bad magic (expected IPSA)");
    }
    const std::uint32_t version = read_u32(in, file);
    if (version != 1) {
        throw FormatError(file.string() + ": unsupported version " + std::to_string(version));
    }
    const std::uint32_t rows = read_u32(in, file);
    const std::uint32_t cols = read_u32(in, file);
    if (rows == 0 || cols == 0) {
        throw FormatError(file.string() + ": zero dimension");
    }
    std::vector<double> entries(static_cast<std::size_t>(rows) * cols);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        entries[i] = read_f64(in, file, i);
    }
    return Matrix(rows, cols, std::move(entries));
}

void write_matrix_bin(const Matrix& m, const fs::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + file.string());
    }
    out.write(kDatasetMagic, 4);
    write_u32(out, 1);
    write_u32(out, static_cast<std::uint32_t>(m.rows()));
    write_u32(out, static_cast<std::uint32_t>(m.cols()));
    for (double x : m.data()) {
        write_f64(out, x);
    }
    if (!out) {
        throw IoError("write failed for " + file.string());
    }
}

std::vector<int> read_labels_csv(const fs::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw MissingFile("cannot open " + file.string());
    }
    std::vector<int> labels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        labels.push_back(static_cast<int>(parse_int(line, file, line_no)));
    }
    if (labels.empty()) {
        throw FormatError(file.string() + ": no labels");
    }
    return labels;
}

void write_labels_csv(const std::vector<int>& labels, const fs::path& file) {
    std::ofstream out(file);
    if (!out) {
        throw IoError("cannot write " + file.string());
    }
    for (int label : labels) {
        out << label << "\n";
    }
    if (!out) {
        throw IoError("write failed for " + file.string());
    }
}

ZslDataset load_dataset(const fs::path& dir) {
    const auto pick = [&dir](const char* stem) -> Matrix {
        const fs::path bin = dir / (std::string(stem) + ".bin");
        const fs::path csv = dir / (std::string(stem) + ".csv");
        if (fs::exists(bin)) return read_matrix_bin(bin);
        if (fs::exists(csv)) return read_matrix_csv(csv);
        throw MissingFile("neither " + bin.string() + " nor " + csv.string() + " exists");
    };

    ZslDataset ds;
    ds.features = pick("features");
    ds.class_attributes = pick("attributes");
    ds.labels = read_labels_csv(dir / "labels.csv");
    ds.name = dir.filename().string();

    const fs::path splits = dir / "splits.csv";
    std::ifstream in(splits);
    if (!in) {
        throw MissingFile("cannot open " + splits.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw FormatError(splits.string() + ": missing seen line");
    }
    ds.seen_classes = parse_split_line(strip_cr(line), "seen", splits, 1);
    if (!std::getline(in, line)) {
        throw FormatError(splits.string() + ": missing unseen line");
    }
    ds.unseen_classes = parse_split_line(strip_cr(line), "unseen", splits, 2);

    ds.validate();
    return ds;
}

void save_dataset(const ZslDataset& dataset, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create directory " + dir.string());
    }
    write_matrix_bin(dataset.features, dir / "features.bin");
    write_matrix_bin(dataset.class_attributes, dir / "attributes.bin");
    write_labels_csv(dataset.labels, dir / "labels.csv");

    std::ofstream out(dir / "splits.csv");
    if (!out) {
        throw IoError("cannot write " + (dir / "splits.csv").string());
    }
    out << "seen:";
    for (std::size_t i = 0; i < dataset.seen_classes.size(); ++i) {
        out << (i ? "," : " ") << dataset.seen_classes[i];
    }
    out << "\nunseen:";
    for (std::size_t i = 0; i < dataset.unseen_classes.size(); ++i) {
        out << (i ? "," : " ") << dataset.unseen_classes[i];
    }
    out << "\n";
    if (!out) {
        throw IoError("write failed for splits.csv");
    }
}

std::pair<Matrix, std::vector<std::size_t>> denoise_attributes(const Matrix& raw,
                                                               const std::vector<int>& labels,
                                                               double threshold) {
    if (labels.size() != raw.cols()) {
        throw DimensionMismatch("denoise_attributes: label count != sample count");
    }
    if (!(threshold > 0.0 && threshold <= 1.0)) {
        throw BadThreshold("denoise_attributes: threshold must be in (0, 1]");
    }
    for (double x : raw.data()) {
        if (x < 0.0 || x > 1.0) {
            throw FormatError("denoise_attributes: raw entries must lie in [0, 1]");
        }
    }
    int max_label = 0;
    for (int label : labels) {
        if (label < 0) {
            throw InvariantViolation("denoise_attributes: negative label");
        }
        max_label = std::max(max_label, label);
    }
    const std::size_t num_classes = static_cast<std::size_t>(max_label) + 1;
    std::vector<std::size_t> class_counts(num_classes, 0);
    for (int label : labels) {
        ++class_counts[static_cast<std::size_t>(label)];
    }
    for (std::size_t c = 0; c < num_classes; ++c) {
        if (class_counts[c] == 0) {
            throw EmptyClass("denoise_attributes: class " + std::to_string(c) + " has no samples");
        }
    }

    const std::size_t a = raw.rows();
    Matrix out(a, num_classes);
    for (std::size_t i = 0; i < a; ++i) {
        std::vector<double> sums(num_classes, 0.0);
        for (std::size_t j = 0; j < raw.cols(); ++j) {
            sums[static_cast<std::size_t>(labels[j])] += raw(i, j);
        }
        for (std::size_t c = 0; c < num_classes; ++c) {
            out(i, c) = (sums[c] / static_cast<double>(class_counts[c]) >= threshold) ? 1.0 : 0.0;
        }
    }

    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < a; ++i) {
        bool constant = true;
        for (std::size_t c = 1; c < num_classes; ++c) {
            if (out(i, c) != out(i, 0)) {
                constant = false;
                break;
            }
        }
        if (!constant) {
            kept.push_back(i);
        }
    }
    return {std::move(out), std::move(kept)};
}

Matrix enrich(const Matrix& features, const Matrix& sample_attributes) {
    if (features.cols() != sample_attributes.cols()) {
        throw DimensionMismatch("enrich: sample counts differ");
    }
    return concat_rows(features, sample_attributes);
}

Matrix sample_attributes_for(const ZslDataset& dataset, const std::vector<std::size_t>& indices) {
    if (indices.empty()) {
        throw IndexOutOfRange("sample_attributes_for: empty index list");
    }
    Matrix out(dataset.semantic_dim(), indices.size());
    for (std::size_t j = 0; j < indices.size(); ++j) {
        if (indices[j] >= dataset.sample_count()) {
            throw IndexOutOfRange("sample_attributes_for: index " + std::to_string(indices[j]) +
                                  " out of range");
        }
        const auto cls = static_cast<std::size_t>(dataset.labels[indices[j]]);
        for (std::size_t i = 0; i < out.rows(); ++i) {
            out(i, j) = dataset.class_attributes(i, cls);
        }
    }
    return out;
}

GzslSplit split_gzsl(const ZslDataset& dataset, double seen_fraction, std::uint64_t seed) {
    if (!(seen_fraction > 0.0 && seen_fraction < 1.0)) {
        throw InvariantViolation("split_gzsl: seen_fraction must be in (0, 1)");
    }
    Rng rng(seed);
    GzslSplit split;
    split.seed = seed;
    split.seen_fraction = seen_fraction;

    for (int cls : dataset.seen_classes) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < dataset.labels.size(); ++i) {
            if (dataset.labels[i] == cls) members.push_back(i);
        }
        if (members.empty()) {
            throw EmptySeenClass("split_gzsl: seen class " + std::to_string(cls) +
                                 " has no samples");
        }
        std::size_t held = static_cast<std::size_t>(
            std::floor(seen_fraction * static_cast<double>(members.size()) + 0.5));
        held = std::max<std::size_t>(held, 1);
        held = std::min(held, members.size());
        rng.shuffle(members);
        for (std::size_t i = 0; i < members.size(); ++i) {
            (i < held ? split.test_indices : split.train_indices).push_back(members[i]);
        }
    }
    for (std::size_t i = 0; i < dataset.labels.size(); ++i) {
        if (dataset.is_unseen(dataset.labels[i])) {
            split.test_indices.push_back(i);
        }
    }
    std::sort(split.train_indices.begin(), split.train_indices.end());
    std::sort(split.test_indices.begin(), split.test_indices.end());
    return split;
}

std::vector<std::size_t> unseen_sample_indices(const ZslDataset& dataset) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < dataset.labels.size(); ++i) {
        if (dataset.is_unseen(dataset.labels[i])) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> seen_sample_indices(const ZslDataset& dataset) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < dataset.labels.size(); ++i) {
        if (dataset.is_seen(dataset.labels[i])) out.push_back(i);
    }
    return out;
}

ZslDataset generate_synthetic(const SyntheticConfig& config) {
    if (config.d < 1 || config.k < 1 || config.n_per_class < 1 || config.c_seen < 1 ||
        config.c_unseen < 1) {
        throw InfeasibleConfig("generate_synthetic: all counts must be >= 1");
    }
    if (config.noise_sigma < 0.0) {
        throw InfeasibleConfig("generate_synthetic: noise_sigma must be >= 0");
    }
    if (!(config.attribute_density > 0.0 && config.attribute_density <= 1.0)) {
        throw InfeasibleConfig("generate_synthetic: attribute_density must be in (0, 1]");
    }
    if (config.k > config.d) {
        std::cerr << "ipsae: warning: synthetic k > d, planted map cannot have orthonormal "
                     "columns\n";
    }

    Rng rng(config.seed);
    const std::size_t num_classes = config.c_seen + config.c_unseen;

    // Distinct nonzero binary attribute vectors.
    std::set<std::vector<double>> unique;
    std::vector<std::vector<double>> attrs;
    const std::size_t max_attempts = 1000 * num_classes;
    std::size_t attempts = 0;
    while (attrs.size() < num_classes) {
        if (++attempts > max_attempts) {
            throw InfeasibleConfig("generate_synthetic: cannot draw " +
                                   std::to_string(num_classes) +
                                   " distinct attribute vectors with k=" +
                                   std::to_string(config.k));
        }
        std::vector<double> s(config.k);
        bool nonzero = false;
        for (double& x : s) {
            x = rng.next_double() < config.attribute_density ? 1.0 : 0.0;
            nonzero = nonzero || x != 0.0;
        }
        if (nonzero && unique.insert(s).second) {
            attrs.push_back(std::move(s));
        }
    }

    Matrix class_attributes(config.k, num_classes);
    for (std::size_t c = 0; c < num_classes; ++c) {
        for (std::size_t i = 0; i < config.k; ++i) {
            class_attributes(i, c) = attrs[c][i];
        }
    }

    // Planted map with (near-)orthonormal columns via Gram-Schmidt.
    Matrix map(config.d, config.k);
    for (double& x : map.data()) {
        x = rng.next_gaussian();
    }
    for (std::size_t j = 0; j < config.k; ++j) {
        auto col = map.col(j);
        for (std::size_t p = 0; p < j && p < config.d; ++p) {
            const auto prev = map.col(p);
            double dot = 0.0;
            for (std::size_t i = 0; i < config.d; ++i) dot += col[i] * prev[i];
            for (std::size_t i = 0; i < config.d; ++i) col[i] -= dot * prev[i];
        }
        double norm = 0.0;
        for (double x : col) norm += x * x;
        norm = std::sqrt(norm);
        if (norm < 1e-12) {
            // Degenerate draw (k > d exhausts the space); keep a unit axis.
            std::fill(col.begin(), col.end(), 0.0);
            col[j % config.d] = 1.0;
        } else {
            for (double& x : col) x /= norm;
        }
        map.set_col(j, col);
    }

    const std::size_t n = num_classes * config.n_per_class;
    Matrix features(config.d, n);
    std::vector<int> labels(n);
    std::size_t col_index = 0;
    for (std::size_t c = 0; c < num_classes; ++c) {
        std::vector<double> mean(config.d, 0.0);
        for (std::size_t i = 0; i < config.d; ++i) {
            for (std::size_t p = 0; p < config.k; ++p) {
                mean[i] += map(i, p) * class_attributes(p, c);
            }
        }
        for (std::size_t r = 0; r < config.n_per_class; ++r, ++col_index) {
            labels[col_index] = static_cast<int>(c);
            for (std::size_t i = 0; i < config.d; ++i) {
                const double noise =
                    config.noise_sigma > 0.0 ? config.noise_sigma * rng.next_gaussian() : 0.0;
                features(i, col_index) = mean[i] + noise;
            }
        }
    }

    ZslDataset ds;
    ds.features = std::move(features);
    ds.labels = std::move(labels);
    ds.class_attributes = std::move(class_attributes);
    for (std::size_t c = 0; c < config.c_seen; ++c) ds.seen_classes.push_back(static_cast<int>(c));
    for (std::size_t c = config.c_seen; c < num_classes; ++c) {
        ds.unseen_classes.push_back(static_cast<int>(c));
    }
    ds.name = "synthetic";
    ds.validate();
    return ds;
}

}  // namespace ipsae
