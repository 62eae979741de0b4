#include "ipsae/model.hpp"

#include <cstring>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace ipsae {

namespace {

void symmetrize(Matrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = i + 1; j < m.cols(); ++j) {
            const double avg = 0.5 * (m(i, j) + m(j, i));
            m(i, j) = avg;
            m(j, i) = avg;
        }
    }
}

constexpr char kModelMagic[4] = {'I', 'P', 'S', 'W'};

void write_u32(std::ostream& os, std::uint32_t v) {
    unsigned char buf[4];
    for (int i = 0; i < 4; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(buf), 4);
}

std::uint32_t read_u32(std::istream& is, const fs::path& file) {
    unsigned char buf[4];
    if (!is.read(reinterpret_cast<char*>(buf), 4)) {
        throw FormatError(file.string() + ": truncated model header");
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

double read_f64(std::istream& is, const fs::path& file) {
    unsigned char buf[8];
    if (!is.read(reinterpret_cast<char*>(buf), 8)) {
        throw FormatError(file.string() + ": truncated model payload");
    }
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    double x;
    std::memcpy(&x, &bits, 8);
    return x;
}

}  // namespace

SylvesterSystem build_system(const Matrix& xp, const Matrix& s, double lambda) {
    if (xp.cols() != s.cols()) {
        throw DimensionMismatch("build_system: sample counts differ (" +
                                std::to_string(xp.cols()) + " vs " + std::to_string(s.cols()) +
                                ")");
    }
    if (!(lambda > 0.0)) {
        throw NonPositiveLambda("build_system: lambda must be > 0");
    }
    SylvesterSystem sys;
    sys.lambda = lambda;
    sys.A = matmul(s, transpose(s));
    symmetrize(sys.A);
    sys.B = scale(matmul(xp, transpose(xp)), lambda);
    symmetrize(sys.B);
    sys.C = scale(matmul(s, transpose(xp)), 1.0 + lambda);
    return sys;
}

IpSaeModel fit(const ZslDataset& dataset, const std::vector<std::size_t>& train_indices,
               double lambda, SpaceMode space_mode) {
    if (train_indices.empty()) {
        throw InvariantViolation("fit: empty training set");
    }
    for (std::size_t idx : train_indices) {
        if (idx >= dataset.sample_count()) {
            throw IndexOutOfRange("fit: train index out of range");
        }
        if (!dataset.is_seen(dataset.labels[idx])) {
            throw UnseenLabelInTraining("fit: sample " + std::to_string(idx) +
                                        " has unseen class " +
                                        std::to_string(dataset.labels[idx]));
        }
    }

    Matrix x(dataset.visual_dim(), train_indices.size());
    for (std::size_t j = 0; j < train_indices.size(); ++j) {
        for (std::size_t i = 0; i < x.rows(); ++i) {
            x(i, j) = dataset.features(i, train_indices[j]);
        }
    }
    const Matrix s = sample_attributes_for(dataset, train_indices);
    const Matrix xp = space_mode == SpaceMode::kEnriched ? enrich(x, s) : x;

    const SylvesterSystem sys = build_system(xp, s, lambda);
    const SylvesterSolution sol = solve_sylvester_sym(sys.A, sys.B, sys.C);

    IpSaeModel model;
    model.W = sol.W;
    model.lambda = lambda;
    model.visual_dim = dataset.visual_dim();
    model.semantic_dim = dataset.semantic_dim();
    model.space_mode = space_mode;
    model.nullified_modes = sol.nullified_modes;
    model.residual = sol.residual;
    return model;
}

Matrix encode(const IpSaeModel& model, const Matrix& xp) {
    if (xp.rows() != model.input_dim()) {
        throw DimensionMismatch("encode: input has " + std::to_string(xp.rows()) +
                                " rows, model expects " + std::to_string(model.input_dim()));
    }
    return matmul(model.W, xp);
}

Matrix decode(const IpSaeModel& model, const Matrix& s_cols) {
    if (s_cols.rows() != model.semantic_dim) {
        throw DimensionMismatch("decode: input has " + std::to_string(s_cols.rows()) +
                                " rows, model expects " + std::to_string(model.semantic_dim));
    }
    return matmul(transpose(model.W), s_cols);
}

HubnessBound hubness_bound(const Matrix& s, double lambda) {
    if (!(lambda > 0.0)) {
        throw NonPositiveLambda("hubness_bound: lambda must be > 0");
    }
    HubnessBound out;
    out.alpha = spectral_norm(s);
    out.bound = out.alpha * out.alpha / (out.alpha * out.alpha + lambda);

    Matrix gram = matmul(s, transpose(s));
    for (std::size_t i = 0; i < gram.rows(); ++i) {
        gram(i, i) += lambda;
        for (std::size_t j = i + 1; j < gram.cols(); ++j) {
            const double avg = 0.5 * (gram(i, j) + gram(j, i));
            gram(i, j) = avg;
            gram(j, i) = avg;
        }
    }
    const Matrix inner = solve_spd(gram, s);  // (SSᵀ+λI)⁻¹ S
    out.lhs = spectral_norm(matmul(transpose(s), inner));
    return out;
}

void save_model(const IpSaeModel& model, const fs::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + file.string());
    }
    out.write(kModelMagic, 4);
    write_u32(out, 1);
    write_u32(out, static_cast<std::uint32_t>(model.W.rows()));
    write_u32(out, static_cast<std::uint32_t>(model.W.cols()));
    const char mode = static_cast<char>(model.space_mode);
    out.write(&mode, 1);
    write_f64(out, model.lambda);
    for (double x : model.W.data()) {
        write_f64(out, x);
    }
    if (!out) {
        throw IoError("write failed for " + file.string());
    }
}

IpSaeModel load_model(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw MissingFile("cannot open " + file.string());
    }
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kModelMagic, 4) != 0) {
        throw FormatError(file.string() + ": bad magic (expected IPSW)");
    }
    const std::uint32_t version = read_u32(in, file);
    if (version != 1) {
        throw FormatError(file.string() + ": unsupported model version");
    }
    const std::uint32_t k = read_u32(in, file);
    const std::uint32_t m = read_u32(in, file);
    char mode_byte = 0;
    if (!in.read(&mode_byte, 1)) {
        throw FormatError(file.string() + ": truncated model header");
    }
    if (mode_byte != 0 && mode_byte != 1) {
        throw FormatError(file.string() + ": bad space_mode byte");
    }
    IpSaeModel model;
    model.space_mode = static_cast<SpaceMode>(mode_byte);
    model.lambda = read_f64(in, file);
    std::vector<double> entries(static_cast<std::size_t>(k) * m);
    for (double& x : entries) {
        x = read_f64(in, file);
    }
    model.W = Matrix(k, m, std::move(entries));
    model.semantic_dim = k;
    model.visual_dim = model.space_mode == SpaceMode::kEnriched ? m - k : m;
    return model;
}

}  // namespace ipsae
