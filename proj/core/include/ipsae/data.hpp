#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "ipsae/matrix.hpp"

namespace ipsae {

/// A zero-shot dataset: visual features (one column per sample), per-sample
/// class labels, per-class attribute vectors, and a disjoint seen/unseen
/// class partition.
struct ZslDataset {
    Matrix features;          // d × n
    std::vector<int> labels;  // n entries, values in [0, C)
    Matrix class_attributes;  // k × C
    std::vector<int> seen_classes;
    std::vector<int> unseen_classes;
    std::string name;

    std::size_t visual_dim() const { return features.rows(); }
    std::size_t semantic_dim() const { return class_attributes.rows(); }
    std::size_t sample_count() const { return features.cols(); }
    std::size_t class_count() const { return class_attributes.cols(); }

    bool is_seen(int cls) const;
    bool is_unseen(int cls) const;

    /// Throws InvariantViolation on overlap, out-of-range labels, or an
    /// all-zero attribute column of an occupied class.
    void validate() const;
};

struct GzslSplit {
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
    std::uint64_t seed = 0;
    double seen_fraction = 0.0;
};

struct SyntheticConfig {
    std::size_t d = 32;
    std::size_t k = 12;
    std::size_t n_per_class = 30;
    std::size_t c_seen = 15;
    std::size_t c_unseen = 5;
    double noise_sigma = 0.3;
    double attribute_density = 0.4;
    std::uint64_t seed = 42;
};

ZslDataset load_dataset(const std::filesystem::path& dir);
void save_dataset(const ZslDataset& dataset, const std::filesystem::path& dir);

/// Binarizes per-image attributes into per-class attributes: attribute i is
/// present for class c when its class mean is >= threshold. Returns the full
/// binary matrix plus the indices of rows that are not constant across
/// classes (constant rows carry no class signal).
std::pair<Matrix, std::vector<std::size_t>> denoise_attributes(const Matrix& raw,
                                                               const std::vector<int>& labels,
                                                               double threshold);

/// X′ = X ⊕ S, the visual rows stacked on the semantic rows.
Matrix enrich(const Matrix& features, const Matrix& sample_attributes);

/// Per-sample semantic matrix: column j is the attribute column of the class
/// of sample indices[j].
Matrix sample_attributes_for(const ZslDataset& dataset, const std::vector<std::size_t>& indices);

/// Stratified per-class holdout of seen-class samples; all unseen-class
/// samples land in the test set. Held-out count is round-half-up with a
/// floor of one sample per nonempty class.
GzslSplit split_gzsl(const ZslDataset& dataset, double seen_fraction, std::uint64_t seed);

/// Seeded synthetic benchmark with a planted linear map: distinct binary
/// class attributes s_c, orthonormal-column map M, samples x = M·s_c + noise.
ZslDataset generate_synthetic(const SyntheticConfig& config);

/// Indices of all samples whose label is an unseen class.
std::vector<std::size_t> unseen_sample_indices(const ZslDataset& dataset);
/// Indices of all samples whose label is a seen class.
std::vector<std::size_t> seen_sample_indices(const ZslDataset& dataset);

// Matrix file primitives (shared with the model serializer and the CLI).
Matrix read_matrix_csv(const std::filesystem::path& file);
void write_matrix_csv(const Matrix& m, const std::filesystem::path& file);
Matrix read_matrix_bin(const std::filesystem::path& file);
void write_matrix_bin(const Matrix& m, const std::filesystem::path& file);

std::vector<int> read_labels_csv(const std::filesystem::path& file);
void write_labels_csv(const std::vector<int>& labels, const std::filesystem::path& file);

}  // namespace ipsae
