#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "ipsae/data.hpp"
#include "ipsae/model.hpp"

namespace ipsae {

struct ConfusionMatrix {
    std::vector<int> classes;                       // ordered class ids
    std::vector<std::vector<std::int64_t>> counts;  // rows = true, cols = predicted
};

struct PrfSummary {
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    std::map<int, double> per_class_precision;
    std::map<int, double> per_class_recall;
    std::map<int, double> per_class_f1;
};

struct ZslReport {
    std::map<int, double> per_class_accuracy;
    double mean_per_class_accuracy = 0.0;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    ConfusionMatrix confusion;
};

struct GzslReport {
    double acc_seen = 0.0;
    double acc_unseen = 0.0;
    double harmonic_mean = 0.0;
    ZslReport seen_report;
    ZslReport unseen_report;
};

/// How a test sample is lifted into the model's input space before cosine
/// matching against decoded prototypes. oracle_enriched reproduces the
/// classification procedure verbatim but peeks at the true label, so it is a
/// diagnostic, not a deployable classifier.
enum class ClassifyMode {
    kOracleEnriched,
    kCandidateConditioned,  // default
    kVisualSlice,
};

struct SilhouetteResult {
    std::vector<double> per_sample;
    double mean = 0.0;
};

struct SweepPoint {
    double lambda = 0.0;
    double mean_per_class_accuracy = 0.0;
    double hubness_bound = 0.0;
    std::size_t nullified_modes = 0;
};

/// u·v/(‖u‖‖v‖); −inf when either vector is zero, so a degenerate candidate
/// never wins the argmax.
double cosine_similarity(std::span<const double> u, std::span<const double> v);

std::vector<int> classify(const IpSaeModel& model, const ZslDataset& dataset,
                          const std::vector<std::size_t>& test_indices,
                          const std::vector<int>& candidate_classes, ClassifyMode mode);

ConfusionMatrix make_confusion(const std::vector<int>& predicted, const std::vector<int>& truth,
                               const std::vector<int>& classes);

struct PerClassAccuracy {
    std::map<int, double> per_class;
    double mean = 0.0;
};

/// Per-class top-1 accuracy; the mean runs over classes with at least one
/// test sample.
PerClassAccuracy per_class_accuracy(const std::vector<int>& predicted,
                                    const std::vector<int>& truth,
                                    const std::vector<int>& classes);

PrfSummary precision_recall_f1(const ConfusionMatrix& confusion);

/// Standard Euclidean silhouette; singleton clusters and all-coincident
/// points score 0.
SilhouetteResult silhouette_score(const Matrix& points, const std::vector<int>& labels);

double harmonic_mean(double acc_seen, double acc_unseen);

ZslReport run_zsl(const IpSaeModel& model, const ZslDataset& dataset, ClassifyMode mode);

GzslReport run_gzsl(const IpSaeModel& model, const ZslDataset& dataset, const GzslSplit& split,
                    ClassifyMode mode);

std::vector<SweepPoint> lambda_sweep(const ZslDataset& dataset,
                                     const std::vector<std::size_t>& train_indices,
                                     const std::vector<double>& grid, ClassifyMode mode,
                                     SpaceMode space_mode);

}  // namespace ipsae
