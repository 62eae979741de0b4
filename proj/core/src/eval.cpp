#include "ipsae/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ipsae {

namespace {

std::vector<double> enriched_vector(const std::vector<double>& x, const Matrix& attrs,
                                    std::size_t cls) {
    std::vector<double> t = x;
    t.reserve(x.size() + attrs.rows());
    for (std::size_t i = 0; i < attrs.rows(); ++i) {
        t.push_back(attrs(i, cls));
    }
    return t;
}

ZslReport report_from_predictions(const std::vector<int>& predicted,
                                  const std::vector<int>& truth,
                                  const std::vector<int>& classes) {
    ZslReport report;
    report.confusion = make_confusion(predicted, truth, classes);
    const PerClassAccuracy acc = per_class_accuracy(predicted, truth, classes);
    report.per_class_accuracy = acc.per_class;
    report.mean_per_class_accuracy = acc.mean;
    const PrfSummary prf = precision_recall_f1(report.confusion);
    report.macro_precision = prf.macro_precision;
    report.macro_recall = prf.macro_recall;
    report.macro_f1 = prf.macro_f1;
    return report;
}

}  // namespace

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) {
        throw LengthMismatch("cosine_similarity: lengths " + std::to_string(u.size()) + " vs " +
                             std::to_string(v.size()));
    }
    double dot = 0.0;
    double nu = 0.0;
    double nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    return dot / (std::sqrt(nu) * std::sqrt(nv));
}

std::vector<int> classify(const IpSaeModel& model, const ZslDataset& dataset,
                          const std::vector<std::size_t>& test_indices,
                          const std::vector<int>& candidate_classes, ClassifyMode mode) {
    if (candidate_classes.empty()) {
        throw EmptyCandidates("classify: no candidate classes");
    }
    if (model.visual_dim != dataset.visual_dim() || model.semantic_dim != dataset.semantic_dim()) {
        throw DimensionMismatch("classify: model dims (d=" + std::to_string(model.visual_dim) +
                                ", k=" + std::to_string(model.semantic_dim) +
                                ") do not match dataset (d=" +
                                std::to_string(dataset.visual_dim()) +
                                ", k=" + std::to_string(dataset.semantic_dim()) + ")");
    }
    for (int cls : candidate_classes) {
        if (cls < 0 || static_cast<std::size_t>(cls) >= dataset.class_count()) {
            throw IndexOutOfRange("classify: candidate class " + std::to_string(cls) +
                                  " has no attribute column");
        }
    }

    const bool enriched = model.space_mode == SpaceMode::kEnriched;
    const std::size_t d = model.visual_dim;

    // One prototype per candidate: P_c = Wᵀ s_c.
    Matrix s_cand(dataset.semantic_dim(), candidate_classes.size());
    for (std::size_t j = 0; j < candidate_classes.size(); ++j) {
        for (std::size_t i = 0; i < s_cand.rows(); ++i) {
            s_cand(i, j) = dataset.class_attributes(i, static_cast<std::size_t>(candidate_classes[j]));
        }
    }
    const Matrix prototypes = decode(model, s_cand);  // m × |candidates|

    std::vector<int> predictions;
    predictions.reserve(test_indices.size());
    for (std::size_t idx : test_indices) {
        if (idx >= dataset.sample_count()) {
            throw IndexOutOfRange("classify: test index out of range");
        }
        const std::vector<double> x = dataset.features.col(idx);

        double best_score = -std::numeric_limits<double>::infinity();
        int best_class = candidate_classes.front();
        for (std::size_t j = 0; j < candidate_classes.size(); ++j) {
            const std::vector<double> proto = prototypes.col(j);
            double score;
            if (!enriched) {
                score = cosine_similarity(x, proto);
            } else if (mode == ClassifyMode::kVisualSlice) {
                score = cosine_similarity(
                    x, std::span<const double>(proto.data(), d));
            } else {
                const std::size_t attr_cls =
                    mode == ClassifyMode::kOracleEnriched
                        ? static_cast<std::size_t>(dataset.labels[idx])
                        : static_cast<std::size_t>(candidate_classes[j]);
                const std::vector<double> t =
                    enriched_vector(x, dataset.class_attributes, attr_cls);
                score = cosine_similarity(t, proto);
            }
            const int cls = candidate_classes[j];
            if (score > best_score || (score == best_score && cls < best_class)) {
                best_score = score;
                best_class = cls;
            }
        }
        predictions.push_back(best_class);
    }
    return predictions;
}

ConfusionMatrix make_confusion(const std::vector<int>& predicted, const std::vector<int>& truth,
                               const std::vector<int>& classes) {
    if (predicted.size() != truth.size()) {
        throw LengthMismatch("make_confusion: prediction/truth lengths differ");
    }
    std::map<int, std::size_t> index;
    for (std::size_t i = 0; i < classes.size(); ++i) {
        index[classes[i]] = i;
    }
    ConfusionMatrix cm;
    cm.classes = classes;
    cm.counts.assign(classes.size(), std::vector<std::int64_t>(classes.size(), 0));
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const auto t = index.find(truth[i]);
        const auto p = index.find(predicted[i]);
        if (t == index.end() || p == index.end()) {
            throw InvariantViolation("make_confusion: label outside class list");
        }
        ++cm.counts[t->second][p->second];
    }
    return cm;
}

PerClassAccuracy per_class_accuracy(const std::vector<int>& predicted,
                                    const std::vector<int>& truth,
                                    const std::vector<int>& classes) {
    if (predicted.size() != truth.size()) {
        throw LengthMismatch("per_class_accuracy: prediction/truth lengths differ");
    }
    PerClassAccuracy out;
    double sum = 0.0;
    std::size_t populated = 0;
    for (int cls : classes) {
        std::int64_t total = 0;
        std::int64_t correct = 0;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            if (truth[i] == cls) {
                ++total;
                if (predicted[i] == cls) ++correct;
            }
        }
        if (total == 0) continue;
        const double acc = static_cast<double>(correct) / static_cast<double>(total);
        out.per_class[cls] = acc;
        sum += acc;
        ++populated;
    }
    out.mean = populated > 0 ? sum / static_cast<double>(populated) : 0.0;
    return out;
}

PrfSummary precision_recall_f1(const ConfusionMatrix& confusion) {
    const std::size_t n = confusion.classes.size();
    if (n == 0) {
        throw EmptyMatrix("precision_recall_f1: empty confusion matrix");
    }
    PrfSummary out;
    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t tp = confusion.counts[i][i];
        std::int64_t fp = 0;
        std::int64_t fn = 0;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == i) continue;
            fp += confusion.counts[r][i];
            fn += confusion.counts[i][r];
        }
        const double p = (tp + fp) == 0 ? 0.0
                                        : static_cast<double>(tp) / static_cast<double>(tp + fp);
        const double r = (tp + fn) == 0 ? 0.0
                                        : static_cast<double>(tp) / static_cast<double>(tp + fn);
        const double f1 = (p + r) == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
        const int cls = confusion.classes[i];
        out.per_class_precision[cls] = p;
        out.per_class_recall[cls] = r;
        out.per_class_f1[cls] = f1;
        out.macro_precision += p;
        out.macro_recall += r;
        out.macro_f1 += f1;
    }
    out.macro_precision /= static_cast<double>(n);
    out.macro_recall /= static_cast<double>(n);
    out.macro_f1 /= static_cast<double>(n);
    return out;
}

SilhouetteResult silhouette_score(const Matrix& points, const std::vector<int>& labels) {
    const std::size_t q = points.cols();
    if (labels.size() != q) {
        throw LengthMismatch("silhouette_score: label count != point count");
    }
    std::map<int, std::size_t> cluster_index;
    for (int label : labels) {
        cluster_index.emplace(label, cluster_index.size());
    }
    if (cluster_index.size() < 2 || q < 2) {
        throw SingleClass("silhouette_score: need at least two clusters of points");
    }
    std::vector<std::size_t> cluster_size(cluster_index.size(), 0);
    for (int label : labels) {
        ++cluster_size[cluster_index[label]];
    }

    SilhouetteResult result;
    result.per_sample.resize(q);
    double total = 0.0;
    for (std::size_t i = 0; i < q; ++i) {
        const std::size_t own = cluster_index[labels[i]];
        if (cluster_size[own] == 1) {
            result.per_sample[i] = 0.0;
            continue;
        }
        std::vector<double> sums(cluster_index.size(), 0.0);
        for (std::size_t j = 0; j < q; ++j) {
            if (j == i) continue;
            double dist = 0.0;
            for (std::size_t r = 0; r < points.rows(); ++r) {
                const double diff = points(r, i) - points(r, j);
                dist += diff * diff;
            }
            sums[cluster_index[labels[j]]] += std::sqrt(dist);
        }
        const double a = sums[own] / static_cast<double>(cluster_size[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < cluster_index.size(); ++c) {
            if (c == own || cluster_size[c] == 0) continue;
            b = std::min(b, sums[c] / static_cast<double>(cluster_size[c]));
        }
        const double denom = std::max(a, b);
        const double s = denom == 0.0 ? 0.0 : (b - a) / denom;
        result.per_sample[i] = s;
        total += s;
    }
    result.mean = total / static_cast<double>(q);
    return result;
}

double harmonic_mean(double acc_seen, double acc_unseen) {
    const double sum = acc_seen + acc_unseen;
    return sum > 0.0 ? 2.0 * acc_seen * acc_unseen / sum : 0.0;
}

ZslReport run_zsl(const IpSaeModel& model, const ZslDataset& dataset, ClassifyMode mode) {
    const std::vector<std::size_t> test_indices = unseen_sample_indices(dataset);
    if (test_indices.empty()) {
        throw InvariantViolation("run_zsl: dataset has no unseen-class samples");
    }
    const std::vector<int> predicted =
        classify(model, dataset, test_indices, dataset.unseen_classes, mode);
    std::vector<int> truth;
    truth.reserve(test_indices.size());
    for (std::size_t idx : test_indices) {
        truth.push_back(dataset.labels[idx]);
    }
    return report_from_predictions(predicted, truth, dataset.unseen_classes);
}

GzslReport run_gzsl(const IpSaeModel& model, const ZslDataset& dataset, const GzslSplit& split,
                    ClassifyMode mode) {
    std::vector<int> candidates = dataset.seen_classes;
    candidates.insert(candidates.end(), dataset.unseen_classes.begin(),
                      dataset.unseen_classes.end());
    std::sort(candidates.begin(), candidates.end());

    const std::vector<int> predicted = classify(model, dataset, split.test_indices, candidates, mode);

    std::vector<int> seen_pred, seen_truth, unseen_pred, unseen_truth;
    for (std::size_t i = 0; i < split.test_indices.size(); ++i) {
        const int truth = dataset.labels[split.test_indices[i]];
        if (dataset.is_seen(truth)) {
            seen_pred.push_back(predicted[i]);
            seen_truth.push_back(truth);
        } else {
            unseen_pred.push_back(predicted[i]);
            unseen_truth.push_back(truth);
        }
    }

    GzslReport report;
    report.seen_report = report_from_predictions(seen_pred, seen_truth, candidates);
    report.unseen_report = report_from_predictions(unseen_pred, unseen_truth, candidates);
    report.acc_seen = report.seen_report.mean_per_class_accuracy;
    report.acc_unseen = report.unseen_report.mean_per_class_accuracy;
    report.harmonic_mean = harmonic_mean(report.acc_seen, report.acc_unseen);
    return report;
}

std::vector<SweepPoint> lambda_sweep(const ZslDataset& dataset,
                                     const std::vector<std::size_t>& train_indices,
                                     const std::vector<double>& grid, ClassifyMode mode,
                                     SpaceMode space_mode) {
    if (grid.empty()) {
        throw InvariantViolation("lambda_sweep: empty grid");
    }
    const Matrix s_train = sample_attributes_for(dataset, train_indices);

    std::vector<SweepPoint> points;
    points.reserve(grid.size());
    for (double lambda : grid) {
        const IpSaeModel model = fit(dataset, train_indices, lambda, space_mode);
        const ZslReport report = run_zsl(model, dataset, mode);
        SweepPoint point;
        point.lambda = lambda;
        point.mean_per_class_accuracy = report.mean_per_class_accuracy;
        point.hubness_bound = hubness_bound(s_train, lambda).bound;
        point.nullified_modes = model.nullified_modes;
        points.push_back(point);
    }
    return points;
}

}  // namespace ipsae
