#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ipsae/eval.hpp"

namespace ipsae {

struct ReportDiagnostics {
    std::size_t nullified_modes = 0;
    double residual = 0.0;
    std::optional<double> hubness_bound;
};

/// Serializes a ZSL or GZSL run into the report JSON document. For ZSL runs
/// acc_seen/acc_unseen/harmonic_mean are null.
std::string zsl_report_json(const ZslReport& report, const std::string& mode, double lambda,
                            const ReportDiagnostics& diagnostics);
std::string gzsl_report_json(const GzslReport& report, const std::string& mode, double lambda,
                             const ReportDiagnostics& diagnostics);

std::string confusion_csv(const ConfusionMatrix& confusion);
std::string sweep_csv(const std::vector<SweepPoint>& points);

}  // namespace ipsae
