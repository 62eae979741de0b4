#include "ipsae/report_io.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace ipsae {

namespace {

using nlohmann::json;

json confusion_to_json(const ConfusionMatrix& confusion) {
    return json{{"classes", confusion.classes}, {"counts", confusion.counts}};
}

json per_class_to_json(const std::map<int, double>& per_class) {
    json out = json::object();
    for (const auto& [cls, value] : per_class) {
        out[std::to_string(cls)] = value;
    }
    return out;
}

json diagnostics_to_json(const ReportDiagnostics& d) {
    json out = {{"nullified_modes", d.nullified_modes}, {"residual", d.residual}};
    out["hubness_bound"] = d.hubness_bound ? json(*d.hubness_bound) : json(nullptr);
    return out;
}

json base_report(const ZslReport& report, const std::string& protocol, const std::string& mode,
                 double lambda, const ReportDiagnostics& diagnostics) {
    return json{
        {"protocol", protocol},
        {"mode", mode},
        {"lambda", lambda},
        {"per_class_accuracy", per_class_to_json(report.per_class_accuracy)},
        {"mean_per_class_accuracy", report.mean_per_class_accuracy},
        {"macro_precision", report.macro_precision},
        {"macro_recall", report.macro_recall},
        {"macro_f1", report.macro_f1},
        {"confusion", confusion_to_json(report.confusion)},
        {"diagnostics", diagnostics_to_json(diagnostics)},
    };
}

}  // namespace

std::string zsl_report_json(const ZslReport& report, const std::string& mode, double lambda,
                            const ReportDiagnostics& diagnostics) {
    json doc = base_report(report, "zsl", mode, lambda, diagnostics);
    doc["acc_seen"] = nullptr;
    doc["acc_unseen"] = nullptr;
    doc["harmonic_mean"] = nullptr;
    return doc.dump(2);
}

std::string gzsl_report_json(const GzslReport& report, const std::string& mode, double lambda,
                             const ReportDiagnostics& diagnostics) {
    // The top-level per-class / confusion block reports the unseen domain;
    // the seen domain is attached in full under "seen".
    json doc = base_report(report.unseen_report, "gzsl", mode, lambda, diagnostics);
    doc["acc_seen"] = report.acc_seen;
    doc["acc_unseen"] = report.acc_unseen;
    doc["harmonic_mean"] = report.harmonic_mean;
    doc["seen"] = json{
        {"per_class_accuracy", per_class_to_json(report.seen_report.per_class_accuracy)},
        {"mean_per_class_accuracy", report.seen_report.mean_per_class_accuracy},
        {"macro_precision", report.seen_report.macro_precision},
        {"macro_recall", report.seen_report.macro_recall},
        {"macro_f1", report.seen_report.macro_f1},
        {"confusion", confusion_to_json(report.seen_report.confusion)},
    };
    return doc.dump(2);
}

std::string confusion_csv(const ConfusionMatrix& confusion) {
    std::ostringstream out;
    out << "true\\pred";
    for (int cls : confusion.classes) {
        out << "," << cls;
    }
    out << "\n";
    for (std::size_t i = 0; i < confusion.classes.size(); ++i) {
        out << confusion.classes[i];
        for (std::size_t j = 0; j < confusion.classes.size(); ++j) {
            out << "," << confusion.counts[i][j];
        }
        out << "\n";
    }
    return out.str();
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
    std::ostringstream out;
    out << "lambda,accuracy,hubness_bound,nullified_modes\n";
    char buf[96];
    for (const SweepPoint& p : points) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%zu\n", p.lambda,
                      p.mean_per_class_accuracy, p.hubness_bound, p.nullified_modes);
        out << buf;
    }
    return out.str();
}

}  // namespace ipsae
