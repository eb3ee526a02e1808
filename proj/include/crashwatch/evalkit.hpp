#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace crashwatch::evalkit {

struct ConfusionCounts {
    long long tp = 0;
    long long fp = 0;
    long long fn = 0;
    long long tn = 0;

    long long total() const { return tp + fp + fn + tn; }
};

struct Metrics {
    ConfusionCounts confusion;
    double accuracy = 0.0;
    // A zero denominator leaves the precision unset rather than coercing
    // it to 0, so degenerate classifiers stay visible in reports.
    std::optional<double> precision_accident;
    std::optional<double> precision_nonaccident;
};

struct FoldPlan {
    std::size_t k = 0;
    std::vector<std::size_t> assignments;  // per-example fold index in [0,k)
};

FoldPlan kfold_split(std::size_t n, std::size_t k, std::uint64_t seed);

Metrics metrics_from_counts(const ConfusionCounts& c);
Metrics classification_metrics(const std::vector<int>& truth, const std::vector<int>& pred);

struct CvReport {
    std::vector<Metrics> per_fold;
    double mean_accuracy = 0.0;
    std::optional<double> mean_precision_accident;
    std::optional<double> mean_precision_nonaccident;
    std::size_t excluded_undefined = 0;  // undefined precisions left out of the means
};

// Trains on the first index list, returns predictions for the second.
using FoldTrainer = std::function<std::vector<int>(const std::vector<std::size_t>&,
                                                   const std::vector<std::size_t>&)>;

// Each fold serves as the test split once. When a fold plan leaves a
// training split single-class, the plan is redrawn from a derived seed up
// to max_retries times.
CvReport cross_validate(const std::vector<int>& labels, const FoldTrainer& trainer,
                        std::size_t k, std::uint64_t seed, std::size_t max_retries = 10);

std::string metrics_report_json(const CvReport& report);

}  // namespace crashwatch::evalkit
