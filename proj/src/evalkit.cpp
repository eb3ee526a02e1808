#include "crashwatch/evalkit.hpp"

#include <algorithm>
#include <numeric>

#include "crashwatch/common.hpp"
#include "json.hpp"

namespace crashwatch::evalkit {

FoldPlan kfold_split(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw ConfigError("fold count must be at least 2");
    if (k > n) throw ValidationError("fold count exceeds example count");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(order);
    FoldPlan plan;
    plan.k = k;
    plan.assignments.resize(n);
    for (std::size_t pos = 0; pos < n; ++pos)
        plan.assignments[order[pos]] = pos % k;
    return plan;
}

Metrics metrics_from_counts(const ConfusionCounts& c) {
    if (c.total() <= 0) throw ValidationError("metrics need at least one example");
    Metrics m;
    m.confusion = c;
    m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
    if (c.tp + c.fp > 0)
        m.precision_accident = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    if (c.tn + c.fn > 0)
        m.precision_nonaccident = static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fn);
    return m;
}

Metrics classification_metrics(const std::vector<int>& truth, const std::vector<int>& pred) {
    if (truth.size() != pred.size())
        throw ValidationError("truth and prediction lengths differ");
    if (truth.empty()) throw ValidationError("metrics need at least one example");
    ConfusionCounts c;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool t = truth[i] != 0;
        const bool p = pred[i] != 0;
        if (t && p) ++c.tp;
        else if (t) ++c.fn;
        else if (p) ++c.fp;
        else ++c.tn;
    }
    return metrics_from_counts(c);
}

namespace {

bool plan_has_degenerate_split(const FoldPlan& plan, const std::vector<int>& labels) {
    for (std::size_t fold = 0; fold < plan.k; ++fold) {
        bool has0 = false, has1 = false;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (plan.assignments[i] == fold) continue;  // test example
            if (labels[i]) has1 = true;
            else has0 = true;
        }
        if (!has0 || !has1) return true;
    }
    return false;
}

}  // namespace

CvReport cross_validate(const std::vector<int>& labels, const FoldTrainer& trainer,
                        std::size_t k, std::uint64_t seed, std::size_t max_retries) {
    const std::size_t n = labels.size();
    FoldPlan plan;
    bool usable = false;
    for (std::size_t attempt = 0; attempt <= max_retries; ++attempt) {
        plan = kfold_split(n, k, seed + attempt);
        if (!plan_has_degenerate_split(plan, labels)) {
            usable = true;
            break;
        }
    }
    if (!usable) throw ValidationError("class-degenerate folds");

    CvReport report;
    double acc_sum = 0.0, pa_sum = 0.0, pn_sum = 0.0;
    std::size_t pa_n = 0, pn_n = 0;
    for (std::size_t fold = 0; fold < k; ++fold) {
        std::vector<std::size_t> train_idx, test_idx;
        for (std::size_t i = 0; i < n; ++i)
            (plan.assignments[i] == fold ? test_idx : train_idx).push_back(i);
        const std::vector<int> pred = trainer(train_idx, test_idx);
        if (pred.size() != test_idx.size())
            throw ValidationError("trainer returned wrong prediction count");
        std::vector<int> truth(test_idx.size());
        for (std::size_t i = 0; i < test_idx.size(); ++i) truth[i] = labels[test_idx[i]];
        const Metrics m = classification_metrics(truth, pred);
        acc_sum += m.accuracy;
        if (m.precision_accident) { pa_sum += *m.precision_accident; ++pa_n; }
        else ++report.excluded_undefined;
        if (m.precision_nonaccident) { pn_sum += *m.precision_nonaccident; ++pn_n; }
        else ++report.excluded_undefined;
        report.per_fold.push_back(m);
    }
    report.mean_accuracy = acc_sum / static_cast<double>(k);
    if (pa_n) report.mean_precision_accident = pa_sum / static_cast<double>(pa_n);
    if (pn_n) report.mean_precision_nonaccident = pn_sum / static_cast<double>(pn_n);
    return report;
}

namespace {

nlohmann::ordered_json metrics_json(const Metrics& m) {
    nlohmann::ordered_json j;
    j["tp"] = m.confusion.tp;
    j["fp"] = m.confusion.fp;
    j["fn"] = m.confusion.fn;
    j["tn"] = m.confusion.tn;
    j["accuracy"] = m.accuracy;
    j["precision_accident"] =
        m.precision_accident ? nlohmann::ordered_json(*m.precision_accident)
                             : nlohmann::ordered_json(nullptr);
    j["precision_nonaccident"] =
        m.precision_nonaccident ? nlohmann::ordered_json(*m.precision_nonaccident)
                                : nlohmann::ordered_json(nullptr);
    return j;
}

}  // namespace

std::string metrics_report_json(const CvReport& report) {
    nlohmann::ordered_json j;
    j["per_fold"] = nlohmann::ordered_json::array();
    for (const Metrics& m : report.per_fold) j["per_fold"].push_back(metrics_json(m));
    nlohmann::ordered_json mean;
    mean["accuracy"] = report.mean_accuracy;
    mean["precision_accident"] =
        report.mean_precision_accident ? nlohmann::ordered_json(*report.mean_precision_accident)
                                       : nlohmann::ordered_json(nullptr);
    mean["precision_nonaccident"] =
        report.mean_precision_nonaccident
            ? nlohmann::ordered_json(*report.mean_precision_nonaccident)
            : nlohmann::ordered_json(nullptr);
    j["mean"] = std::move(mean);
    j["excluded_undefined"] = report.excluded_undefined;
    return j.dump(2) + "\n";
}

}  // namespace crashwatch::evalkit
