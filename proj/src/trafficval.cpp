#include "crashwatch/trafficval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "crashwatch/common.hpp"

namespace crashwatch::trafficval {

namespace {

constexpr double kEarthRadiusMiles = 3958.8;
constexpr double kPi = 3.14159265358979323846;

double deg2rad(double d) { return d * kPi / 180.0; }

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

double haversine_miles(double lat1, double lon1, double lat2, double lon2) {
    if (lat1 < -90 || lat1 > 90 || lat2 < -90 || lat2 > 90 ||
        lon1 < -180 || lon1 > 180 || lon2 < -180 || lon2 > 180)
        throw ValidationError("coordinates out of range");
    const double p1 = deg2rad(lat1), p2 = deg2rad(lat2);
    const double dp = deg2rad(lat2 - lat1), dl = deg2rad(lon2 - lon1);
    const double a = std::sin(dp / 2) * std::sin(dp / 2) +
                     std::cos(p1) * std::cos(p2) * std::sin(dl / 2) * std::sin(dl / 2);
    return 2.0 * kEarthRadiusMiles * std::asin(std::min(1.0, std::sqrt(a)));
}

std::size_t occupancy_bin(double occupancy, std::size_t n_bins) {
    if (occupancy < 0.0 || occupancy > 1.0)
        throw ValidationError("occupancy out of range");
    const auto j = static_cast<std::size_t>(occupancy * static_cast<double>(n_bins));
    return std::min(j, n_bins - 1);
}

TrafficSignature build_signature(const std::vector<corpus::DetectorObservation>& obs,
                                 std::size_t n_bins) {
    if (n_bins < 2) throw ConfigError("n_bins must be at least 2");
    if (obs.empty()) throw ValidationError("detector has no observations");
    TrafficSignature sig;
    sig.detector_id = obs.front().detector_id;
    std::vector<std::vector<double>> per_bin(n_bins);
    std::vector<double> all;
    all.reserve(obs.size());
    for (const auto& o : obs) {
        if (o.detector_id != sig.detector_id)
            throw ValidationError("observations span multiple detectors");
        per_bin[occupancy_bin(o.occupancy, n_bins)].push_back(o.flow);
        all.push_back(o.flow);
    }
    sig.median_flow.resize(n_bins);
    for (std::size_t j = 0; j < n_bins; ++j)
        if (!per_bin[j].empty()) sig.median_flow[j] = median_of(per_bin[j]);
    sig.overall_median = median_of(all);
    return sig;
}

std::vector<TrafficSignature> signatures_by_detector(
    const std::vector<corpus::DetectorObservation>& obs, std::size_t n_bins) {
    std::map<std::string, std::vector<corpus::DetectorObservation>> grouped;
    for (const auto& o : obs) grouped[o.detector_id].push_back(o);
    std::vector<TrafficSignature> out;
    out.reserve(grouped.size());
    for (const auto& [id, group] : grouped) out.push_back(build_signature(group, n_bins));
    return out;
}

namespace {

std::vector<double> imputed_vector(const TrafficSignature& sig) {
    std::vector<double> v(sig.median_flow.size());
    for (std::size_t j = 0; j < v.size(); ++j)
        v[j] = sig.median_flow[j].value_or(sig.overall_median);
    return v;
}

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        acc += d * d;
    }
    return acc;
}

struct KMeansRun {
    std::vector<std::vector<double>> centers;
    std::vector<std::size_t> assignment;
    double wcss = 0.0;
};

KMeansRun lloyd(const std::vector<std::vector<double>>& points, std::size_t k, Rng& rng) {
    const std::size_t m = points.size();
    const std::size_t d = points.front().size();
    constexpr std::size_t kMaxIters = 100;

    // distinct starting points
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;
    rng.shuffle(order);
    KMeansRun run;
    run.centers.reserve(k);
    for (std::size_t c = 0; c < k; ++c) run.centers.push_back(points[order[c]]);
    run.assignment.assign(m, 0);

    for (std::size_t iter = 0; iter < kMaxIters; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < m; ++i) {
            std::size_t best = 0;
            double best_d = sq_dist(points[i], run.centers[0]);
            for (std::size_t c = 1; c < k; ++c) {
                const double dist = sq_dist(points[i], run.centers[c]);
                if (dist < best_d) { best_d = dist; best = c; }
            }
            if (run.assignment[i] != best) { run.assignment[i] = best; changed = true; }
        }
        std::vector<std::vector<double>> sums(k, std::vector<double>(d, 0.0));
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < m; ++i) {
            ++counts[run.assignment[i]];
            for (std::size_t j = 0; j < d; ++j) sums[run.assignment[i]][j] += points[i][j];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                // revive an empty cluster at the point farthest from its center
                std::size_t far = 0;
                double far_d = -1.0;
                for (std::size_t i = 0; i < m; ++i) {
                    const double dist = sq_dist(points[i], run.centers[run.assignment[i]]);
                    if (dist > far_d) { far_d = dist; far = i; }
                }
                run.centers[c] = points[far];
                changed = true;
            } else {
                for (std::size_t j = 0; j < d; ++j)
                    run.centers[c][j] = sums[c][j] / static_cast<double>(counts[c]);
            }
        }
        if (!changed && iter > 0) break;
    }
    run.wcss = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        run.wcss += sq_dist(points[i], run.centers[run.assignment[i]]);
    return run;
}

KMeansRun best_of_restarts(const std::vector<std::vector<double>>& points,
                           std::size_t k, Rng& rng) {
    constexpr std::size_t kRestarts = 8;
    KMeansRun best;
    best.wcss = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < kRestarts; ++r) {
        KMeansRun run = lloyd(points, k, rng);
        if (run.wcss < best.wcss) best = std::move(run);
    }
    return best;
}

}  // namespace

ClusterModel fit_clusters_aic(const std::vector<TrafficSignature>& signatures,
                              std::size_t k_max, std::uint64_t seed) {
    if (k_max < 1) throw ConfigError("k_max must be at least 1");
    if (signatures.size() < 2)
        throw ValidationError("clustering needs at least two detectors");

    const std::size_t m = signatures.size();
    const std::size_t d = signatures.front().median_flow.size();
    std::vector<std::vector<double>> points;
    points.reserve(m);
    for (const auto& sig : signatures) {
        if (sig.median_flow.size() != d)
            throw ValidationError("signatures have mismatched bin grids");
        points.push_back(imputed_vector(sig));
    }
    k_max = std::min(k_max, m);

    Rng rng(seed);
    auto aic_of = [&](double wcss, std::size_t k) {
        const double floored = std::max(wcss, 1e-12);
        return static_cast<double>(m) * std::log(floored / static_cast<double>(m)) +
               2.0 * static_cast<double>(k) * static_cast<double>(d);
    };

    std::vector<double> trace;
    std::vector<KMeansRun> runs;
    std::size_t selected = 0;
    for (std::size_t k = 1; k <= k_max; ++k) {
        runs.push_back(best_of_restarts(points, k, rng));
        trace.push_back(aic_of(runs.back().wcss, k));
        if (k == 1) {
            selected = 1;
            continue;
        }
        const double prev = trace[k - 2];
        const double improvement = (prev - trace[k - 1]) / std::max(std::fabs(prev), 1e-12);
        if (improvement >= 0.03) {
            selected = k;
        } else {
            break;  // diminishing returns; keep the last qualifying k
        }
    }

    const KMeansRun& chosen = runs[selected - 1];
    ClusterModel model;
    model.k = selected;
    model.aic_trace = trace;
    model.centers.assign(selected, std::vector<double>(d, 0.0));
    model.spreads.assign(selected, std::vector<double>(d, 0.0));
    std::vector<std::size_t> counts(selected, 0);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t c = chosen.assignment[i];
        model.assignment[signatures[i].detector_id] = c;
        ++counts[c];
        for (std::size_t j = 0; j < d; ++j) model.centers[c][j] += points[i][j];
    }
    for (std::size_t c = 0; c < selected; ++c)
        for (std::size_t j = 0; j < d; ++j)
            model.centers[c][j] /= static_cast<double>(counts[c]);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t c = chosen.assignment[i];
        for (std::size_t j = 0; j < d; ++j) {
            const double dv = points[i][j] - model.centers[c][j];
            model.spreads[c][j] += dv * dv;
        }
    }
    for (std::size_t c = 0; c < selected; ++c)
        for (std::size_t j = 0; j < d; ++j)
            model.spreads[c][j] = std::sqrt(model.spreads[c][j] / static_cast<double>(counts[c]));
    return model;
}

double abnormal_degree(double flow, double center, double sigma) {
    if (!(sigma > 0.0)) throw ValidationError("degenerate bin spread");
    const double z = std::fabs((flow - center) / sigma);
    const double p = 0.5 * (1.0 + std::erf(z / std::sqrt(2.0)));
    // erf rounds to 1 past |z| ~ 8.3; the score range stays half-open
    return std::min(p, std::nextafter(1.0, 0.0));
}

std::vector<AbnormalScore> score_observations(const std::vector<corpus::DetectorObservation>& obs,
                                              const ClusterModel& model,
                                              std::size_t n_bins) {
    std::vector<AbnormalScore> out;
    out.reserve(obs.size());
    for (const auto& o : obs) {
        const auto it = model.assignment.find(o.detector_id);
        if (it == model.assignment.end())
            throw ValidationError("detector not in cluster model: " + o.detector_id);
        const std::size_t c = it->second;
        const std::size_t bin = occupancy_bin(o.occupancy, n_bins);
        AbnormalScore s;
        s.detector_id = o.detector_id;
        s.period = o.period;
        s.value = abnormal_degree(o.flow, model.centers[c][bin], model.spreads[c][bin]);
        s.lat = o.lat;
        s.lon = o.lon;
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<TweetNeighborhood> pair_tweets_detectors(const std::vector<corpus::Tweet>& tweets,
                                                     const std::vector<AbnormalScore>& scores,
                                                     double radius_miles,
                                                     double window_hours) {
    if (!(radius_miles > 0)) throw ConfigError("radius must be positive");
    if (!(window_hours > 0)) throw ConfigError("time window must be positive");
    const double window_seconds = window_hours * 3600.0;
    std::vector<TweetNeighborhood> out;
    out.reserve(tweets.size());
    for (const auto& tw : tweets) {
        TweetNeighborhood nb;
        nb.tweet_id = tw.id;
        std::set<std::string> detectors;
        std::set<long long> periods;
        for (const auto& s : scores) {
            if (std::fabs(static_cast<double>(s.period - tw.time)) > window_seconds) continue;
            if (haversine_miles(tw.lat, tw.lon, s.lat, s.lon) > radius_miles) continue;
            nb.values.push_back(s.value);
            detectors.insert(s.detector_id);
            periods.insert(s.period);
        }
        nb.n_detectors = detectors.size();
        nb.n_periods = periods.size();
        out.push_back(std::move(nb));
    }
    return out;
}

AggregateScore aggregate_scores(const std::vector<double>& values) {
    if (values.empty()) throw ValidationError("empty score neighborhood");
    AggregateScore agg;
    double sum = 0.0;
    for (double v : values) sum += v;
    agg.p_traffic = sum / static_cast<double>(values.size());
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const double rank = static_cast<double>(sorted.size() - 1) * 0.75;
    const auto lo = static_cast<std::size_t>(rank);
    const double frac = rank - static_cast<double>(lo);
    agg.q_traffic = (lo + 1 < sorted.size())
                        ? sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
                        : sorted[lo];
    return agg;
}

const char* phase_name(MatchPhase phase) {
    switch (phase) {
        case MatchPhase::kBefore: return "before";
        case MatchPhase::kDuring: return "during";
        case MatchPhase::kAfter: return "after";
        case MatchPhase::kUnmatched: return "unmatched";
    }
    return "unmatched";
}

std::vector<MatchResult> map_match_log(const std::vector<corpus::Tweet>& tweets,
                                       const std::vector<corpus::AccidentRecord>& log,
                                       double max_miles, double max_hours) {
    if (!(max_miles > 0)) throw ConfigError("distance threshold must be positive");
    if (!(max_hours > 0)) throw ConfigError("time threshold must be positive");
    const double slack = max_hours * 3600.0;
    std::vector<MatchResult> out;
    out.reserve(tweets.size());
    for (const auto& tw : tweets) {
        MatchResult r;
        r.tweet_id = tw.id;
        bool found = false;
        double best_dist = 0.0;
        std::size_t best_idx = 0;
        for (std::size_t i = 0; i < log.size(); ++i) {
            const corpus::AccidentRecord& rec = log[i];
            const double t = static_cast<double>(tw.time);
            if (t < static_cast<double>(rec.start) - slack ||
                t > static_cast<double>(rec.end) + slack)
                continue;
            const double dist = haversine_miles(tw.lat, tw.lon, rec.lat, rec.lon);
            if (dist > max_miles) continue;
            bool better = !found;
            if (found && dist != best_dist) better = dist < best_dist;
            if (found && dist == best_dist) {
                const corpus::AccidentRecord& cur = log[best_idx];
                if (rec.start != cur.start) better = rec.start < cur.start;
                else better = rec.roadway < cur.roadway;
            }
            if (better) {
                found = true;
                best_dist = dist;
                best_idx = i;
            }
        }
        if (found) {
            const corpus::AccidentRecord& rec = log[best_idx];
            r.matched = true;
            r.record_index = best_idx;
            r.distance_miles = best_dist;
            r.time_offset_minutes = static_cast<double>(tw.time - rec.start) / 60.0;
            if (tw.time < rec.start) r.phase = MatchPhase::kBefore;
            else if (tw.time <= rec.end) r.phase = MatchPhase::kDuring;
            else r.phase = MatchPhase::kAfter;
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace crashwatch::trafficval
