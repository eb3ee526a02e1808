#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crashwatch/corpus.hpp"

namespace crashwatch::trafficval {

double haversine_miles(double lat1, double lon1, double lat2, double lon2);

struct TrafficSignature {
    std::string detector_id;
    std::vector<std::optional<double>> median_flow;  // one slot per occupancy bin
    double overall_median = 0.0;                     // imputation value for empty bins
};

// Bin j covers [j/N, (j+1)/N); the last bin also takes occupancy 1.0.
std::size_t occupancy_bin(double occupancy, std::size_t n_bins);

TrafficSignature build_signature(const std::vector<corpus::DetectorObservation>& obs,
                                 std::size_t n_bins);

// One signature per detector, sorted by detector id.
std::vector<TrafficSignature> signatures_by_detector(
    const std::vector<corpus::DetectorObservation>& obs, std::size_t n_bins);

struct ClusterModel {
    std::size_t k = 0;
    std::vector<std::vector<double>> centers;  // k x n_bins, mean member flow
    std::vector<std::vector<double>> spreads;  // k x n_bins, population std dev
    std::map<std::string, std::size_t> assignment;
    std::vector<double> aic_trace;  // one entry per candidate k starting at 1
};

// Seeded K-means over imputed signature vectors for k = 1..k_max, scored by
// AIC = m*ln(WCSS/m) + 2*k*d. Keeps the last k whose relative AIC
// improvement over k-1 reaches 3%.
ClusterModel fit_clusters_aic(const std::vector<TrafficSignature>& signatures,
                              std::size_t k_max, std::uint64_t seed);

// Phi(|z|) for z = (flow - center)/sigma; always in [0.5, 1).
double abnormal_degree(double flow, double center, double sigma);

struct AbnormalScore {
    std::string detector_id;
    long long period = 0;
    double value = 0.5;
    double lat = 0.0;
    double lon = 0.0;
};

std::vector<AbnormalScore> score_observations(const std::vector<corpus::DetectorObservation>& obs,
                                              const ClusterModel& model,
                                              std::size_t n_bins);

struct TweetNeighborhood {
    std::string tweet_id;
    std::vector<double> values;
    std::size_t n_detectors = 0;
    std::size_t n_periods = 0;
};

// Scores within radius_miles and +-window_hours of each tweet, both bounds
// closed. Empty neighborhoods mark the tweet unqualified.
std::vector<TweetNeighborhood> pair_tweets_detectors(const std::vector<corpus::Tweet>& tweets,
                                                     const std::vector<AbnormalScore>& scores,
                                                     double radius_miles,
                                                     double window_hours);

struct AggregateScore {
    double p_traffic = 0.0;  // mean
    double q_traffic = 0.0;  // 75th percentile, linear interpolation
};

AggregateScore aggregate_scores(const std::vector<double>& values);

enum class MatchPhase { kBefore, kDuring, kAfter, kUnmatched };

const char* phase_name(MatchPhase phase);

struct MatchResult {
    std::string tweet_id;
    bool matched = false;
    std::size_t record_index = 0;
    double distance_miles = 0.0;
    double time_offset_minutes = 0.0;  // tweet time minus record start
    MatchPhase phase = MatchPhase::kUnmatched;
};

// Candidates must sit within max_miles and inside the record's time
// envelope [start - max_hours, end + max_hours]; nearest wins, ties broken
// by earlier start then roadway id.
std::vector<MatchResult> map_match_log(const std::vector<corpus::Tweet>& tweets,
                                       const std::vector<corpus::AccidentRecord>& log,
                                       double max_miles, double max_hours);

}  // namespace crashwatch::trafficval
