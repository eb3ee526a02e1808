#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace crashwatch::corpus {

struct Tweet {
  std::string id;
  std::int64_t time = 0;  // UTC epoch seconds
  double lat = 0.0;
  double lon = 0.0;
  std::string author;
  std::string text;
};

struct LabeledTweet {
  Tweet tweet;
  int label = 0;  // 1 = accident, 0 = non-accident
};

enum class AccidentKind { kCollision, kDisabledVehicle, kVehicleOnFire };

struct AccidentRecord {
  AccidentKind kind = AccidentKind::kCollision;
  double lat = 0.0;
  double lon = 0.0;
  std::int64_t start = 0;  // UTC epoch seconds
  std::int64_t end = 0;
  std::string roadway;
};

struct DetectorObservation {
  std::string detector_id;
  std::int64_t period = 0;  // period start, UTC epoch seconds
  double occupancy = 0.0;   // [0, 1]
  double flow = 0.0;        // vehicles/hour
  double lat = 0.0;
  double lon = 0.0;
};

const char* kind_name(AccidentKind k);
std::optional<AccidentKind> parse_kind(const std::string& name);

// tweets.jsonl: one object per line, keys id, time, lat, lon, author, text
// (optional "label" for labeled corpora). Malformed records raise
// ValidationError naming the line number.
std::vector<Tweet> load_tweets(const std::filesystem::path& path);
std::vector<LabeledTweet> load_labeled_tweets(const std::filesystem::path& path);
std::string labeled_tweets_jsonl(const std::vector<LabeledTweet>& tweets);
void save_labeled_tweets(const std::filesystem::path& path, const std::vector<LabeledTweet>& tweets);

// accidents.csv: header kind,lat,lon,start,end,roadway
std::vector<AccidentRecord> load_accident_log(const std::filesystem::path& path);

// detectors.csv: header detector_id,period,occupancy,flow,lat,lon
std::vector<DetectorObservation> load_detector_obs(const std::filesystem::path& path);

struct TokenSignal {
  double p_accident = 0.0;
  double p_nonaccident = 0.0;
};

// Class-conditional token table plus optional decoration knobs. Token order
// is the emission order inside a generated tweet.
struct SignalSpec {
  std::vector<std::pair<std::string, TokenSignal>> tokens;
  double mention_prob = 0.0;
  double hashtag_prob = 0.0;
  double influential_author_prob = 0.0;
  std::vector<std::string> mention_names;
  std::vector<std::string> hashtag_names;
  std::vector<std::string> influential_names;
};

SignalSpec load_signal_spec(const std::filesystem::path& path);

// n_accident tweets labeled 1 followed by 2*n_accident labeled 0; pure
// function of (seed, n_accident, spec).
std::vector<LabeledTweet> synth_corpus(std::uint64_t seed, std::size_t n_accident,
                                       const SignalSpec& spec);

}  // namespace crashwatch::corpus
