#include "crashwatch/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "crashwatch/common.hpp"
#include "json.hpp"

using nlohmann::json;

namespace crashwatch::corpus {

namespace {

void check_tweet(const Tweet& t, std::size_t line_no) {
  auto fail = [&](const std::string& why) {
    throw ValidationError("tweets line " + std::to_string(line_no) + ": " + why);
  };
  if (t.id.empty()) fail("empty id");
  if (t.time <= 0) fail("time must be positive");
  if (t.lat < -90.0 || t.lat > 90.0) fail("latitude out of range");
  if (t.lon < -180.0 || t.lon > 180.0) fail("longitude out of range");
  if (t.text.size() > 280) fail("text longer than 280 chars");
}

Tweet tweet_from_json(const json& j, std::size_t line_no) {
  Tweet t;
  try {
    t.id = j.at("id").get<std::string>();
    t.time = j.at("time").get<std::int64_t>();
    t.lat = j.at("lat").get<double>();
    t.lon = j.at("lon").get<double>();
    t.author = j.at("author").get<std::string>();
    t.text = j.at("text").get<std::string>();
  } catch (const json::exception& e) {
    throw ValidationError("tweets line " + std::to_string(line_no) + ": " + e.what());
  }
  check_tweet(t, line_no);
  return t;
}

json tweet_to_json(const Tweet& t) {
  return json{{"id", t.id},     {"time", t.time},     {"lat", t.lat},
              {"lon", t.lon},   {"author", t.author}, {"text", t.text}};
}

// Applies fn(parsed json, line_no) to each non-empty line.
template <typename Fn>
void for_each_jsonl(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded())
      throw ValidationError("tweets line " + std::to_string(line_no) + ": invalid JSON");
    fn(j, line_no);
  }
}

void check_unique_ids(const std::vector<std::string>& ids) {
  std::unordered_set<std::string> seen;
  for (const auto& id : ids)
    if (!seen.insert(id).second) throw ValidationError("duplicate tweet id: " + id);
}

std::vector<std::string> read_csv_header(std::istream& in, const std::filesystem::path& path) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty CSV: " + path.string());
  auto fields = split(trim(line), ',');
  for (auto& f : fields) f = to_lower(trim(f));
  return fields;
}

std::size_t field_index(const std::vector<std::string>& header, const std::string& name,
                        const std::filesystem::path& path) {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end())
    throw ValidationError(path.string() + ": missing CSV column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

double parse_double(const std::string& s, const std::string& what, std::size_t line_no) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("line " + std::to_string(line_no) + ": bad " + what + " '" + s + "'");
  }
}

}  // namespace

const char* kind_name(AccidentKind k) {
  switch (k) {
    case AccidentKind::kCollision: return "collision";
    case AccidentKind::kDisabledVehicle: return "disabled-vehicle";
    case AccidentKind::kVehicleOnFire: return "vehicle-on-fire";
  }
  return "?";
}

std::optional<AccidentKind> parse_kind(const std::string& name) {
  std::string s = to_lower(trim(name));
  for (char& c : s)
    if (c == ' ' || c == '_') c = '-';
  if (s == "collision") return AccidentKind::kCollision;
  if (s == "disabled-vehicle") return AccidentKind::kDisabledVehicle;
  if (s == "vehicle-on-fire") return AccidentKind::kVehicleOnFire;
  return std::nullopt;
}

std::vector<Tweet> load_tweets(const std::filesystem::path& path) {
  std::vector<Tweet> out;
  for_each_jsonl(path, [&](const json& j, std::size_t line_no) {
    out.push_back(tweet_from_json(j, line_no));
  });
  std::vector<std::string> ids;
  ids.reserve(out.size());
  for (const auto& t : out) ids.push_back(t.id);
  check_unique_ids(ids);
  return out;
}

std::vector<LabeledTweet> load_labeled_tweets(const std::filesystem::path& path) {
  std::vector<LabeledTweet> out;
  for_each_jsonl(path, [&](const json& j, std::size_t line_no) {
    LabeledTweet lt;
    lt.tweet = tweet_from_json(j, line_no);
    if (!j.contains("label"))
      throw ValidationError("tweets line " + std::to_string(line_no) + ": missing label");
    int label = j.at("label").get<int>();
    if (label != 0 && label != 1)
      throw ValidationError("tweets line " + std::to_string(line_no) + ": label must be 0 or 1");
    lt.label = label;
    out.push_back(std::move(lt));
  });
  std::vector<std::string> ids;
  ids.reserve(out.size());
  for (const auto& t : out) ids.push_back(t.tweet.id);
  check_unique_ids(ids);
  return out;
}

std::string labeled_tweets_jsonl(const std::vector<LabeledTweet>& tweets) {
  std::string out;
  for (const auto& lt : tweets) {
    json j = tweet_to_json(lt.tweet);
    j["label"] = lt.label;
    out += j.dump();
    out += '\n';
  }
  return out;
}

void save_labeled_tweets(const std::filesystem::path& path,
                         const std::vector<LabeledTweet>& tweets) {
  atomic_write(path, labeled_tweets_jsonl(tweets));
}

std::vector<AccidentRecord> load_accident_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path.string());
  auto header = read_csv_header(in, path);
  const std::size_t i_kind = field_index(header, "kind", path);
  const std::size_t i_lat = field_index(header, "lat", path);
  const std::size_t i_lon = field_index(header, "lon", path);
  const std::size_t i_start = field_index(header, "start", path);
  const std::size_t i_end = field_index(header, "end", path);
  const std::size_t i_roadway = field_index(header, "roadway", path);

  std::vector<AccidentRecord> out;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto f = split(line, ',');
    if (f.size() != header.size())
      throw ValidationError("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " fields");
    AccidentRecord r;
    auto kind = parse_kind(f[i_kind]);
    if (!kind)
      throw ValidationError("line " + std::to_string(line_no) + ": unknown accident kind '" +
                            trim(f[i_kind]) + "'");
    r.kind = *kind;
    r.lat = parse_double(trim(f[i_lat]), "lat", line_no);
    r.lon = parse_double(trim(f[i_lon]), "lon", line_no);
    if (r.lat < -90.0 || r.lat > 90.0)
      throw ValidationError("line " + std::to_string(line_no) + ": latitude out of range");
    if (r.lon < -180.0 || r.lon > 180.0)
      throw ValidationError("line " + std::to_string(line_no) + ": longitude out of range");
    r.start = parse_time_utc(f[i_start]);
    r.end = parse_time_utc(f[i_end]);
    if (r.end < r.start)
      throw ValidationError("line " + std::to_string(line_no) + ": end before start");
    r.roadway = trim(f[i_roadway]);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<DetectorObservation> load_detector_obs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path.string());
  auto header = read_csv_header(in, path);
  const std::size_t i_id = field_index(header, "detector_id", path);
  const std::size_t i_period = field_index(header, "period", path);
  const std::size_t i_occ = field_index(header, "occupancy", path);
  const std::size_t i_flow = field_index(header, "flow", path);
  const std::size_t i_lat = field_index(header, "lat", path);
  const std::size_t i_lon = field_index(header, "lon", path);

  std::vector<DetectorObservation> out;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto f = split(line, ',');
    if (f.size() != header.size())
      throw ValidationError("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " fields");
    DetectorObservation o;
    o.detector_id = trim(f[i_id]);
    if (o.detector_id.empty())
      throw ValidationError("line " + std::to_string(line_no) + ": empty detector_id");
    o.period = parse_time_utc(f[i_period]);
    o.occupancy = parse_double(trim(f[i_occ]), "occupancy", line_no);
    if (o.occupancy < 0.0 || o.occupancy > 1.0)
      throw ValidationError("line " + std::to_string(line_no) + ": occupancy out of [0,1]");
    o.flow = parse_double(trim(f[i_flow]), "flow", line_no);
    if (o.flow < 0.0)
      throw ValidationError("line " + std::to_string(line_no) + ": negative flow");
    o.lat = parse_double(trim(f[i_lat]), "lat", line_no);
    o.lon = parse_double(trim(f[i_lon]), "lon", line_no);
    out.push_back(std::move(o));
  }
  return out;
}

SignalSpec load_signal_spec(const std::filesystem::path& path) {
  json j = json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) throw ConfigError("invalid JSON in signal spec: " + path.string());
  SignalSpec spec;
  if (!j.contains("tokens") || !j["tokens"].is_object())
    throw ConfigError("signal spec needs a 'tokens' object");
  for (const auto& [token, probs] : j["tokens"].items()) {
    TokenSignal ts;
    ts.p_accident = probs.at("p_accident").get<double>();
    ts.p_nonaccident = probs.at("p_nonaccident").get<double>();
    spec.tokens.emplace_back(token, ts);
  }
  // nlohmann objects iterate in key order, which keeps emission order stable
  // across loads of the same file.
  spec.mention_prob = j.value("mention_prob", 0.0);
  spec.hashtag_prob = j.value("hashtag_prob", 0.0);
  spec.influential_author_prob = j.value("influential_author_prob", 0.0);
  spec.mention_names = j.value("mention_names", std::vector<std::string>{});
  spec.hashtag_names = j.value("hashtag_names", std::vector<std::string>{});
  spec.influential_names = j.value("influential_names", std::vector<std::string>{});
  return spec;
}

std::vector<LabeledTweet> synth_corpus(std::uint64_t seed, std::size_t n_accident,
                                       const SignalSpec& spec) {
  if (n_accident < 1) throw ConfigError("n_accident must be >= 1");
  for (const auto& [token, ts] : spec.tokens) {
    if (ts.p_accident < 0.0 || ts.p_accident > 1.0 || ts.p_nonaccident < 0.0 ||
        ts.p_nonaccident > 1.0)
      throw ConfigError("probability outside [0,1] for token '" + token + "'");
  }
  for (double p : {spec.mention_prob, spec.hashtag_prob, spec.influential_author_prob})
    if (p < 0.0 || p > 1.0) throw ConfigError("probability outside [0,1] in signal spec");

  Rng rng(seed);
  const std::size_t total = 3 * n_accident;
  std::vector<LabeledTweet> out;
  out.reserve(total);

  // Window of a week in Feb 2014; box over the NOVA area.
  const std::int64_t t0 = 1391990400;  // 2014-02-10 00:00 UTC
  const std::int64_t t1 = t0 + 7 * 86400;

  for (std::size_t i = 0; i < total; ++i) {
    const int label = i < n_accident ? 1 : 0;
    LabeledTweet lt;
    lt.label = label;

    std::string text;
    for (const auto& [token, ts] : spec.tokens) {
      const double p = label == 1 ? ts.p_accident : ts.p_nonaccident;
      if (rng.bernoulli(p)) {
        if (!text.empty()) text += ' ';
        text += token;
      }
    }
    if (!spec.mention_names.empty() && rng.bernoulli(spec.mention_prob)) {
      if (!text.empty()) text += ' ';
      text += '@';
      text += spec.mention_names[rng.below(spec.mention_names.size())];
    }
    if (!spec.hashtag_names.empty() && rng.bernoulli(spec.hashtag_prob)) {
      if (!text.empty()) text += ' ';
      text += '#';
      text += spec.hashtag_names[rng.below(spec.hashtag_names.size())];
    }
    while (text.size() > 280) {
      auto cut = text.rfind(' ');
      if (cut == std::string::npos) {
        text.resize(280);
        break;
      }
      text.resize(cut);
    }

    Tweet& t = lt.tweet;
    char id[32];
    std::snprintf(id, sizeof(id), "t%06zu", i);
    t.id = id;
    t.time = t0 + static_cast<std::int64_t>(rng.uniform() * static_cast<double>(t1 - t0));
    t.lat = rng.uniform(38.80, 39.00);
    t.lon = rng.uniform(-77.30, -77.10);
    if (!spec.influential_names.empty() && rng.bernoulli(spec.influential_author_prob)) {
      t.author = spec.influential_names[rng.below(spec.influential_names.size())];
    } else {
      t.author = "user" + std::to_string(rng.below(100000));
    }
    t.text = text;
    out.push_back(std::move(lt));
  }
  return out;
}

}  // namespace crashwatch::corpus
