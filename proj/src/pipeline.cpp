#include "crashwatch/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#include "crashwatch/common.hpp"
#include "crashwatch/corpus.hpp"
#include "crashwatch/evalkit.hpp"
#include "crashwatch/featsel.hpp"
#include "crashwatch/textpipe.hpp"
#include "crashwatch/trafficval.hpp"
#include "json.hpp"

namespace crashwatch::pipeline {

namespace fs = std::filesystem;

namespace {

double parse_double_value(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + ": not a number: " + value);
    }
}

std::uint64_t parse_count_value(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size() || v < 0) throw std::invalid_argument(value);
        return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + ": not a nonnegative integer: " + value);
    }
}

std::vector<std::size_t> parse_size_list(const std::string& key, const std::string& value) {
    std::vector<std::size_t> out;
    for (const std::string& part : split(value, ',')) {
        const std::string item = trim(part);
        if (item.empty()) continue;
        out.push_back(static_cast<std::size_t>(parse_count_value(key, item)));
    }
    if (out.empty()) throw ConfigError("config key " + key + ": empty list");
    return out;
}

void apply_key(PipelineConfig& c, const std::string& section, const std::string& key,
               const std::string& value) {
    const std::string full = section + "." + key;
    if (full == "paths.tweets") c.tweets = value;
    else if (full == "paths.accident_log") c.accident_log = value;
    else if (full == "paths.detectors") c.detectors = value;
    else if (full == "paths.stopwords") c.stopwords = value;
    else if (full == "paths.vocab") c.vocab = value;
    else if (full == "paths.influential") c.influential = value;
    else if (full == "paths.misspellings") c.misspellings = value;
    else if (full == "paths.signal") c.signal = value;
    else if (full == "featsel.phi_min") c.phi_min = parse_double_value(full, value);
    else if (full == "featsel.supp_min") c.supp_min = parse_double_value(full, value);
    else if (full == "featsel.conf_min") c.conf_min = parse_double_value(full, value);
    else if (full == "train.model") c.model = value;
    else if (full == "train.hidden") c.hidden = parse_size_list(full, value);
    else if (full == "train.lstm_hidden")
        c.lstm_hidden = static_cast<std::size_t>(parse_count_value(full, value));
    else if (full == "train.alpha") c.alpha = parse_double_value(full, value);
    else if (full == "train.loss_threshold") c.loss_threshold = parse_double_value(full, value);
    else if (full == "train.max_epochs")
        c.max_epochs = static_cast<std::size_t>(parse_count_value(full, value));
    else if (full == "train.init_scale") c.init_scale = parse_double_value(full, value);
    else if (full == "evaluate.folds")
        c.folds = static_cast<std::size_t>(parse_count_value(full, value));
    else if (full == "validate.log_max_miles") c.log_max_miles = parse_double_value(full, value);
    else if (full == "validate.log_max_hours") c.log_max_hours = parse_double_value(full, value);
    else if (full == "validate.detector_radius_miles")
        c.detector_radius_miles = parse_double_value(full, value);
    else if (full == "validate.detector_window_hours")
        c.detector_window_hours = parse_double_value(full, value);
    else if (full == "validate.probability_cut")
        c.probability_cut = parse_double_value(full, value);
    else if (full == "validate.n_bins")
        c.n_bins = static_cast<std::size_t>(parse_count_value(full, value));
    else if (full == "validate.k_max")
        c.k_max = static_cast<std::size_t>(parse_count_value(full, value));
    else if (full == "synth.n_accident")
        c.n_accident = static_cast<std::size_t>(parse_count_value(full, value));
    else if (full == "run.seed") c.seed = parse_count_value(full, value);
    else if (full == "run.out_dir") c.out_dir = value;
    else throw ConfigError("unknown config key: " + full);
}

}  // namespace

PipelineConfig parse_config_text(const std::string& text) {
    PipelineConfig config;
    std::istringstream in(text);
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": unclosed section");
            section = to_lower(trim(t.substr(1, t.size() - 2)));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = to_lower(trim(t.substr(0, eq)));
        const std::string value = trim(t.substr(eq + 1));
        if (section.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": key outside a section");
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        apply_key(config, section, key, value);
    }
    return config;
}

PipelineConfig load_config(const fs::path& path) {
    return parse_config_text(read_file(path));
}

void validate_config(const PipelineConfig& c) {
    if (!(c.phi_min >= 0)) throw ConfigError("phi_min must be nonnegative");
    if (!(c.supp_min > 0 && c.supp_min <= 1)) throw ConfigError("supp_min must be in (0,1]");
    if (!(c.conf_min >= 0 && c.conf_min <= 1)) throw ConfigError("conf_min must be in [0,1]");
    if (c.model != "mlp" && c.model != "lstm")
        throw ConfigError("model must be mlp or lstm");
    if (c.hidden.empty()) throw ConfigError("hidden layer list must not be empty");
    for (std::size_t h : c.hidden)
        if (h == 0) throw ConfigError("hidden layer widths must be positive");
    if (c.lstm_hidden == 0) throw ConfigError("lstm_hidden must be positive");
    if (!(c.alpha > 0)) throw ConfigError("alpha must be positive");
    if (c.max_epochs < 1) throw ConfigError("max_epochs must be at least 1");
    if (!(c.init_scale >= 0)) throw ConfigError("init_scale must be nonnegative");
    if (c.folds < 2) throw ConfigError("folds must be at least 2");
    if (!(c.log_max_miles > 0)) throw ConfigError("log_max_miles must be positive");
    if (!(c.log_max_hours > 0)) throw ConfigError("log_max_hours must be positive");
    if (!(c.detector_radius_miles > 0))
        throw ConfigError("detector_radius_miles must be positive");
    if (!(c.detector_window_hours > 0))
        throw ConfigError("detector_window_hours must be positive");
    if (!(c.probability_cut >= 0 && c.probability_cut <= 1))
        throw ConfigError("probability_cut must be in [0,1]");
    if (c.n_bins < 2) throw ConfigError("n_bins must be at least 2");
    if (c.k_max < 1) throw ConfigError("k_max must be at least 1");
    if (c.n_accident < 1) throw ConfigError("n_accident must be at least 1");
    if (c.out_dir.empty()) throw ConfigError("out_dir must not be empty");
}

namespace {

fs::path artifact(const PipelineConfig& c, const char* name) {
    return fs::path(c.out_dir) / name;
}

neuralnet::TrainConfig train_config_of(const PipelineConfig& c) {
    neuralnet::TrainConfig tc;
    tc.alpha = c.alpha;
    tc.loss_threshold = c.loss_threshold;
    tc.max_epochs = c.max_epochs;
    tc.seed = c.seed;
    tc.init_scale = c.init_scale;
    return tc;
}

// One preprocessed tweet: surviving metadata plus its ordered stemmed tokens.
struct TokenRow {
    corpus::Tweet tweet;
    int label = 0;
    std::vector<std::string> tokens;
    std::vector<std::string> mentions;
    std::vector<std::string> hashtags;
};

std::string token_rows_jsonl(const std::vector<TokenRow>& rows) {
    std::string out;
    for (const TokenRow& r : rows) {
        nlohmann::ordered_json j;
        j["id"] = r.tweet.id;
        j["time"] = r.tweet.time;
        j["lat"] = r.tweet.lat;
        j["lon"] = r.tweet.lon;
        j["author"] = r.tweet.author;
        j["label"] = r.label;
        j["tokens"] = r.tokens;
        j["mentions"] = r.mentions;
        j["hashtags"] = r.hashtags;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::vector<TokenRow> load_token_rows(const fs::path& path) {
    const std::string text = read_file(path);
    std::vector<TokenRow> rows;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError("tokens line " + std::to_string(lineno) + ": bad JSON: " +
                                  e.what());
        }
        TokenRow r;
        try {
            r.tweet.id = j.at("id").get<std::string>();
            r.tweet.time = j.at("time").get<std::int64_t>();
            r.tweet.lat = j.at("lat").get<double>();
            r.tweet.lon = j.at("lon").get<double>();
            r.tweet.author = j.at("author").get<std::string>();
            r.label = j.at("label").get<int>();
            r.tokens = j.at("tokens").get<std::vector<std::string>>();
            r.mentions = j.at("mentions").get<std::vector<std::string>>();
            r.hashtags = j.at("hashtags").get<std::vector<std::string>>();
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError("tokens line " + std::to_string(lineno) + ": missing field: " +
                                  e.what());
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<std::vector<double>> dense_rows(const textpipe::BinaryFeatureMatrix& m) {
    std::vector<std::vector<double>> rows(m.rows(), std::vector<double>(m.cols(), 0.0));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m.cell(i, j)) rows[i][j] = 1.0;
    return rows;
}

// Token sequences restricted to the selected individual features, in tweet
// order, as indices into the feature list.
std::vector<std::vector<std::size_t>> feature_sequences(
    const std::vector<TokenRow>& rows, const featsel::FeatureSet& fset) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < fset.individual.size(); ++i)
        index[fset.individual[i].token] = i;
    std::vector<std::vector<std::size_t>> seqs;
    seqs.reserve(rows.size());
    for (const TokenRow& r : rows) {
        std::vector<std::size_t> seq;
        for (const std::string& tok : r.tokens) {
            const auto it = index.find(tok);
            if (it != index.end()) seq.push_back(it->second);
        }
        seqs.push_back(std::move(seq));
    }
    return seqs;
}

int majority_label(const std::vector<int>& labels) {
    long long ones = 0;
    for (int y : labels) ones += y != 0;
    return 2 * ones > static_cast<long long>(labels.size()) ? 1 : 0;
}

struct LoadedModel {
    std::string kind;
    neuralnet::MLPParams mlp;
    neuralnet::LSTMParams lstm;
    featsel::FeatureSet fset;
    int majority = 0;
};

LoadedModel load_model(const fs::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("model: bad JSON: " + std::string(e.what()));
    }
    LoadedModel m;
    try {
        m.kind = j.at("kind").get<std::string>();
        m.fset = featsel::parse_feature_set_json(j.at("feature_set").dump());
        m.majority = j.at("majority_label").get<int>();
        if (m.kind == "mlp")
            m.mlp = neuralnet::parse_mlp_params_json(j.at("params").dump());
        else if (m.kind == "lstm")
            m.lstm = neuralnet::parse_lstm_params_json(j.at("params").dump());
        else
            throw ValidationError("model: unknown kind " + m.kind);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("model: missing field: " + std::string(e.what()));
    }
    return m;
}

// Applies the saved classifier to every preprocessed tweet.
std::vector<int> predict_all(const LoadedModel& model,
                             const textpipe::BinaryFeatureMatrix& matrix,
                             const std::vector<TokenRow>& rows) {
    std::vector<int> pred;
    if (model.kind == "mlp") {
        const auto assembled = featsel::assemble_feature_matrix(matrix, model.fset);
        const auto X = dense_rows(assembled);
        pred.reserve(X.size());
        for (const auto& x : X) pred.push_back(neuralnet::mlp_predict(model.mlp, x));
    } else {
        const auto seqs = feature_sequences(rows, model.fset);
        pred.reserve(seqs.size());
        for (const auto& s : seqs)
            pred.push_back(s.empty() ? model.majority : neuralnet::lstm_predict(model.lstm, s));
    }
    return pred;
}

struct Detections {
    std::vector<corpus::Tweet> tweets;  // predicted accident-related
    std::size_t n_total = 0;
};

Detections detect_tweets(const PipelineConfig& config) {
    const LoadedModel model = load_model(artifact(config, "model.json"));
    const auto matrix = textpipe::load_matrix_csv(artifact(config, "matrix.csv"));
    const auto rows = load_token_rows(artifact(config, "tokens.jsonl"));
    if (rows.size() != matrix.rows())
        throw ValidationError("tokens.jsonl and matrix.csv row counts differ");
    const std::vector<int> pred = predict_all(model, matrix, rows);
    Detections det;
    det.n_total = rows.size();
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (pred[i] == 1) det.tweets.push_back(rows[i].tweet);
    return det;
}

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

void cmd_synth(const PipelineConfig& config) {
    const auto spec = corpus::load_signal_spec(config.signal);
    const auto tweets = corpus::synth_corpus(config.seed, config.n_accident, spec);
    corpus::save_labeled_tweets(config.tweets, tweets);
}

void cmd_preprocess(const PipelineConfig& config) {
    const auto tweets = corpus::load_labeled_tweets(config.tweets);
    auto keyword_vocab = textpipe::load_wordlist(config.vocab);
    if (keyword_vocab.empty()) throw ConfigError("keyword vocabulary is empty");
    for (const auto& w : textpipe::load_wordlist(config.misspellings)) keyword_vocab.insert(w);
    const auto stoplist = textpipe::load_wordlist(config.stopwords);
    const auto handles = textpipe::load_wordlist(config.influential);

    auto kept = textpipe::keyword_filter(tweets, keyword_vocab);
    kept = textpipe::exclude_influential(kept, handles);
    if (kept.empty()) throw ValidationError("no tweets survive preprocessing");

    std::vector<TokenRow> rows;
    std::vector<std::vector<std::string>> token_lists;
    std::vector<int> labels;
    rows.reserve(kept.size());
    for (const auto& lt : kept) {
        TokenRow row;
        row.tweet = lt.tweet;
        row.label = lt.label;
        auto tok = textpipe::normalize_tokenize(lt.tweet.text);
        row.mentions = tok.mentions;
        row.hashtags = tok.hashtags;
        for (const std::string& t : textpipe::filter_stopwords(tok.tokens, stoplist))
            row.tokens.push_back(textpipe::porter_stem(t));
        token_lists.push_back(row.tokens);
        labels.push_back(lt.label);
        rows.push_back(std::move(row));
    }
    const auto matrix = textpipe::build_binary_matrix(token_lists, labels);
    textpipe::save_matrix_csv(artifact(config, "matrix.csv"), matrix);
    atomic_write(artifact(config, "tokens.jsonl"), token_rows_jsonl(rows));
}

void cmd_features(const PipelineConfig& config) {
    const auto matrix = textpipe::load_matrix_csv(artifact(config, "matrix.csv"));
    const auto fset = featsel::select_features(matrix, config.phi_min, config.supp_min,
                                               config.conf_min);
    if (fset.individual.empty())
        throw ValidationError("no individual features pass phi_min=" +
                              std::to_string(config.phi_min));
    featsel::save_feature_set(fset, artifact(config, "features.json").string());
    const auto assembled = featsel::assemble_feature_matrix(matrix, fset);
    textpipe::save_matrix_csv(artifact(config, "assembled.csv"), assembled);
}

void cmd_train(const PipelineConfig& config) {
    const auto fset = featsel::load_feature_set(artifact(config, "features.json").string());
    const auto tc = train_config_of(config);

    nlohmann::ordered_json out;
    out["kind"] = config.model;
    std::vector<double> trace;
    if (config.model == "mlp") {
        const auto assembled = textpipe::load_matrix_csv(artifact(config, "assembled.csv"));
        std::vector<std::size_t> layers;
        layers.push_back(assembled.cols());
        layers.insert(layers.end(), config.hidden.begin(), config.hidden.end());
        layers.push_back(2);
        const auto trained = neuralnet::train_mlp(dense_rows(assembled), assembled.labels,
                                                  layers, tc);
        out["params"] = nlohmann::ordered_json::parse(neuralnet::mlp_params_json(trained.params));
        out["majority_label"] = majority_label(assembled.labels);
        trace = trained.loss_trace;
    } else {
        const auto rows = load_token_rows(artifact(config, "tokens.jsonl"));
        std::vector<int> labels;
        labels.reserve(rows.size());
        for (const TokenRow& r : rows) labels.push_back(r.label);
        const auto seqs = feature_sequences(rows, fset);
        const auto trained = neuralnet::train_lstm(seqs, labels, fset.individual.size(),
                                                   config.lstm_hidden, tc);
        out["params"] = nlohmann::ordered_json::parse(neuralnet::lstm_params_json(trained.params));
        out["majority_label"] = majority_label(labels);
        trace = trained.loss_trace;
    }
    out["feature_set"] =
        nlohmann::ordered_json::parse(featsel::feature_set_json(fset));
    out["train_config"] = {{"alpha", tc.alpha},
                           {"loss_threshold", tc.loss_threshold},
                           {"max_epochs", tc.max_epochs},
                           {"seed", tc.seed},
                           {"init_scale", tc.init_scale}};
    out["epochs_run"] = trace.size();
    out["final_loss"] = trace.empty() ? 0.0 : trace.back();
    atomic_write(artifact(config, "model.json"), out.dump(2) + "\n");
}

void cmd_evaluate(const PipelineConfig& config) {
    const auto tc = train_config_of(config);
    evalkit::CvReport report;

    if (config.model == "mlp") {
        const auto assembled = textpipe::load_matrix_csv(artifact(config, "assembled.csv"));
        const auto X = dense_rows(assembled);
        const auto& y = assembled.labels;
        std::vector<std::size_t> layers;
        layers.push_back(assembled.cols());
        layers.insert(layers.end(), config.hidden.begin(), config.hidden.end());
        layers.push_back(2);
        const auto trainer = [&](const std::vector<std::size_t>& train_idx,
                                 const std::vector<std::size_t>& test_idx) {
            std::vector<std::vector<double>> xt;
            std::vector<int> yt;
            xt.reserve(train_idx.size());
            for (std::size_t i : train_idx) {
                xt.push_back(X[i]);
                yt.push_back(y[i]);
            }
            const auto trained = neuralnet::train_mlp(xt, yt, layers, tc);
            std::vector<int> pred;
            pred.reserve(test_idx.size());
            for (std::size_t i : test_idx)
                pred.push_back(neuralnet::mlp_predict(trained.params, X[i]));
            return pred;
        };
        report = evalkit::cross_validate(y, trainer, config.folds, config.seed);
    } else {
        const auto fset = featsel::load_feature_set(artifact(config, "features.json").string());
        const auto rows = load_token_rows(artifact(config, "tokens.jsonl"));
        std::vector<int> y;
        y.reserve(rows.size());
        for (const TokenRow& r : rows) y.push_back(r.label);
        const auto seqs = feature_sequences(rows, fset);
        const auto trainer = [&](const std::vector<std::size_t>& train_idx,
                                 const std::vector<std::size_t>& test_idx) {
            std::vector<std::vector<std::size_t>> st;
            std::vector<int> yt;
            st.reserve(train_idx.size());
            for (std::size_t i : train_idx) {
                st.push_back(seqs[i]);
                yt.push_back(y[i]);
            }
            const auto trained = neuralnet::train_lstm(st, yt, fset.individual.size(),
                                                       config.lstm_hidden, tc);
            const int fallback = majority_label(yt);
            std::vector<int> pred;
            pred.reserve(test_idx.size());
            for (std::size_t i : test_idx)
                pred.push_back(seqs[i].empty()
                                   ? fallback
                                   : neuralnet::lstm_predict(trained.params, seqs[i]));
            return pred;
        };
        report = evalkit::cross_validate(y, trainer, config.folds, config.seed);
    }
    atomic_write(artifact(config, "metrics.json"), evalkit::metrics_report_json(report));
}

void cmd_validate_log(const PipelineConfig& config) {
    const Detections det = detect_tweets(config);
    const auto log = corpus::load_accident_log(config.accident_log);
    const auto results = trafficval::map_match_log(det.tweets, log, config.log_max_miles,
                                                   config.log_max_hours);

    nlohmann::ordered_json j;
    j["tweets"] = nlohmann::ordered_json::array();
    std::size_t matched = 0, before = 0, during = 0, after = 0;
    for (const auto& r : results) {
        nlohmann::ordered_json e;
        e["id"] = r.tweet_id;
        e["matched"] = r.matched;
        if (r.matched) {
            const auto& rec = log[r.record_index];
            e["distance_miles"] = r.distance_miles;
            e["time_offset_minutes"] = r.time_offset_minutes;
            e["phase"] = trafficval::phase_name(r.phase);
            e["record"] = {{"kind", corpus::kind_name(rec.kind)},
                           {"lat", rec.lat},
                           {"lon", rec.lon},
                           {"start", rec.start},
                           {"end", rec.end},
                           {"roadway", rec.roadway}};
            ++matched;
            if (r.phase == trafficval::MatchPhase::kBefore) ++before;
            else if (r.phase == trafficval::MatchPhase::kDuring) ++during;
            else ++after;
        } else {
            e["distance_miles"] = nullptr;
            e["time_offset_minutes"] = nullptr;
            e["phase"] = trafficval::phase_name(trafficval::MatchPhase::kUnmatched);
            e["record"] = nullptr;
        }
        j["tweets"].push_back(std::move(e));
    }
    j["summary"] = {
        {"n_detected", det.tweets.size()},
        {"n_matched", matched},
        {"matched_fraction",
         det.tweets.empty() ? 0.0
                            : static_cast<double>(matched) /
                                  static_cast<double>(det.tweets.size())},
        {"max_miles", config.log_max_miles},
        {"max_hours", config.log_max_hours},
        {"phases", {{"before", before}, {"during", during}, {"after", after}}}};
    atomic_write(artifact(config, "log_matches.json"), j.dump(2) + "\n");
}

void cmd_validate_traffic(const PipelineConfig& config) {
    const Detections det = detect_tweets(config);
    const auto obs = corpus::load_detector_obs(config.detectors);
    const auto sigs = trafficval::signatures_by_detector(obs, config.n_bins);
    const auto model = trafficval::fit_clusters_aic(sigs, config.k_max, config.seed);
    const auto scores = trafficval::score_observations(obs, model, config.n_bins);
    const auto neighborhoods = trafficval::pair_tweets_detectors(
        det.tweets, scores, config.detector_radius_miles, config.detector_window_hours);

    nlohmann::ordered_json j;
    j["tweets"] = nlohmann::ordered_json::array();
    std::size_t qualified = 0, above_cut = 0;
    for (const auto& nb : neighborhoods) {
        nlohmann::ordered_json e;
        e["id"] = nb.tweet_id;
        if (nb.values.empty()) {
            e["qualified"] = false;
            e["p_traffic"] = nullptr;
            e["q_traffic"] = nullptr;
        } else {
            const auto agg = trafficval::aggregate_scores(nb.values);
            e["qualified"] = true;
            e["p_traffic"] = agg.p_traffic;
            e["q_traffic"] = agg.q_traffic;
            ++qualified;
            if (agg.q_traffic >= config.probability_cut) ++above_cut;
        }
        e["n_detectors"] = nb.n_detectors;
        e["n_periods"] = nb.n_periods;
        j["tweets"].push_back(std::move(e));
    }
    j["summary"] = {
        {"n_detected", det.tweets.size()},
        {"n_qualified", qualified},
        {"probability_cut", config.probability_cut},
        {"n_above_cut", above_cut},
        {"fraction_above_cut",
         qualified == 0 ? 0.0
                        : static_cast<double>(above_cut) / static_cast<double>(qualified)},
        {"selected_k", model.k},
        {"aic_trace", model.aic_trace}};
    atomic_write(artifact(config, "traffic_scores.json"), j.dump(2) + "\n");
}

namespace {

nlohmann::json load_artifact_json(const fs::path& path) {
    try {
        return nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(path.string() + ": bad JSON: " + e.what());
    }
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

}  // namespace

void cmd_report(const PipelineConfig& config) {
    std::ostringstream out;
    out << "crashwatch pipeline report\n";
    out << "==========================\n\n";

    const fs::path metrics_path = artifact(config, "metrics.json");
    if (!fs::exists(metrics_path))
        throw ValidationError("missing artifact: " + metrics_path.string() +
                              " (run evaluate first)");
    const auto metrics = load_artifact_json(metrics_path);
    const auto& mean = metrics.at("mean");
    out << "classification (" << metrics.at("per_fold").size() << "-fold cross-validation, "
        << config.model << ")\n";
    out << "  mean accuracy:                " << fmt(mean.at("accuracy").get<double>()) << "\n";
    out << "  mean precision, accident:     "
        << (mean.at("precision_accident").is_null()
                ? std::string("undefined")
                : fmt(mean.at("precision_accident").get<double>()))
        << "\n";
    out << "  mean precision, non-accident: "
        << (mean.at("precision_nonaccident").is_null()
                ? std::string("undefined")
                : fmt(mean.at("precision_nonaccident").get<double>()))
        << "\n";
    out << "  undefined precisions excluded from means: "
        << metrics.at("excluded_undefined").get<std::size_t>() << "\n\n";

    const fs::path log_path = artifact(config, "log_matches.json");
    if (fs::exists(log_path)) {
        const auto lm = load_artifact_json(log_path).at("summary");
        out << "accident log matching (" << lm.at("max_miles").get<double>() << " mi, "
            << lm.at("max_hours").get<double>() << " h)\n";
        out << "  detected tweets: " << lm.at("n_detected").get<std::size_t>() << "\n";
        out << "  matched:         " << lm.at("n_matched").get<std::size_t>() << " ("
            << fmt(lm.at("matched_fraction").get<double>()) << ")\n";
        out << "  phases:          before " << lm.at("phases").at("before").get<std::size_t>()
            << ", during " << lm.at("phases").at("during").get<std::size_t>() << ", after "
            << lm.at("phases").at("after").get<std::size_t>() << "\n\n";
    }

    const fs::path traffic_path = artifact(config, "traffic_scores.json");
    if (fs::exists(traffic_path)) {
        const auto ts = load_artifact_json(traffic_path).at("summary");
        out << "detector validation\n";
        out << "  detected tweets:  " << ts.at("n_detected").get<std::size_t>() << "\n";
        out << "  qualified tweets: " << ts.at("n_qualified").get<std::size_t>() << "\n";
        out << "  q_traffic >= " << ts.at("probability_cut").get<double>() << ": "
            << ts.at("n_above_cut").get<std::size_t>() << " ("
            << fmt(ts.at("fraction_above_cut").get<double>()) << " of qualified)\n";
        out << "  clusters selected by AIC rule: k=" << ts.at("selected_k").get<std::size_t>()
            << "\n\n";
    }

    atomic_write(artifact(config, "report.txt"), out.str());
}

void run_command(const std::string& command, const PipelineConfig& config) {
    validate_config(config);
    if (command == "synth") cmd_synth(config);
    else if (command == "preprocess") cmd_preprocess(config);
    else if (command == "features") cmd_features(config);
    else if (command == "train") cmd_train(config);
    else if (command == "evaluate") cmd_evaluate(config);
    else if (command == "validate-log") cmd_validate_log(config);
    else if (command == "validate-traffic") cmd_validate_traffic(config);
    else if (command == "report") cmd_report(config);
    else throw ConfigError("unknown command: " + command);
}

}  // namespace crashwatch::pipeline
