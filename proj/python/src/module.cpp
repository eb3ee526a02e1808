#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "crashwatch/common.hpp"
#include "crashwatch/corpus.hpp"
#include "crashwatch/evalkit.hpp"
#include "crashwatch/featsel.hpp"
#include "crashwatch/neuralnet.hpp"
#include "crashwatch/pipeline.hpp"
#include "crashwatch/textpipe.hpp"
#include "crashwatch/trafficval.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace crashwatch;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Accident-report detection over geo-tagged short texts";
    m.attr("__version__") = "0.1.0";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<ValidationError>(m, "ValidationError");
    py::register_exception<DivergenceError>(m, "DivergenceError");

    // ---- corpus
    py::class_<corpus::Tweet>(m, "Tweet")
        .def(py::init<>())
        .def(py::init([](std::string id, std::int64_t time, double lat, double lon,
                         std::string author, std::string text) {
                 return corpus::Tweet{std::move(id), time, lat, lon, std::move(author),
                                      std::move(text)};
             }),
             "id"_a, "time"_a, "lat"_a, "lon"_a, "author"_a = "", "text"_a = "")
        .def_readwrite("id", &corpus::Tweet::id)
        .def_readwrite("time", &corpus::Tweet::time)
        .def_readwrite("lat", &corpus::Tweet::lat)
        .def_readwrite("lon", &corpus::Tweet::lon)
        .def_readwrite("author", &corpus::Tweet::author)
        .def_readwrite("text", &corpus::Tweet::text)
        .def("__repr__", [](const corpus::Tweet& t) {
            return "Tweet(id=" + t.id + ", time=" + std::to_string(t.time) + ")";
        });

    py::class_<corpus::LabeledTweet>(m, "LabeledTweet")
        .def(py::init<>())
        .def_readwrite("tweet", &corpus::LabeledTweet::tweet)
        .def_readwrite("label", &corpus::LabeledTweet::label);

    py::enum_<corpus::AccidentKind>(m, "AccidentKind")
        .value("collision", corpus::AccidentKind::kCollision)
        .value("disabled_vehicle", corpus::AccidentKind::kDisabledVehicle)
        .value("vehicle_on_fire", corpus::AccidentKind::kVehicleOnFire);

    py::class_<corpus::AccidentRecord>(m, "AccidentRecord")
        .def(py::init<>())
        .def(py::init([](corpus::AccidentKind kind, double lat, double lon,
                         std::int64_t start, std::int64_t end, std::string roadway) {
                 return corpus::AccidentRecord{kind, lat, lon, start, end, std::move(roadway)};
             }),
             "kind"_a, "lat"_a, "lon"_a, "start"_a, "end"_a, "roadway"_a = "")
        .def_readwrite("kind", &corpus::AccidentRecord::kind)
        .def_readwrite("lat", &corpus::AccidentRecord::lat)
        .def_readwrite("lon", &corpus::AccidentRecord::lon)
        .def_readwrite("start", &corpus::AccidentRecord::start)
        .def_readwrite("end", &corpus::AccidentRecord::end)
        .def_readwrite("roadway", &corpus::AccidentRecord::roadway);

    py::class_<corpus::DetectorObservation>(m, "DetectorObservation")
        .def(py::init<>())
        .def(py::init([](std::string detector_id, std::int64_t period, double occupancy,
                         double flow, double lat, double lon) {
                 return corpus::DetectorObservation{std::move(detector_id), period, occupancy,
                                                    flow, lat, lon};
             }),
             "detector_id"_a, "period"_a, "occupancy"_a, "flow"_a, "lat"_a = 0.0,
             "lon"_a = 0.0)
        .def_readwrite("detector_id", &corpus::DetectorObservation::detector_id)
        .def_readwrite("period", &corpus::DetectorObservation::period)
        .def_readwrite("occupancy", &corpus::DetectorObservation::occupancy)
        .def_readwrite("flow", &corpus::DetectorObservation::flow)
        .def_readwrite("lat", &corpus::DetectorObservation::lat)
        .def_readwrite("lon", &corpus::DetectorObservation::lon);

    m.def("load_tweets", &corpus::load_tweets, "path"_a);
    m.def("load_labeled_tweets", &corpus::load_labeled_tweets, "path"_a);
    m.def("load_accident_log", &corpus::load_accident_log, "path"_a);
    m.def("load_detector_obs", &corpus::load_detector_obs, "path"_a);

    // ---- textpipe
    py::class_<textpipe::TokenizedText>(m, "TokenizedText")
        .def_readonly("tokens", &textpipe::TokenizedText::tokens)
        .def_readonly("mentions", &textpipe::TokenizedText::mentions)
        .def_readonly("hashtags", &textpipe::TokenizedText::hashtags);

    m.def("normalize_tokenize", &textpipe::normalize_tokenize, "text"_a);
    m.def("filter_stopwords", &textpipe::filter_stopwords, "tokens"_a, "stoplist"_a);
    m.def("porter_stem", &textpipe::porter_stem, "token"_a);
    m.def("load_wordlist", &textpipe::load_wordlist, "path"_a);
    m.def("contains_keyword", &textpipe::contains_keyword, "text"_a, "stemmed_vocab"_a);
    m.def("stem_vocabulary", &textpipe::stem_vocabulary, "vocab"_a);
    m.def("keyword_filter",
          py::overload_cast<const std::vector<corpus::Tweet>&, const std::set<std::string>&>(
              &textpipe::keyword_filter),
          "tweets"_a, "vocab"_a);
    m.def("exclude_influential",
          py::overload_cast<const std::vector<corpus::Tweet>&, const std::set<std::string>&>(
              &textpipe::exclude_influential),
          "tweets"_a, "handles"_a);

    py::class_<textpipe::BinaryFeatureMatrix>(m, "BinaryFeatureMatrix")
        .def(py::init<>())
        .def_readonly("vocabulary", &textpipe::BinaryFeatureMatrix::vocabulary)
        .def_readonly("labels", &textpipe::BinaryFeatureMatrix::labels)
        .def("rows", &textpipe::BinaryFeatureMatrix::rows)
        .def("cols", &textpipe::BinaryFeatureMatrix::cols)
        .def("cell", &textpipe::BinaryFeatureMatrix::cell, "i"_a, "j"_a)
        .def("row", [](const textpipe::BinaryFeatureMatrix& mat, std::size_t i) {
            if (i >= mat.rows()) throw py::index_error();
            std::vector<int> out(mat.cols());
            for (std::size_t j = 0; j < mat.cols(); ++j) out[j] = mat.cell(i, j) ? 1 : 0;
            return out;
        }, "i"_a);

    m.def("build_binary_matrix", &textpipe::build_binary_matrix, "tweet_tokens"_a, "labels"_a);
    m.def("matrix_csv", &textpipe::matrix_csv, "matrix"_a);
    m.def("save_matrix_csv", &textpipe::save_matrix_csv, "path"_a, "matrix"_a);
    m.def("load_matrix_csv", &textpipe::load_matrix_csv, "path"_a);

    // ---- featsel
    m.def("phi_coefficient",
          [](const std::vector<std::uint8_t>& feature_col, const std::vector<int>& labels) {
              return featsel::phi_coefficient(featsel::contingency(feature_col, labels));
          },
          "feature_col"_a, "labels"_a);

    py::class_<featsel::IndividualFeature>(m, "IndividualFeature")
        .def_readonly("token", &featsel::IndividualFeature::token)
        .def_readonly("phi", &featsel::IndividualFeature::phi);

    py::class_<featsel::PairedTokenRule>(m, "PairedTokenRule")
        .def_readonly("token_a", &featsel::PairedTokenRule::token_a)
        .def_readonly("token_b", &featsel::PairedTokenRule::token_b)
        .def_readonly("support", &featsel::PairedTokenRule::support)
        .def_readonly("confidence", &featsel::PairedTokenRule::confidence);

    py::class_<featsel::FeatureSet>(m, "FeatureSet")
        .def_readonly("individual", &featsel::FeatureSet::individual)
        .def_readonly("paired", &featsel::FeatureSet::paired)
        .def_readonly("phi_min", &featsel::FeatureSet::phi_min)
        .def_readonly("supp_min", &featsel::FeatureSet::supp_min)
        .def_readonly("conf_min", &featsel::FeatureSet::conf_min);

    m.def("select_individual",
          [](const textpipe::BinaryFeatureMatrix& matrix, double phi_min) {
              return featsel::select_individual(matrix, phi_min);
          },
          "matrix"_a, "phi_min"_a);
    m.def("mine_paired_features", &featsel::mine_paired_features, "matrix"_a, "supp_min"_a,
          "conf_min"_a);
    m.def("select_features",
          [](const textpipe::BinaryFeatureMatrix& matrix, double phi_min, double supp_min,
             double conf_min) {
              return featsel::select_features(matrix, phi_min, supp_min, conf_min);
          },
          "matrix"_a, "phi_min"_a, "supp_min"_a, "conf_min"_a);
    m.def("assemble_feature_matrix", &featsel::assemble_feature_matrix, "matrix"_a,
          "feature_set"_a);
    m.def("feature_set_json", &featsel::feature_set_json, "feature_set"_a);
    m.def("parse_feature_set_json", &featsel::parse_feature_set_json, "text"_a);

    // ---- neuralnet
    py::class_<neuralnet::TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def(py::init([](double alpha, double loss_threshold, std::size_t max_epochs,
                         std::uint64_t seed, double init_scale) {
                 return neuralnet::TrainConfig{alpha, loss_threshold, max_epochs, seed,
                                               init_scale};
             }),
             "alpha"_a = 0.005, "loss_threshold"_a = 0.001, "max_epochs"_a = 2000,
             "seed"_a = 42, "init_scale"_a = 0.1)
        .def_readwrite("alpha", &neuralnet::TrainConfig::alpha)
        .def_readwrite("loss_threshold", &neuralnet::TrainConfig::loss_threshold)
        .def_readwrite("max_epochs", &neuralnet::TrainConfig::max_epochs)
        .def_readwrite("seed", &neuralnet::TrainConfig::seed)
        .def_readwrite("init_scale", &neuralnet::TrainConfig::init_scale);

    py::class_<neuralnet::MLPParams>(m, "MLPParams")
        .def_readonly("layer_sizes", &neuralnet::MLPParams::layer_sizes);

    py::class_<neuralnet::TrainedMLP>(m, "TrainedMLP")
        .def_readonly("params", &neuralnet::TrainedMLP::params)
        .def_readonly("loss_trace", &neuralnet::TrainedMLP::loss_trace);

    m.def("init_mlp", &neuralnet::init_mlp, "layer_sizes"_a, "seed"_a, "init_scale"_a);
    m.def("train_mlp", &neuralnet::train_mlp, "features"_a, "labels"_a, "layer_sizes"_a,
          "config"_a);
    m.def("mlp_predict", &neuralnet::mlp_predict, "params"_a, "features"_a);
    m.def("mlp_predict_proba", &neuralnet::mlp_predict_proba, "params"_a, "features"_a);
    m.def("mlp_params_json", &neuralnet::mlp_params_json, "params"_a);
    m.def("parse_mlp_params_json", &neuralnet::parse_mlp_params_json, "text"_a);

    py::class_<neuralnet::LSTMParams>(m, "LSTMParams")
        .def_readonly("input_dim", &neuralnet::LSTMParams::input_dim)
        .def_readonly("hidden_dim", &neuralnet::LSTMParams::hidden_dim);

    py::class_<neuralnet::TrainedLSTM>(m, "TrainedLSTM")
        .def_readonly("params", &neuralnet::TrainedLSTM::params)
        .def_readonly("loss_trace", &neuralnet::TrainedLSTM::loss_trace);

    m.def("init_lstm", &neuralnet::init_lstm, "input_dim"_a, "hidden_dim"_a, "seed"_a,
          "init_scale"_a);
    m.def("train_lstm", &neuralnet::train_lstm, "sequences"_a, "labels"_a, "input_dim"_a,
          "hidden_dim"_a, "config"_a);
    m.def("lstm_classify",
          py::overload_cast<const neuralnet::LSTMParams&, const std::vector<std::size_t>&>(
              &neuralnet::lstm_classify),
          "params"_a, "token_sequence"_a);
    m.def("lstm_predict", &neuralnet::lstm_predict, "params"_a, "token_sequence"_a);
    m.def("lstm_params_json", &neuralnet::lstm_params_json, "params"_a);
    m.def("parse_lstm_params_json", &neuralnet::parse_lstm_params_json, "text"_a);

    // ---- evalkit
    py::class_<evalkit::ConfusionCounts>(m, "ConfusionCounts")
        .def(py::init<>())
        .def(py::init([](long long tp, long long fp, long long fn, long long tn) {
                 return evalkit::ConfusionCounts{tp, fp, fn, tn};
             }),
             "tp"_a, "fp"_a, "fn"_a, "tn"_a)
        .def_readwrite("tp", &evalkit::ConfusionCounts::tp)
        .def_readwrite("fp", &evalkit::ConfusionCounts::fp)
        .def_readwrite("fn", &evalkit::ConfusionCounts::fn)
        .def_readwrite("tn", &evalkit::ConfusionCounts::tn)
        .def("total", &evalkit::ConfusionCounts::total);

    py::class_<evalkit::Metrics>(m, "Metrics")
        .def_readonly("confusion", &evalkit::Metrics::confusion)
        .def_readonly("accuracy", &evalkit::Metrics::accuracy)
        .def_readonly("precision_accident", &evalkit::Metrics::precision_accident)
        .def_readonly("precision_nonaccident", &evalkit::Metrics::precision_nonaccident);

    py::class_<evalkit::FoldPlan>(m, "FoldPlan")
        .def_readonly("k", &evalkit::FoldPlan::k)
        .def_readonly("assignments", &evalkit::FoldPlan::assignments);

    py::class_<evalkit::CvReport>(m, "CvReport")
        .def_readonly("per_fold", &evalkit::CvReport::per_fold)
        .def_readonly("mean_accuracy", &evalkit::CvReport::mean_accuracy)
        .def_readonly("mean_precision_accident", &evalkit::CvReport::mean_precision_accident)
        .def_readonly("mean_precision_nonaccident",
                      &evalkit::CvReport::mean_precision_nonaccident)
        .def_readonly("excluded_undefined", &evalkit::CvReport::excluded_undefined);

    m.def("kfold_split", &evalkit::kfold_split, "n"_a, "k"_a, "seed"_a);
    m.def("metrics_from_counts", &evalkit::metrics_from_counts, "counts"_a);
    m.def("classification_metrics", &evalkit::classification_metrics, "truth"_a, "pred"_a);
    m.def("cross_validate", &evalkit::cross_validate, "labels"_a, "trainer"_a, "k"_a,
          "seed"_a, "max_retries"_a = 10,
          py::call_guard<py::gil_scoped_release>() /* trainer reacquires per call */);
    m.def("metrics_report_json", &evalkit::metrics_report_json, "report"_a);

    // ---- trafficval
    m.def("haversine_miles", &trafficval::haversine_miles, "lat1"_a, "lon1"_a, "lat2"_a,
          "lon2"_a);
    m.def("occupancy_bin", &trafficval::occupancy_bin, "occupancy"_a, "n_bins"_a);
    m.def("abnormal_degree", &trafficval::abnormal_degree, "flow"_a, "center"_a, "sigma"_a);

    py::class_<trafficval::TrafficSignature>(m, "TrafficSignature")
        .def_readonly("detector_id", &trafficval::TrafficSignature::detector_id)
        .def_readonly("median_flow", &trafficval::TrafficSignature::median_flow)
        .def_readonly("overall_median", &trafficval::TrafficSignature::overall_median);

    m.def("build_signature", &trafficval::build_signature, "obs"_a, "n_bins"_a);
    m.def("signatures_by_detector", &trafficval::signatures_by_detector, "obs"_a, "n_bins"_a);

    py::class_<trafficval::ClusterModel>(m, "ClusterModel")
        .def_readonly("k", &trafficval::ClusterModel::k)
        .def_readonly("centers", &trafficval::ClusterModel::centers)
        .def_readonly("spreads", &trafficval::ClusterModel::spreads)
        .def_readonly("assignment", &trafficval::ClusterModel::assignment)
        .def_readonly("aic_trace", &trafficval::ClusterModel::aic_trace);

    m.def("fit_clusters_aic", &trafficval::fit_clusters_aic, "signatures"_a, "k_max"_a,
          "seed"_a);

    py::class_<trafficval::AbnormalScore>(m, "AbnormalScore")
        .def_readonly("detector_id", &trafficval::AbnormalScore::detector_id)
        .def_readonly("period", &trafficval::AbnormalScore::period)
        .def_readonly("value", &trafficval::AbnormalScore::value)
        .def_readonly("lat", &trafficval::AbnormalScore::lat)
        .def_readonly("lon", &trafficval::AbnormalScore::lon);

    m.def("score_observations", &trafficval::score_observations, "obs"_a, "model"_a,
          "n_bins"_a);

    py::class_<trafficval::TweetNeighborhood>(m, "TweetNeighborhood")
        .def_readonly("tweet_id", &trafficval::TweetNeighborhood::tweet_id)
        .def_readonly("values", &trafficval::TweetNeighborhood::values)
        .def_readonly("n_detectors", &trafficval::TweetNeighborhood::n_detectors)
        .def_readonly("n_periods", &trafficval::TweetNeighborhood::n_periods);

    m.def("pair_tweets_detectors", &trafficval::pair_tweets_detectors, "tweets"_a,
          "scores"_a, "radius_miles"_a, "window_hours"_a);

    py::class_<trafficval::AggregateScore>(m, "AggregateScore")
        .def_readonly("p_traffic", &trafficval::AggregateScore::p_traffic)
        .def_readonly("q_traffic", &trafficval::AggregateScore::q_traffic);

    m.def("aggregate_scores", &trafficval::aggregate_scores, "values"_a);

    py::enum_<trafficval::MatchPhase>(m, "MatchPhase")
        .value("before", trafficval::MatchPhase::kBefore)
        .value("during", trafficval::MatchPhase::kDuring)
        .value("after", trafficval::MatchPhase::kAfter)
        .value("unmatched", trafficval::MatchPhase::kUnmatched);

    py::class_<trafficval::MatchResult>(m, "MatchResult")
        .def_readonly("tweet_id", &trafficval::MatchResult::tweet_id)
        .def_readonly("matched", &trafficval::MatchResult::matched)
        .def_readonly("record_index", &trafficval::MatchResult::record_index)
        .def_readonly("distance_miles", &trafficval::MatchResult::distance_miles)
        .def_readonly("time_offset_minutes", &trafficval::MatchResult::time_offset_minutes)
        .def_readonly("phase", &trafficval::MatchResult::phase)
        .def("__repr__", [](const trafficval::MatchResult& r) {
            return "MatchResult(" + r.tweet_id + ", " +
                   std::string(trafficval::phase_name(r.phase)) + ")";
        });

    m.def("map_match_log", &trafficval::map_match_log, "tweets"_a, "log"_a, "max_miles"_a,
          "max_hours"_a);
    m.def("phase_name", &trafficval::phase_name, "phase"_a);

    // ---- pipeline
    py::class_<pipeline::PipelineConfig>(m, "PipelineConfig")
        .def(py::init<>())
        .def_readwrite("tweets", &pipeline::PipelineConfig::tweets)
        .def_readwrite("accident_log", &pipeline::PipelineConfig::accident_log)
        .def_readwrite("detectors", &pipeline::PipelineConfig::detectors)
        .def_readwrite("stopwords", &pipeline::PipelineConfig::stopwords)
        .def_readwrite("vocab", &pipeline::PipelineConfig::vocab)
        .def_readwrite("influential", &pipeline::PipelineConfig::influential)
        .def_readwrite("misspellings", &pipeline::PipelineConfig::misspellings)
        .def_readwrite("signal", &pipeline::PipelineConfig::signal)
        .def_readwrite("phi_min", &pipeline::PipelineConfig::phi_min)
        .def_readwrite("supp_min", &pipeline::PipelineConfig::supp_min)
        .def_readwrite("conf_min", &pipeline::PipelineConfig::conf_min)
        .def_readwrite("model", &pipeline::PipelineConfig::model)
        .def_readwrite("hidden", &pipeline::PipelineConfig::hidden)
        .def_readwrite("lstm_hidden", &pipeline::PipelineConfig::lstm_hidden)
        .def_readwrite("alpha", &pipeline::PipelineConfig::alpha)
        .def_readwrite("loss_threshold", &pipeline::PipelineConfig::loss_threshold)
        .def_readwrite("max_epochs", &pipeline::PipelineConfig::max_epochs)
        .def_readwrite("init_scale", &pipeline::PipelineConfig::init_scale)
        .def_readwrite("folds", &pipeline::PipelineConfig::folds)
        .def_readwrite("log_max_miles", &pipeline::PipelineConfig::log_max_miles)
        .def_readwrite("log_max_hours", &pipeline::PipelineConfig::log_max_hours)
        .def_readwrite("detector_radius_miles",
                       &pipeline::PipelineConfig::detector_radius_miles)
        .def_readwrite("detector_window_hours",
                       &pipeline::PipelineConfig::detector_window_hours)
        .def_readwrite("probability_cut", &pipeline::PipelineConfig::probability_cut)
        .def_readwrite("n_bins", &pipeline::PipelineConfig::n_bins)
        .def_readwrite("k_max", &pipeline::PipelineConfig::k_max)
        .def_readwrite("n_accident", &pipeline::PipelineConfig::n_accident)
        .def_readwrite("seed", &pipeline::PipelineConfig::seed)
        .def_readwrite("out_dir", &pipeline::PipelineConfig::out_dir);

    m.def("parse_config_text", &pipeline::parse_config_text, "text"_a);
    m.def("load_config", &pipeline::load_config, "path"_a);
    m.def("validate_config", &pipeline::validate_config, "config"_a);
    m.def("run_command", &pipeline::run_command, "command"_a, "config"_a,
          py::call_guard<py::gil_scoped_release>());
    m.def("command_names", []() { return pipeline::command_names(); });
}
