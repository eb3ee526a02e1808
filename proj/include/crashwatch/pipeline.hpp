#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "crashwatch/neuralnet.hpp"

namespace crashwatch::pipeline {

struct PipelineConfig {
    // inputs
    std::string tweets = "out/tweets.jsonl";
    std::string accident_log = "data/demo/accidents.csv";
    std::string detectors = "data/demo/detectors.csv";
    std::string stopwords = "data/stopwords.txt";
    std::string vocab = "data/vocab.txt";
    std::string influential = "data/influential.txt";
    std::string misspellings = "data/misspellings.txt";
    std::string signal = "data/signal.json";

    // feature selection
    double phi_min = 0.1;
    double supp_min = 0.01;
    double conf_min = 0.8;

    // training
    std::string model = "mlp";  // mlp | lstm
    std::vector<std::size_t> hidden = {10, 5};
    std::size_t lstm_hidden = 8;
    double alpha = 0.02;
    double loss_threshold = 0.001;
    std::size_t max_epochs = 800;
    double init_scale = 0.1;

    // evaluation
    std::size_t folds = 5;

    // validation
    double log_max_miles = 4.0;
    double log_max_hours = 1.0;
    double detector_radius_miles = 1.0;
    double detector_window_hours = 1.0;
    double probability_cut = 0.9;
    std::size_t n_bins = 20;
    std::size_t k_max = 10;

    // synthesis
    std::size_t n_accident = 200;

    // run
    std::uint64_t seed = 42;
    std::string out_dir = "out";
};

// INI-style text: [section] headers, key = value lines, full-line # or ;
// comments. Unknown keys are rejected.
PipelineConfig parse_config_text(const std::string& text);
PipelineConfig load_config(const std::filesystem::path& path);
void validate_config(const PipelineConfig& config);

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {
        "synth", "preprocess", "features", "train",
        "evaluate", "validate-log", "validate-traffic", "report"};
    return names;
}

void cmd_synth(const PipelineConfig& config);
void cmd_preprocess(const PipelineConfig& config);
void cmd_features(const PipelineConfig& config);
void cmd_train(const PipelineConfig& config);
void cmd_evaluate(const PipelineConfig& config);
void cmd_validate_log(const PipelineConfig& config);
void cmd_validate_traffic(const PipelineConfig& config);
void cmd_report(const PipelineConfig& config);

// Dispatches one command; throws ConfigError for unknown names.
void run_command(const std::string& command, const PipelineConfig& config);

}  // namespace crashwatch::pipeline
