#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "crashwatch/common.hpp"
#include "crashwatch/pipeline.hpp"

namespace {

const char* describe(const std::string& name) {
    if (name == "synth") return "generate a labeled synthetic corpus";
    if (name == "preprocess") return "filter, tokenize, stem; write the binary matrix";
    if (name == "features") return "select phi and paired-token features";
    if (name == "train") return "train the classifier on the full corpus";
    if (name == "evaluate") return "k-fold cross-validation metrics";
    if (name == "validate-log") return "match detected tweets against the accident log";
    if (name == "validate-traffic") return "score detected tweets against detector anomalies";
    return "compose a summary from the run artifacts";
}

}  // namespace

// Exit codes: 0 ok, 2 config error, 3 input validation error,
// 4 numeric divergence, 5 internal error.
int main(int argc, char** argv) {
    CLI::App app{"detects accident-related posts in a geo-tagged short-text corpus"};
    app.set_version_flag("--version", "crashwatch 0.1.0");
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    for (const std::string& name : crashwatch::pipeline::command_names()) {
        CLI::App* sub = app.add_subcommand(name, describe(name));
        sub->add_option("--config", config_path, "INI-style config file");
        sub->add_option("--seed", seed, "override the configured seed");
        sub->add_option("--out-dir", out_dir, "override the artifact directory");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        crashwatch::pipeline::PipelineConfig config;
        if (sub->count("--config"))
            config = crashwatch::pipeline::load_config(config_path);
        if (sub->count("--seed")) config.seed = seed;
        if (sub->count("--out-dir")) config.out_dir = out_dir;
        crashwatch::pipeline::run_command(sub->get_name(), config);
        return 0;
    } catch (const crashwatch::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const crashwatch::ValidationError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 3;
    } catch (const crashwatch::DivergenceError& e) {
        std::fprintf(stderr, "divergence: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 5;
    }
}
