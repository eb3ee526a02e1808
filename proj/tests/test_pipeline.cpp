#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "crashwatch/common.hpp"
#include "crashwatch/pipeline.hpp"
#include "json.hpp"

using namespace crashwatch;
using namespace crashwatch::pipeline;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) { return read_file(p); }

fs::path fresh_dir(const char* tag) {
  fs::path dir = fs::temp_directory_path() / (std::string("cw_pipe_") + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

PipelineConfig small_run_config(const fs::path& dir) {
  PipelineConfig cfg;
  cfg.tweets = (dir / "tweets.jsonl").string();
  cfg.out_dir = dir.string();
  cfg.n_accident = 40;
  cfg.max_epochs = 120;
  return cfg;
}

}  // namespace

TEST_CASE("parse_config_text reads sections, comments, and lists") {
  const std::string text =
      "# top comment\n"
      "[featsel]\n"
      "phi_min = 0.2\n"
      "; another comment\n"
      "conf_min = 0.7\n"
      "\n"
      "[train]\n"
      "model = lstm\n"
      "hidden = 12,6\n"
      "alpha = 0.01\n"
      "[run]\n"
      "seed = 7\n"
      "out_dir = /tmp/cw_x\n";
  auto cfg = parse_config_text(text);
  CHECK(cfg.phi_min == doctest::Approx(0.2));
  CHECK(cfg.conf_min == doctest::Approx(0.7));
  CHECK(cfg.model == "lstm");
  CHECK(cfg.hidden == std::vector<std::size_t>{12, 6});
  CHECK(cfg.alpha == doctest::Approx(0.01));
  CHECK(cfg.seed == 7);
  CHECK(cfg.out_dir == "/tmp/cw_x");
  // untouched keys keep their defaults
  CHECK(cfg.supp_min == doctest::Approx(0.01));
  CHECK(cfg.folds == 5);
  CHECK(cfg.n_bins == 20);
}

TEST_CASE("parse_config_text rejects malformed input") {
  CHECK_THROWS_WITH_AS(parse_config_text("[featsel]\nbogus = 1\n"),
                       doctest::Contains("unknown config key: featsel.bogus"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("phi_min = 0.2\n"),
                       doctest::Contains("outside a section"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[featsel\nphi_min = 0.2\n"),
                       doctest::Contains("unclosed section"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[featsel]\nphi_min 0.2\n"),
                       doctest::Contains("expected key = value"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[featsel]\nphi_min = abc\n"), ConfigError);
}

TEST_CASE("validate_config enforces parameter ranges") {
  PipelineConfig cfg;
  CHECK_NOTHROW(validate_config(cfg));

  auto reject = [](auto mutate) {
    PipelineConfig c;
    mutate(c);
    CHECK_THROWS_AS(validate_config(c), ConfigError);
  };
  reject([](PipelineConfig& c) { c.conf_min = 1.1; });
  reject([](PipelineConfig& c) { c.supp_min = 0.0; });
  reject([](PipelineConfig& c) { c.phi_min = -0.1; });
  reject([](PipelineConfig& c) { c.model = "rnn"; });
  reject([](PipelineConfig& c) { c.hidden.clear(); });
  reject([](PipelineConfig& c) { c.alpha = 0.0; });
  reject([](PipelineConfig& c) { c.folds = 1; });
  reject([](PipelineConfig& c) { c.probability_cut = 1.5; });
  reject([](PipelineConfig& c) { c.n_bins = 1; });
  reject([](PipelineConfig& c) { c.k_max = 0; });
  reject([](PipelineConfig& c) { c.out_dir.clear(); });
}

TEST_CASE("run_command rejects unknown commands and bad configs") {
  PipelineConfig cfg;
  CHECK_THROWS_WITH_AS(run_command("detectify", cfg), doctest::Contains("unknown command"),
                       ConfigError);
  cfg.conf_min = 1.1;
  CHECK_THROWS_AS(run_command("features", cfg), ConfigError);
}

TEST_CASE("train without upstream artifacts fails cleanly") {
  auto dir = fresh_dir("cold");
  auto cfg = small_run_config(dir);
  CHECK_THROWS_AS(run_command("train", cfg), ValidationError);
  fs::remove_all(dir);
}

TEST_CASE("full pipeline produces every artifact") {
  auto dir = fresh_dir("full");
  auto cfg = small_run_config(dir);

  for (const auto& name : command_names()) CHECK_NOTHROW(run_command(name, cfg));

  for (const char* artifact :
       {"tweets.jsonl", "matrix.csv", "tokens.jsonl", "features.json", "assembled.csv",
        "model.json", "metrics.json", "log_matches.json", "traffic_scores.json",
        "report.txt"}) {
    CHECK(fs::exists(dir / artifact));
  }

  auto metrics = nlohmann::json::parse(slurp(dir / "metrics.json"));
  REQUIRE(metrics.contains("mean"));
  CHECK(metrics.at("mean").contains("accuracy"));
  CHECK(metrics.at("per_fold").size() == 5);

  auto report = slurp(dir / "report.txt");
  CHECK(report.find("accuracy") != std::string::npos);

  fs::remove_all(dir);
}

TEST_CASE("preprocess leaves its input untouched and train is idempotent") {
  auto dir = fresh_dir("idem");
  auto cfg = small_run_config(dir);

  run_command("synth", cfg);
  const std::string tweets_before = slurp(cfg.tweets);
  run_command("preprocess", cfg);
  CHECK(slurp(cfg.tweets) == tweets_before);

  run_command("features", cfg);
  run_command("train", cfg);
  const std::string model_first = slurp(dir / "model.json");
  run_command("train", cfg);
  CHECK(slurp(dir / "model.json") == model_first);

  fs::remove_all(dir);
}

TEST_CASE("synth honors the seed and count") {
  auto dir = fresh_dir("synth");
  auto cfg = small_run_config(dir);
  run_command("synth", cfg);
  const std::string first = slurp(cfg.tweets);
  // 1:2 class ratio means three lines per accident tweet
  std::size_t lines = 0;
  for (char ch : first)
    if (ch == '\n') ++lines;
  CHECK(lines == 3 * cfg.n_accident);

  run_command("synth", cfg);
  CHECK(slurp(cfg.tweets) == first);

  cfg.seed = 43;
  run_command("synth", cfg);
  CHECK(slurp(cfg.tweets) != first);
  fs::remove_all(dir);
}
