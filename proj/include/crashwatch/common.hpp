#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace crashwatch {

// Bad threshold, option, or config file.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or out-of-range input data.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Training produced a non-finite loss.
struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Deterministic RNG. mt19937_64 is bit-exact across platforms; the uniform
// mapping is done by hand because std::uniform_real_distribution is not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // [0, 1)
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // [0, n); n must be positive
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }

  bool bernoulli(double p) { return uniform() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

  // Independent stream for sub-tasks (k-means restarts, fold retries).
  Rng fork() { return Rng(gen_() ^ 0x9e3779b97f4a7c15ull); }

 private:
  std::mt19937_64 gen_;
};

// Write-then-rename so an interrupted run never leaves a half-written artifact.
void atomic_write(const std::filesystem::path& path, const std::string& contents);

std::string read_file(const std::filesystem::path& path);

std::vector<std::string> split(const std::string& s, char sep);
std::string trim(const std::string& s);
std::string to_lower(std::string s);

// Epoch seconds from either a raw integer or an ISO-8601 style UTC stamp
// ("2014-02-10T08:30:00", "2014-02-10 08:30").
std::int64_t parse_time_utc(const std::string& s);

}  // namespace crashwatch
