#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "crashwatch/corpus.hpp"

namespace crashwatch::textpipe {

// Tokens feed the feature path; mention/hashtag bodies are kept out of it
// and surface only as metadata.
struct TokenizedText {
  std::vector<std::string> tokens;
  std::vector<std::string> mentions;
  std::vector<std::string> hashtags;
};

// Lowercases, strips punctuation and non-ASCII bytes, splits on non-word
// boundaries. A hyphen between letters keeps the word pair as one token
// ("roll-over"); URL tokens are dropped.
TokenizedText normalize_tokenize(const std::string& text);

// Order-preserving removal of exact stoplist matches.
std::vector<std::string> filter_stopwords(const std::vector<std::string>& tokens,
                                          const std::set<std::string>& stoplist);

// Porter suffix stripping. Tokens that are not pure lowercase a-z (route
// numbers, hyphenated pairs) pass through unchanged.
std::string porter_stem(const std::string& token);

// One entry per line; blank lines and '#' comment lines skipped; lowercased.
std::set<std::string> load_wordlist(const std::filesystem::path& path);

// True when any stemmed token of the text is in stemmed_vocab.
bool contains_keyword(const std::string& text, const std::set<std::string>& stemmed_vocab);

std::set<std::string> stem_vocabulary(const std::set<std::string>& vocab);

// Keeps tweets containing at least one vocab word (matched on stems).
std::vector<corpus::Tweet> keyword_filter(const std::vector<corpus::Tweet>& tweets,
                                          const std::set<std::string>& vocab);
std::vector<corpus::LabeledTweet> keyword_filter(const std::vector<corpus::LabeledTweet>& tweets,
                                                 const std::set<std::string>& vocab);

// Drops tweets authored by the given handles; tweets merely mentioning a
// handle are retained.
std::vector<corpus::Tweet> exclude_influential(const std::vector<corpus::Tweet>& tweets,
                                               const std::set<std::string>& handles);
std::vector<corpus::LabeledTweet> exclude_influential(
    const std::vector<corpus::LabeledTweet>& tweets, const std::set<std::string>& handles);

// The structured binary database: tweets x stemmed-token presence bits plus
// a label column.
struct BinaryFeatureMatrix {
  std::vector<std::string> vocabulary;   // sorted, unique
  std::vector<std::uint8_t> cells;       // row-major, rows() x vocabulary.size()
  std::vector<int> labels;

  std::size_t rows() const { return labels.size(); }
  std::size_t cols() const { return vocabulary.size(); }
  bool cell(std::size_t i, std::size_t j) const { return cells[i * vocabulary.size() + j] != 0; }
};

BinaryFeatureMatrix build_binary_matrix(const std::vector<std::vector<std::string>>& tweet_tokens,
                                        const std::vector<int>& labels);

std::string matrix_csv(const BinaryFeatureMatrix& m);
void save_matrix_csv(const std::filesystem::path& path, const BinaryFeatureMatrix& m);
BinaryFeatureMatrix load_matrix_csv(const std::filesystem::path& path);

}  // namespace crashwatch::textpipe
