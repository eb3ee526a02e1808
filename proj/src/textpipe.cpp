#include "crashwatch/textpipe.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "crashwatch/common.hpp"

namespace crashwatch::textpipe {

namespace {

bool is_letter(char c) { return c >= 'a' && c <= 'z'; }
bool is_alnum(char c) { return is_letter(c) || (c >= '0' && c <= '9'); }

bool is_url(const std::string& s) {
  return s.rfind("http://", 0) == 0 || s.rfind("https://", 0) == 0 || s.rfind("www.", 0) == 0;
}

// First run of handle characters after the # or @ marker.
std::string marker_name(const std::string& raw) {
  std::string name;
  for (std::size_t i = 1; i < raw.size(); ++i) {
    char c = raw[i];
    if (is_alnum(c) || c == '_')
      name.push_back(c);
    else
      break;
  }
  return name;
}

void split_word_runs(const std::string& s, std::vector<std::string>& out) {
  std::string cur;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (is_alnum(c)) {
      cur.push_back(c);
    } else if (c == '-' && !cur.empty() && is_letter(cur.back()) && i + 1 < s.size() &&
               is_letter(s[i + 1])) {
      cur.push_back(c);  // hyphenated word pair stays one token
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(cur);
}

template <typename T>
const corpus::Tweet& tweet_of(const T& t);
template <>
const corpus::Tweet& tweet_of(const corpus::Tweet& t) {
  return t;
}
template <>
const corpus::Tweet& tweet_of(const corpus::LabeledTweet& t) {
  return t.tweet;
}

template <typename T>
std::vector<T> keyword_filter_impl(const std::vector<T>& tweets,
                                   const std::set<std::string>& vocab) {
  if (vocab.empty()) throw ConfigError("keyword filter needs a non-empty vocabulary");
  const auto stemmed = stem_vocabulary(vocab);
  std::vector<T> out;
  for (const auto& t : tweets)
    if (contains_keyword(tweet_of(t).text, stemmed)) out.push_back(t);
  return out;
}

template <typename T>
std::vector<T> exclude_influential_impl(const std::vector<T>& tweets,
                                        const std::set<std::string>& handles) {
  std::vector<T> out;
  for (const auto& t : tweets)
    if (!handles.contains(tweet_of(t).author)) out.push_back(t);
  return out;
}

}  // namespace

TokenizedText normalize_tokenize(const std::string& text) {
  TokenizedText result;
  std::string lowered;
  lowered.reserve(text.size());
  for (char c : text) {
    unsigned char u = static_cast<unsigned char>(c);
    lowered.push_back(u < 0x80 ? static_cast<char>(std::tolower(u)) : c);
  }

  std::istringstream ss(lowered);
  std::string raw;
  while (ss >> raw) {
    if (is_url(raw)) continue;
    if (raw[0] == '#' || raw[0] == '@') {
      std::string name = marker_name(raw);
      if (!name.empty())
        (raw[0] == '#' ? result.hashtags : result.mentions).push_back(name);
      continue;
    }
    split_word_runs(raw, result.tokens);
  }
  return result;
}

std::vector<std::string> filter_stopwords(const std::vector<std::string>& tokens,
                                          const std::set<std::string>& stoplist) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens)
    if (!stoplist.contains(t)) out.push_back(t);
  return out;
}

std::set<std::string> load_wordlist(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open word list: " + path.string());
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    out.insert(to_lower(line));
  }
  return out;
}

std::set<std::string> stem_vocabulary(const std::set<std::string>& vocab) {
  std::set<std::string> out;
  for (const auto& w : vocab) out.insert(porter_stem(w));
  return out;
}

bool contains_keyword(const std::string& text, const std::set<std::string>& stemmed_vocab) {
  for (const auto& tok : normalize_tokenize(text).tokens)
    if (stemmed_vocab.contains(porter_stem(tok))) return true;
  return false;
}

std::vector<corpus::Tweet> keyword_filter(const std::vector<corpus::Tweet>& tweets,
                                          const std::set<std::string>& vocab) {
  return keyword_filter_impl(tweets, vocab);
}

std::vector<corpus::LabeledTweet> keyword_filter(const std::vector<corpus::LabeledTweet>& tweets,
                                                 const std::set<std::string>& vocab) {
  return keyword_filter_impl(tweets, vocab);
}

std::vector<corpus::Tweet> exclude_influential(const std::vector<corpus::Tweet>& tweets,
                                               const std::set<std::string>& handles) {
  return exclude_influential_impl(tweets, handles);
}

std::vector<corpus::LabeledTweet> exclude_influential(
    const std::vector<corpus::LabeledTweet>& tweets, const std::set<std::string>& handles) {
  return exclude_influential_impl(tweets, handles);
}

BinaryFeatureMatrix build_binary_matrix(const std::vector<std::vector<std::string>>& tweet_tokens,
                                        const std::vector<int>& labels) {
  if (tweet_tokens.empty()) throw ValidationError("no tweets");
  if (tweet_tokens.size() != labels.size())
    throw ValidationError("token lists and labels differ in length");

  std::set<std::string> vocab_set;
  for (const auto& toks : tweet_tokens) vocab_set.insert(toks.begin(), toks.end());

  BinaryFeatureMatrix m;
  m.vocabulary.assign(vocab_set.begin(), vocab_set.end());
  std::map<std::string, std::size_t> index;
  for (std::size_t j = 0; j < m.vocabulary.size(); ++j) index[m.vocabulary[j]] = j;

  m.labels = labels;
  m.cells.assign(tweet_tokens.size() * m.vocabulary.size(), 0);
  for (std::size_t i = 0; i < tweet_tokens.size(); ++i)
    for (const auto& tok : tweet_tokens[i]) m.cells[i * m.vocabulary.size() + index[tok]] = 1;
  return m;
}

std::string matrix_csv(const BinaryFeatureMatrix& m) {
  std::string out;
  for (const auto& tok : m.vocabulary) {
    out += tok;
    out += ',';
  }
  out += "label\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      out += m.cell(i, j) ? '1' : '0';
      out += ',';
    }
    out += std::to_string(m.labels[i]);
    out += '\n';
  }
  return out;
}

void save_matrix_csv(const std::filesystem::path& path, const BinaryFeatureMatrix& m) {
  atomic_write(path, matrix_csv(m));
}

BinaryFeatureMatrix load_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open matrix: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty matrix file: " + path.string());
  auto header = split(trim(line), ',');
  if (header.empty() || header.back() != "label")
    throw ValidationError("matrix header must end with 'label'");

  BinaryFeatureMatrix m;
  m.vocabulary.assign(header.begin(), header.end() - 1);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto f = split(trim(line), ',');
    if (f.size() != header.size())
      throw ValidationError("matrix line " + std::to_string(line_no) + ": wrong field count");
    for (std::size_t j = 0; j + 1 < f.size(); ++j) {
      if (f[j] != "0" && f[j] != "1")
        throw ValidationError("matrix line " + std::to_string(line_no) + ": cell must be 0 or 1");
      m.cells.push_back(f[j] == "1" ? 1 : 0);
    }
    int label = std::stoi(f.back());
    if (label != 0 && label != 1)
      throw ValidationError("matrix line " + std::to_string(line_no) + ": label must be 0 or 1");
    m.labels.push_back(label);
  }
  return m;
}

}  // namespace crashwatch::textpipe
