#include "crashwatch/featsel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "crashwatch/common.hpp"
#include "json.hpp"

namespace crashwatch::featsel {

ContingencyTable contingency(const std::vector<std::uint8_t>& feature_col,
                             const std::vector<int>& labels) {
    if (feature_col.size() != labels.size())
        throw ValidationError("contingency: column and label lengths differ");
    if (feature_col.empty())
        throw ValidationError("contingency: empty input");
    ContingencyTable t;
    for (std::size_t i = 0; i < feature_col.size(); ++i) {
        const bool x = feature_col[i] != 0;
        const bool y = labels[i] != 0;
        if (x && y) ++t.n11;
        else if (x) ++t.n10;
        else if (y) ++t.n01;
        else ++t.n00;
    }
    return t;
}

std::optional<double> phi_coefficient(const ContingencyTable& t) {
    const double n1x = static_cast<double>(t.n1x());
    const double n0x = static_cast<double>(t.n0x());
    const double nx1 = static_cast<double>(t.nx1());
    const double nx0 = static_cast<double>(t.nx0());
    if (n1x == 0 || n0x == 0 || nx1 == 0 || nx0 == 0) return std::nullopt;
    const double num = static_cast<double>(t.n11) * static_cast<double>(t.n00) -
                       static_cast<double>(t.n10) * static_cast<double>(t.n01);
    return num / std::sqrt(n1x * n0x * nx1 * nx0);
}

namespace {

std::vector<std::uint8_t> column_of(const textpipe::BinaryFeatureMatrix& m, std::size_t j) {
    std::vector<std::uint8_t> col(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) col[i] = m.cell(i, j);
    return col;
}

std::size_t column_index(const textpipe::BinaryFeatureMatrix& m, const std::string& token) {
    for (std::size_t j = 0; j < m.vocabulary.size(); ++j)
        if (m.vocabulary[j] == token) return j;
    throw ValidationError("unknown token: " + token);
}

}  // namespace

std::vector<IndividualFeature> select_individual(const textpipe::BinaryFeatureMatrix& matrix,
                                                 double phi_min,
                                                 std::size_t* degenerate_out) {
    if (phi_min < 0) throw ConfigError("phi_min must be nonnegative");
    std::size_t degenerate = 0;
    std::vector<IndividualFeature> out;
    for (std::size_t j = 0; j < matrix.cols(); ++j) {
        const auto phi = phi_coefficient(contingency(column_of(matrix, j), matrix.labels));
        if (!phi) {
            ++degenerate;
            continue;
        }
        if (std::fabs(*phi) > phi_min)
            out.push_back({matrix.vocabulary[j], *phi});
    }
    std::sort(out.begin(), out.end(), [](const IndividualFeature& a, const IndividualFeature& b) {
        const double fa = std::fabs(a.phi), fb = std::fabs(b.phi);
        if (fa != fb) return fa > fb;
        return a.token < b.token;
    });
    if (degenerate_out) *degenerate_out = degenerate;
    return out;
}

double itemset_support(const std::vector<std::string>& itemset,
                       const textpipe::BinaryFeatureMatrix& matrix) {
    if (itemset.empty()) throw ValidationError("itemset_support: empty itemset");
    if (matrix.rows() == 0) throw ValidationError("itemset_support: empty matrix");
    std::vector<std::size_t> cols;
    cols.reserve(itemset.size());
    for (const auto& tok : itemset) cols.push_back(column_index(matrix, tok));
    std::size_t hits = 0;
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        bool all = true;
        for (std::size_t j : cols)
            if (!matrix.cell(i, j)) { all = false; break; }
        if (all) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(matrix.rows());
}

double rule_confidence(const std::vector<std::string>& itemset,
                       const textpipe::BinaryFeatureMatrix& matrix) {
    if (itemset.empty()) throw ValidationError("rule_confidence: empty itemset");
    std::vector<std::size_t> cols;
    cols.reserve(itemset.size());
    for (const auto& tok : itemset) cols.push_back(column_index(matrix, tok));
    std::size_t containing = 0, accident = 0;
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        bool all = true;
        for (std::size_t j : cols)
            if (!matrix.cell(i, j)) { all = false; break; }
        if (!all) continue;
        ++containing;
        if (matrix.labels[i]) ++accident;
    }
    if (containing == 0) throw ValidationError("rule_confidence: itemset has zero support");
    return static_cast<double>(accident) / static_cast<double>(containing);
}

std::vector<PairedTokenRule> mine_paired_features(const textpipe::BinaryFeatureMatrix& matrix,
                                                  double supp_min,
                                                  double conf_min) {
    if (!(supp_min > 0.0 && supp_min <= 1.0))
        throw ConfigError("supp_min must be in (0,1]");
    if (!(conf_min >= 0.0 && conf_min <= 1.0))
        throw ConfigError("conf_min must be in [0,1]");
    const std::size_t n = matrix.rows();
    if (n == 0) return {};

    // frequent singletons first; a pair can only reach supp_min if both
    // members do (anti-monotonicity)
    std::vector<std::size_t> frequent;
    std::vector<std::size_t> count(matrix.cols(), 0);
    for (std::size_t j = 0; j < matrix.cols(); ++j) {
        for (std::size_t i = 0; i < n; ++i)
            if (matrix.cell(i, j)) ++count[j];
        if (static_cast<double>(count[j]) / static_cast<double>(n) >= supp_min)
            frequent.push_back(j);
    }

    std::vector<PairedTokenRule> out;
    for (std::size_t a = 0; a < frequent.size(); ++a) {
        for (std::size_t b = a + 1; b < frequent.size(); ++b) {
            const std::size_t ja = frequent[a], jb = frequent[b];
            std::size_t both = 0, accident = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (matrix.cell(i, ja) && matrix.cell(i, jb)) {
                    ++both;
                    if (matrix.labels[i]) ++accident;
                }
            }
            const double supp = static_cast<double>(both) / static_cast<double>(n);
            if (supp < supp_min || both == 0) continue;
            const double conf = static_cast<double>(accident) / static_cast<double>(both);
            if (conf < conf_min) continue;
            PairedTokenRule rule;
            rule.token_a = matrix.vocabulary[ja];
            rule.token_b = matrix.vocabulary[jb];
            if (rule.token_b < rule.token_a) std::swap(rule.token_a, rule.token_b);
            rule.support = supp;
            rule.confidence = conf;
            out.push_back(std::move(rule));
        }
    }
    std::sort(out.begin(), out.end(), [](const PairedTokenRule& x, const PairedTokenRule& y) {
        if (x.confidence != y.confidence) return x.confidence > y.confidence;
        if (x.support != y.support) return x.support > y.support;
        if (x.token_a != y.token_a) return x.token_a < y.token_a;
        return x.token_b < y.token_b;
    });
    return out;
}

FeatureSet select_features(const textpipe::BinaryFeatureMatrix& matrix,
                           double phi_min, double supp_min, double conf_min,
                           std::size_t* degenerate_out) {
    FeatureSet fs;
    fs.phi_min = phi_min;
    fs.supp_min = supp_min;
    fs.conf_min = conf_min;
    fs.individual = select_individual(matrix, phi_min, degenerate_out);
    fs.paired = mine_paired_features(matrix, supp_min, conf_min);
    return fs;
}

textpipe::BinaryFeatureMatrix assemble_feature_matrix(const textpipe::BinaryFeatureMatrix& matrix,
                                            const FeatureSet& fs) {
    textpipe::BinaryFeatureMatrix out;
    out.labels = matrix.labels;

    std::vector<std::size_t> single_cols;
    single_cols.reserve(fs.individual.size());
    for (const auto& f : fs.individual) {
        single_cols.push_back(column_index(matrix, f.token));
        out.vocabulary.push_back(f.token);
    }
    std::vector<std::pair<std::size_t, std::size_t>> pair_cols;
    pair_cols.reserve(fs.paired.size());
    for (const auto& p : fs.paired) {
        pair_cols.emplace_back(column_index(matrix, p.token_a), column_index(matrix, p.token_b));
        out.vocabulary.push_back(p.token_a + "+" + p.token_b);
    }

    out.cells.resize(matrix.rows() * out.vocabulary.size(), 0);
    const std::size_t w = out.vocabulary.size();
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        std::size_t c = 0;
        for (std::size_t j : single_cols)
            out.cells[i * w + c++] = matrix.cell(i, j);
        for (const auto& [ja, jb] : pair_cols)
            out.cells[i * w + c++] = (matrix.cell(i, ja) && matrix.cell(i, jb)) ? 1 : 0;
    }
    return out;
}

std::string feature_set_json(const FeatureSet& fs) {
    nlohmann::ordered_json j;
    j["thresholds"] = {{"phi_min", fs.phi_min},
                       {"supp_min", fs.supp_min},
                       {"conf_min", fs.conf_min}};
    j["individual"] = nlohmann::ordered_json::array();
    for (const auto& f : fs.individual)
        j["individual"].push_back({{"token", f.token}, {"phi", f.phi}});
    j["paired"] = nlohmann::ordered_json::array();
    for (const auto& p : fs.paired)
        j["paired"].push_back({{"tokens", {p.token_a, p.token_b}},
                               {"support", p.support},
                               {"confidence", p.confidence}});
    return j.dump(2) + "\n";
}

FeatureSet parse_feature_set_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("feature set: bad JSON: ") + e.what());
    }
    FeatureSet fs;
    try {
        fs.phi_min = j.at("thresholds").at("phi_min").get<double>();
        fs.supp_min = j.at("thresholds").at("supp_min").get<double>();
        fs.conf_min = j.at("thresholds").at("conf_min").get<double>();
        for (const auto& e : j.at("individual"))
            fs.individual.push_back({e.at("token").get<std::string>(), e.at("phi").get<double>()});
        for (const auto& e : j.at("paired")) {
            PairedTokenRule r;
            r.token_a = e.at("tokens").at(0).get<std::string>();
            r.token_b = e.at("tokens").at(1).get<std::string>();
            r.support = e.at("support").get<double>();
            r.confidence = e.at("confidence").get<double>();
            fs.paired.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("feature set: missing field: ") + e.what());
    }
    return fs;
}

void save_feature_set(const FeatureSet& fs, const std::string& path) {
    atomic_write(path, feature_set_json(fs));
}

FeatureSet load_feature_set(const std::string& path) {
    return parse_feature_set_json(read_file(path));
}

}  // namespace crashwatch::featsel
