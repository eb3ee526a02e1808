#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crashwatch/textpipe.hpp"

namespace crashwatch::featsel {

struct ContingencyTable {
    long long n11 = 0;  // feature 1, label 1
    long long n10 = 0;  // feature 1, label 0
    long long n01 = 0;  // feature 0, label 1
    long long n00 = 0;  // feature 0, label 0

    long long n1x() const { return n11 + n10; }
    long long n0x() const { return n01 + n00; }
    long long nx1() const { return n11 + n01; }
    long long nx0() const { return n10 + n00; }
    long long n() const { return n11 + n10 + n01 + n00; }
};

ContingencyTable contingency(const std::vector<std::uint8_t>& feature_col,
                             const std::vector<int>& labels);

// Empty when any margin is zero; such columns carry no association signal
// and the caller must skip them.
std::optional<double> phi_coefficient(const ContingencyTable& t);

struct IndividualFeature {
    std::string token;
    double phi = 0.0;
};

// degenerate_out, when given, receives the number of columns skipped for
// having a zero margin.
std::vector<IndividualFeature> select_individual(const textpipe::BinaryFeatureMatrix& matrix,
                                                 double phi_min,
                                                 std::size_t* degenerate_out = nullptr);

double itemset_support(const std::vector<std::string>& itemset,
                       const textpipe::BinaryFeatureMatrix& matrix);

double rule_confidence(const std::vector<std::string>& itemset,
                       const textpipe::BinaryFeatureMatrix& matrix);

struct PairedTokenRule {
    std::string token_a;  // lexicographically first
    std::string token_b;
    double support = 0.0;
    double confidence = 0.0;
};

std::vector<PairedTokenRule> mine_paired_features(const textpipe::BinaryFeatureMatrix& matrix,
                                                  double supp_min,
                                                  double conf_min);

struct FeatureSet {
    std::vector<IndividualFeature> individual;
    std::vector<PairedTokenRule> paired;
    double phi_min = 0.1;
    double supp_min = 0.01;
    double conf_min = 0.8;
};

FeatureSet select_features(const textpipe::BinaryFeatureMatrix& matrix,
                           double phi_min, double supp_min, double conf_min,
                           std::size_t* degenerate_out = nullptr);

// One column per individual token, then one per pair (AND of the two
// presence bits). Column names land in the result's vocabulary slot;
// pair columns are named "a+b".
textpipe::BinaryFeatureMatrix assemble_feature_matrix(const textpipe::BinaryFeatureMatrix& matrix,
                                            const FeatureSet& fs);

std::string feature_set_json(const FeatureSet& fs);
FeatureSet parse_feature_set_json(const std::string& text);
void save_feature_set(const FeatureSet& fs, const std::string& path);
FeatureSet load_feature_set(const std::string& path);

}  // namespace crashwatch::featsel
