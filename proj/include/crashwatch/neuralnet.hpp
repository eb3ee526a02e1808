#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace crashwatch::neuralnet {

struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

enum class Activation { kLogistic, kSoftmax };

struct MLPParams {
    std::vector<std::size_t> layer_sizes;   // [input, hidden..., 2]
    std::vector<Mat> weights;               // weights[l]: layer_sizes[l+1] x layer_sizes[l]
    std::vector<Activation> activations;    // one tag per non-input layer

    void validate() const;
};

struct TrainConfig {
    double alpha = 0.005;
    double loss_threshold = 0.001;  // compared against mean per-example loss
    std::size_t max_epochs = 2000;
    std::uint64_t seed = 42;
    double init_scale = 0.1;
};

// Weights drawn uniform in [-init_scale, init_scale]; hidden layers tagged
// logistic, output softmax.
MLPParams init_mlp(const std::vector<std::size_t>& layer_sizes,
                   std::uint64_t seed, double init_scale);

struct MLPTrace {
    // activations[0] is the input; activations.back() is the output
    // probability pair
    std::vector<std::vector<double>> activations;
};

MLPTrace mlp_forward(const MLPParams& params, const std::vector<double>& features);
std::array<double, 2> mlp_predict_proba(const MLPParams& params,
                                        const std::vector<double>& features);
int mlp_predict(const MLPParams& params, const std::vector<double>& features);

double squared_error_loss(const std::vector<double>& output,
                          const std::vector<double>& label);

// Gradient of the squared error for one example, shaped like params.weights.
std::vector<Mat> mlp_gradients(const MLPParams& params,
                               const std::vector<double>& features,
                               const std::vector<double>& label);

void gradient_descent_step(MLPParams& params, const std::vector<Mat>& gradients,
                           double alpha);

struct TrainedMLP {
    MLPParams params;
    std::vector<double> loss_trace;  // mean per-example loss after each epoch
};

// Full-batch descent on the summed per-example gradient. Stops once the
// mean per-example loss drops to loss_threshold or max_epochs is reached.
TrainedMLP train_mlp(const std::vector<std::vector<double>>& features,
                     const std::vector<int>& labels,
                     const std::vector<std::size_t>& layer_sizes,
                     const TrainConfig& config);

struct LSTMParams {
    std::size_t input_dim = 0;
    std::size_t hidden_dim = 0;
    Mat wf, wi, wc, wo;              // hidden_dim x (hidden_dim + input_dim)
    std::vector<double> bf, bi, bc, bo;
    Mat head;                        // 2 x hidden_dim, no bias

    void validate() const;
};

LSTMParams init_lstm(std::size_t input_dim, std::size_t hidden_dim,
                     std::uint64_t seed, double init_scale);

// One recurrence step; writes h_t and C_t.
void lstm_cell_step(const LSTMParams& params, const std::vector<double>& x_t,
                    const std::vector<double>& h_prev, const std::vector<double>& c_prev,
                    std::vector<double>& h_out, std::vector<double>& c_out);

std::array<double, 2> lstm_classify(const LSTMParams& params,
                                    const std::vector<std::vector<double>>& sequence);
// One-hot convenience: each element indexes the active input dimension.
std::array<double, 2> lstm_classify(const LSTMParams& params,
                                    const std::vector<std::size_t>& token_sequence);
int lstm_predict(const LSTMParams& params, const std::vector<std::size_t>& token_sequence);

struct LSTMGradients {
    Mat wf, wi, wc, wo;
    std::vector<double> bf, bi, bc, bo;
    Mat head;
};

// Backpropagation through time for one sequence.
LSTMGradients lstm_gradients(const LSTMParams& params,
                             const std::vector<std::vector<double>>& sequence,
                             const std::vector<double>& label);

struct TrainedLSTM {
    LSTMParams params;
    std::vector<double> loss_trace;
};

// Sequences hold one-hot token indices in tweet order. Empty sequences are
// dropped before training; if nothing remains that is an error.
TrainedLSTM train_lstm(const std::vector<std::vector<std::size_t>>& sequences,
                       const std::vector<int>& labels,
                       std::size_t input_dim, std::size_t hidden_dim,
                       const TrainConfig& config);

std::vector<std::vector<double>> one_hot_sequence(const std::vector<std::size_t>& idx,
                                                  std::size_t dim);

std::string mlp_params_json(const MLPParams& params);
MLPParams parse_mlp_params_json(const std::string& text);
std::string lstm_params_json(const LSTMParams& params);
LSTMParams parse_lstm_params_json(const std::string& text);

}  // namespace crashwatch::neuralnet
