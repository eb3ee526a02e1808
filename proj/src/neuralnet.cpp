#include "crashwatch/neuralnet.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "crashwatch/common.hpp"
#include "json.hpp"

namespace crashwatch::neuralnet {

namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::vector<double> softmax(const std::vector<double>& z) {
    const double m = *std::max_element(z.begin(), z.end());
    std::vector<double> out(z.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        out[i] = std::exp(z[i] - m);
        sum += out[i];
    }
    for (double& v : out) v /= sum;
    return out;
}

std::vector<double> mat_vec(const Mat& w, const std::vector<double>& v) {
    std::vector<double> out(w.rows, 0.0);
    for (std::size_t i = 0; i < w.rows; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < w.cols; ++j) acc += w.at(i, j) * v[j];
        out[i] = acc;
    }
    return out;
}

// dL/dz for a softmax output p under loss 0.5*sum((y-p)^2)
std::vector<double> softmax_loss_delta(const std::vector<double>& p,
                                       const std::vector<double>& y) {
    double dot = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) dot += (p[i] - y[i]) * p[i];
    std::vector<double> delta(p.size());
    for (std::size_t k = 0; k < p.size(); ++k)
        delta[k] = p[k] * ((p[k] - y[k]) - dot);
    return delta;
}

std::vector<double> one_hot_label(int label) {
    std::vector<double> y(2, 0.0);
    if (label != 0 && label != 1) throw ValidationError("label must be 0 or 1");
    y[static_cast<std::size_t>(label)] = 1.0;
    return y;
}

void fill_uniform(Mat& m, Rng& rng, double scale) {
    for (double& v : m.data) v = rng.uniform(-scale, scale);
}

void check_train_config(const TrainConfig& config) {
    if (!(config.alpha > 0)) throw ConfigError("alpha must be positive");
    if (config.max_epochs < 1) throw ConfigError("max_epochs must be at least 1");
    if (!(config.init_scale >= 0)) throw ConfigError("init_scale must be nonnegative");
}

void check_two_classes(const std::vector<int>& labels) {
    bool has0 = false, has1 = false;
    for (int y : labels) {
        if (y == 0) has0 = true;
        else if (y == 1) has1 = true;
        else throw ValidationError("label must be 0 or 1");
    }
    if (!has0 || !has1)
        throw ValidationError("training data must contain both classes");
}

}  // namespace

void MLPParams::validate() const {
    if (layer_sizes.size() < 2) throw ValidationError("network needs at least two layers");
    if (layer_sizes.back() != 2) throw ValidationError("output layer width must be 2");
    if (weights.size() != layer_sizes.size() - 1)
        throw ValidationError("weight count does not match layer count");
    if (activations.size() != weights.size())
        throw ValidationError("activation tag count does not match layer count");
    for (std::size_t l = 0; l < weights.size(); ++l) {
        if (weights[l].rows != layer_sizes[l + 1] || weights[l].cols != layer_sizes[l])
            throw ValidationError("weight matrix shape mismatch at layer " + std::to_string(l));
    }
    if (activations.back() != Activation::kSoftmax)
        throw ValidationError("output activation must be softmax");
}

MLPParams init_mlp(const std::vector<std::size_t>& layer_sizes,
                   std::uint64_t seed, double init_scale) {
    if (layer_sizes.size() < 2) throw ConfigError("network needs at least two layers");
    for (std::size_t s : layer_sizes)
        if (s == 0) throw ConfigError("layer sizes must be positive");
    MLPParams p;
    p.layer_sizes = layer_sizes;
    Rng rng(seed);
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        Mat w(layer_sizes[l + 1], layer_sizes[l]);
        fill_uniform(w, rng, init_scale);
        p.weights.push_back(std::move(w));
        p.activations.push_back(l + 2 == layer_sizes.size() ? Activation::kSoftmax
                                                            : Activation::kLogistic);
    }
    return p;
}

MLPTrace mlp_forward(const MLPParams& params, const std::vector<double>& features) {
    params.validate();
    if (features.size() != params.layer_sizes.front())
        throw ValidationError("feature vector width does not match the input layer");
    MLPTrace trace;
    trace.activations.push_back(features);
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
        std::vector<double> z = mat_vec(params.weights[l], trace.activations.back());
        if (params.activations[l] == Activation::kSoftmax) {
            trace.activations.push_back(softmax(z));
        } else {
            for (double& v : z) v = logistic(v);
            trace.activations.push_back(std::move(z));
        }
    }
    return trace;
}

std::array<double, 2> mlp_predict_proba(const MLPParams& params,
                                        const std::vector<double>& features) {
    const auto out = mlp_forward(params, features).activations.back();
    return {out[0], out[1]};
}

int mlp_predict(const MLPParams& params, const std::vector<double>& features) {
    const auto p = mlp_predict_proba(params, features);
    return p[1] > p[0] ? 1 : 0;
}

double squared_error_loss(const std::vector<double>& output,
                          const std::vector<double>& label) {
    if (output.size() != label.size())
        throw ValidationError("output and label lengths differ");
    double acc = 0.0;
    for (std::size_t i = 0; i < output.size(); ++i) {
        const double d = label[i] - output[i];
        acc += d * d;
    }
    return 0.5 * acc;
}

std::vector<Mat> mlp_gradients(const MLPParams& params,
                               const std::vector<double>& features,
                               const std::vector<double>& label) {
    const MLPTrace trace = mlp_forward(params, features);
    if (label.size() != 2) throw ValidationError("label must be a one-hot pair");

    const std::size_t n_layers = params.weights.size();
    std::vector<Mat> grads;
    grads.reserve(n_layers);
    for (const Mat& w : params.weights) grads.emplace_back(w.rows, w.cols);

    std::vector<double> delta = softmax_loss_delta(trace.activations.back(), label);
    for (std::size_t l = n_layers; l-- > 0;) {
        const std::vector<double>& a_prev = trace.activations[l];
        for (std::size_t i = 0; i < grads[l].rows; ++i)
            for (std::size_t j = 0; j < grads[l].cols; ++j)
                grads[l].at(i, j) = delta[i] * a_prev[j];
        if (l == 0) break;
        std::vector<double> prev(params.weights[l].cols, 0.0);
        for (std::size_t j = 0; j < params.weights[l].cols; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < params.weights[l].rows; ++i)
                acc += params.weights[l].at(i, j) * delta[i];
            const double a = trace.activations[l][j];
            prev[j] = acc * a * (1.0 - a);
        }
        delta = std::move(prev);
    }
    return grads;
}

void gradient_descent_step(MLPParams& params, const std::vector<Mat>& gradients,
                           double alpha) {
    if (alpha < 0) throw ConfigError("alpha must be nonnegative");
    if (gradients.size() != params.weights.size())
        throw ValidationError("gradient count does not match weight count");
    for (std::size_t l = 0; l < gradients.size(); ++l) {
        if (gradients[l].rows != params.weights[l].rows ||
            gradients[l].cols != params.weights[l].cols)
            throw ValidationError("gradient shape mismatch at layer " + std::to_string(l));
        for (std::size_t k = 0; k < gradients[l].data.size(); ++k)
            params.weights[l].data[k] -= alpha * gradients[l].data[k];
    }
}

TrainedMLP train_mlp(const std::vector<std::vector<double>>& features,
                     const std::vector<int>& labels,
                     const std::vector<std::size_t>& layer_sizes,
                     const TrainConfig& config) {
    check_train_config(config);
    if (features.size() != labels.size())
        throw ValidationError("feature and label counts differ");
    if (features.size() < 2) throw ValidationError("training needs at least two examples");
    check_two_classes(labels);
    if (layer_sizes.empty() || layer_sizes.front() != features.front().size())
        throw ValidationError("input layer width does not match the feature width");

    TrainedMLP result;
    result.params = init_mlp(layer_sizes, config.seed, config.init_scale);

    const std::size_t n = features.size();
    std::vector<std::vector<double>> onehots(n);
    for (std::size_t i = 0; i < n; ++i) onehots[i] = one_hot_label(labels[i]);

    for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
        std::vector<Mat> total;
        total.reserve(result.params.weights.size());
        for (const Mat& w : result.params.weights) total.emplace_back(w.rows, w.cols);
        for (std::size_t i = 0; i < n; ++i) {
            const auto g = mlp_gradients(result.params, features[i], onehots[i]);
            for (std::size_t l = 0; l < g.size(); ++l)
                for (std::size_t k = 0; k < g[l].data.size(); ++k)
                    total[l].data[k] += g[l].data[k];
        }
        gradient_descent_step(result.params, total, config.alpha);

        double loss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto out = mlp_forward(result.params, features[i]).activations.back();
            loss += squared_error_loss(out, onehots[i]);
        }
        loss /= static_cast<double>(n);
        if (!std::isfinite(loss))
            throw DivergenceError("loss diverged at epoch " + std::to_string(epoch));
        result.loss_trace.push_back(loss);
        if (loss <= config.loss_threshold) break;
    }
    return result;
}

void LSTMParams::validate() const {
    if (input_dim == 0 || hidden_dim == 0)
        throw ValidationError("lstm dimensions must be positive");
    const std::size_t z = hidden_dim + input_dim;
    for (const Mat* w : {&wf, &wi, &wc, &wo})
        if (w->rows != hidden_dim || w->cols != z)
            throw ValidationError("gate weight shape mismatch");
    for (const std::vector<double>* b : {&bf, &bi, &bc, &bo})
        if (b->size() != hidden_dim)
            throw ValidationError("gate bias length mismatch");
    if (head.rows != 2 || head.cols != hidden_dim)
        throw ValidationError("head shape mismatch");
}

LSTMParams init_lstm(std::size_t input_dim, std::size_t hidden_dim,
                     std::uint64_t seed, double init_scale) {
    if (input_dim == 0 || hidden_dim == 0)
        throw ConfigError("lstm dimensions must be positive");
    LSTMParams p;
    p.input_dim = input_dim;
    p.hidden_dim = hidden_dim;
    const std::size_t z = hidden_dim + input_dim;
    Rng rng(seed);
    for (Mat* w : {&p.wf, &p.wi, &p.wc, &p.wo}) {
        *w = Mat(hidden_dim, z);
        fill_uniform(*w, rng, init_scale);
    }
    for (std::vector<double>* b : {&p.bf, &p.bi, &p.bc, &p.bo}) {
        b->resize(hidden_dim);
        for (double& v : *b) v = rng.uniform(-init_scale, init_scale);
    }
    p.head = Mat(2, hidden_dim);
    fill_uniform(p.head, rng, init_scale);
    return p;
}

namespace {

struct LSTMStep {
    std::vector<double> z;       // [h_prev ; x_t]
    std::vector<double> f, i, o, ctilde;
    std::vector<double> c, h;    // post-step state
    std::vector<double> c_prev;
};

LSTMStep traced_step(const LSTMParams& p, const std::vector<double>& x,
                     const std::vector<double>& h_prev,
                     const std::vector<double>& c_prev) {
    LSTMStep s;
    s.c_prev = c_prev;
    s.z.reserve(p.hidden_dim + p.input_dim);
    s.z.insert(s.z.end(), h_prev.begin(), h_prev.end());
    s.z.insert(s.z.end(), x.begin(), x.end());
    s.f = mat_vec(p.wf, s.z);
    s.i = mat_vec(p.wi, s.z);
    s.ctilde = mat_vec(p.wc, s.z);
    s.o = mat_vec(p.wo, s.z);
    s.c.resize(p.hidden_dim);
    s.h.resize(p.hidden_dim);
    for (std::size_t k = 0; k < p.hidden_dim; ++k) {
        s.f[k] = logistic(s.f[k] + p.bf[k]);
        s.i[k] = logistic(s.i[k] + p.bi[k]);
        s.ctilde[k] = std::tanh(s.ctilde[k] + p.bc[k]);
        s.o[k] = logistic(s.o[k] + p.bo[k]);
        s.c[k] = s.f[k] * c_prev[k] + s.i[k] * s.ctilde[k];
        s.h[k] = s.o[k] * std::tanh(s.c[k]);
    }
    return s;
}

std::vector<LSTMStep> run_sequence(const LSTMParams& p,
                                   const std::vector<std::vector<double>>& seq) {
    std::vector<double> h(p.hidden_dim, 0.0), c(p.hidden_dim, 0.0);
    std::vector<LSTMStep> steps;
    steps.reserve(seq.size());
    for (const auto& x : seq) {
        if (x.size() != p.input_dim)
            throw ValidationError("input vector width does not match the lstm input");
        steps.push_back(traced_step(p, x, h, c));
        h = steps.back().h;
        c = steps.back().c;
    }
    return steps;
}

}  // namespace

void lstm_cell_step(const LSTMParams& params, const std::vector<double>& x_t,
                    const std::vector<double>& h_prev, const std::vector<double>& c_prev,
                    std::vector<double>& h_out, std::vector<double>& c_out) {
    params.validate();
    if (x_t.size() != params.input_dim || h_prev.size() != params.hidden_dim ||
        c_prev.size() != params.hidden_dim)
        throw ValidationError("lstm step shape mismatch");
    LSTMStep s = traced_step(params, x_t, h_prev, c_prev);
    h_out = std::move(s.h);
    c_out = std::move(s.c);
}

std::array<double, 2> lstm_classify(const LSTMParams& params,
                                    const std::vector<std::vector<double>>& sequence) {
    params.validate();
    if (sequence.empty()) throw ValidationError("no selected tokens in tweet");
    const auto steps = run_sequence(params, sequence);
    const auto probs = softmax(mat_vec(params.head, steps.back().h));
    return {probs[0], probs[1]};
}

std::array<double, 2> lstm_classify(const LSTMParams& params,
                                    const std::vector<std::size_t>& token_sequence) {
    return lstm_classify(params, one_hot_sequence(token_sequence, params.input_dim));
}

int lstm_predict(const LSTMParams& params, const std::vector<std::size_t>& token_sequence) {
    const auto p = lstm_classify(params, token_sequence);
    return p[1] > p[0] ? 1 : 0;
}

LSTMGradients lstm_gradients(const LSTMParams& params,
                             const std::vector<std::vector<double>>& sequence,
                             const std::vector<double>& label) {
    params.validate();
    if (sequence.empty()) throw ValidationError("no selected tokens in tweet");
    if (label.size() != 2) throw ValidationError("label must be a one-hot pair");

    const auto steps = run_sequence(params, sequence);
    const std::size_t hd = params.hidden_dim;
    const std::size_t zd = hd + params.input_dim;

    LSTMGradients g;
    g.wf = Mat(hd, zd); g.wi = Mat(hd, zd); g.wc = Mat(hd, zd); g.wo = Mat(hd, zd);
    g.bf.assign(hd, 0.0); g.bi.assign(hd, 0.0); g.bc.assign(hd, 0.0); g.bo.assign(hd, 0.0);
    g.head = Mat(2, hd);

    const auto probs = softmax(mat_vec(params.head, steps.back().h));
    const auto du = softmax_loss_delta(probs, label);

    std::vector<double> dh(hd, 0.0), dc(hd, 0.0);
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t j = 0; j < hd; ++j) {
            g.head.at(k, j) = du[k] * steps.back().h[j];
            dh[j] += params.head.at(k, j) * du[k];
        }

    for (std::size_t t = steps.size(); t-- > 0;) {
        const LSTMStep& s = steps[t];
        std::vector<double> daf(hd), dai(hd), dac(hd), dao(hd);
        for (std::size_t k = 0; k < hd; ++k) {
            const double tc = std::tanh(s.c[k]);
            dao[k] = dh[k] * tc * s.o[k] * (1.0 - s.o[k]);
            const double dck = dc[k] + dh[k] * s.o[k] * (1.0 - tc * tc);
            daf[k] = dck * s.c_prev[k] * s.f[k] * (1.0 - s.f[k]);
            dai[k] = dck * s.ctilde[k] * s.i[k] * (1.0 - s.i[k]);
            dac[k] = dck * s.i[k] * (1.0 - s.ctilde[k] * s.ctilde[k]);
            dc[k] = dck * s.f[k];
        }
        std::vector<double> dz(zd, 0.0);
        for (std::size_t k = 0; k < hd; ++k) {
            g.bf[k] += daf[k];
            g.bi[k] += dai[k];
            g.bc[k] += dac[k];
            g.bo[k] += dao[k];
            for (std::size_t j = 0; j < zd; ++j) {
                g.wf.at(k, j) += daf[k] * s.z[j];
                g.wi.at(k, j) += dai[k] * s.z[j];
                g.wc.at(k, j) += dac[k] * s.z[j];
                g.wo.at(k, j) += dao[k] * s.z[j];
                dz[j] += params.wf.at(k, j) * daf[k] + params.wi.at(k, j) * dai[k] +
                         params.wc.at(k, j) * dac[k] + params.wo.at(k, j) * dao[k];
            }
        }
        for (std::size_t k = 0; k < hd; ++k) dh[k] = dz[k];
    }
    return g;
}

namespace {

void accumulate(LSTMGradients& total, const LSTMGradients& g) {
    auto add_mat = [](Mat& a, const Mat& b) {
        for (std::size_t k = 0; k < a.data.size(); ++k) a.data[k] += b.data[k];
    };
    auto add_vec = [](std::vector<double>& a, const std::vector<double>& b) {
        for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
    };
    add_mat(total.wf, g.wf); add_mat(total.wi, g.wi);
    add_mat(total.wc, g.wc); add_mat(total.wo, g.wo);
    add_vec(total.bf, g.bf); add_vec(total.bi, g.bi);
    add_vec(total.bc, g.bc); add_vec(total.bo, g.bo);
    add_mat(total.head, g.head);
}

void apply(LSTMParams& p, const LSTMGradients& g, double alpha) {
    auto sub_mat = [alpha](Mat& a, const Mat& b) {
        for (std::size_t k = 0; k < a.data.size(); ++k) a.data[k] -= alpha * b.data[k];
    };
    auto sub_vec = [alpha](std::vector<double>& a, const std::vector<double>& b) {
        for (std::size_t k = 0; k < a.size(); ++k) a[k] -= alpha * b[k];
    };
    sub_mat(p.wf, g.wf); sub_mat(p.wi, g.wi); sub_mat(p.wc, g.wc); sub_mat(p.wo, g.wo);
    sub_vec(p.bf, g.bf); sub_vec(p.bi, g.bi); sub_vec(p.bc, g.bc); sub_vec(p.bo, g.bo);
    sub_mat(p.head, g.head);
}

}  // namespace

std::vector<std::vector<double>> one_hot_sequence(const std::vector<std::size_t>& idx,
                                                  std::size_t dim) {
    std::vector<std::vector<double>> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) {
        if (i >= dim) throw ValidationError("one-hot index out of range");
        std::vector<double> x(dim, 0.0);
        x[i] = 1.0;
        out.push_back(std::move(x));
    }
    return out;
}

TrainedLSTM train_lstm(const std::vector<std::vector<std::size_t>>& sequences,
                       const std::vector<int>& labels,
                       std::size_t input_dim, std::size_t hidden_dim,
                       const TrainConfig& config) {
    check_train_config(config);
    if (sequences.size() != labels.size())
        throw ValidationError("sequence and label counts differ");

    std::vector<std::vector<std::vector<double>>> xs;
    std::vector<std::vector<double>> ys;
    std::vector<int> kept_labels;
    for (std::size_t i = 0; i < sequences.size(); ++i) {
        if (sequences[i].empty()) continue;
        xs.push_back(one_hot_sequence(sequences[i], input_dim));
        ys.push_back(one_hot_label(labels[i]));
        kept_labels.push_back(labels[i]);
    }
    if (xs.size() < 2)
        throw ValidationError("training needs at least two non-empty sequences");
    check_two_classes(kept_labels);

    TrainedLSTM result;
    result.params = init_lstm(input_dim, hidden_dim, config.seed, config.init_scale);
    const std::size_t n = xs.size();
    const std::size_t zd = hidden_dim + input_dim;

    for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
        LSTMGradients total;
        total.wf = Mat(hidden_dim, zd); total.wi = Mat(hidden_dim, zd);
        total.wc = Mat(hidden_dim, zd); total.wo = Mat(hidden_dim, zd);
        total.bf.assign(hidden_dim, 0.0); total.bi.assign(hidden_dim, 0.0);
        total.bc.assign(hidden_dim, 0.0); total.bo.assign(hidden_dim, 0.0);
        total.head = Mat(2, hidden_dim);
        for (std::size_t i = 0; i < n; ++i)
            accumulate(total, lstm_gradients(result.params, xs[i], ys[i]));
        apply(result.params, total, config.alpha);

        double loss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto p = lstm_classify(result.params, xs[i]);
            loss += squared_error_loss({p[0], p[1]}, ys[i]);
        }
        loss /= static_cast<double>(n);
        if (!std::isfinite(loss))
            throw DivergenceError("loss diverged at epoch " + std::to_string(epoch));
        result.loss_trace.push_back(loss);
        if (loss <= config.loss_threshold) break;
    }
    return result;
}

namespace {

nlohmann::ordered_json mat_json(const Mat& m) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < m.rows; ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (std::size_t j = 0; j < m.cols; ++j) row.push_back(m.at(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Mat mat_from_json(const nlohmann::json& j) {
    Mat m;
    m.rows = j.size();
    m.cols = m.rows ? j.at(0).size() : 0;
    m.data.reserve(m.rows * m.cols);
    for (const auto& row : j) {
        if (row.size() != m.cols) throw ValidationError("model: ragged weight matrix");
        for (const auto& v : row) m.data.push_back(v.get<double>());
    }
    return m;
}

}  // namespace

std::string mlp_params_json(const MLPParams& params) {
    params.validate();
    nlohmann::ordered_json j;
    j["model"] = "mlp";
    j["layer_sizes"] = params.layer_sizes;
    nlohmann::ordered_json acts = nlohmann::ordered_json::array();
    for (Activation a : params.activations)
        acts.push_back(a == Activation::kSoftmax ? "softmax" : "logistic");
    j["activations"] = std::move(acts);
    nlohmann::ordered_json ws = nlohmann::ordered_json::array();
    for (const Mat& w : params.weights) ws.push_back(mat_json(w));
    j["weights"] = std::move(ws);
    return j.dump(2) + "\n";
}

MLPParams parse_mlp_params_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("model: bad JSON: ") + e.what());
    }
    MLPParams p;
    try {
        if (j.at("model").get<std::string>() != "mlp")
            throw ValidationError("model: expected kind \"mlp\"");
        p.layer_sizes = j.at("layer_sizes").get<std::vector<std::size_t>>();
        for (const auto& a : j.at("activations")) {
            const auto s = a.get<std::string>();
            if (s == "softmax") p.activations.push_back(Activation::kSoftmax);
            else if (s == "logistic") p.activations.push_back(Activation::kLogistic);
            else throw ValidationError("model: unknown activation " + s);
        }
        for (const auto& w : j.at("weights")) p.weights.push_back(mat_from_json(w));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("model: missing field: ") + e.what());
    }
    p.validate();
    return p;
}

std::string lstm_params_json(const LSTMParams& params) {
    params.validate();
    nlohmann::ordered_json j;
    j["model"] = "lstm";
    j["input_dim"] = params.input_dim;
    j["hidden_dim"] = params.hidden_dim;
    j["wf"] = mat_json(params.wf);
    j["wi"] = mat_json(params.wi);
    j["wc"] = mat_json(params.wc);
    j["wo"] = mat_json(params.wo);
    j["bf"] = params.bf;
    j["bi"] = params.bi;
    j["bc"] = params.bc;
    j["bo"] = params.bo;
    j["head"] = mat_json(params.head);
    return j.dump(2) + "\n";
}

LSTMParams parse_lstm_params_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("model: bad JSON: ") + e.what());
    }
    LSTMParams p;
    try {
        if (j.at("model").get<std::string>() != "lstm")
            throw ValidationError("model: expected kind \"lstm\"");
        p.input_dim = j.at("input_dim").get<std::size_t>();
        p.hidden_dim = j.at("hidden_dim").get<std::size_t>();
        p.wf = mat_from_json(j.at("wf"));
        p.wi = mat_from_json(j.at("wi"));
        p.wc = mat_from_json(j.at("wc"));
        p.wo = mat_from_json(j.at("wo"));
        p.bf = j.at("bf").get<std::vector<double>>();
        p.bi = j.at("bi").get<std::vector<double>>();
        p.bc = j.at("bc").get<std::vector<double>>();
        p.bo = j.at("bo").get<std::vector<double>>();
        p.head = mat_from_json(j.at("head"));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("model: missing field: ") + e.what());
    }
    p.validate();
    return p;
}

}  // namespace crashwatch::neuralnet
