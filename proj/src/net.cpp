#include "grwc/net.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace grwc {

void NetworkTopology::validate() const {
    if (input_size < 1) throw std::invalid_argument("topology: input_size must be >= 1");
    if (hidden_size < 1) throw std::invalid_argument("topology: hidden_size must be >= 1");
    if (output_size < 1) throw std::invalid_argument("topology: output_size must be >= 1");
}

double sigmoid(double v) {
    // branch on sign so exp never overflows
    if (v >= 0.0) {
        return 1.0 / (1.0 + std::exp(-v));
    }
    const double t = std::exp(v);
    return t / (1.0 + t);
}

WeightSet zero_weights(const NetworkTopology& topology) {
    return {Matrix(topology.hidden_size, topology.theta1_cols()),
            Matrix(topology.output_size, topology.theta2_cols())};
}

DeltaSet zero_deltas(const NetworkTopology& topology) {
    return {Matrix(topology.hidden_size, topology.theta1_cols()),
            Matrix(topology.output_size, topology.theta2_cols())};
}

namespace {

void check_shapes(const NetworkTopology& topology, const WeightSet& w, std::size_t x_len) {
    if (x_len != topology.input_size) {
        throw std::invalid_argument("forward: input layer expects " +
                                    std::to_string(topology.input_size) + " values, got " +
                                    std::to_string(x_len));
    }
    if (w.theta1.rows() != topology.hidden_size || w.theta1.cols() != topology.theta1_cols()) {
        throw std::invalid_argument("forward: hidden layer weights must be " +
                                    std::to_string(topology.hidden_size) + "x" +
                                    std::to_string(topology.theta1_cols()));
    }
    if (w.theta2.rows() != topology.output_size || w.theta2.cols() != topology.theta2_cols()) {
        throw std::invalid_argument("forward: output layer weights must be " +
                                    std::to_string(topology.output_size) + "x" +
                                    std::to_string(topology.theta2_cols()));
    }
}

// x dot one weight row, with the optional constant-1 bias input folded in
double row_dot(const Matrix& m, std::size_t row, const double* v, std::size_t n, bool with_bias) {
    const double* w = m.data() + row * m.cols();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * v[i];
    if (with_bias) acc += w[n];
    return acc;
}

void forward_into(const NetworkTopology& topology, const WeightSet& w,
                  const std::vector<double>& x,
                  std::vector<double>& hidden, std::vector<double>& output) {
    hidden.resize(topology.hidden_size);
    output.resize(topology.output_size);
    for (std::size_t h = 0; h < topology.hidden_size; ++h) {
        hidden[h] = sigmoid(row_dot(w.theta1, h, x.data(), topology.input_size, topology.with_bias));
    }
    for (std::size_t o = 0; o < topology.output_size; ++o) {
        output[o] = sigmoid(row_dot(w.theta2, o, hidden.data(), topology.hidden_size, topology.with_bias));
    }
}

double sample_cost(const std::vector<double>& z3, const std::vector<double>& y,
                   std::vector<double>& h_scratch) {
    double sum = 0.0;
    for (double v : z3) sum += v;
    if (!(sum > 0.0)) throw std::domain_error("normalize_output: activation sum is not positive");
    h_scratch.resize(z3.size());
    double j = 0.0;
    for (std::size_t k = 0; k < z3.size(); ++k) {
        h_scratch[k] = z3[k] / sum;
        const double d = h_scratch[k] - y[k];
        j += d * d;
    }
    return 0.5 * j;
}

} // namespace

Activations forward(const NetworkTopology& topology, const WeightSet& w, const std::vector<double>& x) {
    check_shapes(topology, w, x.size());
    Activations a;
    forward_into(topology, w, x, a.hidden, a.output);
    return a;
}

std::vector<double> normalize_output(const std::vector<double>& z3) {
    double sum = 0.0;
    for (double v : z3) sum += v;
    if (!(sum > 0.0)) throw std::domain_error("normalize_output: activation sum is not positive");
    std::vector<double> h(z3.size());
    for (std::size_t k = 0; k < z3.size(); ++k) h[k] = z3[k] / sum;
    return h;
}

double cost(const std::vector<double>& h, const std::vector<double>& y) {
    if (h.size() != y.size()) {
        throw std::invalid_argument("cost: prediction length " + std::to_string(h.size()) +
                                    " does not match label length " + std::to_string(y.size()));
    }
    double j = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k) {
        const double d = h[k] - y[k];
        j += d * d;
    }
    return 0.5 * j;
}

double dataset_cost(const NetworkTopology& topology, const WeightSet& w, const Dataset& data) {
    if (data.samples.empty()) throw std::invalid_argument("dataset_cost: dataset is empty");
    check_shapes(topology, w, data.samples.front().x.size());
    std::vector<double> hidden, output, h;
    double total = 0.0;
    for (const Sample& s : data.samples) {
        if (s.x.size() != topology.input_size || s.y.size() != topology.output_size) {
            throw std::invalid_argument("dataset_cost: sample does not match topology");
        }
        forward_into(topology, w, s.x, hidden, output);
        total += sample_cost(output, s.y, h);
    }
    return total / static_cast<double>(data.samples.size());
}

double classification_accuracy(const NetworkTopology& topology, const WeightSet& w, const Dataset& data) {
    if (data.samples.empty()) throw std::invalid_argument("classification_accuracy: dataset is empty");
    std::vector<double> hidden, output;
    std::size_t hits = 0;
    for (const Sample& s : data.samples) {
        forward_into(topology, w, s.x, hidden, output);
        const auto pred = std::max_element(output.begin(), output.end()) - output.begin();
        const auto truth = std::max_element(s.y.begin(), s.y.end()) - s.y.begin();
        if (pred == truth) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(data.samples.size());
}

void validate_dataset(const NetworkTopology& topology, const Dataset& data) {
    if (data.samples.empty()) throw std::invalid_argument("dataset: must be non-empty");
    for (std::size_t i = 0; i < data.samples.size(); ++i) {
        const Sample& s = data.samples[i];
        const std::string at = "dataset: sample " + std::to_string(i);
        if (s.x.size() != topology.input_size) {
            throw std::invalid_argument(at + " has input length " + std::to_string(s.x.size()) +
                                        ", topology expects " + std::to_string(topology.input_size));
        }
        if (s.y.size() != topology.output_size) {
            throw std::invalid_argument(at + " has label length " + std::to_string(s.y.size()) +
                                        ", topology expects " + std::to_string(topology.output_size));
        }
        for (double v : s.x) {
            if (!(v >= 0.0 && v <= 1.0)) {
                throw std::invalid_argument(at + " has an input outside [0, 1]");
            }
        }
        std::size_t ones = 0;
        for (double v : s.y) {
            if (v == 1.0) ++ones;
            else if (v != 0.0) throw std::invalid_argument(at + " label is not one-hot");
        }
        if (ones != 1) throw std::invalid_argument(at + " label is not one-hot");
    }
}

} // namespace grwc
