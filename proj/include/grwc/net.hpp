#ifndef GRWC_NET_HPP
#define GRWC_NET_HPP

#include <cstddef>
#include <vector>

#include "grwc/matrix.hpp"

namespace grwc {

// Layer sizes of the fixed one-hidden-layer architecture. When with_bias is
// set, a constant-1 input is appended to each layer and the weight matrices
// gain one column; the default has no bias units.
struct NetworkTopology {
    std::size_t input_size = 0;
    std::size_t hidden_size = 0;
    std::size_t output_size = 0;
    bool with_bias = false;

    std::size_t theta1_cols() const { return input_size + (with_bias ? 1 : 0); }
    std::size_t theta2_cols() const { return hidden_size + (with_bias ? 1 : 0); }

    // throws std::invalid_argument naming the offending field
    void validate() const;
};

// The two weight matrices of one network: theta1 is hidden x input,
// theta2 is output x hidden.
struct WeightSet {
    Matrix theta1;
    Matrix theta2;

    friend bool operator==(const WeightSet&, const WeightSet&) = default;
};

// Per-weight increments, same shapes as the paired WeightSet. Every entry
// stays in [-lambda, +lambda].
struct DeltaSet {
    Matrix dtheta1;
    Matrix dtheta2;

    friend bool operator==(const DeltaSet&, const DeltaSet&) = default;
};

struct Sample {
    std::vector<double> x; // entries in [0, 1]
    std::vector<double> y; // one-hot
};

struct Dataset {
    std::vector<Sample> samples;
};

// Hidden and output activations of one forward pass.
struct Activations {
    std::vector<double> hidden; // entries in (0, 1)
    std::vector<double> output; // entries in (0, 1)
};

// 1 / (1 + e^-v). Never NaN for finite input; saturates at the extremes.
double sigmoid(double v);

WeightSet zero_weights(const NetworkTopology& topology);
DeltaSet zero_deltas(const NetworkTopology& topology);

// Sigmoid after each matrix-vector product. Throws std::invalid_argument on
// any shape mismatch, naming the offending layer.
Activations forward(const NetworkTopology& topology, const WeightSet& w, const std::vector<double>& x);

// Divides each output activation by their sum, so the result sums to 1.
// Throws std::domain_error when the sum is not positive (cannot happen
// downstream of sigmoid, but guarded anyway).
std::vector<double> normalize_output(const std::vector<double>& z3);

// 1/2 * sum_j (h_j - y_j)^2. Throws std::invalid_argument on length mismatch.
double cost(const std::vector<double>& h, const std::vector<double>& y);

// Mean of the per-sample costs over the whole dataset.
double dataset_cost(const NetworkTopology& topology, const WeightSet& w, const Dataset& data);

// Fraction of samples whose predicted class (argmax of the normalized
// output) matches the label class.
double classification_accuracy(const NetworkTopology& topology, const WeightSet& w, const Dataset& data);

// Checks the dataset against the topology: non-empty, consistent vector
// lengths, inputs in [0,1], labels one-hot. Throws std::invalid_argument.
void validate_dataset(const NetworkTopology& topology, const Dataset& data);

} // namespace grwc

#endif
