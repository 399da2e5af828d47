#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace intuition::baselines {

/// One classifier input. `mask` holds one visibility flag per underlying
/// attribute (car quality or poker card slot); hidden attributes are already
/// folded into `features` through their "unseen" encoding.
struct EncodedRecord {
    std::vector<double> features;
    int label = 0;
    std::vector<std::uint8_t> mask;

    bool any_visible() const noexcept;
};

struct Prediction {
    int label = 0;
    std::int64_t elapsed_ns = 0;
};

struct DenseLayer {
    int inputs = 0;
    int outputs = 0;
    std::vector<double> weights; // outputs x inputs, row-major
    std::vector<double> bias;    // outputs
};

/// Fully connected net: sigmoid hidden layers, softmax output.
struct NnModel {
    std::vector<int> layer_sizes;
    std::vector<DenseLayer> layers;
    bool trained = false;

    int input_size() const { return layer_sizes.front(); }
    int output_size() const { return layer_sizes.back(); }
    void check() const;
};

/// Seeded Xavier-uniform initialization; biases start at zero.
NnModel make_nn(std::vector<int> layer_sizes, std::uint64_t seed);

struct NnTrainOptions {
    int epochs = 30;
    double learning_rate = 0.1;
    std::uint64_t seed = 0; // shuffling order
};

/// Plain per-sample SGD on softmax cross-entropy. Appends the mean training
/// loss after each epoch to `epoch_loss` when given.
NnModel train_nn(NnModel model, std::span<const EncodedRecord> records, const NnTrainOptions& options,
                 std::vector<double>* epoch_loss = nullptr);

std::vector<double> nn_forward(const NnModel& model, std::span<const double> features);

double nn_loss(const NnModel& model, const EncodedRecord& record);

/// d loss / d parameters, laid out exactly like `model.layers`.
std::vector<DenseLayer> nn_gradient(const NnModel& model, const EncodedRecord& record);

/// Argmax class. Throws std::invalid_argument when every attribute is masked.
Prediction predict_nn(const NnModel& model, const EncodedRecord& record);

// Text format:
//   nn v1
//   sizes <n0> <n1> ...
//   trained <0|1>
//   then per layer: "layer <outputs> <inputs>", one weight row per line,
//   and "bias <values...>". Values use shortest round-trip decimal.
void save_nn(std::ostream& out, const NnModel& model);
NnModel load_nn(std::istream& in);

} // namespace intuition::baselines
