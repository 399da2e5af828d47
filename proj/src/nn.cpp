#include "intuition/nn.hpp"

#include "intuition/detail/text_values.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

namespace intuition::baselines {

bool EncodedRecord::any_visible() const noexcept {
    return std::any_of(mask.begin(), mask.end(), [](std::uint8_t m) { return m != 0; });
}

void NnModel::check() const {
    if (layer_sizes.size() < 2)
        throw std::invalid_argument("a net needs at least input and output sizes");
    if (layers.size() + 1 != layer_sizes.size())
        throw std::invalid_argument("layer count does not match sizes");
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const auto& L = layers[l];
        if (L.inputs != layer_sizes[l] || L.outputs != layer_sizes[l + 1] ||
            L.weights.size() != static_cast<std::size_t>(L.inputs) * L.outputs ||
            L.bias.size() != static_cast<std::size_t>(L.outputs))
            throw std::invalid_argument("layer " + std::to_string(l) + " dimensions inconsistent");
        auto finite = [](double v) { return std::isfinite(v); };
        if (!std::all_of(L.weights.begin(), L.weights.end(), finite) ||
            !std::all_of(L.bias.begin(), L.bias.end(), finite))
            throw std::invalid_argument("layer " + std::to_string(l) + " has non-finite parameters");
    }
}

NnModel make_nn(std::vector<int> layer_sizes, std::uint64_t seed) {
    if (layer_sizes.size() < 2 || std::any_of(layer_sizes.begin(), layer_sizes.end(), [](int n) { return n < 1; }))
        throw std::invalid_argument("layer sizes must be positive and at least two");
    NnModel m;
    m.layer_sizes = std::move(layer_sizes);
    std::mt19937_64 rng(seed);
    for (std::size_t l = 0; l + 1 < m.layer_sizes.size(); ++l) {
        DenseLayer L;
        L.inputs = m.layer_sizes[l];
        L.outputs = m.layer_sizes[l + 1];
        const double limit = std::sqrt(6.0 / (L.inputs + L.outputs));
        std::uniform_real_distribution<double> dist(-limit, limit);
        L.weights.resize(static_cast<std::size_t>(L.inputs) * L.outputs);
        for (auto& w : L.weights)
            w = dist(rng);
        L.bias.assign(L.outputs, 0.0);
        m.layers.push_back(std::move(L));
    }
    return m;
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void softmax_inplace(std::vector<double>& z) {
    const double mx = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (auto& v : z) {
        v = std::exp(v - mx);
        sum += v;
    }
    for (auto& v : z)
        v /= sum;
}

// Activations of every layer, input included.
std::vector<std::vector<double>> forward_all(const NnModel& model, std::span<const double> x) {
    if (static_cast<int>(x.size()) != model.input_size())
        throw std::invalid_argument("expected " + std::to_string(model.input_size()) + " features, got " +
                                    std::to_string(x.size()));
    std::vector<std::vector<double>> acts;
    acts.reserve(model.layers.size() + 1);
    acts.emplace_back(x.begin(), x.end());
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        const auto& L = model.layers[l];
        const auto& in = acts.back();
        std::vector<double> z(L.outputs);
        for (int o = 0; o < L.outputs; ++o) {
            const double* w = &L.weights[static_cast<std::size_t>(o) * L.inputs];
            z[o] = std::inner_product(in.begin(), in.end(), w, L.bias[o]);
        }
        if (l + 1 == model.layers.size())
            softmax_inplace(z);
        else
            for (auto& v : z)
                v = sigmoid(v);
        acts.push_back(std::move(z));
    }
    return acts;
}

void check_label(const NnModel& model, int label) {
    if (label < 0 || label >= model.output_size())
        throw std::invalid_argument("label " + std::to_string(label) + " outside output layer");
}

} // namespace

std::vector<double> nn_forward(const NnModel& model, std::span<const double> features) {
    return std::move(forward_all(model, features).back());
}

double nn_loss(const NnModel& model, const EncodedRecord& record) {
    check_label(model, record.label);
    const auto p = nn_forward(model, record.features);
    return -std::log(std::max(p[record.label], 1e-300));
}

std::vector<DenseLayer> nn_gradient(const NnModel& model, const EncodedRecord& record) {
    check_label(model, record.label);
    const auto acts = forward_all(model, record.features);
    std::vector<DenseLayer> grads(model.layers.size());

    // Softmax + cross-entropy: dL/dz = p - onehot.
    std::vector<double> delta = acts.back();
    delta[record.label] -= 1.0;

    for (std::size_t l = model.layers.size(); l-- > 0;) {
        const auto& L = model.layers[l];
        const auto& in = acts[l];
        auto& G = grads[l];
        G.inputs = L.inputs;
        G.outputs = L.outputs;
        G.weights.assign(L.weights.size(), 0.0);
        G.bias = delta;
        for (int o = 0; o < L.outputs; ++o)
            for (int i = 0; i < L.inputs; ++i)
                G.weights[static_cast<std::size_t>(o) * L.inputs + i] = delta[o] * in[i];
        if (l == 0)
            break;
        std::vector<double> prev(L.inputs, 0.0);
        for (int o = 0; o < L.outputs; ++o)
            for (int i = 0; i < L.inputs; ++i)
                prev[i] += L.weights[static_cast<std::size_t>(o) * L.inputs + i] * delta[o];
        for (int i = 0; i < L.inputs; ++i)
            prev[i] *= in[i] * (1.0 - in[i]); // sigmoid'
        delta = std::move(prev);
    }
    return grads;
}

NnModel train_nn(NnModel model, std::span<const EncodedRecord> records, const NnTrainOptions& options,
                 std::vector<double>* epoch_loss) {
    model.check();
    if (records.empty())
        throw std::invalid_argument("cannot train on an empty record set");
    if (options.epochs < 0 || !(options.learning_rate > 0.0))
        throw std::invalid_argument("epochs must be >= 0 and learning rate > 0");

    std::vector<std::size_t> order(records.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(options.seed);

    for (int epoch = 0; epoch < options.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (auto idx : order) {
            const auto grads = nn_gradient(model, records[idx]);
            for (std::size_t l = 0; l < model.layers.size(); ++l) {
                auto& L = model.layers[l];
                for (std::size_t k = 0; k < L.weights.size(); ++k)
                    L.weights[k] -= options.learning_rate * grads[l].weights[k];
                for (std::size_t k = 0; k < L.bias.size(); ++k)
                    L.bias[k] -= options.learning_rate * grads[l].bias[k];
            }
        }
        if (epoch_loss) {
            double total = 0.0;
            for (const auto& r : records)
                total += nn_loss(model, r);
            epoch_loss->push_back(total / static_cast<double>(records.size()));
        }
    }
    model.trained = true;
    return model;
}

Prediction predict_nn(const NnModel& model, const EncodedRecord& record) {
    const auto start = std::chrono::steady_clock::now();
    if (!record.any_visible())
        throw std::invalid_argument("every attribute is masked");
    const auto p = nn_forward(model, record.features);
    const int label = static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
    const auto stop = std::chrono::steady_clock::now();
    return {label, std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count()};
}

void save_nn(std::ostream& out, const NnModel& model) {
    model.check();
    out << "nn v1\nsizes";
    for (int s : model.layer_sizes)
        out << ' ' << s;
    out << "\ntrained " << (model.trained ? 1 : 0) << '\n';
    for (const auto& L : model.layers) {
        out << "layer " << L.outputs << ' ' << L.inputs << '\n';
        for (int o = 0; o < L.outputs; ++o) {
            detail::write_values(out, std::span(L.weights).subspan(static_cast<std::size_t>(o) * L.inputs, L.inputs));
            out << '\n';
        }
        out << "bias ";
        detail::write_values(out, L.bias);
        out << '\n';
    }
}

NnModel load_nn(std::istream& in) {
    detail::TokenReader r(in);
    r.expect("nn");
    r.expect("v1");
    r.expect("sizes");
    NnModel m;
    // Sizes run until the "trained" keyword.
    for (;;) {
        auto tok = r.next();
        if (tok == "trained")
            break;
        m.layer_sizes.push_back(detail::parse_value<int>(tok));
    }
    m.trained = r.value<int>() != 0;
    for (std::size_t l = 0; l + 1 < m.layer_sizes.size(); ++l) {
        r.expect("layer");
        DenseLayer L;
        L.outputs = r.value<int>();
        L.inputs = r.value<int>();
        if (L.outputs < 1 || L.inputs < 1)
            throw std::invalid_argument("bad layer dimensions");
        L.weights = r.values<double>(static_cast<std::size_t>(L.outputs) * L.inputs);
        r.expect("bias");
        L.bias = r.values<double>(L.outputs);
        m.layers.push_back(std::move(L));
    }
    m.check();
    return m;
}

} // namespace intuition::baselines
