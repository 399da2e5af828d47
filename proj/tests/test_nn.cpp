#include "doctest.h"

#include "intuition/nn.hpp"

#include <cmath>
#include <sstream>

using namespace intuition::baselines;

namespace {

EncodedRecord record(std::vector<double> x, int label) {
    EncodedRecord r;
    r.features = std::move(x);
    r.label = label;
    r.mask.assign(1, 1);
    return r;
}

} // namespace

TEST_SUITE("nn") {

TEST_CASE("gradients match central finite differences") {
    auto model = make_nn({5, 4, 3}, 11);
    const auto r = record({0.3, -1.2, 0.0, 1.0, 0.5}, 2);
    const auto grads = nn_gradient(model, r);
    const double h = 1e-6;
    double worst = 0.0;
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        auto check_param = [&](double& p, double analytic) {
            const double saved = p;
            p = saved + h;
            const double up = nn_loss(model, r);
            p = saved - h;
            const double down = nn_loss(model, r);
            p = saved;
            const double numeric = (up - down) / (2 * h);
            const double rel = std::abs(numeric - analytic) / std::max(1.0, std::abs(numeric) + std::abs(analytic));
            worst = std::max(worst, rel);
        };
        for (std::size_t k = 0; k < model.layers[l].weights.size(); ++k)
            check_param(model.layers[l].weights[k], grads[l].weights[k]);
        for (std::size_t k = 0; k < model.layers[l].bias.size(); ++k)
            check_param(model.layers[l].bias[k], grads[l].bias[k]);
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("zero epochs leaves the weights alone") {
    const auto model = make_nn({3, 4, 2}, 5);
    const std::vector<EncodedRecord> data{record({1, 0, 0}, 0), record({0, 1, 0}, 1)};
    const auto trained = train_nn(model, data, {.epochs = 0, .learning_rate = 0.1, .seed = 1});
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        CHECK(trained.layers[l].weights == model.layers[l].weights);
        CHECK(trained.layers[l].bias == model.layers[l].bias);
    }
}

TEST_CASE("a single record is learned") {
    const std::vector<EncodedRecord> data{record({1, 0, 1}, 1)};
    auto model = train_nn(make_nn({3, 4, 3}, 9), data, {.epochs = 300, .learning_rate = 0.5, .seed = 1});
    CHECK(predict_nn(model, data[0]).label == 1);
    CHECK(nn_loss(model, data[0]) < 0.05);
}

TEST_CASE("loss does not rise on a separable set with a small step") {
    std::vector<EncodedRecord> data;
    for (int i = 0; i < 8; ++i)
        data.push_back(record({i % 2 ? 1.0 : 0.0, i % 2 ? 0.0 : 1.0}, i % 2));
    std::vector<double> losses;
    train_nn(make_nn({2, 3, 2}, 4), data, {.epochs = 40, .learning_rate = 0.05, .seed = 2}, &losses);
    REQUIRE(losses.size() == 40);
    for (std::size_t i = 1; i < losses.size(); ++i)
        CHECK(losses[i] <= losses[i - 1] + 1e-12);
    CHECK(losses.back() < losses.front());
}

TEST_CASE("probabilities sum to one") {
    const auto model = make_nn({4, 6, 5}, 3);
    const std::vector<double> x{0.1, 0.2, -0.3, 2.0};
    const auto p = nn_forward(model, x);
    double sum = 0;
    for (double v : p)
        sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("input validation") {
    const auto model = make_nn({3, 2, 2}, 1);
    CHECK_THROWS_AS(nn_forward(model, std::vector<double>{1.0}), std::invalid_argument);
    auto masked = record({1, 0, 0}, 0);
    masked.mask.assign(1, 0);
    CHECK_THROWS_AS(predict_nn(model, masked), std::invalid_argument);
    CHECK_THROWS(make_nn({3}, 1));
    CHECK_THROWS(make_nn({3, 0, 2}, 1));
}

TEST_CASE("text round trip is exact") {
    auto model = make_nn({3, 4, 2}, 21);
    model.trained = true;
    std::stringstream ss;
    save_nn(ss, model);
    const auto back = load_nn(ss);
    CHECK(back.layer_sizes == model.layer_sizes);
    CHECK(back.trained);
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        CHECK(back.layers[l].weights == model.layers[l].weights);
        CHECK(back.layers[l].bias == model.layers[l].bias);
    }
}

}
