#include "doctest.h"

#include "intuition/hmm.hpp"

#include <cmath>
#include <functional>
#include <sstream>

using namespace intuition::baselines;

namespace {

HmmModel dense(int states, int symbols, std::vector<double> init, std::vector<double> trans, std::vector<double> emit) {
    HmmModel m;
    m.states = states;
    m.symbols = symbols;
    m.classes = states;
    for (int s = 0; s < states; ++s)
        m.state_class.push_back(s);
    m.initial = std::move(init);
    m.transition = std::move(trans);
    m.emission = std::move(emit);
    m.check();
    return m;
}

// Sum over every hidden path, and the filtered posterior at the end.
double brute_force(const HmmModel& m, const std::vector<int>& obs, std::vector<double>& last) {
    last.assign(m.states, 0.0);
    double total = 0.0;
    std::vector<int> path(obs.size());
    std::function<void(std::size_t, double)> walk = [&](std::size_t t, double p) {
        if (t == obs.size()) {
            total += p;
            last[path.back()] += p;
            return;
        }
        for (int s = 0; s < m.states; ++s) {
            path[t] = s;
            const double step = t == 0 ? m.initial[s] : m.a(path[t - 1], s);
            walk(t + 1, p * step * m.b(s, obs[t]));
        }
    };
    walk(0, 1.0);
    for (auto& v : last)
        v /= total;
    return total;
}

} // namespace

TEST_SUITE("hmm") {

TEST_CASE("forward equals path enumeration") {
    const auto m = dense(3, 2, {0.5, 0.3, 0.2}, {0.6, 0.3, 0.1, 0.2, 0.5, 0.3, 0.1, 0.1, 0.8},
                         {0.9, 0.1, 0.4, 0.6, 0.2, 0.8});
    for (const std::vector<int>& obs : {std::vector<int>{0}, {1, 0}, {0, 1, 1}, {1, 1, 0, 1}}) {
        std::vector<double> expected;
        const double p = brute_force(m, obs, expected);
        std::vector<std::vector<double>> alpha;
        const double loglik = forward(m, obs, &alpha);
        CHECK(std::abs(loglik - std::log(p)) <= 1e-9);
        for (int s = 0; s < 3; ++s)
            CHECK(std::abs(alpha.back()[s] - expected[s]) <= 1e-9);
    }
}

TEST_CASE("two-state model by hand") {
    // pi = (0.6, 0.4); A = [[0.7, 0.3], [0.4, 0.6]]; B = [[0.5, 0.5], [0.1, 0.9]]
    const auto m = dense(2, 2, {0.6, 0.4}, {0.7, 0.3, 0.4, 0.6}, {0.5, 0.5, 0.1, 0.9});
    // alpha1 = (0.6*0.5, 0.4*0.1) = (0.30, 0.04)
    // alpha2 = ((0.30*0.7 + 0.04*0.4)*0.5, (0.30*0.3 + 0.04*0.6)*0.9) = (0.113, 0.1026)
    const std::vector<int> obs{0, 1};
    std::vector<std::vector<double>> alpha;
    const double loglik = forward(m, obs, &alpha);
    CHECK(std::abs(loglik - std::log(0.113 + 0.1026)) <= 1e-12);
    CHECK(std::abs(alpha[1][0] - 0.113 / 0.2156) <= 1e-12);
    CHECK(predict_hmm(m, obs).label == 0);
}

TEST_CASE("filter agrees with the batch forward pass") {
    const auto m = dense(3, 2, {0.5, 0.3, 0.2}, {0.6, 0.3, 0.1, 0.2, 0.5, 0.3, 0.1, 0.1, 0.8},
                         {0.9, 0.1, 0.4, 0.6, 0.2, 0.8});
    const std::vector<int> obs{1, 0, 0, 1};
    HmmFilter f(m);
    for (std::size_t t = 0; t < obs.size(); ++t) {
        f.observe(obs[t]);
        std::vector<std::vector<double>> alpha;
        forward(m, std::span(obs).first(t + 1), &alpha);
        for (int s = 0; s < 3; ++s)
            CHECK(f.posterior()[s] == doctest::Approx(alpha.back()[s]).epsilon(1e-12));
        CHECK(f.best_class() == predict_hmm(m, std::span(obs).first(t + 1)).label);
    }
    f.reset();
    CHECK(f.empty());
}

TEST_CASE("chain models stay row-stochastic before and after training") {
    auto m = make_positional_hmm(3, {2, 3, 2});
    CHECK(m.states == 3 * 7);
    CHECK_NOTHROW(m.check());
    const std::vector<LabeledSequence> data{{{0, 2, 5}, 0}, {{1, 3}, 1}, {{0, 4, 6}, 2}, {{0, 2, 5}, 0}};
    const auto t = train_hmm(m, data);
    CHECK(t.trained);
    CHECK_NOTHROW(t.check());
    for (int s = 0; s < t.states; ++s) {
        double sum = 0;
        for (int j = 0; j < t.states; ++j)
            sum += t.a(s, j);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(predict_hmm(t, std::vector<int>{0, 2, 5}).label == 0);
}

TEST_CASE("untrained chain keeps every class equally likely") {
    const auto m = make_positional_hmm(4, {3, 3});
    const std::vector<int> obs{1, 4};
    std::vector<std::vector<double>> alpha;
    forward(m, obs, &alpha);
    std::vector<double> mass(4, 0.0);
    for (int s = 0; s < m.states; ++s)
        mass[m.state_class[s]] += alpha.back()[s];
    for (double v : mass)
        CHECK(v == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(predict_hmm(m, obs).label == 0);
}

TEST_CASE("training rejects symbols outside their block") {
    const auto m = make_positional_hmm(2, {2, 2});
    const std::vector<LabeledSequence> bad{{{2}, 0}};
    CHECK_THROWS_AS(train_hmm(m, bad), std::invalid_argument);
    const std::vector<LabeledSequence> bad_label{{{0}, 5}};
    CHECK_THROWS_AS(train_hmm(m, bad_label), std::invalid_argument);
    CHECK_THROWS_AS(predict_hmm(m, std::vector<int>{}), std::invalid_argument);
    CHECK_THROWS_AS(predict_hmm(m, std::vector<int>{9}), std::invalid_argument);
}

TEST_CASE("text round trip is exact") {
    const std::vector<LabeledSequence> data{{{0, 2}, 0}, {{1, 3}, 1}};
    const auto m = train_hmm(make_positional_hmm(2, {2, 2}), data);
    std::stringstream ss;
    save_hmm(ss, m);
    const auto back = load_hmm(ss);
    CHECK(back.initial == m.initial);
    CHECK(back.transition == m.transition);
    CHECK(back.emission == m.emission);
    CHECK(back.block_offsets == m.block_offsets);
    CHECK(back.trained);
}

}
