#pragma once

#include "intuition/nn.hpp" // Prediction

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace intuition::baselines {

/// Discrete HMM. Matrices are row-major: transition is states x states,
/// emission is states x symbols. `state_class` maps every hidden state to
/// the class it stands for.
struct HmmModel {
    int states = 0;
    int symbols = 0;
    int classes = 0;
    std::vector<int> state_class;
    std::vector<double> initial;
    std::vector<double> transition;
    std::vector<double> emission;
    bool trained = false;

    // Layout of class-aligned chain models (see make_positional_hmm).
    // Empty for hand-built models, which are treated as dense.
    int positions = 0;
    std::vector<int> block_offsets; // positions + 1 entries

    double a(int from, int to) const { return transition[static_cast<std::size_t>(from) * states + to]; }
    double b(int state, int symbol) const { return emission[static_cast<std::size_t>(state) * symbols + symbol]; }

    /// Dimensions and row-stochasticity (each row sums to 1 ± tol). Chain
    /// models must also keep transitions inside successor_range.
    void check(double tol = 1e-9) const;

    /// States a transition from `state` may reach: the next position's
    /// block, or the last block itself. All states for dense models.
    std::pair<int, int> successor_range(int state) const;
    /// Reveal position of a chain state; 0 for dense models.
    int position_of(int state) const;
};

/// Class-aligned chain with one hidden state per (symbol, class), numbered
/// symbol * classes + class. A state emits its own symbol with probability 1;
/// position t owns symbols [block_offsets[t], block_offsets[t+1]). The
/// untrained model is uniform over position-0 states and over each next
/// block, so every class keeps equal mass. Last-position states self-loop.
HmmModel make_positional_hmm(int classes, std::vector<int> block_sizes);

struct LabeledSequence {
    std::vector<int> symbols; // global symbol ids, one per reveal position
    int label = 0;
};

/// Count-based maximum likelihood with add-one smoothing. initial(o,c) is
/// P(c) P(o | c) over block 0; transitions from (o,c) spread over the next
/// block within class c only, so filtering scores P(c) P(o_1..o_t | c) under a
/// first-order chain per class.
HmmModel train_hmm(HmmModel model, std::span<const LabeledSequence> sequences);

/// Scaled forward pass. alpha[t] is the filtered state distribution after
/// observation t; the return value is log P(observations).
double forward(const HmmModel& model, std::span<const int> observations, std::vector<std::vector<double>>* alpha);

/// Class with the largest filtered mass after the whole prefix; the lowest
/// class index wins ties. Throws std::invalid_argument on an empty prefix.
Prediction predict_hmm(const HmmModel& model, std::span<const int> revealed_prefix);

/// Incremental filter that keeps the posterior between reveals.
class HmmFilter {
public:
    explicit HmmFilter(const HmmModel& model) : model_(&model) {}
    void reset() { alpha_.clear(); }
    void observe(int symbol);
    bool empty() const noexcept { return alpha_.empty(); }
    const std::vector<double>& posterior() const noexcept { return alpha_; }
    int best_class() const;

private:
    const HmmModel* model_;
    std::vector<double> alpha_;
};

// Text format:
//   hmm v1
//   dims <states> <symbols> <classes> <positions>
//   trained <0|1>
//   state_class <states ints>
//   block_offsets <positions+1 ints>      (only when positions > 0)
//   initial <states values>
//   transition, then one row per line
//   emission, then one row per line
void save_hmm(std::ostream& out, const HmmModel& model);
HmmModel load_hmm(std::istream& in);

} // namespace intuition::baselines
