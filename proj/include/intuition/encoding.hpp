#pragma once

#include "intuition/core_model.hpp"
#include "intuition/datasets.hpp"
#include "intuition/nn.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

// Turns reveal prefixes into what each method consumes: NN feature vectors,
// HMM symbols, and hierarchical experience tags for the intuition model.
namespace intuition::encoding {

/// Input the naive (untrained) baselines were never built for: an alien
/// attribute value or a card that already appeared in the hand.
class UnexpectedInputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using data::RevealStep;

// ─── Car ──────────────────────────────────────────────────────

/// One-hot per attribute value (21), then an "unseen" flag per attribute
/// (6), then an out-of-vocabulary flag per attribute (6).
inline constexpr int kCarFeatures = 33;

/// `strict` rejects alien values with UnexpectedInputError.
baselines::EncodedRecord encode_car_prefix(std::span<const RevealStep> prefix, int label, bool strict);

/// Symbol blocks for a fixed reveal order: position t covers the values of
/// attribute order[t], then "hidden", then "out of vocabulary".
std::vector<int> car_hmm_blocks(std::span<const int> order);
int car_hmm_symbol(const RevealStep& step, int position, std::span<const int> block_offsets);
std::vector<int> car_hmm_symbols(std::span<const RevealStep> prefix, std::span<const int> block_offsets);

/// Attribute order from most to least decisive: ascending conditional
/// entropy of the class given the attribute over `records` (hidden values
/// skipped, alien values fitted). Ties keep column order.
std::array<int, data::kCarAttributes> car_cue_order(std::span<const data::CarRecord> records);

/// "car/<attr>=<value>/..." over the visible attributes of `codes`
/// (-1 = not visible), components in cue order.
std::string car_tag(std::span<const int, data::kCarAttributes> codes,
                    std::span<const int, data::kCarAttributes> cue_order);

/// Visible, fitted value codes of a reveal prefix.
std::array<int, data::kCarAttributes> car_prefix_codes(std::span<const RevealStep> prefix);

// ─── Poker ────────────────────────────────────────────────────

/// Rank counts / 4 (13), suit counts / 5 (4), prefix length one-hot (6),
/// hidden count / 5, repeated-card flag, then the hand shape: pairs / 2,
/// trips, quads, flush alive, straight alive.
inline constexpr int kPokerFeatures = 30;

/// `strict` rejects repeated cards with UnexpectedInputError.
baselines::EncodedRecord encode_poker_prefix(std::span<const RevealStep> prefix, int label, bool strict);

/// Per position: 16 events (rank matches 0..3 x flush alive x straight
/// alive), then "hidden", then "repeated card".
inline constexpr int kPokerHmmBlock = 18;
std::vector<int> poker_hmm_blocks();
/// Symbol of prefix.back() given the steps before it.
int poker_hmm_symbol(std::span<const RevealStep> prefix);
std::vector<int> poker_hmm_symbols(std::span<const RevealStep> prefix);

/// "poker/m=<rank multiplicities>/n=<revealed>/f=<flush alive>/s=<straight
/// alive>/h=<hidden>"; trimming from the right coarsens the cue.
std::string poker_tag(std::span<const RevealStep> prefix);

// ─── Experience bootstrap ─────────────────────────────────────

struct BootstrapConfig {
    int ip_lo = 6; // importance_ip ~ U{ip_lo..10}
    int np_hi = 6; // importance_np ~ U{1..np_hi}
    // Pseudo-count pulling a tag's label shares toward its parent's, so a
    // thinly observed cue set defers to the coarser one. 0 disables it.
    double prior_weight = 8.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Counts (tag, label) pairs and turns each into an experience element:
/// priority is the decile of the label's share within the tag (shrunk toward
/// the parent tag's shares by prior_weight), confidence a
/// log2 support decile, importances seeded per element id, first_seen the
/// index of the first record that produced the pair.
class ExperienceBuilder {
public:
    ExperienceBuilder(std::string domain, int classes, std::vector<std::string> class_names);
    void observe(const std::string& tag, int label, std::uint64_t record_index);
    ExperienceSet build(const BootstrapConfig& cfg) const;

private:
    std::vector<double> shares(const std::string& tag, double prior_weight,
                               std::unordered_map<std::string, std::vector<double>>& memo) const;

    struct TagStats {
        std::uint64_t total = 0;
        std::vector<std::uint64_t> per_label;
    };
    struct Pair {
        std::string tag;
        int label;
        std::uint64_t first_seen;
    };

    std::string domain_;
    int classes_;
    std::vector<std::string> class_names_;
    std::unordered_map<std::string, TagStats> stats_;
    std::unordered_map<std::string, std::size_t> pair_index_;
    std::vector<Pair> pairs_; // first-occurrence order
};

/// Every subset of each record's visible attributes becomes a tag, so any
/// reveal prefix finds its exact cue set when the warm-up saw it.
ExperienceSet build_car_experience(std::span<const data::CarRecord> warmup,
                                   std::span<const int, data::kCarAttributes> cue_order,
                                   const BootstrapConfig& cfg);

/// Every reveal prefix of every sequence, plus its ancestors.
ExperienceSet build_poker_experience(std::span<const data::RevealSequence> warmup, const BootstrapConfig& cfg);

} // namespace intuition::encoding
