#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

namespace intuition::poker {

// UCI poker-hand encoding: suit 1..4 (hearts, spades, diamonds, clubs),
// rank 1..13 (ace, 2..10, jack, queen, king).
struct Card {
    int suit = 1;
    int rank = 1;

    friend bool operator==(Card, Card) = default;
    /// 0..51, suit-major.
    int code() const noexcept { return (suit - 1) * 13 + (rank - 1); }
    static Card from_code(int code) noexcept { return {code / 13 + 1, code % 13 + 1}; }
};

bool is_valid(Card c) noexcept;

enum class HandClass : int {
    Nothing = 0,
    OnePair = 1,
    TwoPairs = 2,
    ThreeOfAKind = 3,
    Straight = 4,
    Flush = 5,
    FullHouse = 6,
    FourOfAKind = 7,
    StraightFlush = 8,
    RoyalFlush = 9,
};

inline constexpr int kHandClasses = 10;

std::string_view to_string(HandClass c) noexcept;

/// Class of exactly five cards. Repeated cards are scored by their ranks and
/// suits like any other card, which is what a mid-hand deck swap produces.
HandClass evaluate_hand(std::span<const Card, 5> hand) noexcept;
HandClass evaluate_hand(std::span<const Card> hand);

using ClassDistribution = std::array<double, kHandClasses>;

/// Final-class distribution when the remaining cards are drawn uniformly
/// from a fixed 52-card deck minus `seen`. Throws std::invalid_argument on
/// invalid or duplicate cards or more than five cards. The empty-hand case
/// is enumerated once and cached.
ClassDistribution naive_poker_distribution(std::span<const Card> seen);

double naive_poker_probability(std::span<const Card> seen, HandClass target);

} // namespace intuition::poker
