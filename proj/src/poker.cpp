#include "intuition/poker.hpp"

#include <algorithm>
#include <bit>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace intuition::poker {

bool is_valid(Card c) noexcept { return c.suit >= 1 && c.suit <= 4 && c.rank >= 1 && c.rank <= 13; }

std::string_view to_string(HandClass c) noexcept {
    static constexpr std::array<std::string_view, kHandClasses> names{
        "nothing", "one_pair", "two_pairs", "three_of_a_kind", "straight",
        "flush", "full_house", "four_of_a_kind", "straight_flush", "royal_flush"};
    return names[static_cast<int>(c)];
}

HandClass evaluate_hand(std::span<const Card, 5> hand) noexcept {
    std::array<int, 13> counts{};
    std::uint32_t rank_bits = 0;
    bool flush = true;
    for (const auto& c : hand) {
        ++counts[c.rank - 1];
        rank_bits |= 1U << (c.rank - 1);
        flush = flush && c.suit == hand[0].suit;
    }

    int pairs = 0;
    int trips = 0;
    int quads = 0;
    for (int n : counts) {
        pairs += n == 2;
        trips += n == 3;
        quads += n == 4;
    }
    // Five of a kind needs a repeated card; score it with the quads.
    quads += std::count(counts.begin(), counts.end(), 5);

    bool straight = false;
    bool royal = false;
    if (std::popcount(rank_bits) == 5) {
        // Ace is bit 0; bit 13 stands for the ace above the king.
        const std::uint32_t bits = rank_bits | ((rank_bits & 1U) << 13);
        for (int low = 0; low + 4 <= 13; ++low) {
            if (((bits >> low) & 0x1FU) == 0x1FU) {
                straight = true;
                royal = royal || low == 9;
            }
        }
    }

    if (straight && flush)
        return royal ? HandClass::RoyalFlush : HandClass::StraightFlush;
    if (quads)
        return HandClass::FourOfAKind;
    if (trips && pairs)
        return HandClass::FullHouse;
    if (flush)
        return HandClass::Flush;
    if (straight)
        return HandClass::Straight;
    if (trips)
        return HandClass::ThreeOfAKind;
    if (pairs == 2)
        return HandClass::TwoPairs;
    if (pairs == 1)
        return HandClass::OnePair;
    return HandClass::Nothing;
}

HandClass evaluate_hand(std::span<const Card> hand) {
    if (hand.size() != 5)
        throw std::invalid_argument("a poker hand has five cards, got " + std::to_string(hand.size()));
    return evaluate_hand(std::span<const Card, 5>(hand.data(), 5));
}

namespace {

ClassDistribution enumerate_completions(std::span<const Card> seen) {
    std::array<bool, 52> used{};
    for (const auto& c : seen)
        used[c.code()] = true;
    std::vector<Card> deck;
    for (int code = 0; code < 52; ++code)
        if (!used[code])
            deck.push_back(Card::from_code(code));

    std::array<Card, 5> hand{};
    std::copy(seen.begin(), seen.end(), hand.begin());
    const int need = 5 - static_cast<int>(seen.size());
    std::array<std::uint64_t, kHandClasses> counts{};
    std::uint64_t total = 0;

    // Lexicographic combinations of `need` cards from the remaining deck.
    std::array<int, 5> idx{};
    for (int i = 0; i < need; ++i)
        idx[i] = i;
    const int n = static_cast<int>(deck.size());
    for (;;) {
        for (int i = 0; i < need; ++i)
            hand[seen.size() + i] = deck[idx[i]];
        ++counts[static_cast<int>(evaluate_hand(std::span<const Card, 5>(hand)))];
        ++total;
        int i = need - 1;
        while (i >= 0 && idx[i] == n - need + i)
            --i;
        if (i < 0)
            break;
        ++idx[i];
        for (int j = i + 1; j < need; ++j)
            idx[j] = idx[j - 1] + 1;
    }

    ClassDistribution dist{};
    for (int k = 0; k < kHandClasses; ++k)
        dist[k] = static_cast<double>(counts[k]) / static_cast<double>(total);
    return dist;
}

} // namespace

ClassDistribution naive_poker_distribution(std::span<const Card> seen) {
    if (seen.size() > 5)
        throw std::invalid_argument("at most five cards can be seen");
    std::array<bool, 52> used{};
    for (const auto& c : seen) {
        if (!is_valid(c))
            throw std::invalid_argument("invalid card");
        if (used[c.code()])
            throw std::invalid_argument("duplicate card in a fixed deck");
        used[c.code()] = true;
    }
    if (seen.size() == 5) {
        ClassDistribution d{};
        d[static_cast<int>(evaluate_hand(seen))] = 1.0;
        return d;
    }
    if (seen.empty()) {
        static std::once_flag once;
        static ClassDistribution cached;
        std::call_once(once, [] { cached = enumerate_completions({}); });
        return cached;
    }
    return enumerate_completions(seen);
}

double naive_poker_probability(std::span<const Card> seen, HandClass target) {
    return naive_poker_distribution(seen)[static_cast<int>(target)];
}

} // namespace intuition::poker
