#include "doctest.h"

#include "intuition/datasets.hpp"

#include <algorithm>
#include <map>
#include <sstream>

using namespace intuition;
using namespace intuition::data;

namespace {

int count_tag(const std::vector<CarRecord>& rows, EntityTag t) {
    return static_cast<int>(std::count_if(rows.begin(), rows.end(), [&](const CarRecord& r) { return r.entity == t; }));
}

// Straight-line 5-card classifier used as the label oracle.
int oracle_class(const std::array<poker::Card, 5>& cards) {
    int ranks[14] = {};
    int suits[5] = {};
    for (auto c : cards) {
        ++ranks[c.rank];
        ++suits[c.suit];
    }
    int pairs = 0, trips = 0, quads = 0, distinct = 0;
    for (int r = 1; r <= 13; ++r) {
        distinct += ranks[r] > 0;
        pairs += ranks[r] == 2;
        trips += ranks[r] == 3;
        quads += ranks[r] == 4;
    }
    const bool flush = *std::max_element(suits, suits + 5) == 5;
    bool straight = false, royal = false;
    if (distinct == 5) {
        for (int lo = 1; lo <= 9; ++lo)
            straight = straight || (ranks[lo] && ranks[lo + 1] && ranks[lo + 2] && ranks[lo + 3] && ranks[lo + 4]);
        royal = ranks[10] && ranks[11] && ranks[12] && ranks[13] && ranks[1];
        straight = straight || royal;
    }
    if (straight && flush) return royal ? 9 : 8;
    if (quads) return 7;
    if (trips && pairs) return 6;
    if (flush) return 5;
    if (straight) return 4;
    if (trips) return 3;
    if (pairs == 2) return 2;
    if (pairs == 1) return 1;
    return 0;
}

} // namespace

TEST_SUITE("datasets") {

TEST_CASE("a car line parses into its class") {
    std::istringstream in("vhigh,vhigh,2,2,small,low,unacc\n");
    const auto r = parse_car(in);
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].attributes[0] == "vhigh");
    CHECK(r.records[0].attributes[5] == "low");
    CHECK(car_classes()[r.records[0].label] == "unacc");
    CHECK(r.records[0].entity == EntityTag::Known);
}

TEST_CASE("a poker line parses into a royal flush") {
    std::istringstream in("1,10,1,11,1,13,1,12,1,1,9\n");
    const auto r = parse_poker(in);
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].hand_class == 9);
    CHECK(r.records[0].cards[4] == poker::Card{1, 1});
}

TEST_CASE("empty inputs give empty lists") {
    std::istringstream a(""), b("");
    CHECK(parse_car(a).records.empty());
    CHECK(parse_poker(b).records.empty());
}

TEST_CASE("malformed lines name their line in strict mode and are skipped in lenient mode") {
    const std::string text = "vhigh,vhigh,2,2,small,low,unacc\nvhigh,vhigh,2,2,small\nlow,low,2,2,small,low,unacc\n";
    std::istringstream strict(text);
    try {
        parse_car(strict);
        FAIL("expected a data error");
    } catch (const DataError& e) {
        CHECK(e.line() == 2);
    }
    std::istringstream lenient(text);
    const auto r = parse_car(lenient, ParseMode::Lenient);
    CHECK(r.records.size() == 2);
    REQUIRE(r.errors.size() == 1);
    CHECK(r.errors[0].line == 2);
}

TEST_CASE("bad poker lines are rejected") {
    std::istringstream dup("1,10,1,10,1,13,1,12,1,1,0\n");
    CHECK_THROWS_AS(parse_poker(dup), DataError);
    std::istringstream range("5,10,1,11,1,13,1,12,1,1,9\n");
    CHECK_THROWS_AS(parse_poker(range), DataError);
    std::istringstream label("1,10,1,11,1,13,1,12,1,1,12\n");
    CHECK_THROWS_AS(parse_poker(label), DataError);
}

TEST_CASE("missing files raise MissingFileError") {
    CHECK_THROWS_AS(load_car("/nonexistent/car.data"), MissingFileError);
    CHECK_THROWS_AS(load_poker("/nonexistent/poker.data"), MissingFileError);
}

TEST_CASE("the synthetic car grid has the published class counts") {
    const auto cars = synthesize_car();
    REQUIRE(cars.size() == 1728);
    std::map<std::string_view, int> counts;
    for (const auto& c : cars)
        ++counts[car_classes()[c.label]];
    CHECK(counts["unacc"] == 1210);
    CHECK(counts["acc"] == 384);
    CHECK(counts["good"] == 69);
    CHECK(counts["vgood"] == 65);
    CHECK(format_car(cars.front()) == "vhigh,vhigh,2,2,small,low,unacc");
    CHECK(format_car(cars.back()) == "low,low,5more,more,big,high,vgood");
}

TEST_CASE("parse, write and parse again is the identity") {
    const auto cars = synthesize_car();
    std::stringstream ss;
    write_car(ss, cars);
    const auto back = parse_car(ss).records;
    REQUIRE(back.size() == cars.size());
    for (std::size_t i = 0; i < cars.size(); ++i) {
        CHECK(back[i].attributes == cars[i].attributes);
        CHECK(back[i].label == cars[i].label);
    }
    const auto hands = synthesize_poker(500, 3);
    std::stringstream ps;
    write_poker(ps, hands);
    const auto hands_back = parse_poker(ps).records;
    REQUIRE(hands_back.size() == hands.size());
    for (std::size_t i = 0; i < hands.size(); ++i) {
        CHECK(hands_back[i].cards == hands[i].cards);
        CHECK(hands_back[i].hand_class == hands[i].hand_class);
    }
}

TEST_CASE("every synthetic poker label matches the oracle") {
    const auto hands = synthesize_poker(5000, 99);
    int mismatches = 0;
    for (const auto& h : hands)
        mismatches += oracle_class(h.cards) != h.hand_class;
    CHECK(mismatches == 0);
}

TEST_CASE("equal-split injection balances known, hidden and unknown rows") {
    const auto cars = synthesize_car();
    const std::vector<CarRecord> rows(cars.begin(), cars.begin() + 301);
    const auto out = inject_alien_records(rows, 1.0 / 3.0, 17, InjectionMode::EqualSplit);
    const int known = count_tag(out, EntityTag::Known);
    const int hidden = count_tag(out, EntityTag::Hidden);
    const int unknown = count_tag(out, EntityTag::Unknown);
    CHECK(known + hidden + unknown == 301);
    CHECK(std::abs(known - hidden) <= 1);
    CHECK(std::abs(known - unknown) <= 1);
    CHECK(std::abs(hidden - unknown) <= 1);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (out[i].entity == EntityTag::Known) {
            CHECK(out[i].attributes == rows[i].attributes);
            CHECK(out[i].label == rows[i].label);
            CHECK(out[i].hidden_mask == 0);
        } else if (out[i].entity == EntityTag::Unknown) {
            // An alien token lies outside the attribute's domain.
            bool alien = false;
            for (int a = 0; a < kCarAttributes; ++a)
                alien = alien || car_value_index(a, out[i].attributes[a]) < 0;
            CHECK(alien);
        } else {
            CHECK(out[i].hidden_mask != 0);
        }
    }
}

TEST_CASE("injection fractions at the extremes") {
    const auto cars = synthesize_car();
    const std::vector<CarRecord> rows(cars.begin(), cars.begin() + 50);
    const auto none = inject_alien_records(rows, 0.0, 1);
    CHECK(count_tag(none, EntityTag::Known) == 50);
    const auto all = inject_alien_records(rows, 1.0, 1);
    CHECK(count_tag(all, EntityTag::Unknown) == 50);
    CHECK_THROWS(inject_alien_records(rows, 1.5, 1));
}

TEST_CASE("deck changes") {
    const auto hands = synthesize_poker(20, 5);
    const auto seq = reveal_iterator(hands[0], natural_order(Domain::Poker));
    REQUIRE(seq.steps.size() == 5);

    SUBCASE("at the final step nothing is redrawn") {
        const auto same = inject_deck_change(seq, 5, 3);
        for (std::size_t i = 0; i < 5; ++i)
            CHECK(same.steps[i].code == seq.steps[i].code);
        CHECK(same.label == seq.label);
    }
    SUBCASE("at step 0 the whole hand is redrawn and relabelled") {
        const auto fresh = inject_deck_change(seq, 0, 3);
        std::array<poker::Card, 5> cards;
        for (std::size_t i = 0; i < 5; ++i) {
            CHECK(fresh.steps[i].tag == EntityTag::Unknown);
            cards[i] = poker::Card::from_code(fresh.steps[i].code);
        }
        CHECK(fresh.label == oracle_class(cards));
        CHECK(fresh.entity == EntityTag::Unknown);
        const auto again = inject_deck_change(seq, 0, 3);
        for (std::size_t i = 0; i < 5; ++i)
            CHECK(again.steps[i].code == fresh.steps[i].code);
    }
    SUBCASE("past the end is an error") { CHECK_THROWS_AS(inject_deck_change(seq, 6, 3), std::out_of_range); }
}

TEST_CASE("reveal logs round trip") {
    const auto cars = synthesize_car();
    const std::vector<CarRecord> rows(cars.begin(), cars.begin() + 30);
    const auto injected = inject_alien_records(rows, 1.0 / 3.0, 4, InjectionMode::EqualSplit);
    std::vector<RevealSequence> seqs;
    for (std::size_t i = 0; i < injected.size(); ++i)
        seqs.push_back(reveal_iterator(injected[i], natural_order(Domain::Car), {}, "car-" + std::to_string(i)));
    auto poker_seq = reveal_iterator(synthesize_poker(1, 2)[0], natural_order(Domain::Poker), {}, "p");
    seqs.push_back(inject_deck_change(poker_seq, 2, 8));
    std::stringstream ss;
    write_reveal_log(ss, seqs);
    const auto back = read_reveal_log(ss);
    REQUIRE(back.size() == seqs.size());
    for (std::size_t i = 0; i < seqs.size(); ++i) {
        CHECK(back[i].record_id == seqs[i].record_id);
        CHECK(back[i].label == seqs[i].label);
        CHECK(back[i].entity == seqs[i].entity);
        CHECK(back[i].events.size() == seqs[i].events.size());
        REQUIRE(back[i].steps.size() == seqs[i].steps.size());
        for (std::size_t k = 0; k < seqs[i].steps.size(); ++k) {
            CHECK(back[i].steps[k].token == seqs[i].steps[k].token);
            CHECK(back[i].steps[k].code == seqs[i].steps[k].code);
            CHECK(back[i].steps[k].tag == seqs[i].steps[k].tag);
        }
    }
}

TEST_CASE("shuffled reveal orders are seeded permutations") {
    auto a = shuffled_order(Domain::Car, 5);
    CHECK(a == shuffled_order(Domain::Car, 5));
    std::sort(a.begin(), a.end());
    CHECK(a == natural_order(Domain::Car));
}

}
