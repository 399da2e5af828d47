#include "intuition/datasets.hpp"

#include "intuition/detail/mix.hpp"

#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

namespace intuition::data {

using poker::Card;

std::string_view to_string(EntityTag t) noexcept {
    switch (t) {
    case EntityTag::Known: return "known";
    case EntityTag::Hidden: return "hidden";
    case EntityTag::Unknown: return "unknown";
    }
    return "?";
}

EntityTag entity_from_string(std::string_view s) {
    if (s == "known") return EntityTag::Known;
    if (s == "hidden") return EntityTag::Hidden;
    if (s == "unknown") return EntityTag::Unknown;
    throw std::invalid_argument("unknown entity tag '" + std::string(s) + "'");
}

std::string_view to_string(Domain d) noexcept { return d == Domain::Car ? "car" : "poker"; }

Domain domain_from_string(std::string_view s) {
    if (s == "car") return Domain::Car;
    if (s == "poker") return Domain::Poker;
    throw std::invalid_argument("unknown dataset '" + std::string(s) + "'");
}

DataError::DataError(std::size_t line, const std::string& what)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos)
            return out;
        start = pos + 1;
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw MissingFileError("cannot open '" + path.string() + "'");
    return in;
}

// Shared line loop: `parse` returns a record or throws DataError(0, msg).
template <typename Record, typename F>
LoadResult<Record> parse_lines(std::istream& in, ParseMode mode, F&& parse) {
    LoadResult<Record> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = trim(line);
        if (body.empty())
            continue;
        try {
            out.records.push_back(parse(body));
        } catch (const DataError& e) {
            if (mode == ParseMode::Strict)
                throw DataError(lineno, e.what());
            out.errors.push_back({lineno, e.what()});
        }
    }
    return out;
}

} // namespace

// ─── Car ──────────────────────────────────────────────────────

const std::array<AttributeDomain, kCarAttributes>& car_attributes() {
    static const std::array<AttributeDomain, kCarAttributes> attrs{{
        {"buying", {"vhigh", "high", "med", "low"}},
        {"maint", {"vhigh", "high", "med", "low"}},
        {"doors", {"2", "3", "4", "5more"}},
        {"persons", {"2", "4", "more"}},
        {"lug_boot", {"small", "med", "big"}},
        {"safety", {"low", "med", "high"}},
    }};
    return attrs;
}

const std::array<std::string_view, kCarClasses>& car_classes() {
    static constexpr std::array<std::string_view, kCarClasses> classes{"unacc", "acc", "good", "vgood"};
    return classes;
}

int car_value_index(int attribute, std::string_view token) noexcept {
    if (attribute < 0 || attribute >= kCarAttributes)
        return -1;
    const auto& values = car_attributes()[attribute].values;
    const auto it = std::find(values.begin(), values.end(), token);
    return it == values.end() ? -1 : static_cast<int>(it - values.begin());
}

int car_class_index(std::string_view token) noexcept {
    const auto& c = car_classes();
    const auto it = std::find(c.begin(), c.end(), token);
    return it == c.end() ? -1 : static_cast<int>(it - c.begin());
}

int evaluate_car(std::span<const int, kCarAttributes> v) noexcept {
    enum { Buying, Maint, Doors, Persons, Lug, Safety };
    // Ordinals: price attributes vhigh=0..low=3; doors 2,3,4,5more; persons
    // 2,4,more; lug_boot small,med,big; safety low,med,high.
    const int b = v[Buying], m = v[Maint];
    int price; // 0 very high .. 3 low
    if ((b == 3 && m == 3) || (b == 3 && m == 2) || (b == 2 && m == 3))
        price = 3;
    else if ((b == 2 && m == 2) || (b == 3 && m == 1))
        price = 2;
    else if ((b == 0 && m <= 1) || (b == 1 && m == 0))
        price = 0;
    else
        price = 1;

    int comfort; // 0 poor, 1 fair, 2 good
    if (v[Persons] == 0 || (v[Doors] == 0 && v[Persons] == 2 && v[Lug] == 0))
        comfort = 0;
    else if (v[Lug] == 2 || (v[Lug] == 1 && (v[Doors] >= 2 || (v[Doors] == 1 && v[Persons] == 2))))
        comfort = 2;
    else
        comfort = 1;

    int tech; // 0 unacceptable .. 3 very good
    const int safety = v[Safety];
    if (safety == 0 || comfort == 0)
        tech = 0;
    else if (safety == 2 && comfort == 2)
        tech = 3;
    else if ((safety == 2 && comfort == 1) || (safety == 1 && comfort == 2))
        tech = 2;
    else
        tech = 1;

    if (price == 0 || tech == 0)
        return 0;
    static constexpr int low_price[] = {0, 1, 2, 3};
    static constexpr int med_price[] = {0, 1, 1, 3};
    if (price == 3)
        return low_price[tech];
    if (price == 2)
        return med_price[tech];
    return tech >= 2 ? 1 : 0;
}

LoadResult<CarRecord> parse_car(std::istream& in, ParseMode mode) {
    return parse_lines<CarRecord>(in, mode, [](std::string_view body) {
        const auto f = split(body, ',');
        if (f.size() != kCarAttributes + 1)
            throw DataError(0, "expected 7 comma-separated fields, got " + std::to_string(f.size()));
        CarRecord r;
        for (int a = 0; a < kCarAttributes; ++a) {
            const auto tok = trim(f[a]);
            if (car_value_index(a, tok) < 0)
                throw DataError(0, "'" + std::string(tok) + "' is not a valid " +
                                       std::string(car_attributes()[a].name) + " value");
            r.attributes[a] = std::string(tok);
        }
        const auto cls = trim(f[kCarAttributes]);
        r.label = car_class_index(cls);
        if (r.label < 0)
            throw DataError(0, "unknown class '" + std::string(cls) + "'");
        return r;
    });
}

LoadResult<CarRecord> load_car(const std::filesystem::path& path, ParseMode mode) {
    auto in = open_or_throw(path);
    return parse_car(in, mode);
}

std::string format_car(const CarRecord& r) {
    std::string out;
    for (const auto& a : r.attributes) {
        out += a;
        out += ',';
    }
    out += car_classes().at(r.label);
    return out;
}

void write_car(std::ostream& out, std::span<const CarRecord> records) {
    for (const auto& r : records)
        out << format_car(r) << '\n';
}

std::vector<CarRecord> synthesize_car() {
    const auto& attrs = car_attributes();
    std::vector<CarRecord> out;
    std::array<int, kCarAttributes> idx{};
    for (;;) {
        CarRecord r;
        for (int a = 0; a < kCarAttributes; ++a)
            r.attributes[a] = std::string(attrs[a].values[idx[a]]);
        r.label = evaluate_car(idx);
        out.push_back(std::move(r));
        // Odometer increment, last attribute fastest.
        int a = kCarAttributes - 1;
        while (a >= 0 && ++idx[a] == static_cast<int>(attrs[a].values.size()))
            idx[a--] = 0;
        if (a < 0)
            break;
    }
    return out;
}

int fit_car_value(int attribute, std::string_view token) noexcept {
    if (const int direct = car_value_index(attribute, token); direct >= 0)
        return direct;
    // Only the count-valued attributes have a numeric reading.
    static constexpr int doors_numeric[] = {2, 3, 4, 5};
    static constexpr int persons_numeric[] = {2, 4, 5};
    std::span<const int> numeric;
    if (attribute == 2)
        numeric = doors_numeric;
    else if (attribute == 3)
        numeric = persons_numeric;
    else
        return -1;
    int n = 0;
    auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), n);
    if (ec != std::errc{} || p != token.data() + token.size() || n < 0)
        return -1;
    int best = 0;
    for (int i = 1; i < static_cast<int>(numeric.size()); ++i)
        if (std::abs(numeric[i] - n) < std::abs(numeric[best] - n))
            best = i;
    // Anything above the top value belongs to the open-ended "more" bucket.
    if (n > numeric.back())
        best = static_cast<int>(numeric.size()) - 1;
    return best;
}

// ─── Poker ────────────────────────────────────────────────────

LoadResult<PokerRecord> parse_poker(std::istream& in, ParseMode mode) {
    return parse_lines<PokerRecord>(in, mode, [](std::string_view body) {
        const auto f = split(body, ',');
        if (f.size() != 2 * kPokerCards + 1)
            throw DataError(0, "expected 11 comma-separated fields, got " + std::to_string(f.size()));
        std::array<int, 2 * kPokerCards + 1> v{};
        for (std::size_t i = 0; i < f.size(); ++i) {
            const auto tok = trim(f[i]);
            auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v[i]);
            if (ec != std::errc{} || p != tok.data() + tok.size())
                throw DataError(0, "field " + std::to_string(i + 1) + " '" + std::string(tok) + "' is not an integer");
        }
        PokerRecord r;
        std::array<bool, 52> seen{};
        for (int c = 0; c < kPokerCards; ++c) {
            r.cards[c] = Card{v[2 * c], v[2 * c + 1]};
            if (!poker::is_valid(r.cards[c]))
                throw DataError(0, "card " + std::to_string(c + 1) + " has suit/rank outside 1..4/1..13");
            if (seen[r.cards[c].code()])
                throw DataError(0, "card " + std::to_string(c + 1) + " repeats an earlier card");
            seen[r.cards[c].code()] = true;
        }
        r.hand_class = v[2 * kPokerCards];
        if (r.hand_class < 0 || r.hand_class >= poker::kHandClasses)
            throw DataError(0, "hand class outside 0..9");
        return r;
    });
}

LoadResult<PokerRecord> load_poker(const std::filesystem::path& path, ParseMode mode) {
    auto in = open_or_throw(path);
    return parse_poker(in, mode);
}

std::string format_poker(const PokerRecord& r) {
    std::string out;
    for (const auto& c : r.cards)
        out += std::to_string(c.suit) + ',' + std::to_string(c.rank) + ',';
    out += std::to_string(r.hand_class);
    return out;
}

void write_poker(std::ostream& out, std::span<const PokerRecord> records) {
    for (const auto& r : records)
        out << format_poker(r) << '\n';
}

std::vector<PokerRecord> synthesize_poker(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::array<int, 52> deck{};
    std::iota(deck.begin(), deck.end(), 0);
    std::vector<PokerRecord> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        // Partial Fisher-Yates: the first five slots are the deal.
        for (int k = 0; k < kPokerCards; ++k) {
            std::uniform_int_distribution<int> pick(k, 51);
            std::swap(deck[k], deck[pick(rng)]);
        }
        PokerRecord r;
        for (int k = 0; k < kPokerCards; ++k)
            r.cards[k] = Card::from_code(deck[k]);
        r.hand_class = static_cast<int>(poker::evaluate_hand(std::span<const Card, 5>(r.cards)));
        out.push_back(r);
    }
    return out;
}

// ─── Injection ────────────────────────────────────────────────

namespace {

struct Selection {
    std::vector<std::size_t> unknown;
    std::vector<std::size_t> hidden;
};

Selection select_rows(std::size_t n, double fraction, std::uint64_t seed, InjectionMode mode,
                      std::mt19937_64& rng) {
    if (!(fraction >= 0.0 && fraction <= 1.0))
        throw std::invalid_argument("injection fraction must be in [0,1]");
    rng.seed(seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const auto per_kind = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
    const std::size_t n_unknown = std::min(per_kind, n);
    const std::size_t n_hidden = mode == InjectionMode::EqualSplit ? std::min(per_kind, n - n_unknown) : 0;
    Selection s;
    s.unknown.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_unknown));
    s.hidden.assign(order.begin() + static_cast<std::ptrdiff_t>(n_unknown),
                    order.begin() + static_cast<std::ptrdiff_t>(n_unknown + n_hidden));
    return s;
}

int car_key(std::span<const int, kCarAttributes> idx) {
    int key = 0;
    for (int a = 0; a < kCarAttributes; ++a)
        key = key * 4 + idx[a];
    return key;
}

} // namespace

std::vector<CarRecord> inject_alien_records(std::span<const CarRecord> records, double fraction,
                                            std::uint64_t seed, InjectionMode mode) {
    std::mt19937_64 rng;
    const auto sel = select_rows(records.size(), fraction, seed, mode, rng);
    std::vector<CarRecord> out(records.begin(), records.end());

    std::unordered_map<int, int> label_of;
    for (const auto& r : records) {
        std::array<int, kCarAttributes> idx{};
        bool ok = true;
        for (int a = 0; a < kCarAttributes && ok; ++a)
            ok = (idx[a] = car_value_index(a, r.attributes[a])) >= 0;
        if (ok)
            label_of.emplace(car_key(idx), r.label);
    }

    static constexpr std::array<std::string_view, 4> alien_doors{"6", "8", "10", "12"};
    static constexpr std::array<std::string_view, 4> alien_persons{"6", "8", "20", "40"};
    for (auto i : sel.unknown) {
        auto& r = out[i];
        const int attr = std::uniform_int_distribution<int>(0, 1)(rng) == 0 ? 2 : 3;
        const auto& pool = attr == 2 ? alien_doors : alien_persons;
        const auto token = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];

        std::array<int, kCarAttributes> idx{};
        bool ok = true;
        for (int a = 0; a < kCarAttributes && ok; ++a)
            ok = (idx[a] = car_value_index(a, r.attributes[a])) >= 0;
        if (ok) {
            idx[attr] = fit_car_value(attr, token);
            if (auto it = label_of.find(car_key(idx)); it != label_of.end())
                r.label = it->second;
        }
        r.attributes[attr] = std::string(token);
        r.entity = EntityTag::Unknown;
    }
    for (auto i : sel.hidden) {
        auto& r = out[i];
        r.hidden_mask = static_cast<std::uint8_t>(1U << std::uniform_int_distribution<int>(0, kCarAttributes - 1)(rng));
        r.entity = EntityTag::Hidden;
    }
    return out;
}

// ─── Reveal sequences ─────────────────────────────────────────

std::span<const RevealStep> RevealSequence::prefix(std::size_t revealed) const {
    if (revealed > steps.size())
        throw std::out_of_range("prefix longer than the sequence");
    return std::span<const RevealStep>(steps).first(revealed);
}

void RevealSequence::check() const {
    const int n = domain == Domain::Car ? kCarAttributes : kPokerCards;
    if (static_cast<int>(steps.size()) != n)
        throw std::invalid_argument("sequence must reveal every slot once");
    std::vector<bool> seen(n, false);
    for (const auto& s : steps) {
        if (s.slot < 0 || s.slot >= n || seen[s.slot])
            throw std::invalid_argument("slot revealed twice or out of range");
        seen[s.slot] = true;
    }
    for (const auto& e : events)
        if (e.step_index > steps.size())
            throw std::invalid_argument("event past the end of the sequence");
    const int classes = domain == Domain::Car ? kCarClasses : poker::kHandClasses;
    if (label < 0 || label >= classes)
        throw std::invalid_argument("label outside the class range");
}

std::vector<int> natural_order(Domain d) {
    std::vector<int> order(d == Domain::Car ? kCarAttributes : kPokerCards);
    std::iota(order.begin(), order.end(), 0);
    return order;
}

std::vector<int> shuffled_order(Domain d, std::uint64_t seed) {
    auto order = natural_order(d);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    return order;
}

namespace {

void check_order(std::span<const int> order, int n) {
    std::vector<int> sorted(order.begin(), order.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> expect(n);
    std::iota(expect.begin(), expect.end(), 0);
    if (sorted != expect)
        throw std::invalid_argument("reveal order must be a permutation of the slots");
}

std::string card_token(Card c) { return std::to_string(c.suit) + "," + std::to_string(c.rank); }

} // namespace

RevealSequence reveal_iterator(const CarRecord& record, std::span<const int> order,
                               std::span<const RevealEvent> events, std::string record_id) {
    check_order(order, kCarAttributes);
    RevealSequence seq;
    seq.record_id = std::move(record_id);
    seq.domain = Domain::Car;
    seq.label = record.label;
    seq.entity = record.entity;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const int slot = order[k];
        RevealStep step;
        step.slot = slot;
        step.code = car_value_index(slot, record.attributes[slot]);
        if (record.hidden_mask & (1U << slot)) {
            step.tag = EntityTag::Hidden;
        } else {
            step.token = record.attributes[slot];
            if (step.code < 0) {
                step.tag = EntityTag::Unknown;
                seq.events.push_back({EventKind::AlienRecord, k, 0});
            }
        }
        seq.steps.push_back(std::move(step));
    }
    for (const auto& e : events) {
        if (e.kind == EventKind::DeckChange)
            throw std::invalid_argument("deck changes only apply to poker hands");
        if (e.step_index > seq.steps.size())
            throw std::out_of_range("event past the end of the sequence");
        seq.events.push_back(e);
    }
    return seq;
}

RevealSequence reveal_iterator(const PokerRecord& record, std::span<const int> order,
                               std::span<const RevealEvent> events, std::string record_id) {
    check_order(order, kPokerCards);
    RevealSequence seq;
    seq.record_id = std::move(record_id);
    seq.domain = Domain::Poker;
    seq.label = record.hand_class;
    seq.entity = record.entity;
    for (const int slot : order) {
        RevealStep step;
        step.slot = slot;
        step.code = record.cards[slot].code();
        if (record.hidden_mask & (1U << slot))
            step.tag = EntityTag::Hidden;
        else
            step.token = card_token(record.cards[slot]);
        seq.steps.push_back(std::move(step));
    }
    for (const auto& e : events) {
        if (e.kind == EventKind::DeckChange)
            seq = inject_deck_change(std::move(seq), e.step_index, e.seed);
        else if (e.step_index > seq.steps.size())
            throw std::out_of_range("event past the end of the sequence");
        else
            seq.events.push_back(e);
    }
    return seq;
}

RevealSequence inject_deck_change(RevealSequence seq, std::size_t step_index, std::uint64_t seed) {
    if (seq.domain != Domain::Poker)
        throw std::invalid_argument("deck changes only apply to poker hands");
    if (step_index > seq.steps.size())
        throw std::out_of_range("deck change at step " + std::to_string(step_index) + " is past the end");
    seq.events.push_back({EventKind::DeckChange, step_index, seed});
    if (step_index == seq.steps.size())
        return seq;

    std::mt19937_64 rng(seed);
    std::array<int, 52> deck{};
    std::iota(deck.begin(), deck.end(), 0);
    std::shuffle(deck.begin(), deck.end(), rng);
    std::size_t next = 0;
    for (std::size_t k = step_index; k < seq.steps.size(); ++k) {
        auto& s = seq.steps[k];
        s.code = deck[next++];
        s.token = card_token(Card::from_code(s.code));
        s.tag = EntityTag::Unknown;
    }
    std::array<Card, kPokerCards> hand{};
    for (std::size_t k = 0; k < seq.steps.size(); ++k)
        hand[k] = Card::from_code(seq.steps[k].code);
    seq.label = static_cast<int>(poker::evaluate_hand(std::span<const Card, 5>(hand)));
    seq.entity = EntityTag::Unknown;
    return seq;
}

std::vector<RevealSequence> inject_poker_uncertainty(std::vector<RevealSequence> sequences, double fraction,
                                                     std::uint64_t seed, InjectionMode mode) {
    std::mt19937_64 rng;
    const auto sel = select_rows(sequences.size(), fraction, seed, mode, rng);
    for (auto i : sel.unknown) {
        const auto step = static_cast<std::size_t>(std::uniform_int_distribution<int>(1, kPokerCards - 1)(rng));
        sequences[i] = inject_deck_change(std::move(sequences[i]), step, rng());
    }
    for (auto i : sel.hidden) {
        auto& s = sequences[i].steps[std::uniform_int_distribution<std::size_t>(0, sequences[i].steps.size() - 1)(rng)];
        s.token.clear();
        s.tag = EntityTag::Hidden;
        sequences[i].entity = EntityTag::Hidden;
    }
    return sequences;
}

// ─── Reveal log ───────────────────────────────────────────────

std::string slot_name(Domain d, int slot) {
    if (d == Domain::Car)
        return std::string(car_attributes().at(slot).name);
    return "card" + std::to_string(slot + 1);
}

std::string label_name(Domain d, int label) {
    if (d == Domain::Car)
        return std::string(car_classes().at(label));
    return std::string(poker::to_string(static_cast<poker::HandClass>(label)));
}

namespace {

std::string_view event_name(EventKind k) { return k == EventKind::DeckChange ? "deck_change" : "alien_record"; }

EventKind event_from_string(std::string_view s) {
    if (s == "deck_change") return EventKind::DeckChange;
    if (s == "alien_record") return EventKind::AlienRecord;
    throw std::invalid_argument("unknown event kind '" + std::string(s) + "'");
}

} // namespace

void write_reveal_log(std::ostream& out, std::span<const RevealSequence> sequences) {
    for (const auto& seq : sequences) {
        nlohmann::json events = nlohmann::json::array();
        for (const auto& e : seq.events)
            events.push_back({{"kind", event_name(e.kind)}, {"step", e.step_index}, {"seed", e.seed}});
        for (std::size_t k = 0; k < seq.steps.size(); ++k) {
            const auto& s = seq.steps[k];
            nlohmann::json line{
                {"record", seq.record_id},
                {"domain", to_string(seq.domain)},
                {"step", k},
                {"of", seq.steps.size()},
                {"slot", s.slot},
                {"slot_name", slot_name(seq.domain, s.slot)},
                {"token", s.token},
                {"code", s.code},
                {"tag", to_string(s.tag)},
                {"entity", to_string(seq.entity)},
                {"label", seq.label},
                {"label_name", label_name(seq.domain, seq.label)},
                {"events", events},
            };
            out << line.dump() << '\n';
        }
    }
}

std::vector<RevealSequence> read_reveal_log(std::istream& in) {
    std::vector<RevealSequence> out;
    std::string line;
    std::size_t lineno = 0;
    std::size_t expected = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        try {
            const auto j = nlohmann::json::parse(line);
            const auto step = j.at("step").get<std::size_t>();
            if (step == 0) {
                if (!out.empty() && out.back().steps.size() != expected)
                    throw std::invalid_argument("previous record is missing steps");
                RevealSequence seq;
                seq.record_id = j.at("record").get<std::string>();
                seq.domain = domain_from_string(j.at("domain").get<std::string>());
                seq.label = j.at("label").get<int>();
                seq.entity = entity_from_string(j.at("entity").get<std::string>());
                for (const auto& e : j.at("events"))
                    seq.events.push_back({event_from_string(e.at("kind").get<std::string>()),
                                          e.at("step").get<std::size_t>(), e.at("seed").get<std::uint64_t>()});
                expected = j.at("of").get<std::size_t>();
                out.push_back(std::move(seq));
            } else if (out.empty() || out.back().steps.size() != step ||
                       out.back().record_id != j.at("record").get<std::string>()) {
                throw std::invalid_argument("steps out of order");
            }
            RevealStep s;
            s.slot = j.at("slot").get<int>();
            s.token = j.at("token").get<std::string>();
            s.code = j.at("code").get<int>();
            s.tag = entity_from_string(j.at("tag").get<std::string>());
            out.back().steps.push_back(std::move(s));
        } catch (const DataError&) {
            throw;
        } catch (const std::exception& e) {
            throw DataError(lineno, e.what());
        }
    }
    if (!out.empty() && out.back().steps.size() != expected)
        throw DataError(lineno, "last record is missing steps");
    for (const auto& seq : out)
        seq.check();
    return out;
}

} // namespace intuition::data
