#pragma once

#include "intuition/poker.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace intuition::data {

// ─── Entities ─────────────────────────────────────────────────

enum class EntityTag { Known, Hidden, Unknown };

std::string_view to_string(EntityTag t) noexcept;
EntityTag entity_from_string(std::string_view s);

enum class Domain { Car, Poker };

std::string_view to_string(Domain d) noexcept;
Domain domain_from_string(std::string_view s);

// ─── Errors ───────────────────────────────────────────────────

class MissingFileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input; `line` is 1-based, 0 when not tied to a line.
class DataError : public std::runtime_error {
public:
    DataError(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

enum class ParseMode { Strict, Lenient };

struct LineError {
    std::size_t line = 0;
    std::string message;
};

template <typename Record>
struct LoadResult {
    std::vector<Record> records;
    std::vector<LineError> errors; // lenient mode only
};

// ─── Car evaluation ───────────────────────────────────────────

inline constexpr int kCarAttributes = 6;
inline constexpr int kCarClasses = 4;

struct AttributeDomain {
    std::string_view name;
    std::vector<std::string_view> values;
};

/// buying, maint, doors, persons, lug_boot, safety with their UCI value
/// lists in ordinal order.
const std::array<AttributeDomain, kCarAttributes>& car_attributes();
/// unacc, acc, good, vgood.
const std::array<std::string_view, kCarClasses>& car_classes();

int car_value_index(int attribute, std::string_view token) noexcept; // -1 when outside the domain
int car_class_index(std::string_view token) noexcept;

struct CarRecord {
    std::array<std::string, kCarAttributes> attributes;
    int label = 0; // index into car_classes()
    EntityTag entity = EntityTag::Known;
    std::uint8_t hidden_mask = 0; // bit i set: attribute i is never revealed

    bool is_alien() const noexcept { return entity == EntityTag::Unknown; }
};

LoadResult<CarRecord> parse_car(std::istream& in, ParseMode mode = ParseMode::Strict);
LoadResult<CarRecord> load_car(const std::filesystem::path& path, ParseMode mode = ParseMode::Strict);
std::string format_car(const CarRecord& r);
void write_car(std::ostream& out, std::span<const CarRecord> records);

/// The complete 1728-row attribute grid in UCI file order, labelled by the
/// hierarchical price/comfort/technology evaluation model.
std::vector<CarRecord> synthesize_car();
int evaluate_car(std::span<const int, kCarAttributes> value_indices) noexcept;

/// Nearest in-domain value for an out-of-domain token when the token is a
/// number ("12" doors is read as "5more"); -1 when no fit exists.
int fit_car_value(int attribute, std::string_view token) noexcept;

// ─── Poker hand ───────────────────────────────────────────────

inline constexpr int kPokerCards = 5;

struct PokerRecord {
    std::array<poker::Card, kPokerCards> cards{};
    int hand_class = 0;
    EntityTag entity = EntityTag::Known;
    std::uint8_t hidden_mask = 0;
};

LoadResult<PokerRecord> parse_poker(std::istream& in, ParseMode mode = ParseMode::Strict);
LoadResult<PokerRecord> load_poker(const std::filesystem::path& path, ParseMode mode = ParseMode::Strict);
std::string format_poker(const PokerRecord& r);
void write_poker(std::ostream& out, std::span<const PokerRecord> records);

/// `count` uniformly dealt hands (no repeated cards), labelled by the
/// evaluator.
std::vector<PokerRecord> synthesize_poker(std::size_t count, std::uint64_t seed);

// ─── Uncertainty injection ────────────────────────────────────

enum class InjectionMode {
    AlienOnly, // `fraction` of rows become Unknown
    EqualSplit // `fraction` Unknown plus the same number Hidden
};

/// Replaces a seeded selection of rows. Unknown rows get an out-of-domain
/// doors/persons token (a bus or truck); their label is the label of the
/// car the token fits best. Hidden rows keep their values but one
/// attribute is never revealed. Unselected rows are copied untouched.
std::vector<CarRecord> inject_alien_records(std::span<const CarRecord> records, double fraction,
                                            std::uint64_t seed, InjectionMode mode = InjectionMode::AlienOnly);

// ─── Reveal sequences ─────────────────────────────────────────

enum class EventKind { DeckChange, AlienRecord };

struct RevealEvent {
    EventKind kind = EventKind::DeckChange;
    std::size_t step_index = 0;
    std::uint64_t seed = 0; // deck draws for DeckChange
};

struct RevealStep {
    int slot = 0;      // attribute index (car) or deal position (poker)
    std::string token; // raw value text; empty when hidden
    int code = -1;     // car: domain index, poker: card code 0..51; -1 hidden or out-of-domain
    EntityTag tag = EntityTag::Known;
};

struct RevealSequence {
    std::string record_id;
    Domain domain = Domain::Car;
    std::vector<RevealStep> steps;
    std::vector<RevealEvent> events;
    int label = 0;
    EntityTag entity = EntityTag::Known; // record-level: Known when nothing was injected

    std::span<const RevealStep> prefix(std::size_t revealed) const;
    void check() const;
};

/// Natural reveal order 0..n-1.
std::vector<int> natural_order(Domain d);
/// Seeded permutation of the natural order.
std::vector<int> shuffled_order(Domain d, std::uint64_t seed);

/// Builds the step list for a record in the given slot order. Alien car rows
/// get an AlienRecord event at step 0; DeckChange events in `events` are
/// applied through inject_deck_change.
RevealSequence reveal_iterator(const CarRecord& record, std::span<const int> order,
                               std::span<const RevealEvent> events = {}, std::string record_id = {});
RevealSequence reveal_iterator(const PokerRecord& record, std::span<const int> order,
                               std::span<const RevealEvent> events = {}, std::string record_id = {});

/// A new deck arrives before step `step_index` (0..steps): every step from
/// there on is redrawn from a fresh seeded deck and tagged Unknown, and the
/// label is recomputed from the final five cards. step_index == steps
/// leaves the hand unchanged. Throws std::out_of_range past the end.
RevealSequence inject_deck_change(RevealSequence sequence, std::size_t step_index, std::uint64_t seed);

/// Poker counterpart of equal-split injection: `fraction` of the sequences get
/// a seeded deck change at a step in 1..4, as many others get one hidden card.
std::vector<RevealSequence> inject_poker_uncertainty(std::vector<RevealSequence> sequences, double fraction,
                                                     std::uint64_t seed, InjectionMode mode);

// ─── Reveal log ───────────────────────────────────────────────

/// JSON lines, one reveal step per line:
///   {"record":..,"domain":"car","step":0,"of":6,"slot":2,"slot_name":"doors",
///    "token":"4","code":2,"tag":"known","entity":"known","label":1,
///    "label_name":"acc","events":[{"kind":"deck_change","step":3,"seed":7}]}
void write_reveal_log(std::ostream& out, std::span<const RevealSequence> sequences);
std::vector<RevealSequence> read_reveal_log(std::istream& in);

std::string slot_name(Domain d, int slot);
std::string label_name(Domain d, int label);

} // namespace intuition::data
