#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace intuition {

// ─── Scores ───────────────────────────────────────────────────
// Every priority/importance/confidence lives on the integer 1..10 scale
// and is divided by 10 only when it enters arithmetic.

class ScaledScore {
public:
    explicit ScaledScore(int value);
    int value() const noexcept { return value_; }
    friend bool operator==(ScaledScore, ScaledScore) = default;
    friend auto operator<=>(ScaledScore, ScaledScore) = default;

private:
    int value_;
};

class UnitFraction {
public:
    explicit UnitFraction(double value);
    /// Clamps into [0,1]; NaN is still rejected.
    static UnitFraction clamped(double value);
    double value() const noexcept { return value_; }
    friend bool operator==(UnitFraction, UnitFraction) = default;

private:
    double value_;
};

// ─── Payloads ─────────────────────────────────────────────────

struct Symbol {
    std::string label;
    int ordinal_index = 0;
    int alphabet_size = 1;

    Symbol(std::string label, int ordinal_index, int alphabet_size);
    friend bool operator==(const Symbol&, const Symbol&) = default;
};

using Payload = std::variant<double, Symbol>;

bool is_symbolic(const Payload& p) noexcept;
std::string payload_to_string(const Payload& p);

// ─── Problem / experience ─────────────────────────────────────

struct ProblemElement {
    std::string id;
    // Hierarchical token, components separated by '/'. "car" is a domain,
    // "car/safety=low/persons=4" a refined cue set inside it.
    std::string domain_tag;
    std::vector<Payload> observed;
    std::uint64_t time_t = 0;
};

struct ExperienceElement {
    std::string id;
    std::string domain_tag;
    Payload value;
    ScaledScore priority{1};
    ScaledScore importance_ip{1};
    ScaledScore importance_np{1};
    ScaledScore confidence{1};
    std::uint64_t first_seen = 0;
    int revision_count = 0;
};

class NoExperienceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoNormalProcessError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Experience store with a tag index. Single writer; concurrent readers are
/// fine as long as nobody mutates.
class ExperienceSet {
public:
    void add(ExperienceElement element);

    /// Applies `mutate` to the element and bumps its revision_count. The id
    /// and domain_tag are not allowed to change.
    template <typename F>
    void revise(std::string_view id, F&& mutate) {
        auto& e = elements_.at(position_of(id));
        const std::string id_before = e.id;
        const std::string tag_before = e.domain_tag;
        mutate(e);
        if (e.id != id_before || e.domain_tag != tag_before)
            throw std::invalid_argument("revise: id and domain_tag are immutable");
        ++e.revision_count;
    }

    const ExperienceElement* find(std::string_view id) const;
    bool has_tag(std::string_view tag) const;
    /// Indices of the elements carrying exactly `tag`; empty when none.
    std::span<const std::size_t> candidates(std::string_view tag) const;

    std::span<const ExperienceElement> elements() const noexcept { return elements_; }
    std::size_t size() const noexcept { return elements_.size(); }
    bool empty() const noexcept { return elements_.empty(); }

private:
    struct StringHash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const noexcept {
            return std::hash<std::string_view>{}(s);
        }
    };
    using Index = std::unordered_map<std::string, std::vector<std::size_t>, StringHash, std::equal_to<>>;

    std::size_t position_of(std::string_view id) const;

    std::vector<ExperienceElement> elements_;
    std::unordered_map<std::string, std::size_t, StringHash, std::equal_to<>> by_id_;
    Index by_tag_;
};

// ─── Answers ──────────────────────────────────────────────────

enum class AnswerClass { Correct, Wrong, Adjusted, HighlyInaccurate };

std::string_view to_string(AnswerClass c) noexcept;

struct MappedAnswer {
    double delta = 0.0;
    Payload payload{0.0};
    std::optional<AnswerClass> classification;
    std::string chosen_id;
};

struct IntuitionConfig {
    UnitFraction base_ip_prob{0.7};
    UnitFraction external_factor{0.1};
    double adjustment_factor = -1.4;
    int importance_threshold = 5;
    int adjusted_answer_radius = 1;
    // Fall back to every element when no same-domain candidate exists.
    bool cross_domain = true;
    std::uint64_t seed = 0;

    void validate() const;
};

// ─── Operations ───────────────────────────────────────────────

UnitFraction normalize_score(ScaledScore s) noexcept;
UnitFraction normalize_score(int s);

/// base × Π availabilities, clamped to [0,1].
UnitFraction p_ip_given_np(UnitFraction base, std::span<const UnitFraction> np_availabilities);

/// Candidate pool: exact tag, then each '/'-trimmed ancestor of the tag,
/// then (cross-domain) the whole set. Empty only when the set is empty or
/// cross-domain matching is disabled and no ancestor matched.
std::vector<std::size_t> candidate_pool(const ProblemElement& problem, const ExperienceSet& set,
                                        bool cross_domain = true);

/// Highest priority; ties go to higher importance_ip, then earlier
/// first_seen, then fewer revisions, then earlier insertion.
const ExperienceElement& select_experience(const ProblemElement& problem, const ExperienceSet& set,
                                           bool cross_domain = true);

/// delta = p·imp/10 + priority/10 + external. Payload is carried unchanged
/// and the classification is left unset.
MappedAnswer mapping_fn(UnitFraction p_ip_np, ScaledScore imp_ip, ScaledScore priority,
                        const Payload& element_value, UnitFraction external);

AnswerClass classify_answer(ScaledScore imp_ip, ScaledScore imp_np, int threshold);

/// Numeric: value + delta + adjustment. Symbolic: ordinal shifted by
/// round(delta + adjustment), clamped to the alphabet.
Payload apply_adjustment(const MappedAnswer& m, double adjustment);

/// Runs the six-step pipeline: select an experience for the problem, fold
/// the normal processes into P(IP|NP), map, adjust, classify, and shape the
/// final payload according to the classification.
MappedAnswer intuit(const ProblemElement& problem, const ExperienceSet& set, const IntuitionConfig& cfg,
                    std::span<const UnitFraction> np_availabilities);

} // namespace intuition
