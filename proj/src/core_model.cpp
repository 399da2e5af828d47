#include "intuition/core_model.hpp"

#include "intuition/detail/mix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace intuition {

ScaledScore::ScaledScore(int value) : value_(value) {
    if (value < 1 || value > 10)
        throw std::domain_error("score " + std::to_string(value) + " outside 1..10");
}

UnitFraction::UnitFraction(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0))
        throw std::domain_error("fraction " + std::to_string(value) + " outside [0,1]");
}

UnitFraction UnitFraction::clamped(double value) {
    if (std::isnan(value))
        throw std::domain_error("fraction is NaN");
    return UnitFraction(std::clamp(value, 0.0, 1.0));
}

Symbol::Symbol(std::string label_, int ordinal_index_, int alphabet_size_)
    : label(std::move(label_)), ordinal_index(ordinal_index_), alphabet_size(alphabet_size_) {
    if (alphabet_size < 1)
        throw std::domain_error("symbol alphabet must be non-empty");
    if (ordinal_index < 0 || ordinal_index >= alphabet_size)
        throw std::domain_error("symbol ordinal " + std::to_string(ordinal_index) + " outside alphabet of " +
                                std::to_string(alphabet_size));
}

bool is_symbolic(const Payload& p) noexcept { return std::holds_alternative<Symbol>(p); }

std::string payload_to_string(const Payload& p) {
    if (const auto* s = std::get_if<Symbol>(&p))
        return s->label;
    return std::to_string(std::get<double>(p));
}

std::string_view to_string(AnswerClass c) noexcept {
    switch (c) {
    case AnswerClass::Correct: return "correct";
    case AnswerClass::Wrong: return "wrong";
    case AnswerClass::Adjusted: return "adjusted";
    case AnswerClass::HighlyInaccurate: return "highly_inaccurate";
    }
    return "?";
}

void IntuitionConfig::validate() const {
    if (importance_threshold < 1 || importance_threshold > 10)
        throw std::domain_error("importance_threshold must be in 1..10");
    if (adjusted_answer_radius < 1)
        throw std::domain_error("adjusted_answer_radius must be >= 1");
    if (!std::isfinite(adjustment_factor))
        throw std::domain_error("adjustment_factor must be finite");
}

// ─── ExperienceSet ────────────────────────────────────────────

void ExperienceSet::add(ExperienceElement element) {
    if (by_id_.contains(element.id))
        throw std::invalid_argument("duplicate experience id '" + element.id + "'");
    if (element.revision_count < 0)
        throw std::invalid_argument("negative revision_count");
    const std::size_t pos = elements_.size();
    by_id_.emplace(element.id, pos);
    by_tag_[element.domain_tag].push_back(pos);
    elements_.push_back(std::move(element));
}

std::size_t ExperienceSet::position_of(std::string_view id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end())
        throw std::out_of_range("no experience with id '" + std::string(id) + "'");
    return it->second;
}

const ExperienceElement* ExperienceSet::find(std::string_view id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &elements_[it->second];
}

bool ExperienceSet::has_tag(std::string_view tag) const { return by_tag_.find(tag) != by_tag_.end(); }

std::span<const std::size_t> ExperienceSet::candidates(std::string_view tag) const {
    auto it = by_tag_.find(tag);
    if (it == by_tag_.end())
        return {};
    return it->second;
}

// ─── Formula pieces ───────────────────────────────────────────

UnitFraction normalize_score(ScaledScore s) noexcept { return UnitFraction(s.value() / 10.0); }

UnitFraction normalize_score(int s) { return normalize_score(ScaledScore(s)); }

UnitFraction p_ip_given_np(UnitFraction base, std::span<const UnitFraction> np_availabilities) {
    if (np_availabilities.empty())
        throw NoNormalProcessError("intuition needs at least one normal process");
    double p = base.value();
    for (auto a : np_availabilities)
        p *= a.value();
    return UnitFraction::clamped(p);
}

namespace {

// Walks tag, its ancestors, then the whole set. Returns the first non-empty
// level without allocating for the tag levels.
struct Pool {
    std::span<const std::size_t> indices;
    bool everything = false;
};

Pool find_pool(std::string_view tag, const ExperienceSet& set, bool cross_domain) {
    for (;;) {
        auto c = set.candidates(tag);
        if (!c.empty())
            return {c, false};
        const auto slash = tag.rfind('/');
        if (slash == std::string_view::npos)
            break;
        tag = tag.substr(0, slash);
    }
    if (cross_domain && !set.empty())
        return {{}, true};
    return {};
}

bool better(const ExperienceElement& a, std::size_t ia, const ExperienceElement& b, std::size_t ib) {
    if (a.priority != b.priority)
        return a.priority > b.priority;
    if (a.importance_ip != b.importance_ip)
        return a.importance_ip > b.importance_ip;
    if (a.first_seen != b.first_seen)
        return a.first_seen < b.first_seen;
    if (a.revision_count != b.revision_count)
        return a.revision_count < b.revision_count; // revisions dilute
    return ia < ib;
}

template <typename F>
void for_each_in(const Pool& pool, const ExperienceSet& set, F&& f) {
    if (pool.everything) {
        for (std::size_t i = 0; i < set.size(); ++i)
            f(i);
    } else {
        for (auto i : pool.indices)
            f(i);
    }
}

std::size_t best_in(const Pool& pool, const ExperienceSet& set) {
    const auto elems = set.elements();
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for_each_in(pool, set, [&](std::size_t i) {
        if (best == std::numeric_limits<std::size_t>::max() || better(elems[i], i, elems[best], best))
            best = i;
    });
    return best;
}

} // namespace

std::vector<std::size_t> candidate_pool(const ProblemElement& problem, const ExperienceSet& set,
                                        bool cross_domain) {
    const auto pool = find_pool(problem.domain_tag, set, cross_domain);
    std::vector<std::size_t> out;
    for_each_in(pool, set, [&](std::size_t i) { out.push_back(i); });
    return out;
}

const ExperienceElement& select_experience(const ProblemElement& problem, const ExperienceSet& set,
                                           bool cross_domain) {
    const auto pool = find_pool(problem.domain_tag, set, cross_domain);
    if (!pool.everything && pool.indices.empty())
        throw NoExperienceError("no experience maps to '" + problem.domain_tag + "'");
    return set.elements()[best_in(pool, set)];
}

MappedAnswer mapping_fn(UnitFraction p_ip_np, ScaledScore imp_ip, ScaledScore priority,
                        const Payload& element_value, UnitFraction external) {
    MappedAnswer m;
    m.delta = p_ip_np.value() * normalize_score(imp_ip).value() + normalize_score(priority).value() +
              external.value();
    m.payload = element_value;
    return m;
}

AnswerClass classify_answer(ScaledScore imp_ip, ScaledScore imp_np, int threshold) {
    const int ip = imp_ip.value();
    const int np = imp_np.value();
    if (np > ip && ip < threshold)
        return AnswerClass::Wrong;
    if (ip > np && ip > threshold)
        return AnswerClass::Correct;
    if (ip > np && ip < threshold)
        return AnswerClass::Adjusted;
    return AnswerClass::HighlyInaccurate;
}

Payload apply_adjustment(const MappedAnswer& m, double adjustment) {
    if (!std::isfinite(m.delta))
        throw std::domain_error("mapped delta is not finite");
    const double shift = m.delta + adjustment;
    if (const auto* s = std::get_if<Symbol>(&m.payload)) {
        const long moved = static_cast<long>(s->ordinal_index) + std::lround(shift);
        const int idx = static_cast<int>(std::clamp<long>(moved, 0, s->alphabet_size - 1));
        if (idx == s->ordinal_index)
            return *s;
        return Symbol("#" + std::to_string(idx), idx, s->alphabet_size);
    }
    return std::get<double>(m.payload) + shift;
}

namespace {

std::string label_for(int ordinal, int alphabet, const Pool& pool, const ExperienceSet& set) {
    std::string found;
    for_each_in(pool, set, [&](std::size_t i) {
        if (!found.empty())
            return;
        if (const auto* s = std::get_if<Symbol>(&set.elements()[i].value))
            if (s->ordinal_index == ordinal && s->alphabet_size == alphabet)
                found = s->label;
    });
    return found.empty() ? "#" + std::to_string(ordinal) : found;
}

Payload nearest_possible(const Payload& mapped, int radius, const Pool& pool, const ExperienceSet& set) {
    if (const auto* s = std::get_if<Symbol>(&mapped)) {
        int best = -1;
        int best_dist = radius + 1;
        for_each_in(pool, set, [&](std::size_t i) {
            const auto* c = std::get_if<Symbol>(&set.elements()[i].value);
            if (!c || c->alphabet_size != s->alphabet_size)
                return;
            const int d = std::abs(c->ordinal_index - s->ordinal_index);
            if (d < best_dist || (d == best_dist && c->ordinal_index < best)) {
                best = c->ordinal_index;
                best_dist = d;
            }
        });
        if (best < 0 || best == s->ordinal_index)
            return mapped;
        return Symbol(label_for(best, s->alphabet_size, pool, set), best, s->alphabet_size);
    }
    const double v = std::get<double>(mapped);
    double best = v;
    double best_dist = static_cast<double>(radius);
    bool any = false;
    for_each_in(pool, set, [&](std::size_t i) {
        const auto* c = std::get_if<double>(&set.elements()[i].value);
        if (!c)
            return;
        const double d = std::abs(*c - v);
        if (d <= best_dist && (!any || d < best_dist)) {
            best = *c;
            best_dist = d;
            any = true;
        }
    });
    return best;
}

} // namespace

MappedAnswer intuit(const ProblemElement& problem, const ExperienceSet& set, const IntuitionConfig& cfg,
                    std::span<const UnitFraction> np_availabilities) {
    // Steps 1-2: the problem element is given; map it onto the experience set.
    const auto pool = find_pool(problem.domain_tag, set, cfg.cross_domain);
    if (!pool.everything && pool.indices.empty())
        throw NoExperienceError("no experience maps to '" + problem.domain_tag + "'");
    const auto& chosen = set.elements()[best_in(pool, set)];

    // Steps 3-4: probability of the intuition path given every dependent
    // normal process.
    const auto p = p_ip_given_np(cfg.base_ip_prob, np_availabilities);

    // Step 5: mapping plus adjustment.
    MappedAnswer m = mapping_fn(p, chosen.importance_ip, chosen.priority, chosen.value, cfg.external_factor);
    m.chosen_id = chosen.id;
    m.payload = apply_adjustment(m, cfg.adjustment_factor);
    if (auto* s = std::get_if<Symbol>(&m.payload); s && *s != std::get<Symbol>(chosen.value))
        s->label = label_for(s->ordinal_index, s->alphabet_size, pool, set);

    // Step 6: classify and shape the answer.
    const auto cls = classify_answer(chosen.importance_ip, chosen.importance_np, cfg.importance_threshold);
    m.classification = cls;
    switch (cls) {
    case AnswerClass::Correct:
        break;
    case AnswerClass::Adjusted:
        m.payload = nearest_possible(m.payload, cfg.adjusted_answer_radius, pool, set);
        break;
    case AnswerClass::Wrong:
        if (auto* s = std::get_if<Symbol>(&m.payload)) {
            const int idx = (s->ordinal_index + 1) % s->alphabet_size;
            m.payload = Symbol(label_for(idx, s->alphabet_size, pool, set), idx, s->alphabet_size);
        } else {
            m.payload = std::get<double>(m.payload) + cfg.adjusted_answer_radius;
        }
        break;
    case AnswerClass::HighlyInaccurate: {
        std::uint64_t h = detail::combine(cfg.seed, detail::fnv1a(problem.id));
        h = detail::combine(h, problem.time_t);
        h = detail::combine(h, detail::fnv1a(chosen.id));
        if (auto* s = std::get_if<Symbol>(&m.payload)) {
            if (s->alphabet_size > 1) {
                int idx = static_cast<int>(detail::bounded(h, static_cast<std::uint64_t>(s->alphabet_size - 1)));
                if (idx >= s->ordinal_index)
                    ++idx;
                m.payload = Symbol(label_for(idx, s->alphabet_size, pool, set), idx, s->alphabet_size);
            }
        } else {
            // ±[1,10) units away from the mapped value.
            const double magnitude = 1.0 + 9.0 * static_cast<double>(h >> 11) * 0x1.0p-53;
            const double sign = (h & 1U) ? 1.0 : -1.0;
            m.payload = std::get<double>(m.payload) + sign * magnitude;
        }
        break;
    }
    }
    return m;
}

} // namespace intuition
