#include "intuition/encoding.hpp"

#include "intuition/detail/mix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace intuition::encoding {

using data::EntityTag;
using data::kCarAttributes;
using poker::Card;

namespace {

// Offset of each attribute's one-hot block inside the car feature vector.
constexpr std::array<int, kCarAttributes + 1> kCarOneHot{0, 4, 8, 12, 15, 18, 21};
constexpr int kCarUnseen = 21;
constexpr int kCarOov = 27;

} // namespace

// ─── Car ──────────────────────────────────────────────────────

baselines::EncodedRecord encode_car_prefix(std::span<const RevealStep> prefix, int label, bool strict) {
    baselines::EncodedRecord r;
    r.features.assign(kCarFeatures, 0.0);
    r.mask.assign(kCarAttributes, 0);
    r.label = label;
    for (int a = 0; a < kCarAttributes; ++a)
        r.features[kCarUnseen + a] = 1.0;
    for (const auto& s : prefix) {
        if (s.tag == EntityTag::Hidden)
            continue;
        const int a = s.slot;
        if (s.code < 0) {
            if (strict)
                throw UnexpectedInputError("unexpected " + data::slot_name(data::Domain::Car, a) + " value '" +
                                           s.token + "'");
            r.features[kCarOov + a] = 1.0;
        } else {
            r.features[kCarOneHot[a] + s.code] = 1.0;
        }
        r.features[kCarUnseen + a] = 0.0;
        r.mask[a] = 1;
    }
    return r;
}

std::vector<int> car_hmm_blocks(std::span<const int> order) {
    std::vector<int> blocks;
    for (int a : order)
        blocks.push_back(static_cast<int>(data::car_attributes().at(a).values.size()) + 2);
    return blocks;
}

int car_hmm_symbol(const RevealStep& step, int position, std::span<const int> block_offsets) {
    const int base = block_offsets[position];
    const int values = block_offsets[position + 1] - base - 2;
    if (step.tag == EntityTag::Hidden)
        return base + values;
    if (step.code < 0)
        return base + values + 1;
    return base + step.code;
}

std::vector<int> car_hmm_symbols(std::span<const RevealStep> prefix, std::span<const int> block_offsets) {
    std::vector<int> out;
    out.reserve(prefix.size());
    for (std::size_t t = 0; t < prefix.size(); ++t)
        out.push_back(car_hmm_symbol(prefix[t], static_cast<int>(t), block_offsets));
    return out;
}

namespace {

int visible_code(const data::CarRecord& r, int a) {
    if (r.hidden_mask & (1U << a))
        return -1;
    return data::fit_car_value(a, r.attributes[a]);
}

// Component text per (attribute, value), built once.
const std::string& car_component(int a, int v) {
    static const auto table = [] {
        std::array<std::array<std::string, 4>, kCarAttributes> t;
        for (int i = 0; i < kCarAttributes; ++i) {
            const auto& dom = data::car_attributes()[i];
            for (std::size_t j = 0; j < dom.values.size(); ++j)
                t[i][j] = "/" + std::string(dom.name) + "=" + std::string(dom.values[j]);
        }
        return t;
    }();
    return table[a][v];
}

} // namespace

std::array<int, kCarAttributes> car_cue_order(std::span<const data::CarRecord> records) {
    std::array<double, kCarAttributes> entropy{};
    for (int a = 0; a < kCarAttributes; ++a) {
        std::array<std::array<double, data::kCarClasses>, 4> counts{};
        double total = 0.0;
        for (const auto& r : records) {
            const int v = visible_code(r, a);
            if (v < 0)
                continue;
            counts[v][r.label] += 1.0;
            total += 1.0;
        }
        double h = 0.0;
        for (const auto& row : counts) {
            const double n = std::accumulate(row.begin(), row.end(), 0.0);
            for (double c : row)
                if (c > 0.0)
                    h -= c / total * std::log2(c / n);
        }
        entropy[a] = total > 0.0 ? h : 1e300;
    }
    std::array<int, kCarAttributes> order{};
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return entropy[x] < entropy[y]; });
    return order;
}

std::string car_tag(std::span<const int, kCarAttributes> codes, std::span<const int, kCarAttributes> cue_order) {
    std::string tag = "car";
    for (int a : cue_order)
        if (codes[a] >= 0)
            tag += car_component(a, codes[a]);
    return tag;
}

std::array<int, kCarAttributes> car_prefix_codes(std::span<const RevealStep> prefix) {
    std::array<int, kCarAttributes> codes;
    codes.fill(-1);
    for (const auto& s : prefix) {
        if (s.tag == EntityTag::Hidden)
            continue;
        codes[s.slot] = s.code >= 0 ? s.code : data::fit_car_value(s.slot, s.token);
    }
    return codes;
}

// ─── Poker ────────────────────────────────────────────────────

namespace {

struct Hand {
    std::array<int, 14> rank_count{}; // index 1..13
    std::array<int, 5> suit_count{};  // index 1..4
    std::uint64_t seen = 0;           // card-code bitset
    int visible = 0;
    int hidden = 0;
    bool repeated = false;

    void add(const RevealStep& s) {
        if (s.tag == EntityTag::Hidden) {
            ++hidden;
            return;
        }
        const Card c = Card::from_code(s.code);
        const std::uint64_t bit = 1ULL << s.code;
        repeated = repeated || (seen & bit);
        seen |= bit;
        ++rank_count[c.rank];
        ++suit_count[c.suit];
        ++visible;
    }

    bool flush_alive() const {
        return std::count_if(suit_count.begin() + 1, suit_count.end(), [](int n) { return n > 0; }) <= 1;
    }

    bool straight_alive() const {
        unsigned mask = 0;
        for (int r = 1; r <= 13; ++r) {
            if (rank_count[r] > 1)
                return false;
            if (rank_count[r])
                mask |= 1U << r;
        }
        if (rank_count[1])
            mask |= 1U << 14; // ace high
        if (mask == 0)
            return true;
        for (int lo = 1; lo <= 10; ++lo) {
            const unsigned window = 0x1FU << lo;
            // An ace may sit at either end; drop whichever copy the window misses.
            unsigned m = mask;
            if (rank_count[1])
                m &= ~((lo == 10 ? 1U << 1 : 1U << 14));
            if ((m & ~window) == 0)
                return true;
        }
        return false;
    }
};

Hand hand_of(std::span<const RevealStep> prefix) {
    Hand h;
    for (const auto& s : prefix)
        h.add(s);
    return h;
}

} // namespace

baselines::EncodedRecord encode_poker_prefix(std::span<const RevealStep> prefix, int label, bool strict) {
    baselines::EncodedRecord r;
    r.features.assign(kPokerFeatures, 0.0);
    r.mask.assign(data::kPokerCards, 0);
    r.label = label;
    const Hand h = hand_of(prefix);
    if (strict && h.repeated)
        throw UnexpectedInputError("a card appeared twice in one hand");
    for (int k = 1; k <= 13; ++k)
        r.features[k - 1] = h.rank_count[k] / 4.0;
    for (int s = 1; s <= 4; ++s)
        r.features[13 + s - 1] = h.suit_count[s] / 5.0;
    r.features[17 + std::min<std::size_t>(prefix.size(), 5)] = 1.0;
    r.features[23] = h.hidden / 5.0;
    r.features[24] = h.repeated ? 1.0 : 0.0;
    int groups[5] = {};
    for (int k = 1; k <= 13; ++k)
        ++groups[std::min(h.rank_count[k], 4)];
    r.features[25] = groups[2] / 2.0;
    r.features[26] = groups[3];
    r.features[27] = groups[4];
    r.features[28] = h.flush_alive() ? 1.0 : 0.0;
    r.features[29] = h.straight_alive() ? 1.0 : 0.0;
    for (const auto& s : prefix)
        if (s.tag != EntityTag::Hidden)
            r.mask[s.slot] = 1;
    return r;
}

std::vector<int> poker_hmm_blocks() { return std::vector<int>(data::kPokerCards, kPokerHmmBlock); }

int poker_hmm_symbol(std::span<const RevealStep> prefix) {
    const int base = static_cast<int>(prefix.size() - 1) * kPokerHmmBlock;
    const auto& last = prefix.back();
    if (last.tag == EntityTag::Hidden)
        return base + 16;
    Hand before = hand_of(prefix.first(prefix.size() - 1));
    if (before.seen & (1ULL << last.code))
        return base + 17;
    const int matches = std::min(before.rank_count[Card::from_code(last.code).rank], 3);
    before.add(last);
    return base + matches * 4 + (before.flush_alive() ? 2 : 0) + (before.straight_alive() ? 1 : 0);
}

std::vector<int> poker_hmm_symbols(std::span<const RevealStep> prefix) {
    std::vector<int> out;
    out.reserve(prefix.size());
    for (std::size_t t = 1; t <= prefix.size(); ++t)
        out.push_back(poker_hmm_symbol(prefix.first(t)));
    return out;
}

std::string poker_tag(std::span<const RevealStep> prefix) {
    const Hand h = hand_of(prefix);
    std::array<int, 13> mult{};
    int n = 0;
    for (int r = 1; r <= 13; ++r)
        if (h.rank_count[r])
            mult[n++] = h.rank_count[r];
    std::sort(mult.begin(), mult.begin() + n, std::greater<>());
    std::string tag = "poker/m=";
    if (n == 0)
        tag += '0';
    for (int i = 0; i < n; ++i) {
        if (i)
            tag += '-';
        tag += static_cast<char>('0' + mult[i]);
    }
    tag += "/n=";
    tag += static_cast<char>('0' + prefix.size());
    tag += h.flush_alive() ? "/f=1" : "/f=0";
    tag += h.straight_alive() ? "/s=1" : "/s=0";
    tag += "/h=";
    tag += static_cast<char>('0' + h.hidden);
    return tag;
}

// ─── Experience bootstrap ─────────────────────────────────────

void BootstrapConfig::validate() const {
    if (ip_lo < 1 || ip_lo > 10)
        throw std::invalid_argument("ip_lo must be in 1..10");
    if (np_hi < 1 || np_hi > 10)
        throw std::invalid_argument("np_hi must be in 1..10");
    if (!(prior_weight >= 0.0) || !std::isfinite(prior_weight))
        throw std::invalid_argument("prior_weight must be finite and >= 0");
}

ExperienceBuilder::ExperienceBuilder(std::string domain, int classes, std::vector<std::string> class_names)
    : domain_(std::move(domain)), classes_(classes), class_names_(std::move(class_names)) {
    if (classes_ < 1 || static_cast<int>(class_names_.size()) != classes_)
        throw std::invalid_argument("one class name per class is required");
}

void ExperienceBuilder::observe(const std::string& tag, int label, std::uint64_t record_index) {
    if (label < 0 || label >= classes_)
        throw std::invalid_argument("label outside the class range");
    auto& st = stats_[tag];
    if (st.per_label.empty())
        st.per_label.assign(classes_, 0);
    ++st.total;
    ++st.per_label[label];
    std::string key = tag;
    key += '#';
    key += class_names_[label];
    if (pair_index_.emplace(key, pairs_.size()).second)
        pairs_.push_back({tag, label, record_index});
}

std::vector<double> ExperienceBuilder::shares(const std::string& tag, double prior_weight,
                                              std::unordered_map<std::string, std::vector<double>>& memo) const {
    if (auto it = memo.find(tag); it != memo.end())
        return it->second;
    const auto& st = stats_.at(tag);
    std::vector<double> out(classes_);
    const auto cut = tag.rfind('/');
    const auto parent = cut == std::string::npos ? stats_.end() : stats_.find(tag.substr(0, cut));
    if (parent == stats_.end() || prior_weight == 0.0) {
        for (int c = 0; c < classes_; ++c)
            out[c] = static_cast<double>(st.per_label[c]) / static_cast<double>(st.total);
    } else {
        const auto prior = shares(parent->first, prior_weight, memo);
        const double denom = static_cast<double>(st.total) + prior_weight;
        for (int c = 0; c < classes_; ++c)
            out[c] = (static_cast<double>(st.per_label[c]) + prior_weight * prior[c]) / denom;
    }
    memo.emplace(tag, out);
    return out;
}

ExperienceSet ExperienceBuilder::build(const BootstrapConfig& cfg) const {
    cfg.validate();
    ExperienceSet set;
    std::unordered_map<std::string, std::vector<double>> memo;
    auto add = [&](const std::string& tag, int label, double share, std::uint64_t first_seen) {
        const auto n = stats_.at(tag).per_label[label];
        ExperienceElement e;
        e.id = tag + "#" + class_names_[label];
        e.domain_tag = tag;
        e.value = Symbol(class_names_[label], label, classes_);
        const auto decile = static_cast<int>(std::ceil(10.0 * share - 1e-9));
        e.priority = ScaledScore(std::clamp(decile, 1, 10));
        e.confidence = ScaledScore(std::clamp(1 + static_cast<int>(std::log2(static_cast<double>(std::max<std::uint64_t>(n, 1)))), 1, 10));
        const std::uint64_t h = detail::combine(cfg.seed, detail::fnv1a(e.id));
        e.importance_ip = ScaledScore(cfg.ip_lo + static_cast<int>(detail::bounded(h, 11 - cfg.ip_lo)));
        e.importance_np = ScaledScore(1 + static_cast<int>(detail::bounded(detail::mix64(h), cfg.np_hi)));
        e.first_seen = first_seen;
        set.add(std::move(e));
    };
    // Observed pairs keep their first-occurrence order. A label the tag never
    // saw directly but inherits through the parent shares is added right
    // after the tag's first pair, dated to the tag's first occurrence.
    std::unordered_map<std::string, bool> tag_done;
    for (const auto& p : pairs_) {
        const auto share = shares(p.tag, cfg.prior_weight, memo);
        add(p.tag, p.label, share[p.label], p.first_seen);
        if (tag_done.emplace(p.tag, true).second) {
            const auto& st = stats_.at(p.tag);
            for (int c = 0; c < classes_; ++c)
                if (st.per_label[c] == 0 && share[c] > 0.0)
                    add(p.tag, c, share[c], p.first_seen);
        }
    }
    return set;
}

namespace {

std::vector<std::string> names_of(data::Domain d, int classes) {
    std::vector<std::string> out;
    for (int c = 0; c < classes; ++c)
        out.push_back(data::label_name(d, c));
    return out;
}

} // namespace

ExperienceSet build_car_experience(std::span<const data::CarRecord> warmup,
                                   std::span<const int, kCarAttributes> cue_order, const BootstrapConfig& cfg) {
    ExperienceBuilder b("car", data::kCarClasses, names_of(data::Domain::Car, data::kCarClasses));
    for (std::size_t i = 0; i < warmup.size(); ++i) {
        const auto& r = warmup[i];
        std::array<int, kCarAttributes> full{};
        for (int a = 0; a < kCarAttributes; ++a)
            full[a] = visible_code(r, a);
        for (unsigned subset = 0; subset < (1U << kCarAttributes); ++subset) {
            std::array<int, kCarAttributes> codes;
            bool skip = false;
            for (int a = 0; a < kCarAttributes; ++a) {
                const bool in = subset & (1U << a);
                skip = skip || (in && full[a] < 0);
                codes[a] = in ? full[a] : -1;
            }
            if (!skip)
                b.observe(car_tag(codes, cue_order), r.label, i);
        }
    }
    return b.build(cfg);
}

ExperienceSet build_poker_experience(std::span<const data::RevealSequence> warmup, const BootstrapConfig& cfg) {
    ExperienceBuilder b("poker", poker::kHandClasses, names_of(data::Domain::Poker, poker::kHandClasses));
    for (std::size_t i = 0; i < warmup.size(); ++i) {
        const auto& seq = warmup[i];
        if (seq.domain != data::Domain::Poker)
            throw std::invalid_argument("poker experience needs poker sequences");
        b.observe("poker", seq.label, i);
        std::vector<std::string> done; // each tag counts once per hand
        for (std::size_t k = 1; k <= seq.steps.size(); ++k) {
            std::string tag = poker_tag(seq.prefix(k));
            // Ancestors first so coarser cues keep the earlier first_seen.
            std::vector<std::string> chain;
            for (auto pos = tag.rfind('/'); tag != "poker"; pos = tag.rfind('/')) {
                chain.push_back(tag);
                tag.resize(pos);
            }
            for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
                if (std::find(done.begin(), done.end(), *it) != done.end())
                    continue;
                b.observe(*it, seq.label, i);
                done.push_back(*it);
            }
        }
    }
    return b.build(cfg);
}

} // namespace intuition::encoding
