#include "intuition/experiments.hpp"

#include "intuition/detail/mix.hpp"
#include "intuition/hmm.hpp"
#include "intuition/nn.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <thread>

namespace intuition::experiments {

using data::Domain;
using data::RevealSequence;
using data::RevealStep;

std::string_view to_string(MethodId m) noexcept {
    switch (m) {
    case MethodId::Nn: return "nn";
    case MethodId::Hmm: return "hmm";
    case MethodId::Intuition: return "intuition";
    }
    return "?";
}

std::string_view to_string(ModeId m) noexcept { return m == ModeId::Untrained ? "untrained" : "trained"; }

MethodId method_from_string(std::string_view s) {
    for (auto m : kAllMethods)
        if (s == to_string(m))
            return m;
    throw std::invalid_argument("unknown method '" + std::string(s) + "'");
}

ModeId mode_from_string(std::string_view s) {
    for (auto m : kAllModes)
        if (s == to_string(m))
            return m;
    throw std::invalid_argument("unknown mode '" + std::string(s) + "'");
}

double error_percentage(std::size_t mistakes, std::size_t total) {
    if (total == 0)
        throw std::invalid_argument("error percentage over zero trials");
    if (mistakes > total)
        throw std::invalid_argument("more mistakes than trials");
    return static_cast<double>(mistakes) / static_cast<double>(total) * 100.0;
}

double error_percentage_literal(std::size_t mistakes, std::size_t correct) {
    if (correct == 0)
        throw std::invalid_argument("literal error percentage needs at least one correct answer");
    return static_cast<double>(mistakes) / static_cast<double>(correct) * 100.0;
}

std::size_t CycleReport::mistakes() const noexcept {
    return static_cast<std::size_t>(std::count_if(trials.begin(), trials.end(), [](const TrialResult& t) {
        return !t.correct;
    }));
}

void finalize(CycleReport& r, ErrorDenominator denominator) {
    const auto wrong = r.mistakes();
    r.error_pct = denominator == ErrorDenominator::Trials ? error_percentage(wrong, r.trials.size())
                                                          : error_percentage_literal(wrong, r.trials.size() - wrong);
    double sum = 0.0;
    for (const auto& t : r.trials)
        sum += static_cast<double>(t.elapsed_ns);
    r.mean_elapsed_ns = sum / static_cast<double>(r.trials.size());
}

void ProtocolConfig::validate() const {
    if (methods.empty() || modes.empty())
        throw std::invalid_argument("at least one method and one mode are required");
    if (cycles < 1)
        throw std::invalid_argument("cycles must be at least 1");
    if (!(inject_fraction >= 0.0 && inject_fraction <= 1.0))
        throw std::invalid_argument("inject_fraction must be in [0,1]");
    if (nn_hidden < 1 || nn_epochs < 0 || !(nn_learning_rate > 0.0))
        throw std::invalid_argument("nn_hidden >= 1, nn_epochs >= 0 and nn_learning_rate > 0 are required");
    if (np_availabilities.empty())
        throw NoNormalProcessError("np_availabilities must not be empty");
    for (double a : np_availabilities)
        UnitFraction{a};
    intuition.validate();
    bootstrap.validate();
}

namespace {

// ─── Per-cycle plumbing ───────────────────────────────────────

std::uint64_t sub_seed(std::uint64_t cycle_seed, std::string_view purpose) {
    return detail::combine(cycle_seed, detail::fnv1a(purpose));
}

struct Slices {
    std::vector<std::size_t> eval, warmup, train;
};

// Each slice is an independent seeded sample of the dataset. On a finite
// universe like the car grid, carving disjoint slices would leave every cue
// cell's held-out rows anti-correlated with its warm-up counts.
Slices draw_slices(std::size_t n, std::size_t eval, std::size_t warmup, std::size_t train, std::uint64_t seed) {
    if (eval == 0 || eval > n || warmup > n || train > n)
        throw std::invalid_argument("dataset has " + std::to_string(n) + " records, fewer than a requested slice");
    std::mt19937_64 rng(seed);
    auto sample = [&](std::size_t k) {
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        for (std::size_t i = 0; i < k; ++i)
            std::swap(idx[i], idx[i + static_cast<std::size_t>(detail::bounded(rng(), n - i))]);
        idx.resize(k);
        return idx;
    };
    Slices s;
    s.eval = sample(eval);
    s.warmup = sample(warmup);
    s.train = sample(train);
    return s;
}

template <typename Record>
std::vector<Record> pick(std::span<const Record> all, const std::vector<std::size_t>& idx) {
    std::vector<Record> out;
    out.reserve(idx.size());
    for (auto i : idx)
        out.push_back(all[i]);
    return out;
}

bool wants(const ProtocolConfig& cfg, MethodId m) {
    return std::find(cfg.methods.begin(), cfg.methods.end(), m) != cfg.methods.end();
}

bool wants(const ProtocolConfig& cfg, ModeId m) {
    return std::find(cfg.modes.begin(), cfg.modes.end(), m) != cfg.modes.end();
}

// Every predictor exposes begin(sequence) and predict(prefix) -> label.
template <typename Predictor>
CycleReport run_trials(Domain d, int cycle, MethodId method, ModeId mode, const std::vector<RevealSequence>& eval,
                       Predictor& p, const ProtocolConfig& cfg) {
    CycleReport r;
    r.dataset = d;
    r.cycle = cycle;
    r.method = method;
    r.mode = mode;
    for (const auto& seq : eval) {
        p.begin(seq);
        for (std::size_t k = 1; k <= seq.steps.size(); ++k) {
            const auto prefix = std::span<const RevealStep>(seq.steps).first(k);
            int label = -1;
            const auto t0 = std::chrono::steady_clock::now();
            try {
                label = p.predict(prefix);
            } catch (const encoding::UnexpectedInputError&) {
                label = -1;
            } catch (const std::invalid_argument&) {
                label = -1; // nothing visible yet, the baseline refuses
            } catch (const NoExperienceError&) {
                label = -1;
            }
            const auto t1 = std::chrono::steady_clock::now();
            TrialResult t;
            t.predicted = label;
            t.truth = seq.label;
            t.correct = label == seq.label;
            t.elapsed_ns = cfg.record_timing ? std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count() : 0;
            t.entity = seq.entity;
            t.step = static_cast<int>(k);
            r.trials.push_back(t);
        }
    }
    finalize(r, cfg.denominator);
    return r;
}

// ─── Predictors ───────────────────────────────────────────────

template <typename Encode>
struct NnPredictor {
    const baselines::NnModel& model;
    Encode encode;
    bool strict;

    void begin(const RevealSequence&) {}
    int predict(std::span<const RevealStep> prefix) {
        return baselines::predict_nn(model, encode(prefix, 0, strict)).label;
    }
};

template <typename Encode>
NnPredictor<Encode> nn_predictor(const baselines::NnModel& m, Encode e, bool strict) {
    return {m, e, strict};
}

// Untrained: no state survives between reveals; the whole prefix is
// re-filtered from the prior every time.
template <typename Symbols>
struct StatelessHmmPredictor {
    const baselines::HmmModel& model;
    Symbols symbols;

    void begin(const RevealSequence&) {}
    int predict(std::span<const RevealStep> prefix) { return baselines::predict_hmm(model, symbols(prefix)).label; }
};

// Trained: the posterior carries over and each reveal is one filter step.
template <typename Symbol>
struct FilteringHmmPredictor {
    baselines::HmmFilter filter;
    Symbol symbol;

    void begin(const RevealSequence&) { filter.reset(); }
    int predict(std::span<const RevealStep> prefix) {
        filter.observe(symbol(prefix));
        return filter.best_class();
    }
};

template <typename Tag>
struct IntuitionPredictor {
    const ExperienceSet& set;
    const IntuitionConfig& cfg;
    std::span<const UnitFraction> availabilities;
    Tag tag;
    const RevealSequence* seq = nullptr;
    std::uint64_t tick = 0;
    ProblemElement pe; // reused so a prediction does not reallocate

    void begin(const RevealSequence& s) {
        seq = &s;
        pe.id = s.record_id;
    }
    int predict(std::span<const RevealStep> prefix) {
        pe.domain_tag = tag(prefix);
        pe.observed.clear();
        for (const auto& s : prefix)
            pe.observed.emplace_back(static_cast<double>(s.code));
        pe.time_t = tick++;
        const auto m = intuit(pe, set, cfg, availabilities);
        return std::get<Symbol>(m.payload).ordinal_index;
    }
};

template <typename Tag>
IntuitionPredictor<Tag> intuition_predictor(const ExperienceSet& set, const IntuitionConfig& cfg,
                                            std::span<const UnitFraction> avail, Tag tag) {
    return {set, cfg, avail, tag};
}

std::vector<UnitFraction> availabilities_of(const ProtocolConfig& cfg) {
    std::vector<UnitFraction> out;
    for (double a : cfg.np_availabilities)
        out.emplace_back(a);
    return out;
}

std::vector<baselines::EncodedRecord> prefix_examples(const std::vector<RevealSequence>& seqs, auto encode) {
    std::vector<baselines::EncodedRecord> out;
    for (const auto& seq : seqs)
        for (std::size_t k = 1; k <= seq.steps.size(); ++k) {
            auto r = encode(seq.prefix(k), seq.label, false);
            if (r.any_visible())
                out.push_back(std::move(r));
        }
    return out;
}

// Shared method/mode loop. `Ops` supplies the dataset-specific pieces.
template <typename Ops>
std::vector<CycleReport> run_cycle(Ops& ops, int cycle, const ProtocolConfig& cfg) {
    std::vector<CycleReport> out;
    const auto avail = availabilities_of(cfg);
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(cycle);
    const int inputs = ops.features;
    const int classes = ops.classes;
    const std::vector<int> sizes{inputs, cfg.nn_hidden, classes};

    for (const auto method : cfg.methods) {
        for (const auto mode : cfg.modes) {
            const bool trained = mode == ModeId::Trained;
            switch (method) {
            case MethodId::Nn: {
                auto model = baselines::make_nn(sizes, sub_seed(seed, "nn-init"));
                if (trained) {
                    baselines::NnTrainOptions opt;
                    opt.epochs = cfg.nn_epochs;
                    opt.learning_rate = cfg.nn_learning_rate;
                    opt.seed = sub_seed(seed, "nn-train");
                    model = baselines::train_nn(std::move(model), prefix_examples(ops.train, ops.encode), opt);
                }
                auto p = nn_predictor(model, ops.encode, !trained);
                out.push_back(run_trials(ops.domain, cycle, method, mode, ops.eval, p, cfg));
                break;
            }
            case MethodId::Hmm: {
                auto model = baselines::make_positional_hmm(classes, ops.hmm_blocks);
                if (trained) {
                    std::vector<baselines::LabeledSequence> seqs;
                    for (const auto& s : ops.train)
                        seqs.push_back({ops.hmm_symbols(s.steps), s.label});
                    model = baselines::train_hmm(std::move(model), seqs);
                    FilteringHmmPredictor<decltype(ops.hmm_symbol)> p{baselines::HmmFilter(model), ops.hmm_symbol};
                    out.push_back(run_trials(ops.domain, cycle, method, mode, ops.eval, p, cfg));
                } else {
                    StatelessHmmPredictor<decltype(ops.hmm_symbols)> p{model, ops.hmm_symbols};
                    out.push_back(run_trials(ops.domain, cycle, method, mode, ops.eval, p, cfg));
                }
                break;
            }
            case MethodId::Intuition: {
                auto icfg = cfg.intuition;
                icfg.seed = sub_seed(seed, "intuition");
                auto bcfg = cfg.bootstrap;
                bcfg.seed = sub_seed(seed, "bootstrap");
                const auto& set = trained ? ops.trained_experience(bcfg) : ops.untrained_experience(bcfg);
                auto p = intuition_predictor(set, icfg, avail, ops.tag());
                out.push_back(run_trials(ops.domain, cycle, method, mode, ops.eval, p, cfg));
                break;
            }
            }
        }
    }
    return out;
}

// Ops hold pointers into themselves, so they are built in place by `fill`.
template <typename Ops, typename Fill>
std::vector<CycleReport> run_all(const ProtocolConfig& cfg, Fill fill) {
    cfg.validate();
    std::vector<std::vector<CycleReport>> per_cycle(static_cast<std::size_t>(cfg.cycles));
    auto one = [&](int c) {
        Ops ops;
        fill(c, ops);
        per_cycle[static_cast<std::size_t>(c - 1)] = run_cycle(ops, c, cfg);
    };
    if (cfg.parallel && cfg.cycles > 1) {
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(cfg.cycles));
        std::vector<std::thread> threads;
        for (int c = 1; c <= cfg.cycles; ++c)
            threads.emplace_back([&, c] {
                try {
                    one(c);
                } catch (...) {
                    errors[static_cast<std::size_t>(c - 1)] = std::current_exception();
                }
            });
        for (auto& t : threads)
            t.join();
        for (auto& e : errors)
            if (e)
                std::rethrow_exception(e);
    } else {
        for (int c = 1; c <= cfg.cycles; ++c)
            one(c);
    }
    std::vector<CycleReport> out;
    for (auto& v : per_cycle)
        for (auto& r : v)
            out.push_back(std::move(r));
    return out;
}

// ─── Dataset-specific pieces ──────────────────────────────────

struct CarOps {
    Domain domain = Domain::Car;
    int features = encoding::kCarFeatures;
    int classes = data::kCarClasses;
    std::vector<RevealSequence> eval, train;
    std::vector<data::CarRecord> warmup_clean, warmup_injected;
    std::vector<int> hmm_blocks, offsets;
    std::optional<ExperienceSet> untrained_set, trained_set;

    static baselines::EncodedRecord encode(std::span<const RevealStep> p, int label, bool strict) {
        return encoding::encode_car_prefix(p, label, strict);
    }

    struct Symbols {
        const std::vector<int>* offsets;
        std::vector<int> operator()(std::span<const RevealStep> p) const {
            return encoding::car_hmm_symbols(p, *offsets);
        }
    };
    struct LastSymbol {
        const std::vector<int>* offsets;
        int operator()(std::span<const RevealStep> p) const {
            return encoding::car_hmm_symbol(p.back(), static_cast<int>(p.size() - 1), *offsets);
        }
    };
    struct Tag {
        const std::array<int, data::kCarAttributes>* cue;
        std::string operator()(std::span<const RevealStep> p) const {
            return encoding::car_tag(encoding::car_prefix_codes(p), *cue);
        }
    };

    Symbols hmm_symbols{&offsets};
    LastSymbol hmm_symbol{&offsets};

    // The cue order comes from whichever warm-up feeds the experience set.
    const ExperienceSet& untrained_experience(const encoding::BootstrapConfig& b) {
        current_cue = encoding::car_cue_order(warmup_clean);
        if (!untrained_set)
            untrained_set = encoding::build_car_experience(warmup_clean, current_cue, b);
        return *untrained_set;
    }
    const ExperienceSet& trained_experience(const encoding::BootstrapConfig& b) {
        current_cue = encoding::car_cue_order(warmup_injected);
        if (!trained_set)
            trained_set = encoding::build_car_experience(warmup_injected, current_cue, b);
        return *trained_set;
    }
    std::array<int, data::kCarAttributes> current_cue{};
    Tag tag() const { return Tag{&current_cue}; }
};

} // namespace

std::vector<CycleReport> run_car_protocol(std::span<const data::CarRecord> dataset, const ProtocolConfig& cfg) {
    const std::size_t eval_n = cfg.eval_size ? cfg.eval_size : 500;
    const std::size_t warm_n = cfg.warmup_size ? cfg.warmup_size : 800;
    const std::size_t train_n = cfg.train_size ? cfg.train_size : 1200;
    return run_all<CarOps>(cfg, [&](int c, CarOps& ops) {
        const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(c);
        const auto sl = draw_slices(dataset.size(), eval_n, warm_n, train_n, sub_seed(seed, "slices"));
        if (sl.train.empty() && wants(cfg, ModeId::Trained) && !(cfg.methods.size() == 1 && wants(cfg, MethodId::Intuition)))
            throw std::invalid_argument("no records left for training");
        const auto order = cfg.shuffle_reveal ? data::shuffled_order(Domain::Car, sub_seed(seed, "order"))
                                              : data::natural_order(Domain::Car);
        const auto f = cfg.inject_fraction;
        auto to_seqs = [&](const std::vector<data::CarRecord>& rs, std::string_view prefix) {
            std::vector<RevealSequence> out;
            for (std::size_t i = 0; i < rs.size(); ++i)
                out.push_back(data::reveal_iterator(rs[i], order, {},
                                                    std::string(prefix) + std::to_string(c) + "-" + std::to_string(i)));
            return out;
        };
        ops.eval = to_seqs(data::inject_alien_records(pick(dataset, sl.eval), f, sub_seed(seed, "inject-eval"),
                                                      cfg.injection),
                           "car-e");
        ops.train = to_seqs(data::inject_alien_records(pick(dataset, sl.train), f, sub_seed(seed, "inject-train"),
                                                       cfg.injection),
                            "car-t");
        ops.warmup_clean = pick(dataset, sl.warmup);
        ops.warmup_injected =
            data::inject_alien_records(ops.warmup_clean, f, sub_seed(seed, "inject-warmup"), cfg.injection);
        ops.hmm_blocks = encoding::car_hmm_blocks(order);
        ops.offsets.assign(1, 0);
        for (int b : ops.hmm_blocks)
            ops.offsets.push_back(ops.offsets.back() + b);
    });
}

namespace {

struct PokerOps {
    Domain domain = Domain::Poker;
    int features = encoding::kPokerFeatures;
    int classes = poker::kHandClasses;
    std::vector<RevealSequence> eval, train, warmup_clean, warmup_injected;
    std::vector<int> hmm_blocks = encoding::poker_hmm_blocks();
    std::optional<ExperienceSet> untrained_set, trained_set;

    static baselines::EncodedRecord encode(std::span<const RevealStep> p, int label, bool strict) {
        return encoding::encode_poker_prefix(p, label, strict);
    }
    struct Symbols {
        std::vector<int> operator()(std::span<const RevealStep> p) const { return encoding::poker_hmm_symbols(p); }
    };
    struct LastSymbol {
        int operator()(std::span<const RevealStep> p) const { return encoding::poker_hmm_symbol(p); }
    };
    struct Tag {
        std::string operator()(std::span<const RevealStep> p) const { return encoding::poker_tag(p); }
    };
    Symbols hmm_symbols;
    LastSymbol hmm_symbol;

    const ExperienceSet& untrained_experience(const encoding::BootstrapConfig& b) {
        if (!untrained_set)
            untrained_set = encoding::build_poker_experience(warmup_clean, b);
        return *untrained_set;
    }
    const ExperienceSet& trained_experience(const encoding::BootstrapConfig& b) {
        if (!trained_set)
            trained_set = encoding::build_poker_experience(warmup_injected, b);
        return *trained_set;
    }
    Tag tag() const { return {}; }
};

} // namespace

std::vector<CycleReport> run_poker_protocol(std::span<const data::PokerRecord> dataset, const ProtocolConfig& cfg) {
    const std::size_t eval_n = cfg.eval_size ? cfg.eval_size : 1000;
    const std::size_t warm_n = cfg.warmup_size ? cfg.warmup_size : 2000;
    const std::size_t train_n = cfg.train_size ? cfg.train_size : 5000;
    return run_all<PokerOps>(cfg, [&](int c, PokerOps& ops) {
        const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(c);
        const auto sl = draw_slices(dataset.size(), eval_n, warm_n, train_n, sub_seed(seed, "slices"));
        if (sl.train.empty() && wants(cfg, ModeId::Trained) && !(cfg.methods.size() == 1 && wants(cfg, MethodId::Intuition)))
            throw std::invalid_argument("no records left for training");
        const auto order = cfg.shuffle_reveal ? data::shuffled_order(Domain::Poker, sub_seed(seed, "order"))
                                              : data::natural_order(Domain::Poker);
        const auto f = cfg.inject_fraction;
        auto to_seqs = [&](const std::vector<std::size_t>& idx, std::string_view prefix) {
            std::vector<RevealSequence> out;
            for (std::size_t i = 0; i < idx.size(); ++i)
                out.push_back(data::reveal_iterator(dataset[idx[i]], order, {},
                                                    std::string(prefix) + std::to_string(c) + "-" + std::to_string(i)));
            return out;
        };
        ops.eval = data::inject_poker_uncertainty(to_seqs(sl.eval, "poker-e"), f, sub_seed(seed, "inject-eval"),
                                                  cfg.injection);
        ops.train = data::inject_poker_uncertainty(to_seqs(sl.train, "poker-t"), f, sub_seed(seed, "inject-train"),
                                                   cfg.injection);
        ops.warmup_clean = to_seqs(sl.warmup, "poker-w");
        ops.warmup_injected =
            data::inject_poker_uncertainty(ops.warmup_clean, f, sub_seed(seed, "inject-warmup"), cfg.injection);
    });
}

// ─── Reporting ────────────────────────────────────────────────

ReportRow summarize(const CycleReport& r) {
    return {r.dataset, r.cycle, r.method, r.mode, r.error_pct, std::llround(r.mean_elapsed_ns), r.trials.size()};
}

std::vector<ReportRow> summarize(std::span<const CycleReport> reports) {
    std::vector<ReportRow> out;
    out.reserve(reports.size());
    for (const auto& r : reports)
        out.push_back(summarize(r));
    return out;
}

std::vector<TimingSummary> timing_report(std::span<const CycleReport> reports) {
    std::map<std::pair<MethodId, ModeId>, std::vector<std::int64_t>> pooled;
    for (const auto& r : reports) {
        auto& v = pooled[{r.method, r.mode}];
        for (const auto& t : r.trials)
            v.push_back(t.elapsed_ns);
    }
    std::vector<TimingSummary> out;
    for (auto& [key, v] : pooled) {
        TimingSummary s;
        s.method = key.first;
        s.mode = key.second;
        s.predictions = v.size();
        if (!v.empty()) {
            s.mean_ns = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
            const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
            std::nth_element(v.begin(), mid, v.end());
            s.median_ns = static_cast<double>(*mid);
            if (v.size() % 2 == 0) {
                const auto lower = *std::max_element(v.begin(), mid);
                s.median_ns = (s.median_ns + static_cast<double>(lower)) / 2.0;
            }
        }
        out.push_back(s);
    }
    return out;
}

ReportFormat format_from_string(std::string_view s) {
    if (s == "csv")
        return ReportFormat::Csv;
    if (s == "table")
        return ReportFormat::Table;
    throw std::invalid_argument("unknown format '" + std::string(s) + "'");
}

namespace {

std::string fixed(double v, int decimals) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
    return std::string(buf, end);
}

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width)
        s.insert(0, width - s.size(), ' ');
    return s;
}

std::string_view dataset_title(Domain d) { return d == Domain::Car ? "Car Evaluation" : "Poker Hand"; }

} // namespace

std::string emit_table(std::span<const ReportRow> rows, ReportFormat format) {
    std::string out;
    if (format == ReportFormat::Csv) {
        out += kCsvHeader;
        out += '\n';
        for (const auto& r : rows) {
            out += data::to_string(r.dataset);
            out += ',' + std::to_string(r.cycle) + ',';
            out += to_string(r.method);
            out += ',';
            out += to_string(r.mode);
            out += ',' + fixed(r.error_pct, 4) + ',' + std::to_string(r.mean_elapsed_ns) + ',' +
                   std::to_string(r.trials) + '\n';
        }
        return out;
    }

    std::vector<Domain> datasets;
    for (const auto& r : rows)
        if (std::find(datasets.begin(), datasets.end(), r.dataset) == datasets.end())
            datasets.push_back(r.dataset);
    constexpr std::size_t w = 11;
    for (const auto d : datasets) {
        std::vector<MethodId> methods;
        std::vector<ModeId> modes;
        std::map<int, std::map<std::pair<ModeId, MethodId>, double>> cell;
        for (const auto& r : rows) {
            if (r.dataset != d)
                continue;
            if (std::find(methods.begin(), methods.end(), r.method) == methods.end())
                methods.push_back(r.method);
            if (std::find(modes.begin(), modes.end(), r.mode) == modes.end())
                modes.push_back(r.mode);
            cell[r.cycle][{r.mode, r.method}] = r.error_pct;
        }
        std::sort(modes.begin(), modes.end());
        if (!out.empty())
            out += '\n';
        out += dataset_title(d);
        out += " (error %)\n";
        std::string line1 = "cycle ", line2 = "      ";
        for (const auto mode : modes) {
            std::string block(to_string(mode));
            block.resize(w * methods.size(), ' ');
            line1 += " | " + block;
            line2 += " | ";
            for (const auto m : methods)
                line2 += pad(std::string(to_string(m)), w);
        }
        out += line1 + '\n' + line2 + '\n';
        std::map<std::pair<ModeId, MethodId>, std::pair<double, int>> sums;
        for (const auto& [cycle, cells] : cell) {
            std::string line = pad(std::to_string(cycle), 5) + ' ';
            for (const auto mode : modes) {
                line += " | ";
                for (const auto m : methods) {
                    const auto it = cells.find({mode, m});
                    if (it == cells.end()) {
                        line += pad("-", w);
                        continue;
                    }
                    line += pad(fixed(it->second, 2), w);
                    auto& s = sums[{mode, m}];
                    s.first += it->second;
                    ++s.second;
                }
            }
            out += line + '\n';
        }
        std::string mean = " mean ";
        for (const auto mode : modes) {
            mean += " | ";
            for (const auto m : methods) {
                const auto it = sums.find({mode, m});
                mean += it == sums.end() ? pad("-", w) : pad(fixed(it->second.first / it->second.second, 2), w);
            }
        }
        out += mean + '\n';
    }
    return out;
}

std::vector<ReportRow> parse_report_csv(std::istream& in) {
    std::vector<ReportRow> out;
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (!header) {
            if (line != kCsvHeader)
                throw data::DataError(lineno, "expected header '" + std::string(kCsvHeader) + "'");
            header = true;
            continue;
        }
        std::vector<std::string> f;
        std::size_t start = 0;
        for (;;) {
            const auto pos = line.find(',', start);
            f.push_back(line.substr(start, pos - start));
            if (pos == std::string::npos)
                break;
            start = pos + 1;
        }
        if (f.size() != 7)
            throw data::DataError(lineno, "expected 7 fields, got " + std::to_string(f.size()));
        try {
            ReportRow r;
            r.dataset = data::domain_from_string(f[0]);
            r.cycle = std::stoi(f[1]);
            r.method = method_from_string(f[2]);
            r.mode = mode_from_string(f[3]);
            auto num = [](const std::string& s, auto& v) {
                auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
                if (ec != std::errc{} || p != s.data() + s.size())
                    throw std::invalid_argument("'" + s + "' is not a number");
            };
            num(f[4], r.error_pct);
            num(f[5], r.mean_elapsed_ns);
            num(f[6], r.trials);
            out.push_back(r);
        } catch (const std::exception& e) {
            throw data::DataError(lineno, e.what());
        }
    }
    if (!header)
        throw data::DataError(0, "report is empty");
    return out;
}

} // namespace intuition::experiments
