#pragma once

#include "intuition/core_model.hpp"
#include "intuition/datasets.hpp"
#include "intuition/encoding.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace intuition::experiments {

enum class MethodId { Nn, Hmm, Intuition };
enum class ModeId { Untrained, Trained };

inline constexpr MethodId kAllMethods[] = {MethodId::Nn, MethodId::Hmm, MethodId::Intuition};
inline constexpr ModeId kAllModes[] = {ModeId::Untrained, ModeId::Trained};

std::string_view to_string(MethodId m) noexcept;
std::string_view to_string(ModeId m) noexcept;
MethodId method_from_string(std::string_view s);
ModeId mode_from_string(std::string_view s);

struct TrialResult {
    int predicted = -1; // -1 when the method rejected the input
    int truth = 0;
    bool correct = false;
    std::int64_t elapsed_ns = 0;
    data::EntityTag entity = data::EntityTag::Known; // of the whole record
    int step = 0;                                    // cards/qualities revealed, 1-based
};

/// (mistakes / total) * 100. Throws std::invalid_argument when total is 0 or
/// mistakes exceed total.
double error_percentage(std::size_t mistakes, std::size_t total);

/// Mistakes divided by the number of correct answers, the literal reading of
/// the error formula. Unbounded above; throws when nothing was correct.
double error_percentage_literal(std::size_t mistakes, std::size_t correct);

enum class ErrorDenominator { Trials, CorrectAnswers };

struct CycleReport {
    data::Domain dataset = data::Domain::Car;
    int cycle = 1;
    MethodId method = MethodId::Nn;
    ModeId mode = ModeId::Untrained;
    std::vector<TrialResult> trials;
    double error_pct = 0.0;
    double mean_elapsed_ns = 0.0;

    std::size_t mistakes() const noexcept;
};

struct ProtocolConfig {
    std::vector<MethodId> methods{std::begin(kAllMethods), std::end(kAllMethods)};
    std::vector<ModeId> modes{std::begin(kAllModes), std::end(kAllModes)};
    int cycles = 5;
    std::uint64_t seed = 42;
    double inject_fraction = 1.0 / 3.0;
    data::InjectionMode injection = data::InjectionMode::EqualSplit;

    // Slice sizes per cycle; 0 picks the dataset default (car 500/800/1200,
    // poker 1000/2000/5000). Each slice is its own seeded sample of the
    // dataset, so slices may share records.
    std::size_t eval_size = 0;
    std::size_t warmup_size = 0;
    std::size_t train_size = 0;

    int nn_hidden = 16;
    int nn_epochs = 60;
    double nn_learning_rate = 0.1;

    bool shuffle_reveal = false; // one seeded order per cycle instead of column/deal order
    bool parallel = true;        // cycles on separate threads; results do not change
    bool record_timing = true;   // false stores 0 ns so reports are byte-stable
    ErrorDenominator denominator = ErrorDenominator::Trials;

    IntuitionConfig intuition;
    encoding::BootstrapConfig bootstrap;
    std::vector<double> np_availabilities{1.0};

    void validate() const;
};

/// Cycle c (1-based) samples its own evaluation, warm-up and training slices
/// from seed + c, injects uncertainty into all three, builds every
/// requested method/mode, and has each predict the final class after every
/// reveal. Reports come back ordered by cycle, method, mode.
std::vector<CycleReport> run_car_protocol(std::span<const data::CarRecord> dataset, const ProtocolConfig& cfg);
std::vector<CycleReport> run_poker_protocol(std::span<const data::PokerRecord> dataset, const ProtocolConfig& cfg);

/// Recomputes error_pct and mean_elapsed_ns from the trials.
void finalize(CycleReport& report, ErrorDenominator denominator = ErrorDenominator::Trials);

// ─── Reporting ────────────────────────────────────────────────

struct ReportRow {
    data::Domain dataset = data::Domain::Car;
    int cycle = 1;
    MethodId method = MethodId::Nn;
    ModeId mode = ModeId::Untrained;
    double error_pct = 0.0;
    std::int64_t mean_elapsed_ns = 0;
    std::size_t trials = 0;

    friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

ReportRow summarize(const CycleReport& report);
std::vector<ReportRow> summarize(std::span<const CycleReport> reports);

struct TimingSummary {
    MethodId method = MethodId::Nn;
    ModeId mode = ModeId::Untrained;
    std::size_t predictions = 0;
    double mean_ns = 0.0;
    double median_ns = 0.0;
};

/// Per method and mode, pooled over cycles.
std::vector<TimingSummary> timing_report(std::span<const CycleReport> reports);

enum class ReportFormat { Csv, Table };
ReportFormat format_from_string(std::string_view s);

inline constexpr std::string_view kCsvHeader = "dataset,cycle,method,mode,error_pct,mean_elapsed_ns,trials";

/// CSV: the header above, one row per report, error_pct with 4 decimals.
/// Table: per dataset an untrained block and a trained block, one line per
/// cycle with a column per method, then the mean over cycles.
std::string emit_table(std::span<const ReportRow> rows, ReportFormat format);

/// Reads CSV written by emit_table. Throws data::DataError with the line.
std::vector<ReportRow> parse_report_csv(std::istream& in);

} // namespace intuition::experiments
