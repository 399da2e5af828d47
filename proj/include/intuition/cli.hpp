#pragma once

#include "intuition/datasets.hpp"
#include "intuition/experiments.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace intuition::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kData = 3, kRuntime = 4 };

/// Bad flag, config key or config value. Maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    data::Domain dataset = data::Domain::Car;
    std::filesystem::path data_path; // empty: synthesize the dataset
    std::filesystem::path out_path;  // empty: stdout
    experiments::ReportFormat format = experiments::ReportFormat::Csv;
    std::size_t synth_hands = 25010; // poker rows when synthesizing
    std::uint64_t synth_seed = 7;
    experiments::ProtocolConfig protocol;

    /// Throws UsageError on any invalid field.
    void validate() const;
};

/// Every key accepted by set_option, the config file and INTUITION_* vars.
const std::vector<std::string>& option_keys();

/// Applies one textual setting. Lists ("methods", "modes",
/// "np_availabilities") are comma-separated. Throws UsageError on an
/// unknown key or a bad value.
void set_option(RunConfig& cfg, std::string_view key, std::string_view value);

/// JSON object of option keys. Numbers, strings, booleans and arrays are
/// accepted; unknown keys are rejected.
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

/// INTUITION_<KEY> variables from `env` (NAME=VALUE entries); an
/// INTUITION_ variable naming no option is rejected.
void apply_environment(RunConfig& cfg, const char* const* env);

// ─── Commands ─────────────────────────────────────────────────

struct IngestResult {
    data::Domain dataset = data::Domain::Car;
    std::size_t records = 0;
    std::vector<data::LineError> skipped; // lenient mode only
};

/// Reads a car or poker file (or http/https URL), validates it and writes
/// the normalized copy to `dest`. The dataset is taken from `dataset` when
/// given, else guessed from the source name ("car"/"poker").
IngestResult cmd_ingest(const std::string& source, const std::filesystem::path& dest,
                        std::optional<data::Domain> dataset, data::ParseMode mode);

/// Runs the protocol and writes the report to cfg.out_path or `out`.
std::vector<experiments::ReportRow> cmd_run(const RunConfig& cfg, std::ostream& out);

/// Re-renders a CSV report.
std::string cmd_report(const std::filesystem::path& reports, experiments::ReportFormat format);

/// Writes a synthetic dataset in the UCI layout; returns the record count.
std::size_t cmd_synth(data::Domain dataset, const std::filesystem::path& dest, std::size_t hands,
                      std::uint64_t seed);

/// Whole command line. Precedence: defaults < --config file < INTUITION_*
/// environment < flags. Returns an ExitCode.
int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err, const char* const* env);

} // namespace intuition::cli
