#include "intuition/cli.hpp"

#include "intuition/detail/fetch.hpp"
#include "intuition/detail/text_values.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace intuition::cli {

using experiments::MethodId;
using experiments::ModeId;

void RunConfig::validate() const {
    try {
        protocol.validate();
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    if (dataset == data::Domain::Poker && data_path.empty() && synth_hands == 0)
        throw UsageError("synth_hands must be positive");
}

namespace {

std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = s.find(',');
        auto item = s.substr(0, comma);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front())))
            item.remove_prefix(1);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back())))
            item.remove_suffix(1);
        if (!item.empty())
            out.push_back(item);
        if (comma == std::string_view::npos)
            break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

bool parse_bool(std::string_view v) {
    if (v == "1" || v == "true" || v == "on" || v == "yes")
        return true;
    if (v == "0" || v == "false" || v == "off" || v == "no")
        return false;
    throw std::invalid_argument("expected a boolean, got '" + std::string(v) + "'");
}

template <typename T>
T number(std::string_view v) {
    return detail::parse_value<T>(v);
}

using Setter = std::function<void(RunConfig&, std::string_view)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
    static const std::vector<std::pair<std::string, Setter>> table = {
        {"dataset", [](RunConfig& c, std::string_view v) { c.dataset = data::domain_from_string(v); }},
        {"data", [](RunConfig& c, std::string_view v) { c.data_path = std::string(v); }},
        {"out", [](RunConfig& c, std::string_view v) { c.out_path = std::string(v); }},
        {"format", [](RunConfig& c, std::string_view v) { c.format = experiments::format_from_string(v); }},
        {"synth_hands", [](RunConfig& c, std::string_view v) { c.synth_hands = number<std::size_t>(v); }},
        {"synth_seed", [](RunConfig& c, std::string_view v) { c.synth_seed = number<std::uint64_t>(v); }},
        {"methods",
         [](RunConfig& c, std::string_view v) {
             std::vector<MethodId> ms;
             for (auto item : split_list(v)) {
                 if (item == "all")
                     ms.insert(ms.end(), std::begin(experiments::kAllMethods), std::end(experiments::kAllMethods));
                 else
                     ms.push_back(experiments::method_from_string(item));
             }
             c.protocol.methods = std::move(ms);
         }},
        {"modes",
         [](RunConfig& c, std::string_view v) {
             std::vector<ModeId> ms;
             for (auto item : split_list(v)) {
                 if (item == "both")
                     ms.insert(ms.end(), std::begin(experiments::kAllModes), std::end(experiments::kAllModes));
                 else
                     ms.push_back(experiments::mode_from_string(item));
             }
             c.protocol.modes = std::move(ms);
         }},
        {"cycles", [](RunConfig& c, std::string_view v) { c.protocol.cycles = number<int>(v); }},
        {"seed", [](RunConfig& c, std::string_view v) { c.protocol.seed = number<std::uint64_t>(v); }},
        {"inject_fraction", [](RunConfig& c, std::string_view v) { c.protocol.inject_fraction = number<double>(v); }},
        {"injection",
         [](RunConfig& c, std::string_view v) {
             if (v == "equal_split")
                 c.protocol.injection = data::InjectionMode::EqualSplit;
             else if (v == "alien_only")
                 c.protocol.injection = data::InjectionMode::AlienOnly;
             else
                 throw std::invalid_argument("injection must be equal_split or alien_only");
         }},
        {"eval_size", [](RunConfig& c, std::string_view v) { c.protocol.eval_size = number<std::size_t>(v); }},
        {"warmup_size", [](RunConfig& c, std::string_view v) { c.protocol.warmup_size = number<std::size_t>(v); }},
        {"train_size", [](RunConfig& c, std::string_view v) { c.protocol.train_size = number<std::size_t>(v); }},
        {"nn_hidden", [](RunConfig& c, std::string_view v) { c.protocol.nn_hidden = number<int>(v); }},
        {"nn_epochs", [](RunConfig& c, std::string_view v) { c.protocol.nn_epochs = number<int>(v); }},
        {"nn_learning_rate",
         [](RunConfig& c, std::string_view v) { c.protocol.nn_learning_rate = number<double>(v); }},
        {"shuffle_reveal", [](RunConfig& c, std::string_view v) { c.protocol.shuffle_reveal = parse_bool(v); }},
        {"parallel", [](RunConfig& c, std::string_view v) { c.protocol.parallel = parse_bool(v); }},
        {"timing", [](RunConfig& c, std::string_view v) { c.protocol.record_timing = parse_bool(v); }},
        {"denominator",
         [](RunConfig& c, std::string_view v) {
             if (v == "trials")
                 c.protocol.denominator = experiments::ErrorDenominator::Trials;
             else if (v == "correct")
                 c.protocol.denominator = experiments::ErrorDenominator::CorrectAnswers;
             else
                 throw std::invalid_argument("denominator must be trials or correct");
         }},
        {"np_availabilities",
         [](RunConfig& c, std::string_view v) {
             std::vector<double> a;
             for (auto item : split_list(v))
                 a.push_back(number<double>(item));
             c.protocol.np_availabilities = std::move(a);
         }},
        {"base_ip_prob",
         [](RunConfig& c, std::string_view v) { c.protocol.intuition.base_ip_prob = UnitFraction(number<double>(v)); }},
        {"external_factor",
         [](RunConfig& c, std::string_view v) {
             c.protocol.intuition.external_factor = UnitFraction(number<double>(v));
         }},
        {"adjustment_factor",
         [](RunConfig& c, std::string_view v) { c.protocol.intuition.adjustment_factor = number<double>(v); }},
        {"importance_threshold",
         [](RunConfig& c, std::string_view v) { c.protocol.intuition.importance_threshold = number<int>(v); }},
        {"adjusted_answer_radius",
         [](RunConfig& c, std::string_view v) { c.protocol.intuition.adjusted_answer_radius = number<int>(v); }},
        {"cross_domain", [](RunConfig& c, std::string_view v) { c.protocol.intuition.cross_domain = parse_bool(v); }},
        {"intuition_seed",
         [](RunConfig& c, std::string_view v) { c.protocol.intuition.seed = number<std::uint64_t>(v); }},
        {"ip_lo", [](RunConfig& c, std::string_view v) { c.protocol.bootstrap.ip_lo = number<int>(v); }},
        {"np_hi", [](RunConfig& c, std::string_view v) { c.protocol.bootstrap.np_hi = number<int>(v); }},
        {"prior_weight", [](RunConfig& c, std::string_view v) { c.protocol.bootstrap.prior_weight = number<double>(v); }},
        {"bootstrap_seed",
         [](RunConfig& c, std::string_view v) { c.protocol.bootstrap.seed = number<std::uint64_t>(v); }},
    };
    return table;
}

std::string json_to_text(const nlohmann::json& v, std::string_view key) {
    switch (v.type()) {
    case nlohmann::json::value_t::string: return v.get<std::string>();
    case nlohmann::json::value_t::boolean: return v.get<bool>() ? "true" : "false";
    case nlohmann::json::value_t::number_integer:
    case nlohmann::json::value_t::number_unsigned: return v.dump();
    case nlohmann::json::value_t::number_float: {
        std::ostringstream os;
        detail::write_double(os, v.get<double>());
        return os.str();
    }
    case nlohmann::json::value_t::array: {
        std::string out;
        for (const auto& item : v) {
            if (item.is_array() || item.is_object())
                break;
            if (!out.empty())
                out += ',';
            out += json_to_text(item, key);
        }
        return out;
    }
    default: throw UsageError("config key '" + std::string(key) + "' has an unsupported value type");
    }
}

std::string read_source(const std::string& source) {
    if (detail::is_url(source))
        return detail::fetch_url(source);
    std::ifstream in(source, std::ios::binary);
    if (!in)
        throw data::MissingFileError("cannot open '" + source + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::ofstream open_out(const std::filesystem::path& p) {
    if (p.has_parent_path())
        std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + p.string() + "'");
    return out;
}

} // namespace

const std::vector<std::string>& option_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [name, fn] : setters())
            k.push_back(name);
        return k;
    }();
    return keys;
}

void set_option(RunConfig& cfg, std::string_view key, std::string_view value) {
    for (const auto& [name, fn] : setters()) {
        if (name != key)
            continue;
        try {
            fn(cfg, value);
        } catch (const UsageError&) {
            throw;
        } catch (const std::exception& e) {
            throw UsageError("bad value for '" + name + "': " + e.what());
        }
        return;
    }
    throw UsageError("unknown option '" + std::string(key) + "'");
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw data::MissingFileError("cannot open config '" + path.string() + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("config '" + path.string() + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object())
        throw UsageError("config '" + path.string() + "' must be a JSON object");
    for (const auto& [key, value] : j.items())
        set_option(cfg, key, json_to_text(value, key));
}

void apply_environment(RunConfig& cfg, const char* const* env) {
    constexpr std::string_view prefix = "INTUITION_";
    for (; env && *env; ++env) {
        const std::string_view entry(*env);
        if (entry.rfind(prefix, 0) != 0)
            continue;
        const auto eq = entry.find('=');
        if (eq == std::string_view::npos)
            continue;
        std::string key(entry.substr(prefix.size(), eq - prefix.size()));
        std::transform(key.begin(), key.end(), key.begin(),
                       [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
        set_option(cfg, key, entry.substr(eq + 1));
    }
}

// ─── Commands ─────────────────────────────────────────────────

IngestResult cmd_ingest(const std::string& source, const std::filesystem::path& dest,
                        std::optional<data::Domain> dataset, data::ParseMode mode) {
    IngestResult result;
    if (dataset) {
        result.dataset = *dataset;
    } else {
        const auto name = std::filesystem::path(source).filename().string();
        if (name.find("poker") != std::string::npos)
            result.dataset = data::Domain::Poker;
        else if (name.find("car") != std::string::npos)
            result.dataset = data::Domain::Car;
        else
            throw UsageError("cannot tell the dataset from '" + source + "'; pass --dataset");
    }
    std::istringstream in(read_source(source));
    if (result.dataset == data::Domain::Car) {
        auto loaded = data::parse_car(in, mode);
        auto out = open_out(dest);
        data::write_car(out, loaded.records);
        result.records = loaded.records.size();
        result.skipped = std::move(loaded.errors);
    } else {
        auto loaded = data::parse_poker(in, mode);
        auto out = open_out(dest);
        data::write_poker(out, loaded.records);
        result.records = loaded.records.size();
        result.skipped = std::move(loaded.errors);
    }
    return result;
}

std::vector<experiments::ReportRow> cmd_run(const RunConfig& cfg, std::ostream& out) {
    cfg.validate();
    std::vector<experiments::CycleReport> reports;
    if (cfg.dataset == data::Domain::Car) {
        const auto records = cfg.data_path.empty() ? data::synthesize_car() : data::load_car(cfg.data_path).records;
        reports = experiments::run_car_protocol(records, cfg.protocol);
    } else {
        const auto records = cfg.data_path.empty() ? data::synthesize_poker(cfg.synth_hands, cfg.synth_seed)
                                                   : data::load_poker(cfg.data_path).records;
        reports = experiments::run_poker_protocol(records, cfg.protocol);
    }
    auto rows = experiments::summarize(reports);
    const auto text = experiments::emit_table(rows, cfg.format);
    if (cfg.out_path.empty()) {
        out << text;
    } else {
        auto f = open_out(cfg.out_path);
        f << text;
    }
    return rows;
}

std::string cmd_report(const std::filesystem::path& reports, experiments::ReportFormat format) {
    std::ifstream in(reports);
    if (!in)
        throw data::MissingFileError("cannot open '" + reports.string() + "'");
    const auto rows = experiments::parse_report_csv(in);
    return experiments::emit_table(rows, format);
}

std::size_t cmd_synth(data::Domain dataset, const std::filesystem::path& dest, std::size_t hands,
                      std::uint64_t seed) {
    auto out = open_out(dest);
    if (dataset == data::Domain::Car) {
        const auto records = data::synthesize_car();
        data::write_car(out, records);
        return records.size();
    }
    const auto records = data::synthesize_poker(hands, seed);
    data::write_poker(out, records);
    return records.size();
}

// ─── Command line ─────────────────────────────────────────────

int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err, const char* const* env) {
    CLI::App app{"Intuition model benchmark harness"};
    app.require_subcommand(1);

    std::string ingest_source, ingest_dest, ingest_dataset;
    bool ingest_lenient = false;
    auto* ingest = app.add_subcommand("ingest", "Validate a UCI file (path or URL) and write a normalized copy");
    ingest->add_option("source", ingest_source, "File path or http(s) URL")->required();
    ingest->add_option("dest", ingest_dest, "Where to write the normalized copy")->required();
    ingest->add_option("--dataset", ingest_dataset, "car or poker (default: guessed from the name)")
        ->check(CLI::IsMember({"car", "poker"}));
    ingest->add_flag("--lenient", ingest_lenient, "Skip malformed lines instead of failing");

    std::string config_path;
    std::vector<std::pair<std::string, std::string>> flag_settings;
    std::vector<std::string> extra_settings;
    auto* run = app.add_subcommand("run", "Run the reveal protocol and write a report");
    run->add_option("--config", config_path, "JSON config file");
    auto flag = [&](const std::string& name, const std::string& key, const std::string& help) {
        run->add_option_function<std::string>(
            name, [&flag_settings, key](const std::string& v) { flag_settings.emplace_back(key, v); }, help);
    };
    flag("--dataset", "dataset", "car or poker");
    flag("--methods", "methods", "nn, hmm, intuition or all (comma-separated)");
    flag("--modes", "modes", "untrained, trained or both");
    flag("--cycles", "cycles", "Number of cycles");
    flag("--seed", "seed", "Base seed; cycle c uses seed + c");
    flag("--inject-fraction", "inject_fraction", "Fraction of records given uncertainty");
    flag("--format", "format", "csv or table");
    flag("--out", "out", "Report path (default: stdout)");
    flag("--data", "data", "Dataset file (default: synthesized)");
    flag("--timing", "timing", "on or off; off writes 0 ns for byte-stable reports");
    run->add_option("--set", extra_settings, "Any config key as key=value (repeatable)");

    std::string report_path, report_format = "table";
    auto* report = app.add_subcommand("report", "Re-render a CSV report");
    report->add_option("reports", report_path, "CSV report")->required();
    report->add_option("--format", report_format, "csv or table")->check(CLI::IsMember({"csv", "table"}));

    std::string synth_dataset, synth_dest;
    std::size_t synth_hands = 25010;
    std::uint64_t synth_seed = 7;
    auto* synth = app.add_subcommand("synth", "Write a synthetic dataset in the UCI layout");
    synth->add_option("dataset", synth_dataset, "car or poker")->required()->check(CLI::IsMember({"car", "poker"}));
    synth->add_option("dest", synth_dest, "Output path")->required();
    synth->add_option("--hands", synth_hands, "Poker hands to deal");
    synth->add_option("--seed", synth_seed, "Poker deal seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (ingest->parsed()) {
            std::optional<data::Domain> d;
            if (!ingest_dataset.empty())
                d = data::domain_from_string(ingest_dataset);
            const auto r = cmd_ingest(ingest_source, ingest_dest, d,
                                      ingest_lenient ? data::ParseMode::Lenient : data::ParseMode::Strict);
            for (const auto& e : r.skipped)
                err << "skipped line " << e.line << ": " << e.message << '\n';
            out << "ok " << data::to_string(r.dataset) << ' ' << r.records << " records\n";
        } else if (run->parsed()) {
            RunConfig cfg;
            if (!config_path.empty())
                apply_config_file(cfg, config_path);
            apply_environment(cfg, env);
            for (const auto& [key, value] : flag_settings)
                set_option(cfg, key, value);
            for (const auto& kv : extra_settings) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos)
                    throw UsageError("--set expects key=value, got '" + kv + "'");
                set_option(cfg, kv.substr(0, eq), kv.substr(eq + 1));
            }
            cfg.validate();
            if (cfg.data_path.empty())
                err << "note: no --data given, using a synthetic " << data::to_string(cfg.dataset) << " dataset\n";
            cmd_run(cfg, out);
        } else if (report->parsed()) {
            out << cmd_report(report_path, experiments::format_from_string(report_format));
        } else if (synth->parsed()) {
            const auto n = cmd_synth(data::domain_from_string(synth_dataset), synth_dest, synth_hands, synth_seed);
            out << "ok " << synth_dataset << ' ' << n << " records\n";
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const data::MissingFileError& e) {
        err << "missing file: " << e.what() << '\n';
        return kUsage;
    } catch (const data::DataError& e) {
        err << "data error: " << e.what() << '\n';
        return kData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntime;
    }
    return kOk;
}

} // namespace intuition::cli
