#include "doctest.h"

#include "intuition/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace intuition;
using namespace intuition::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("intuition-cli-" + std::to_string(std::rand()) + "-" +
                                            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

struct Outcome {
    int code;
    std::string out, err;
};

Outcome run(std::vector<std::string> args, std::vector<std::string> env = {}) {
    args.insert(args.begin(), "intuition-cli");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::vector<const char*> envp;
    for (const auto& e : env)
        envp.push_back(e.c_str());
    envp.push_back(nullptr);
    std::ostringstream out, err;
    const int code = run_main(static_cast<int>(argv.size()), argv.data(), out, err, envp.data());
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

const std::vector<std::string> kSmall = {"--set", "eval_size=40", "--set", "warmup_size=80",
                                         "--set", "train_size=80", "--set", "nn_epochs=2"};

} // namespace

TEST_SUITE("cli") {

TEST_CASE("ingest counts valid records") {
    TempDir t;
    const auto src = t.path / "car.data";
    REQUIRE(run({"synth", "car", src.string()}).code == kOk);
    const auto r = run({"ingest", src.string(), (t.path / "norm" / "car.data").string()});
    CHECK(r.code == kOk);
    CHECK(r.out == "ok car 1728 records\n");
    CHECK(slurp(src) == slurp(t.path / "norm" / "car.data"));
}

TEST_CASE("ingest exit codes") {
    TempDir t;
    CHECK(run({"ingest", (t.path / "car.data").string(), (t.path / "x").string()}).code == kUsage);
    const auto src = t.path / "car.data";
    {
        std::ofstream f(src);
        f << "vhigh,vhigh,2,2,small,low,unacc\nvhigh,vhigh,2,2,sm";
    }
    const auto strict = run({"ingest", src.string(), (t.path / "x").string()});
    CHECK(strict.code == kData);
    CHECK(strict.err.find("line 2") != std::string::npos);
    const auto lenient = run({"ingest", "--lenient", src.string(), (t.path / "x").string()});
    CHECK(lenient.code == kOk);
    CHECK(lenient.out == "ok car 1 records\n");
}

TEST_CASE("poker run with all methods and five cycles writes 30 rows") {
    TempDir t;
    const auto out = t.path / "r.csv";
    auto args = std::vector<std::string>{"run",      "--dataset", "poker",         "--methods", "all",
                                         "--cycles", "5",         "--seed",        "42",        "--out",
                                         out.string(), "--timing", "off", "--set", "synth_hands=300"};
    args.insert(args.end(), kSmall.begin(), kSmall.end());
    REQUIRE(run(args).code == kOk);
    const auto first = slurp(out);
    std::istringstream lines(first);
    std::string line;
    int n = -1; // header
    while (std::getline(lines, line))
        ++n;
    CHECK(n == 30);
    REQUIRE(run(args).code == kOk);
    CHECK(slurp(out) == first);
}

TEST_CASE("bad options are usage errors") {
    CHECK(run({"run", "--methods", "svm"}).code == kUsage);
    CHECK(run({"run", "--cycles", "zero"}).code == kUsage);
    CHECK(run({"run", "--no-such-flag"}).code == kUsage);
    CHECK(run({}).code == kUsage);
    CHECK(run({"run"}, {"INTUITION_NOT_A_KEY=1"}).code == kUsage);
    CHECK(run({"run", "--config", "/nonexistent/cfg.json"}).code == kUsage);
}

TEST_CASE("flags override the environment, which overrides the config file") {
    TempDir t;
    const auto cfg_path = t.path / "cfg.json";
    {
        std::ofstream f(cfg_path);
        f << R"({"cycles": 3, "seed": 5, "methods": ["nn", "hmm"], "format": "csv"})";
    }
    RunConfig cfg;
    apply_config_file(cfg, cfg_path);
    CHECK(cfg.protocol.cycles == 3);
    CHECK(cfg.protocol.methods.size() == 2);
    const char* env[] = {"INTUITION_CYCLES=4", "PATH=/bin", nullptr};
    apply_environment(cfg, env);
    CHECK(cfg.protocol.cycles == 4);
    CHECK(cfg.protocol.seed == 5);
    set_option(cfg, "cycles", "2");
    CHECK(cfg.protocol.cycles == 2);

    {
        std::ofstream f(cfg_path);
        f << R"({"cycles": 3, "colour": "red"})";
    }
    RunConfig other;
    CHECK_THROWS_AS(apply_config_file(other, cfg_path), UsageError);
}

TEST_CASE("every option key is settable") {
    RunConfig cfg;
    for (const auto& key : option_keys())
        if (key != "data" && key != "out") // any text is a path
            CHECK_THROWS_AS(set_option(cfg, key, "\x01not a value"), UsageError);
    CHECK_THROWS_AS(set_option(cfg, "nonsense", "1"), UsageError);
}

TEST_CASE("report re-renders a stored csv") {
    TempDir t;
    const auto out = t.path / "r.csv";
    auto args = std::vector<std::string>{"run", "--dataset", "car", "--cycles", "1", "--out", out.string()};
    args.insert(args.end(), kSmall.begin(), kSmall.end());
    REQUIRE(run(args).code == kOk);
    const auto table = run({"report", out.string(), "--format", "table"});
    CHECK(table.code == kOk);
    CHECK(table.out.find("Car Evaluation") != std::string::npos);
    const auto csv = run({"report", out.string(), "--format", "csv"});
    CHECK(csv.out == slurp(out));
    {
        std::ofstream f(t.path / "bad.csv");
        f << "not,a,report\n";
    }
    CHECK(run({"report", (t.path / "bad.csv").string()}).code == kData);
}

}
