#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <json.hpp>

#include "sscc/predictor.hpp"
#include "sscc/trace.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kBin = SSCC_BENCH_BIN;
const fs::path kGolden = SSCC_GOLDEN_DIR;

int run_cmd(const std::string& args) {
    const std::string cmd = "\"" + kBin + "\" " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::current_path() / ("cli_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing file: " << path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << text;
}

std::size_t line_count(const std::string& text) {
    std::size_t lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    return lines;
}

} // namespace

TEST_CASE("help and usage errors") {
    CHECK(run_cmd("--help") == 0);
    CHECK(run_cmd("") != 0);            // a subcommand is required
    CHECK(run_cmd("run") != 0);         // missing config argument
    CHECK(run_cmd("frobnicate") != 0);  // unknown subcommand
    CHECK(run_cmd("run nonexistent.json --bogus-flag") != 0);
}

TEST_CASE("identical runs produce identical bytes") {
    const fs::path a = fresh_dir("repeat_a");
    const fs::path b = fresh_dir("repeat_b");
    const std::string config = (kGolden / "s2c2_general.json").string();
    REQUIRE(run_cmd("run \"" + config + "\" --out-dir \"" + a.string() + "\"") == 0);
    REQUIRE(run_cmd("run \"" + config + "\" --out-dir \"" + b.string() + "\"") == 0);
    for (const char* name : {"general_metrics.csv", "general_waste.csv", "general_baseline_metrics.csv",
                             "general_baseline_waste.csv", "general_summary.json"}) {
        CAPTURE(name);
        CHECK(read_file(a / name) == read_file(b / name));
    }
}

TEST_CASE("every strategy kind reproduces its golden outputs") {
    struct Entry {
        const char* config;
        const char* prefix;
    };
    const Entry entries[] = {{"mds.json", "mds"},
                             {"s2c2_basic.json", "basic"},
                             {"s2c2_general.json", "general"},
                             {"poly.json", "poly"},
                             {"replication.json", "replication"},
                             {"overdecomp.json", "overdecomp"}};
    for (const auto& e : entries) {
        CAPTURE(e.config);
        const fs::path out = fresh_dir(std::string("golden_") + e.prefix);
        const std::string config = (kGolden / e.config).string();
        REQUIRE(run_cmd("run \"" + config + "\" --out-dir \"" + out.string() + "\"") == 0);
        const std::string metrics = std::string(e.prefix) + "_metrics.csv";
        const std::string summary = std::string(e.prefix) + "_summary.json";
        CHECK(read_file(out / metrics) == read_file(kGolden / metrics));
        CHECK(read_file(out / summary) == read_file(kGolden / summary));
    }
}

TEST_CASE("the seed flag overrides the config seed") {
    const std::string config = (kGolden / "overdecomp.json").string();
    const fs::path base = fresh_dir("seed_base");
    const fs::path s99a = fresh_dir("seed_99a");
    const fs::path s99b = fresh_dir("seed_99b");
    REQUIRE(run_cmd("run \"" + config + "\" --out-dir \"" + base.string() + "\"") == 0);
    REQUIRE(run_cmd("run \"" + config + "\" --seed 99 --out-dir \"" + s99a.string() + "\"") == 0);
    REQUIRE(run_cmd("run \"" + config + "\" --seed 99 --out-dir \"" + s99b.string() + "\"") == 0);
    CHECK(read_file(s99a / "overdecomp_metrics.csv") == read_file(s99b / "overdecomp_metrics.csv"));
    CHECK(read_file(base / "overdecomp_metrics.csv") != read_file(s99a / "overdecomp_metrics.csv"));
}

TEST_CASE("an undecodable cluster exits 2 and leaves no outputs") {
    const fs::path work = fresh_dir("undecodable_in");
    fs::create_directories(work);
    // two of four workers never respond, but the code needs k = 3 responses
    sscc::SpeedTrace dead(3, {0.0, 0.0, 100.0, 100.0});
    std::ostringstream traceCsv;
    sscc::write_trace_csv(traceCsv, dead);
    write_file(work / "dead.csv", traceCsv.str());
    write_file(work / "bad.json", std::string(R"({
        "schema": 1, "iterations": 3, "app": "pagerank",
        "scheme": {"kind": "s2c2_basic", "n": 4, "k": 3},
        "matrix": {"kind": "synthetic", "rows": 48, "cols": 48},
        "speed_model": {"kind": "trace", "path": ")") +
                                        (work / "dead.csv").string() + R"("}
    })");
    const fs::path out = fresh_dir("undecodable_out");
    CHECK(run_cmd("run \"" + (work / "bad.json").string() + "\" --out-dir \"" + out.string() + "\"") == 2);
    CHECK(!fs::exists(out));
}

TEST_CASE("config mistakes exit 1 before anything is written") {
    const fs::path work = fresh_dir("badcfg_in");
    fs::create_directories(work);
    write_file(work / "typo.json",
               R"({"schema": 1, "scheme": {"kind": "mds", "n": 4, "k": 2}, "iterattions": 5})");
    const fs::path out = fresh_dir("badcfg_out");
    CHECK(run_cmd("run \"" + (work / "typo.json").string() + "\" --out-dir \"" + out.string() + "\"") == 1);
    CHECK(!fs::exists(out));
}

TEST_CASE("trace-gen writes a deterministic loadable trace") {
    const fs::path a = fresh_dir("trace_a");
    const fs::path b = fresh_dir("trace_b");
    const std::string args = "trace-gen --workers 6 --iterations 80 --straggler 2:5:10:20 --out t.csv --seed 3";
    REQUIRE(run_cmd(args + " --out-dir \"" + a.string() + "\"") == 0);
    REQUIRE(run_cmd(args + " --out-dir \"" + b.string() + "\"") == 0);
    const std::string text = read_file(a / "t.csv");
    CHECK(text == read_file(b / "t.csv"));
    CHECK(line_count(text) == 1 + 6 * 80);

    const auto trace = sscc::read_trace_csv((a / "t.csv").string());
    REQUIRE(trace.size() == 80);
    REQUIRE(trace[0].size() == 6);
    // the straggler window runs at a fifth of the surrounding speed
    CHECK(trace[10][2] < trace[9][2]);
    CHECK(trace[20][2] > trace[19][2]);

    REQUIRE(run_cmd(args + " --seed 4 --out-dir \"" + a.string() + "\"") == 0);
    CHECK(read_file(a / "t.csv") != text);

    CHECK(run_cmd("trace-gen --straggler nonsense --out-dir \"" + a.string() + "\"") == 1);
}

TEST_CASE("train evaluates all three predictors and stores the models") {
    const fs::path dir = fresh_dir("train");
    REQUIRE(run_cmd("trace-gen --workers 4 --iterations 60 --seed 8 --out train.csv --out-dir \"" +
                    dir.string() + "\"") == 0);
    REQUIRE(run_cmd("train --trace \"" + (dir / "train.csv").string() +
                    "\" --epochs 60 --out-prefix speed --seed 1 --out-dir \"" + dir.string() + "\"") == 0);

    const auto lstm = sscc::lstm_from_json(read_file(dir / "speed_lstm.json"));
    CHECK(lstm.scale > 0.0);
    const auto ar1 = sscc::ar1_from_json(read_file(dir / "speed_ar1.json"));
    CHECK(ar1.mu > 0.0);

    const auto mape = nlohmann::json::parse(read_file(dir / "speed_mape.json"));
    CHECK(mape.at("schema").get<int>() == 1);
    CHECK(mape.at("series").get<int>() == 4);
    for (const char* model : {"last_value", "ar1", "lstm"}) {
        CAPTURE(model);
        CHECK(mape.at(model).at("train_mape").get<double>() >= 0.0);
        CHECK(mape.at(model).at("test_mape").get<double>() >= 0.0);
    }

    CHECK(run_cmd("train --trace missing.csv --out-dir \"" + dir.string() + "\"") == 1);
}

TEST_CASE("report folds runs into tidy tables") {
    const fs::path runs = fresh_dir("report_runs");
    REQUIRE(run_cmd("run \"" + (kGolden / "mds.json").string() + "\" --out-dir \"" + runs.string() + "\"") == 0);
    REQUIRE(run_cmd("run \"" + (kGolden / "s2c2_general.json").string() + "\" --out-dir \"" + runs.string() +
                    "\"") == 0);

    const fs::path out = fresh_dir("report_out");
    REQUIRE(run_cmd("report --metrics \"" + (runs / "mds_metrics.csv").string() + "\" --metrics \"" +
                    (runs / "general_metrics.csv").string() + "\" --waste \"" +
                    (runs / "mds_waste.csv").string() + "\" --waste \"" + (runs / "general_waste.csv").string() +
                    "\" --out-prefix cmp --out-dir \"" + out.string() + "\"") == 0);

    const std::string latency = read_file(out / "cmp_latency.csv");
    CHECK(line_count(latency) == 4); // schema line, header, one row per input
    CHECK(latency.find("# schema=1\n") == 0);
    CHECK(latency.find("source,strategy,iterations,mean_latency_total") == 11);
    CHECK(latency.find("mds_metrics,") != std::string::npos);
    CHECK(latency.find("general_metrics,") != std::string::npos);

    const std::string waste = read_file(out / "cmp_waste.csv");
    CHECK(waste.find("# schema=1\nsource,strategy,worker,assigned_rows,used_rows,wasted_rows") == 0);
    CHECK(line_count(waste) == 2 + 4 + 6); // 4 mds workers + 6 general workers

    CHECK(run_cmd("report --metrics missing.csv --out-dir \"" + out.string() + "\"") == 1);
}

TEST_CASE("the debug log level adds an event trace") {
    const std::string config = (kGolden / "mds.json").string();
    const fs::path quiet = fresh_dir("events_quiet");
    const fs::path loud = fresh_dir("events_loud");
    REQUIRE(run_cmd("run \"" + config + "\" --out-dir \"" + quiet.string() + "\"") == 0);
    CHECK(!fs::exists(quiet / "mds_events.csv"));

    REQUIRE(run_cmd("run \"" + config + "\" --log-level debug --out-dir \"" + loud.string() + "\"") == 0);
    const std::string events = read_file(loud / "mds_events.csv");
    CHECK(events.find("time,worker,event,detail") == 0);
    CHECK(events.find(",assign,") != std::string::npos);
    CHECK(events.find(",receive,") != std::string::npos);

    // the SSCC_LOG environment variable is the same switch
    const fs::path env = fresh_dir("events_env");
    const std::string cmd = "SSCC_LOG=debug \"" + kBin + "\" run \"" + config + "\" --out-dir \"" +
                            env.string() + "\" > /dev/null 2>&1";
    REQUIRE(std::system(cmd.c_str()) == 0);
    CHECK(fs::exists(env / "mds_events.csv"));

    CHECK(run_cmd("run \"" + config + "\" --log-level loud --out-dir \"" + quiet.string() + "\"") == 1);
}
