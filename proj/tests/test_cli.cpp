#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lucas/cli.hpp"
#include "lucas/json_io.hpp"

using namespace lucas;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Golden {
    std::string name;
    std::vector<std::string> args;
    bool json = false;
};

// LUCAS_UPDATE_GOLDEN=1 rewrites the files instead of comparing.
const std::vector<Golden> kGoldens = {
    {"test_49", {"test", "--n", "49", "--d", "5", "--t", "4", "--seed", "7"}},
    {"test_prime", {"test", "--n", "1000000007", "--d", "-7", "--t", "3", "--seed", "1", "--format", "json"}, true},
    {"test_twin", {"test", "--n", "323", "--d", "5", "--seed", "2", "--twin-precheck", "--format", "json"}, true},
    {"census_15_14", {"census", "--n", "15", "--d", "14"}},
    {"census_15_14_json", {"census", "--n", "15", "--d", "14", "--format", "json"}, true},
    {"census_shared", {"census", "--n", "21", "--d", "7", "--format", "json"}, true},
    {"classify_323", {"classify", "--n", "323", "--d", "5"}},
    {"classify_15_14", {"classify", "--n", "15", "--d", "14", "--format", "json"}, true},
    {"classify_49", {"classify", "--n", "49", "--d", "5", "--format", "json"}, true},
    {"bounds_eval_klt", {"bounds", "eval", "--k", "1024", "--t", "8", "--theorem", "q_klt"}, true},
    {"bounds_eval_pkt", {"bounds", "eval", "--k", "512", "--t", "2", "--theorem", "p_kt"}, true},
    {"gen_64", {"gen", "--k", "64", "--t", "2", "--seed", "3", "--format", "json"}, true},
    {"gen_16_human", {"gen", "--k", "16", "--l", "3", "--d", "13", "--seed", "11"}},
    {"exact_8", {"experiment", "exact", "--k", "8", "--t", "1", "--d", "5", "--format", "json"}, true},
    {"exact_8_human", {"experiment", "exact", "--k", "8", "--t", "2", "--d", "-11", "--l", "1"}},
    {"mc_10", {"experiment", "mc", "--k", "10", "--trials", "200", "--seed", "4", "--format", "csv"}},
    {"mc_10_json", {"experiment", "mc", "--k", "10", "--trials", "50", "--seed", "4", "--threads", "3",
                    "--format", "json"}, true},
};

}  // namespace

TEST_CASE("golden outputs") {
    const std::filesystem::path dir(LUCAS_GOLDEN_DIR);
    const bool update = std::getenv("LUCAS_UPDATE_GOLDEN") != nullptr;
    for (const auto& g : kGoldens) {
        CAPTURE(g.name);
        const auto r = run(g.args);
        REQUIRE(r.code == kExitOk);
        const auto path = dir / (g.name + ".txt");
        if (update) {
            std::ofstream(path, std::ios::binary) << r.out;
            continue;
        }
        REQUIRE(std::filesystem::exists(path));
        CHECK(r.out == slurp(path));
        if (g.json) {
            const Json j = Json::parse(r.out);
            CHECK(j.dump() + "\n" == r.out);
        }
    }
}

TEST_CASE("bounds table output equals the fixtures") {
    for (int which = 1; which <= 4; ++which) {
        const auto r = run({"bounds", "table", "--which", std::to_string(which)});
        CHECK(r.code == kExitOk);
        CHECK(r.out == slurp(std::filesystem::path(LUCAS_FIXTURE_DIR) / ("table" + std::to_string(which) + ".csv")));
    }
}

TEST_CASE("census and test outputs carry the documented fields") {
    const Json census = Json::parse(run({"census", "--n", "15", "--d", "14", "--format", "json"}).out);
    CHECK(census.at("sl") == "5");
    CHECK(census.at("phi_d") == "16");
    CHECK(census.at("alpha") == "5/16");
    CHECK(census.at("alpha_bar") == "1/3");
    CHECK(census.contains("decomposition"));

    const Json test = Json::parse(run({"test", "--n", "49", "--d", "5", "--t", "4", "--seed", "7", "--format", "json"}).out);
    CHECK(test.at("verdict") == "composite");
    CHECK(test.at("witness_verified") == true);

    const Json cls = Json::parse(run({"classify", "--n", "15", "--d", "14", "--format", "json"}).out);
    CHECK(cls.at("in_c3") == true);
    CHECK(cls.at("form") == "TwinPair");
    CHECK(cls.at("params").at("k1") == 2);

    const Json eval = Json::parse(run({"bounds", "eval", "--k", "1024", "--t", "8", "--theorem", "p_kt"}).out);
    CHECK(eval.at("neg_log2") == 155);

    const Json gen = Json::parse(run({"gen", "--k", "32", "--seed", "9", "--format", "json"}).out);
    const auto record = gen.get<RunRecord>();
    CHECK(record.config.k == 32);
    CHECK(Json(record).dump() == gen.dump());
}

TEST_CASE("exit codes") {
    CHECK(run({"--help"}).code == kExitOk);
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"frobnicate"}).code == kExitUsage);
    CHECK(run({"test", "--n", "13", "--bogus"}).code == kExitUsage);
    CHECK(run({"test", "--d", "5"}).code == kExitUsage);
    CHECK(run({"test", "--n", "abc"}).code == kExitUsage);
    CHECK(run({"test", "--n", "5", "--d", "5"}).code == kExitUsage);
    CHECK(run({"test", "--n", "13", "--format", "xml"}).code == kExitUsage);
    CHECK(run({"bounds", "table", "--which", "5"}).code == kExitUsage);
    CHECK(run({"bounds", "eval", "--k", "100", "--theorem", "nope"}).code == kExitUsage);
    CHECK(run({"census", "--n", "1", "--d", "5"}).code == kExitUsage);
    // gcd(n, 2D) > 1 is not an error: SL is 0 by convention
    const auto shared = run({"census", "--n", "20", "--d", "5", "--format", "json"});
    CHECK(shared.code == kExitOk);
    CHECK(Json::parse(shared.out).at("sl") == "0");
    CHECK(run({"gen", "--k", "3"}).code == kExitUsage);

    const auto budget = run({"experiment", "exact", "--k", "21"});
    CHECK(budget.code == kExitGate);
    CHECK_FALSE(budget.err.empty());
    CHECK(run({"experiment", "exact", "--k", "13", "--method", "base_enumeration"}).code == kExitGate);
    CHECK(run({"gen", "--k", "40", "--seed", "1", "--budget", "0"}).code == kExitGate);
}

TEST_CASE("seeds: explicit seeds reproduce, missing seeds are printed") {
    const std::vector<std::string> args = {"gen", "--k", "48", "--t", "3", "--seed", "42", "--format", "json"};
    CHECK(run(args).out == run(args).out);

    const auto first = run({"test", "--n", "1000003", "--t", "2"});
    REQUIRE(first.code == kExitOk);
    REQUIRE(first.out.rfind("seed: ", 0) == 0);
    const std::string seed = first.out.substr(6, first.out.find('\n') - 6);
    const auto again = run({"test", "--n", "1000003", "--t", "2", "--seed", seed});
    // the explicit run omits the "seed:" line but prints the same outcome
    CHECK(again.out == first.out.substr(first.out.find('\n') + 1));

    const auto mc = run({"experiment", "mc", "--k", "8", "--trials", "20"});
    CHECK(mc.out.rfind("seed: ", 0) == 0);
}

TEST_CASE("mc writes CSV and record files") {
    const auto tmp = std::filesystem::temp_directory_path() / "lucas_cli_test";
    std::filesystem::create_directories(tmp);
    const auto csv = tmp / "summary.csv";
    const auto jsonl = tmp / "records.jsonl";
    const auto r = run({"experiment", "mc", "--k", "9", "--trials", "25", "--seed", "6", "--out", csv.string(),
                        "--records", jsonl.string(), "--format", "json"});
    REQUIRE(r.code == kExitOk);
    const std::string text = slurp(csv);
    CHECK(text.rfind("k,t,l,D,trials,composites,estimate,se,exact_value_if_available\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
    std::ifstream lines(jsonl);
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
        const auto rec = Json::parse(line).get<RunRecord>();
        CHECK(rec.config.k == 9);
        ++count;
    }
    CHECK(count == 25);
    std::filesystem::remove_all(tmp);
}
