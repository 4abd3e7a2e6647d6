#include <catch2/catch_amalgamated.hpp>

#include <cotspaces/driver.hpp>

#include <cstdio>
#include <cstdlib>
#include <regex>

using namespace cotspaces;

namespace {

std::string strip_elapsed(std::string s) {
    static const std::regex pat("\"elapsed_ms\": [0-9]+");
    return std::regex_replace(s, pat, "\"elapsed_ms\": 0");
}

int run_binary(const std::string& args) {
    std::string cmd = std::string(COTSPACES_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("cot command") {
    RunConfig cfg;
    cfg.command = "cot";
    cfg.k = 2;
    cfg.a = 1;
    cfg.q = 3;
    RunResult r = run(cfg);
    CHECK(r.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(r.output);
    CHECK(j["value"] == "4/3");
    CHECK(j["field"] == "Q(zeta_3)");
    CHECK(j["routes_agree"] == true);
    CHECK(j["residual_log2"].get<double>() < -200);
}

TEST_CASE("chars command") {
    RunConfig cfg;
    cfg.command = "chars";
    cfg.q = 5;
    RunResult r = run(cfg);
    nlohmann::json j = nlohmann::json::parse(r.output);
    CHECK(j["characters"].size() == 4);
    int odd = 0;
    for (const auto& c : j["characters"])
        if (c["parity"] == "odd") ++odd;
    CHECK(odd == 2);
}

TEST_CASE("verify command and exit codes") {
    RunConfig cfg;
    cfg.command = "verify";
    cfg.sub = "cor1";
    cfg.k = 3;
    cfg.moduli = {3, 4, 5};
    RunResult r = run(cfg);
    CHECK(r.exit_code == kExitPass);
    nlohmann::json j = nlohmann::json::parse(r.output);
    CHECK(j["expected"] == 4);
    CHECK(j["computed"] == 4);
    CHECK(j["verdict"] == "pass");

    // Hypothesis failure: K-side field meets the real cyclotomic subfield.
    RunConfig hyp;
    hyp.command = "verify";
    hyp.sub = "thm1";
    hyp.k = 1;
    hyp.moduli = {3, 4};
    hyp.m = 12;
    CHECK(run(hyp).exit_code == kExitHypothesisFailed);

    // Forced verdict failure via the assertion override.
    RunConfig forced;
    forced.command = "rank";
    forced.k = 2;
    forced.moduli = {3, 4, 5};
    forced.expected_override = 7;
    CHECK(run(forced).exit_code == kExitVerdictFailed);
}

TEST_CASE("usage errors") {
    RunConfig cfg;
    cfg.command = "rank";
    cfg.k = 2;
    cfg.moduli = {4, 6};  // not coprime
    CHECK_THROWS_AS(run(cfg), std::invalid_argument);

    RunConfig fmt;
    fmt.command = "cot";
    fmt.k = 1;
    fmt.a = 1;
    fmt.q = 4;
    fmt.format = "yaml";
    CHECK_THROWS_AS(run(fmt), std::invalid_argument);

    RunConfig csv;
    csv.command = "cot";
    csv.k = 1;
    csv.a = 1;
    csv.q = 4;
    csv.format = "csv";
    CHECK_THROWS_AS(run(csv), std::invalid_argument);

    RunConfig suite;
    suite.command = "suite";
    suite.sub = "everything";
    CHECK_THROWS_AS(run(suite), std::invalid_argument);
}

TEST_CASE("identical configs produce byte-identical reports") {
    RunConfig cfg;
    cfg.command = "suite";
    cfg.sub = "cor1";
    cfg.jobs = 1;
    std::string first = strip_elapsed(run(cfg).output);
    cfg.jobs = 4;
    std::string second = strip_elapsed(run(cfg).output);
    cfg.jobs = 7;
    std::string third = strip_elapsed(run(cfg).output);
    CHECK(first == second);
    CHECK(first == third);
}

TEST_CASE("csv suite summaries") {
    RunConfig cfg;
    cfg.command = "suite";
    cfg.sub = "theorems";
    cfg.format = "csv";
    RunResult r = run(cfg);
    CHECK(r.exit_code == 0);
    CHECK(r.output.rfind("suite,case,theorem,params,expected,computed,verdict,elapsed_ms\n", 0) ==
          0);
    CHECK(std::count(r.output.begin(), r.output.end(), '\n') == 13);  // header + 12 cases
}

TEST_CASE("numeric commands") {
    RunConfig cfg;
    cfg.command = "numeric";
    cfg.sub = "hurwitz";
    cfg.k = 2;
    cfg.x = "1/2";
    cfg.precision = 128;
    RunResult r = run(cfg);
    nlohmann::json j = nlohmann::json::parse(r.output);
    CHECK(j["guaranteed_digits"] == guaranteed_decimal_digits(128));
    CHECK(j["value"].get<std::string>().substr(0, 7) == "4.93480");  // pi^2/2

    RunConfig lcfg;
    lcfg.command = "numeric";
    lcfg.sub = "l";
    lcfg.k = 2;
    lcfg.q = 4;
    lcfg.char_index = 1;
    nlohmann::json lj = nlohmann::json::parse(run(lcfg).output);
    CHECK(lj["re"].get<std::string>().substr(0, 7) == "0.91596");  // Catalan

    RunConfig bcfg;
    bcfg.command = "numeric";
    bcfg.sub = "bridge";
    bcfg.bridge_kind = "reflection";
    bcfg.k = 3;
    bcfg.a = 1;
    bcfg.q = 4;
    nlohmann::json bj = nlohmann::json::parse(run(bcfg).output);
    CHECK(bj["residual_log2"].get<double>() < -200);
}

TEST_CASE("config json round trip is stable") {
    RunConfig cfg;
    cfg.command = "verify";
    cfg.sub = "thm9";
    cfg.ks = {2, 2};
    cfg.grid = {{3, 4}, {5, 7}};
    CHECK(cfg.to_json().dump() == cfg.to_json().dump());
}

TEST_CASE("binary exit codes") {
    CHECK(run_binary("verify cor1 --k 3 --q 3,4,5") == 0);
    CHECK(run_binary("rank --k 2 --q 3,4,5 --expected 7") == 1);
    CHECK(run_binary("verify thm1 --k 1 --q 3,4 --m 12") == 2);
    CHECK(run_binary("rank --k 2") == 64);                    // missing required --q
    CHECK(run_binary("frobnicate") == 64);                    // unknown subcommand
    CHECK(run_binary("rank --k 2 --q 4,6") == 64);            // non-coprime moduli
    CHECK(run_binary("cot --k 2 --a 1 --q 3 --format csv") == 64);
    CHECK(run_binary("rank --k 2 --q 11,13,17") == 64);       // phi guard
    CHECK(run_binary("--help") == 0);
    CHECK(run_binary("suite okada --jobs 4 --format text") == 0);
}
