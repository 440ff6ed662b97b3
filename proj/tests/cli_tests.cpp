/* End-to-end tests of the ade command-line tool.  Each case spawns the
 * built binary (path in ADE_CLI_BIN), captures combined stdout/stderr, and
 * checks output and exit codes against the documented contract:
 * 0 success, 1 operation failure, 2 usage error. */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "json.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const char* bin = std::getenv("ADE_CLI_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "ADE_CLI_BIN must point at the built binary");
    const std::string cmd = std::string(bin) + (args.empty() ? "" : " " + args) + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

size_t count_occurrences(const std::string& hay, const std::string& needle) {
    size_t n = 0;
    for (size_t at = hay.find(needle); at != std::string::npos; at = hay.find(needle, at + 1))
        ++n;
    return n;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("--help matches the committed snapshot byte for byte") {
    const char* snap = std::getenv("ADE_HELP_SNAPSHOT");
    REQUIRE_MESSAGE(snap != nullptr, "ADE_HELP_SNAPSHOT must point at the snapshot file");
    const RunResult r = run_cli("--help");
    CHECK(r.code == 0);
    CHECK(r.out == slurp(snap));
}

TEST_CASE("--version") {
    const RunResult r = run_cli("--version");
    CHECK(r.code == 0);
    CHECK(r.out == "ade 1.0.0\n");
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("").code == 2);            // a subcommand is required
    CHECK(run_cli("frobnicate").code == 2);  // unknown subcommand
    CHECK(run_cli("roots").code == 2);       // missing required argument
    const RunResult bad = run_cli("roots Z9");
    CHECK(bad.code == 2);
    CHECK(bad.out.find("error:") != std::string::npos);
}

TEST_CASE("roots") {
    const RunResult r = run_cli("roots A2");
    CHECK(r.code == 0);
    CHECK(r.out.find("type: A2") != std::string::npos);
    CHECK(r.out.find("roots: 6") != std::string::npos);
}

TEST_CASE("grade") {
    const RunResult r = run_cli("grade D4");
    CHECK(r.code == 0);
    CHECK(r.out.find("dim V: 16") != std::string::npos);
    CHECK(r.out.find("dim G: 12") != std::string::npos);
    CHECK(r.out.find("marked points: 3") != std::string::npos);
}

TEST_CASE("verify-case") {
    const RunResult one = run_cli("verify-case D4");
    CHECK(one.code == 0);
    CHECK(one.out.find("case D4: PASS") != std::string::npos);

    const RunResult all = run_cli("verify-case --all");
    CHECK(all.code == 0);
    CHECK(count_occurrences(all.out, ": PASS") == 7);

    CHECK(run_cli("verify-case Q9").code == 2);
    CHECK(run_cli("verify-case").code == 2);  // needs a name or --all
}

TEST_CASE("verify-case --json writes a parseable report") {
    const auto path = temp_file("ade-cli-verify.json");
    std::filesystem::remove(path);
    const RunResult r = run_cli("verify-case E6 --json " + path.string());
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(slurp(path.string()));
    CHECK(j.at("case") == "E6");
    CHECK(j.at("pass") == true);
    CHECK(j.at("checks").is_array());
    CHECK(j.at("checks").size() > 10);

    const RunResult all = run_cli("verify-case --all --json " + path.string());
    CHECK(all.code == 0);
    const auto ja = nlohmann::json::parse(slurp(path.string()));
    REQUIRE(ja.is_array());
    CHECK(ja.size() == 7);
    std::filesystem::remove(path);
}

TEST_CASE("lambda and zeta") {
    const RunResult r = run_cli("lambda E6");
    CHECK(r.code == 0);
    CHECK(r.out.find("exponents:") != std::string::npos);
    CHECK(r.out.find("zeta product:") != std::string::npos);

    const RunResult z = run_cli("zeta 2");
    CHECK(z.code == 0);
    CHECK(z.out.find("zeta(2) = 1.644934") != std::string::npos);

    const RunResult bad = run_cli("zeta 1");
    CHECK(bad.code == 1);  // pole: an operation failure, not a usage error
    CHECK(bad.out.find("error:") != std::string::npos);
}

TEST_CASE("disc") {
    const RunResult r = run_cli("disc --poly 0,3,-7,5,-2");
    CHECK(r.code == 0);
    CHECK(r.out.find("disc = 434025") != std::string::npos);

    const RunResult padded = run_cli("disc --poly 3,-7,5,-2 --degree 5");
    CHECK(padded.out.find("disc = 434025") != std::string::npos);
}

TEST_CASE("classify") {
    const RunResult r = run_cli("classify --poly 0,-3,2 --p 3");
    CHECK(r.code == 0);
    CHECK(r.out.find("type = STRONG") != std::string::npos);
    CHECK(run_cli("classify --poly 0,-3,2 --p 3 --engine bogus").code == 2);
}

TEST_CASE("construct") {
    const RunResult r = run_cli("construct --poly 0,-3,2 --m 7");
    CHECK(r.code == 0);
    CHECK(r.out.find("shift = 1") != std::string::npos);
    CHECK(r.out.find("1,7,0") != std::string::npos);
    CHECK(r.out.find("q orbit = 7") != std::string::npos);

    const RunResult bad = run_cli("construct --poly 0,1 --m 3");
    CHECK(bad.code == 1);  // no normalizing shift exists
    CHECK(bad.out.find("error:") != std::string::npos);
}

TEST_CASE("local-density") {
    const RunResult r = run_cli("local-density --family A2 --p 7");
    CHECK(r.code == 0);
    CHECK(r.out.find("rho: 330/343") != std::string::npos);

    const RunResult over = run_cli("local-density --family A4 --p 11");
    CHECK(over.code == 1);
    CHECK(over.out.find("budget exceeded") != std::string::npos);
}

TEST_CASE("sieve") {
    const RunResult r = run_cli("sieve --family A2 --X 5");
    CHECK(r.code == 0);
    CHECK(r.out.find("total: 12201") != std::string::npos);
    CHECK(r.out.find("squarefree: 3348") != std::string::npos);

    const RunResult tail = run_cli("sieve --family A2 --X 5 --tail 2,5");
    CHECK(tail.code == 0);
    CHECK(tail.out.find("points: 12201") != std::string::npos);
    CHECK(tail.out.find("M  strong  weak\n2  ") != std::string::npos);
    CHECK(tail.out.find("\n5  ") != std::string::npos);

    CHECK(run_cli("sieve --family A2 --X 5 --engine bogus").code == 2);
}

TEST_CASE("compare writes deterministic reports") {
    const auto jsonPath = temp_file("ade-cli-compare.json");
    const auto csvPath = temp_file("ade-cli-compare.csv");
    std::filesystem::remove(jsonPath);
    std::filesystem::remove(csvPath);
    const std::string args = "compare --family A2 --pmax 13 --X 5 --seed 20260818 --out " +
                             jsonPath.string() + " --csv " + csvPath.string();

    const RunResult r = run_cli(args);
    CHECK(r.code == 0);
    CHECK(r.out.find("AGREE") != std::string::npos);
    const std::string firstJson = slurp(jsonPath.string());
    const std::string firstCsv = slurp(csvPath.string());

    const auto j = nlohmann::json::parse(firstJson);
    CHECK(j.at("schemaVersion") == 1);
    CHECK(j.at("family") == "A2");
    CHECK(j.at("verdict") == "AGREE");
    CHECK(j.at("perPrime").size() == 6);
    CHECK(firstCsv.rfind("p,method,rho,estimate,se,samples,seed\n", 0) == 0);

    // a rerun with identical arguments reproduces both files exactly
    const RunResult again = run_cli(args);
    CHECK(again.code == 0);
    CHECK(slurp(jsonPath.string()) == firstJson);
    CHECK(slurp(csvPath.string()) == firstCsv);

    std::filesystem::remove(jsonPath);
    std::filesystem::remove(csvPath);
}
