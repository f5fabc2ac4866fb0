#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "momsec/fixtures.hpp"
#include "momsec/model.hpp"
#include "momsec/report.hpp"
#include "momsec/suites.hpp"

using namespace momsec;

namespace {

namespace fs = std::filesystem;

Problem fixture_problem(const std::string& name) {
    const Fixture* fixture = find_fixture(name);
    REQUIRE(fixture != nullptr);
    return load_problem(fixture->json);
}

std::vector<std::string> check_ids(const std::vector<CheckResult>& results) {
    std::vector<std::string> ids;
    for (const CheckResult& r : results) ids.push_back(r.id);
    return ids;
}

bool all_passed(const std::vector<CheckResult>& results) {
    return std::all_of(results.begin(), results.end(),
                       [](const CheckResult& r) { return r.passed; });
}

const CheckResult* find_result(const std::vector<CheckResult>& results,
                               const std::string& id) {
    for (const CheckResult& r : results) {
        if (r.id == id) return &r;
    }
    return nullptr;
}

/// Non-advisory failures in a result list.
std::vector<std::string> failed_ids(const std::vector<CheckResult>& results) {
    std::vector<std::string> ids;
    for (const CheckResult& r : results) {
        if (!r.advisory && !r.passed) ids.push_back(r.id);
    }
    return ids;
}

/// Runs the installed CLI binary; returns its exit status and captures
/// combined output.
int run_cli(const std::string& args, std::string* output = nullptr) {
    const fs::path out_path =
        fs::path("cli_test_tmp") / "last_output.txt";
    fs::create_directories("cli_test_tmp");
    const std::string command = std::string(MOMSEC_CLI_PATH) + " " + args +
                                " > " + out_path.string() + " 2>&1";
    const int raw = std::system(command.c_str());
    if (output != nullptr) {
        std::ifstream in(out_path);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        *output = buffer.str();
    }
    REQUIRE(WIFEXITED(raw));
    return WEXITSTATUS(raw);
}

/// Writes a fixture document into the CLI scratch directory.
std::string write_fixture_file(const std::string& name) {
    const Fixture* fixture = find_fixture(name);
    REQUIRE(fixture != nullptr);
    fs::create_directories("cli_test_tmp");
    const fs::path path = fs::path("cli_test_tmp") / (name + ".json");
    std::ofstream out(path);
    out << fixture->json;
    return path.string();
}

std::string strip_timestamp(const std::string& text) {
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find("\"timestamp\"") == std::string::npos) {
            out << line << "\n";
        }
    }
    return out.str();
}

}  // namespace

TEST_CASE("suite registry and check registry are consistent") {
    CHECK(suite_names().size() == 10);
    CHECK(is_suite("axioms"));
    CHECK(is_suite("all"));
    CHECK_FALSE(is_suite("everything"));

    std::set<std::string> ids;
    for (const CheckInfo& info : check_registry()) {
        CHECK_MESSAGE(ids.insert(info.id).second, "duplicate id " << info.id);
        CHECK_MESSAGE(is_suite(info.suite), info.id << " claims unknown suite");
        CHECK_FALSE(info.formula.empty());
        CHECK_FALSE(info.description.empty());
    }

    CHECK(find_check("momentum-p2") != nullptr);
    CHECK(find_check("p2")->id == "momentum-p2");
    CHECK(find_check("s3")->id == "momentum-s3");
    CHECK(find_check("does-not-exist") == nullptr);
}

TEST_CASE("fixture catalog loads and is complete") {
    CHECK(fixture_catalog().size() == 12);
    std::set<std::string> names;
    for (const Fixture& fixture : fixture_catalog()) {
        CHECK(names.insert(fixture.name).second);
        CHECK_NOTHROW(load_problem(fixture.json));
    }
    CHECK(find_fixture("e7") == nullptr);
}

TEST_CASE("suites dispatch the documented checks per fixture") {
    const Problem e1 = fixture_problem("e1");
    const auto symplectic = run_suite(e1, "hamiltonian-symplectic");
    CHECK(check_ids(symplectic) ==
          std::vector<std::string>{"momentum-s1", "momentum-s2",
                                   "momentum-s3"});
    CHECK(all_passed(symplectic));

    const auto geometry = run_suite(e1, "geometry");
    CHECK(check_ids(geometry) == std::vector<std::string>{"omega-closed"});

    const auto dirac = run_suite(e1, "dirac");
    CHECK(check_ids(dirac) ==
          std::vector<std::string>{"dirac-frame-rank", "dirac-involutivity",
                                   "dirac-isotropy", "graph-bracket-closure"});
    CHECK(all_passed(dirac));

    const auto morphisms = run_suite(e1, "morphisms");
    CHECK(find_result(morphisms, "morphism-tm-r") != nullptr);
    CHECK(find_result(morphisms, "morphism-graph-omega") != nullptr);
    CHECK(find_result(morphisms, "morphism-tstar-r") == nullptr);
    CHECK(all_passed(morphisms));

    const Problem e2 = fixture_problem("e2");
    const auto poisson = run_suite(e2, "hamiltonian-poisson");
    CHECK(check_ids(poisson) ==
          std::vector<std::string>{"basic-curvature-kernel",
                                   "basic-curvature-pairing", "momentum-p1",
                                   "momentum-p2", "momentum-p3"});
    CHECK(all_passed(poisson));
    CHECK(run_suite(e2, "identities").size() == 7);

    const auto graded = run_suite(e2, "graded");
    CHECK(find_result(graded, "graded-poisson-map") != nullptr);
    CHECK(find_result(graded, "master-equation-m") != nullptr);
    CHECK(all_passed(graded));

    // Without a bivector only the shifted-bundle checks run.
    const auto graded_e1 = run_suite(e1, "graded");
    CHECK(check_ids(graded_e1) ==
          std::vector<std::string>{"derived-bracket-reproduction-n",
                                   "homological-a1", "master-equation-n"});
}

TEST_CASE("results come back sorted by suite then id") {
    const auto results = run_suite(fixture_problem("e2"), "all");
    for (std::size_t i = 1; i < results.size(); ++i) {
        const auto prev = std::tie(results[i - 1].suite, results[i - 1].id);
        const auto curr = std::tie(results[i].suite, results[i].id);
        CHECK(prev < curr);
    }
}

TEST_CASE("missing blocks raise MissingInputError with suite context") {
    const Problem e3 = fixture_problem("e3");
    CHECK_THROWS_AS(run_suite(e3, "geometry"), MissingInputError);
    CHECK_THROWS_AS(run_suite(e3, "hamiltonian-symplectic"),
                    MissingInputError);
    CHECK_THROWS_AS(run_suite(e3, "hamiltonian-poisson"), MissingInputError);
    CHECK_THROWS_AS(run_suite(e3, "identities"), MissingInputError);
    CHECK_THROWS_AS(run_suite(e3, "dirac"), MissingInputError);

    // A dirac block whose kind has no matching structure block.
    const char* mismatched = R"({
      "chart": {"names": ["x", "y"], "box": [[-1, 1], [-1, 1]]},
      "algebroid": {"rank": 1, "rho": [["y", "-x"]], "C": [[["0"]]]},
      "poisson": {"pi": [["0", "1"], ["0", "0"]]},
      "dirac": {"kind": "graph-omega"}
    })";
    CHECK_THROWS_AS(run_suite(load_problem(mismatched), "dirac"),
                    MissingInputError);

    // The all suite skips whatever is inapplicable instead of throwing.
    const auto all_e3 = run_suite(e3, "all");
    std::set<std::string> suites;
    for (const CheckResult& r : all_e3) suites.insert(r.suite);
    CHECK(suites == std::set<std::string>{"axioms", "courant", "morphisms",
                                          "graded"});
    CHECK(all_passed(all_e3));
}

TEST_CASE("coordinate names colliding with fiber names become SchemaError") {
    const char* collision = R"({
      "chart": {"names": ["p1", "p2"], "box": [[-1, 1], [-1, 1]]},
      "algebroid": {"rank": 1, "rho": [["0", "0"]], "C": [[["0"]]]}
    })";
    CHECK_THROWS_AS(run_suite(load_problem(collision), "morphisms"),
                    SchemaError);
}

TEST_CASE("broken fixtures fail exactly their designated check") {
    struct Expectation {
        const char* fixture;
        const char* suite;
        const char* id;
    };
    const std::vector<Expectation> table{
        {"e1-broken-mu", "hamiltonian-symplectic", "momentum-s2"},
        {"e2-broken-mu", "hamiltonian-poisson", "momentum-p2"},
        {"e3-broken-c", "axioms", "anchor-compat"},
        {"e4-broken-c", "axioms", "anchor-compat"},
        {"e5-broken-mu", "hamiltonian-symplectic", "momentum-s3"},
        {"e6-broken-mu", "hamiltonian-poisson", "momentum-p3"},
    };
    for (const Expectation& expected : table) {
        CAPTURE(expected.fixture);
        const Problem problem = fixture_problem(expected.fixture);
        const auto results = run_suite(problem, expected.suite);
        CHECK(failed_ids(results) ==
              std::vector<std::string>{expected.id});
        // The axioms stay healthy for the momentum mutations.
        if (std::string(expected.suite) != "axioms") {
            CHECK(all_passed(run_suite(problem, "axioms")));
        }
    }
}

TEST_CASE("summarize aggregates verdicts and ignores advisory failures") {
    CheckResult pass;
    pass.id = "a";
    pass.suite = "axioms";
    pass.passed = true;
    CheckResult advisory_fail;
    advisory_fail.id = "b";
    advisory_fail.suite = "axioms";
    advisory_fail.passed = false;
    advisory_fail.advisory = true;
    CheckResult fail;
    fail.id = "c";
    fail.suite = "geometry";
    fail.passed = false;

    const RunReport healthy = summarize("axioms", {pass, advisory_fail});
    CHECK(healthy.overall_pass);
    CHECK(healthy.exit_code == 0);
    CHECK(healthy.suite_verdicts.at("axioms"));

    const RunReport broken = summarize("all", {pass, advisory_fail, fail});
    CHECK_FALSE(broken.overall_pass);
    CHECK(broken.exit_code == 1);
    CHECK(broken.suite_verdicts.at("axioms"));
    CHECK_FALSE(broken.suite_verdicts.at("geometry"));

    const std::string text = render_text(broken);
    CHECK(text.find("FAIL  geometry/c") != std::string::npos);
    CHECK(text.find("warn  axioms/b") != std::string::npos);
    CHECK(text.find("overall: FAIL") != std::string::npos);
}

TEST_CASE("fnv1a digests match frozen reference values") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a_hex("momentum section") == "4dfc7b2ec06e67e4");
}

TEST_CASE("json reports carry the schema and digest") {
    const Problem e3 = fixture_problem("e3");
    const RunReport report = summarize("axioms", run_suite(e3, "axioms"));
    const std::string input = find_fixture("e3")->json;
    const std::string rendered = render_json(report, e3.options, input);

    const auto doc = nlohmann::json::parse(rendered);
    CHECK(doc.at("schema") == "report-v1");
    CHECK(doc.at("version") == std::string(kToolVersion));
    CHECK(doc.at("input_digest") == fnv1a_hex(input));
    CHECK(doc.at("prng") == "splitmix64");
    CHECK(doc.at("suite") == "axioms");
    CHECK(doc.at("checks").size() == 2);
    CHECK(doc.at("checks")[0].at("id") == "anchor-compat");
    CHECK(doc.at("suites").at("axioms") == true);
    CHECK(doc.at("overall_pass") == true);
    CHECK(doc.at("exit_code") == 0);
    CHECK(doc.contains("timestamp"));
}

TEST_CASE("random poisson problems satisfy everything by construction") {
    for (std::uint64_t index : {0ULL, 1ULL, 7ULL, 23ULL, 100ULL, 215ULL}) {
        CAPTURE(index);
        const Problem problem = random_poisson_problem(index);
        CHECK(all_passed(run_suite(problem, "axioms")));
        CHECK(all_passed(run_suite(problem, "hamiltonian-poisson")));
    }
    // Deterministic in the index.
    const Problem a = random_poisson_problem(42);
    const Problem b = random_poisson_problem(42);
    const auto ra = run_suite(a, "hamiltonian-poisson");
    const auto rb = run_suite(b, "hamiltonian-poisson");
    REQUIRE(ra.size() == rb.size());
    for (std::size_t i = 0; i < ra.size(); ++i) {
        CHECK(ra[i].max_residual == rb[i].max_residual);
    }
}

TEST_CASE("cli exit codes cover pass, failure, schema, and missing input") {
    const std::string e2 = write_fixture_file("e2");
    const std::string e2_broken = write_fixture_file("e2-broken-mu");
    const std::string e1 = write_fixture_file("e1");

    CHECK(run_cli("check " + e2 + " --suite hamiltonian-poisson") == 0);

    std::string output;
    CHECK(run_cli("check " + e2_broken + " --suite hamiltonian-poisson",
                  &output) == 1);
    CHECK(output.find("FAIL  hamiltonian-poisson/momentum-p2") !=
          std::string::npos);

    CHECK(run_cli("check " + e1 + " --suite hamiltonian-poisson", &output) ==
          3);
    CHECK(output.find("poisson and momentum")  != std::string::npos);

    const fs::path bad = fs::path("cli_test_tmp") / "bad.json";
    {
        std::ofstream out(bad);
        out << "{\"chart\": ";
    }
    CHECK(run_cli("check " + bad.string(), &output) == 2);
    CHECK(output.find("JSON parse error") != std::string::npos);

    CHECK(run_cli("check " + e2 + " --suite nope") == 2);
    CHECK(run_cli("check cli_test_tmp/absent.json") == 2);
    CHECK(run_cli("bogus-subcommand") == 2);
}

TEST_CASE("cli explain prints formulas and rejects unknown ids") {
    std::string output;
    CHECK(run_cli("explain momentum-p2", &output) == 0);
    CHECK(output.find("rho_a^i - pi^ij grad_j mu_a = 0") !=
          std::string::npos);

    CHECK(run_cli("explain p3", &output) == 0);
    CHECK(output.find("momentum-p3") != std::string::npos);

    CHECK(run_cli("explain", &output) == 0);
    CHECK(output.find("anchor-compat") != std::string::npos);
    CHECK(output.find("graded-poisson-map") != std::string::npos);

    CHECK(run_cli("explain not-a-check", &output) == 2);
    CHECK(output.find("unknown check id") != std::string::npos);
}

TEST_CASE("cli fixtures command writes the whole catalog") {
    const fs::path dir = fs::path("cli_test_tmp") / "fixture_out";
    fs::remove_all(dir);
    CHECK(run_cli("fixtures --out " + dir.string()) == 0);
    std::size_t written = 0;
    for (const auto& entry : fs::directory_iterator(dir)) {
        ++written;
        std::ifstream in(entry.path());
        std::ostringstream buffer;
        buffer << in.rdbuf();
        CHECK_NOTHROW(load_problem(buffer.str()));
    }
    CHECK(written == 12);

    CHECK(run_cli("fixtures e5 --out " + dir.string()) == 0);
    CHECK(run_cli("fixtures e99 --out " + dir.string()) == 2);
}

TEST_CASE("cli json reports are deterministic modulo timestamp") {
    const std::string e2 = write_fixture_file("e2");
    const fs::path r1 = fs::path("cli_test_tmp") / "r1.json";
    const fs::path r2 = fs::path("cli_test_tmp") / "r2.json";
    CHECK(run_cli("check " + e2 + " --suite all --json " + r1.string()) == 0);
    CHECK(run_cli("check " + e2 + " --suite all --json " + r2.string()) == 0);
    std::ifstream f1(r1), f2(r2);
    std::ostringstream b1, b2;
    b1 << f1.rdbuf();
    b2 << f2.rdbuf();
    CHECK(strip_timestamp(b1.str()) == strip_timestamp(b2.str()));
    CHECK(b1.str().find("\"schema\": \"report-v1\"") != std::string::npos);
}
