#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "momsec/fixtures.hpp"
#include "momsec/model.hpp"
#include "momsec/report.hpp"
#include "momsec/suites.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitMissingInput = 3;

struct CheckArgs {
    std::string file;
    std::string suite = "all";
    double tol = 0.0;
    int points = 0;
    std::uint64_t seed = 0;
    std::string json_path;
};

int run_check(const CheckArgs& args, bool tol_set, bool points_set,
              bool seed_set) {
    std::string text;
    momsec::Problem problem;
    try {
        text = momsec::read_text_file(args.file);
        problem = momsec::load_problem(text);
    } catch (const momsec::SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
    // Options in the file are defaults; explicit flags win.
    if (tol_set) problem.options.tol = args.tol;
    if (points_set) problem.options.points = args.points;
    if (seed_set) problem.options.seed = args.seed;

    momsec::RunReport report;
    try {
        report = momsec::summarize(
            args.suite, momsec::run_suite(problem, args.suite));
    } catch (const momsec::MissingInputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMissingInput;
    } catch (const momsec::SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }

    std::cout << momsec::render_text(report);
    if (!args.json_path.empty()) {
        const std::string rendered =
            momsec::render_json(report, problem.options, text);
        std::ofstream out(args.json_path, std::ios::binary);
        out << rendered;
        if (!out) {
            std::cerr << "error: cannot write report to " << args.json_path
                      << "\n";
            return kExitBadInput;
        }
    }
    return report.exit_code == 0 ? kExitPass : kExitCheckFailed;
}

int run_fixtures(const std::string& name, const std::string& out_dir) {
    std::vector<const momsec::Fixture*> selected;
    if (name.empty()) {
        for (const momsec::Fixture& fixture : momsec::fixture_catalog()) {
            selected.push_back(&fixture);
        }
    } else {
        const momsec::Fixture* fixture = momsec::find_fixture(name);
        if (fixture == nullptr) {
            std::cerr << "error: unknown fixture \"" << name
                      << "\"; known fixtures:\n";
            for (const momsec::Fixture& f : momsec::fixture_catalog()) {
                std::cerr << "  " << f.name << "\n";
            }
            return kExitBadInput;
        }
        selected.push_back(fixture);
    }
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        std::cerr << "error: cannot create directory " << out_dir << ": "
                  << ec.message() << "\n";
        return kExitBadInput;
    }
    for (const momsec::Fixture* fixture : selected) {
        const std::filesystem::path path =
            std::filesystem::path(out_dir) / (fixture->name + ".json");
        std::ofstream out(path, std::ios::binary);
        out << fixture->json;
        if (!out) {
            std::cerr << "error: cannot write " << path.string() << "\n";
            return kExitBadInput;
        }
        std::cout << path.string() << "  (" << fixture->description << ")\n";
    }
    return kExitPass;
}

int run_explain(const std::string& id) {
    if (id.empty()) {
        for (const momsec::CheckInfo& info : momsec::check_registry()) {
            std::cout << info.id << "  [" << info.suite << "]"
                      << (info.advisory ? "  (advisory)" : "") << "\n    "
                      << info.description << "\n";
        }
        return kExitPass;
    }
    const momsec::CheckInfo* info = momsec::find_check(id);
    if (info == nullptr) {
        std::cerr << "error: unknown check id \"" << id
                  << "\"; run `momsec explain` for the full list\n";
        return kExitBadInput;
    }
    std::cout << "id:       " << info->id << "\n"
              << "suite:    " << info->suite
              << (info->advisory ? "  (advisory)" : "") << "\n"
              << "residual: " << info->formula << "\n"
              << "meaning:  " << info->description << "\n";
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "momsec: residual checks for Lie algebroid models with momentum "
        "sections"};
    app.require_subcommand(1);

    CheckArgs check_args;
    CLI::App* check =
        app.add_subcommand("check", "run a check suite on a problem file");
    check->add_option("file", check_args.file, "problem document (JSON)")
        ->required();
    CLI::Option* suite_opt =
        check->add_option("--suite", check_args.suite,
                          "suite to run (default: all)");
    CLI::Option* tol_opt = check->add_option(
        "--tol", check_args.tol, "residual tolerance (default 1e-9)");
    CLI::Option* points_opt = check->add_option(
        "--points", check_args.points, "sample points per check (default 64)");
    CLI::Option* seed_opt =
        check->add_option("--seed", check_args.seed, "sampling seed");
    check->add_option("--json", check_args.json_path,
                      "also write a JSON report to this path");

    std::string fixture_name;
    std::string out_dir = ".";
    CLI::App* fixtures =
        app.add_subcommand("fixtures", "write built-in example problems");
    fixtures->add_option("name", fixture_name,
                         "fixture to write (default: all of them)");
    fixtures->add_option("--out", out_dir, "output directory (default: .)");

    std::string explain_id;
    CLI::App* explain = app.add_subcommand(
        "explain", "describe a check id (no id: list all checks)");
    explain->add_option("id", explain_id, "check id or alias (s1..s3, p1..p3)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitBadInput;
    }

    try {
        if (check->parsed()) {
            if (!momsec::is_suite(check_args.suite)) {
                std::cerr << "error: unknown suite \"" << check_args.suite
                          << "\"; known suites:";
                for (const std::string& name : momsec::suite_names()) {
                    std::cerr << " " << name;
                }
                std::cerr << "\n";
                return kExitBadInput;
            }
            if (suite_opt->count() == 0) check_args.suite = "all";
            return run_check(check_args, tol_opt->count() > 0,
                             points_opt->count() > 0, seed_opt->count() > 0);
        }
        if (fixtures->parsed()) return run_fixtures(fixture_name, out_dir);
        if (explain->parsed()) return run_explain(explain_id);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
    return kExitBadInput;
}
