#include "momsec/report.hpp"

#include <cstdint>
#include <cstdio>
#include <ctime>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace momsec {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string iso_utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm parts{};
    gmtime_r(&now, &parts);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &parts);
    return buffer;
}

std::string residual_text(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.3e", value);
    return buffer;
}

}  // namespace

const char* const kToolVersion = "1.0.0";

RunReport summarize(const std::string& suite,
                    std::vector<CheckResult> checks) {
    RunReport report;
    report.suite = suite;
    report.checks = std::move(checks);
    for (const CheckResult& check : report.checks) {
        auto [it, inserted] = report.suite_verdicts.emplace(check.suite, true);
        if (!check.advisory && !check.passed) it->second = false;
    }
    for (const auto& [name, passed] : report.suite_verdicts) {
        if (!passed) report.overall_pass = false;
    }
    report.exit_code = report.overall_pass ? 0 : 1;
    return report;
}

std::string render_text(const RunReport& report) {
    std::ostringstream out;
    for (const CheckResult& check : report.checks) {
        const char* status = check.advisory ? (check.passed ? "pass" : "warn")
                                            : (check.passed ? "PASS" : "FAIL");
        out << status << "  " << check.suite << "/" << check.id
            << "  max|r| = " << residual_text(check.max_residual)
            << "  (tol " << residual_text(check.tolerance) << ", "
            << check.points << " pts)";
        if (!check.note.empty()) out << "  - " << check.note;
        out << "\n";
    }
    for (const auto& [name, passed] : report.suite_verdicts) {
        out << "suite " << name << ": " << (passed ? "PASS" : "FAIL") << "\n";
    }
    out << "overall: " << (report.overall_pass ? "PASS" : "FAIL") << "\n";
    return out.str();
}

std::string render_json(const RunReport& report, const Options& options,
                        const std::string& input_text) {
    ordered_json doc;
    doc["schema"] = "report-v1";
    doc["version"] = kToolVersion;
    doc["input_digest"] = fnv1a_hex(input_text);
    doc["timestamp"] = iso_utc_now();
    doc["suite"] = report.suite;
    doc["options"] = {{"tol", options.tol},
                      {"points", options.points},
                      {"seed", options.seed},
                      {"pbox", {options.pbox[0], options.pbox[1]}}};
    doc["prng"] = "splitmix64";
    ordered_json checks = ordered_json::array();
    for (const CheckResult& check : report.checks) {
        ordered_json entry;
        entry["id"] = check.id;
        entry["suite"] = check.suite;
        entry["formula"] = check.formula;
        entry["passed"] = check.passed;
        entry["advisory"] = check.advisory;
        entry["max_residual"] = check.max_residual;
        entry["tolerance"] = check.tolerance;
        entry["points"] = check.points;
        entry["worst_point"] = check.worst_point;
        entry["worst_field"] = check.worst_field;
        entry["note"] = check.note;
        checks.push_back(std::move(entry));
    }
    doc["checks"] = std::move(checks);
    ordered_json verdicts;
    for (const auto& [name, passed] : report.suite_verdicts) {
        verdicts[name] = passed;
    }
    doc["suites"] = std::move(verdicts);
    doc["overall_pass"] = report.overall_pass;
    doc["exit_code"] = report.exit_code;
    return doc.dump(2) + "\n";
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (const unsigned char byte : text) {
        hash ^= byte;
        hash *= 0x100000001b3ULL;
    }
    char buffer[17];
    std::snprintf(buffer, sizeof(buffer), "%016llx",
                  static_cast<unsigned long long>(hash));
    return buffer;
}

}  // namespace momsec
