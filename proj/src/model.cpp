#include "momsec/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "json.hpp"
#include "momsec/courant.hpp"

namespace momsec {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& message) {
    throw SchemaError(message);
}

void check_keys(const ordered_json& obj,
                std::initializer_list<const char*> allowed,
                const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
                return key == a;
            }) == allowed.end()) {
            fail(where + ": unknown key \"" + key + "\"");
        }
    }
}

const ordered_json& get_required(const ordered_json& obj, const char* key,
                                 const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(where + ": missing required key \"" + key + "\"");
    return *it;
}

const ordered_json* get_optional(const ordered_json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

const ordered_json& as_object(const ordered_json& v, const std::string& where) {
    if (!v.is_object()) fail(where + ": expected an object");
    return v;
}

const ordered_json& as_array(const ordered_json& v, const std::string& where) {
    if (!v.is_array()) fail(where + ": expected an array");
    return v;
}

std::string as_string(const ordered_json& v, const std::string& where) {
    if (!v.is_string()) fail(where + ": expected a string");
    return v.get<std::string>();
}

double as_number(const ordered_json& v, const std::string& where) {
    if (!v.is_number()) fail(where + ": expected a number");
    return v.get<double>();
}

std::size_t as_count(const ordered_json& v, const std::string& where) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
        fail(where + ": expected a positive integer");
    }
    return static_cast<std::size_t>(v.get<std::int64_t>());
}

Expr parse_entry(const ordered_json& v, const Chart& chart,
                 const std::string& where) {
    const std::string text = as_string(v, where);
    const std::set<std::string> allowed(chart.names.begin(),
                                        chart.names.end());
    try {
        return Expr::parse_with_variables(text, allowed);
    } catch (const ParseError& e) {
        fail(where + ": parse error at offset " + std::to_string(e.offset()) +
             ": " + e.what());
    }
}

std::vector<Expr> parse_list(const ordered_json& v, const Chart& chart,
                             std::size_t length, const std::string& where) {
    const ordered_json& arr = as_array(v, where);
    if (arr.size() != length) {
        fail(where + ": expected " + std::to_string(length) + " entries, got " +
             std::to_string(arr.size()));
    }
    std::vector<Expr> out;
    out.reserve(length);
    for (std::size_t i = 0; i < length; ++i) {
        out.push_back(parse_entry(arr[i], chart,
                                  where + "[" + std::to_string(i) + "]"));
    }
    return out;
}

ExprMatrix parse_matrix(const ordered_json& v, const Chart& chart,
                        std::size_t rows, std::size_t cols,
                        const std::string& where) {
    const ordered_json& arr = as_array(v, where);
    if (arr.size() != rows) {
        fail(where + ": expected " + std::to_string(rows) + " rows, got " +
             std::to_string(arr.size()));
    }
    ExprMatrix out;
    out.reserve(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        out.push_back(parse_list(arr[i], chart, cols,
                                 where + "[" + std::to_string(i) + "]"));
    }
    return out;
}

ExprCube parse_cube(const ordered_json& v, const Chart& chart,
                    std::size_t layers, std::size_t rows, std::size_t cols,
                    const std::string& where) {
    const ordered_json& arr = as_array(v, where);
    if (arr.size() != layers) {
        fail(where + ": expected " + std::to_string(layers) + " layers, got " +
             std::to_string(arr.size()));
    }
    ExprCube out;
    out.reserve(layers);
    for (std::size_t i = 0; i < layers; ++i) {
        out.push_back(parse_matrix(arr[i], chart, rows, cols,
                                   where + "[" + std::to_string(i) + "]"));
    }
    return out;
}

/// Checks that a redundant antisymmetric entry matches its canonical value
/// at a few fixed probe points.
void probe_equal(const Chart& chart, const Expr& given, const Expr& canonical,
                 const std::string& where) {
    const SamplePlan probe{.seed = 0xC0FFEE, .count = 8, .margin = 0.05};
    for (int j = 0; j < probe.count; ++j) {
        const Env env = sample_env(chart, probe, j);
        double a = 0.0;
        double b = 0.0;
        try {
            a = given.eval(env);
            b = canonical.eval(env);
        } catch (const EvalError& e) {
            fail(where + ": evaluation failed while probing antisymmetry: " +
                 e.what());
        }
        if (std::abs(a - b) >
            1e-9 * std::max({1.0, std::abs(a), std::abs(b)})) {
            fail(where +
                 ": entry is inconsistent with antisymmetry (entries above "
                 "the diagonal are authoritative; redundant entries must be "
                 "\"0\" or match)");
        }
    }
}

/// Canonicalizes an antisymmetric matrix from its strict upper triangle and
/// validates the remaining entries.
ExprMatrix antisymmetric_input(const ordered_json& v, const Chart& chart,
                               const std::string& where) {
    const std::size_t n = chart.dim();
    const ExprMatrix raw = parse_matrix(v, chart, n, n, where);
    std::vector<std::pair<std::pair<std::size_t, std::size_t>, Expr>> upper;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            upper.push_back({{i, j}, raw[i][j]});
        }
    }
    const ExprMatrix canonical = antisymmetric_from_upper(n, upper);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            if (raw[i][j].is_zero()) continue;
            probe_equal(chart, raw[i][j], canonical[i][j],
                        where + "[" + std::to_string(i) + "][" +
                            std::to_string(j) + "]");
        }
    }
    return canonical;
}

ExprCube structure_input(const ordered_json& v, const Chart& chart,
                         std::size_t rank, const std::string& where) {
    const ExprCube raw = parse_cube(v, chart, rank, rank, rank, where);
    const ExprCube canonical = antisymmetrize_structure(raw);
    for (std::size_t a = 0; a < rank; ++a) {
        for (std::size_t b = 0; b <= a; ++b) {
            for (std::size_t c = 0; c < rank; ++c) {
                if (raw[a][b][c].is_zero()) continue;
                probe_equal(chart, raw[a][b][c], canonical[a][b][c],
                            where + "[" + std::to_string(a) + "][" +
                                std::to_string(b) + "][" + std::to_string(c) +
                                "]");
            }
        }
    }
    return canonical;
}

ExprCube three_form_input(const ordered_json& v, const Chart& chart,
                          const std::string& where) {
    const std::size_t n = chart.dim();
    const ExprCube raw = parse_cube(v, chart, n, n, n, where);
    std::vector<std::pair<std::array<std::size_t, 3>, Expr>> increasing;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            for (std::size_t k = j + 1; k < n; ++k) {
                increasing.push_back({{i, j, k}, raw[i][j][k]});
            }
        }
    }
    const ExprCube canonical = three_form_from_increasing(n, increasing);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                if (i < j && j < k) continue;
                if (raw[i][j][k].is_zero()) continue;
                probe_equal(chart, raw[i][j][k], canonical[i][j][k],
                            where + "[" + std::to_string(i) + "][" +
                                std::to_string(j) + "][" + std::to_string(k) +
                                "]");
            }
        }
    }
    return canonical;
}

Chart parse_chart(const ordered_json& v) {
    const ordered_json& obj = as_object(v, "chart");
    check_keys(obj, {"names", "box"}, "chart");
    const ordered_json& names = as_array(get_required(obj, "names", "chart"),
                                         "chart.names");
    if (names.empty()) fail("chart.names: must not be empty");
    Chart chart;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const std::string name =
            as_string(names[i], "chart.names[" + std::to_string(i) + "]");
        if (name.empty() || !seen.insert(name).second) {
            fail("chart.names: coordinate names must be distinct and "
                 "non-empty");
        }
        chart.names.push_back(name);
    }
    const ordered_json& box =
        as_array(get_required(obj, "box", "chart"), "chart.box");
    if (box.size() != chart.names.size()) {
        fail("chart.box: expected one interval per coordinate");
    }
    for (std::size_t i = 0; i < box.size(); ++i) {
        const std::string where = "chart.box[" + std::to_string(i) + "]";
        const ordered_json& interval = as_array(box[i], where);
        if (interval.size() != 2) fail(where + ": expected [lo, hi]");
        const double lo = as_number(interval[0], where);
        const double hi = as_number(interval[1], where);
        if (!(lo < hi)) fail(where + ": interval must satisfy lo < hi");
        chart.box.push_back({lo, hi});
    }
    return chart;
}

Options parse_options(const ordered_json* v) {
    Options options;
    if (v == nullptr) return options;
    const ordered_json& obj = as_object(*v, "options");
    check_keys(obj, {"tol", "points", "seed", "pbox"}, "options");
    if (const ordered_json* tol = get_optional(obj, "tol")) {
        options.tol = as_number(*tol, "options.tol");
        if (!(options.tol > 0.0)) fail("options.tol: must be positive");
    }
    if (const ordered_json* points = get_optional(obj, "points")) {
        options.points =
            static_cast<int>(as_count(*points, "options.points"));
    }
    if (const ordered_json* seed = get_optional(obj, "seed")) {
        if (!seed->is_number_integer() || seed->get<std::int64_t>() < 0) {
            fail("options.seed: expected a non-negative integer");
        }
        options.seed = seed->get<std::uint64_t>();
    }
    if (const ordered_json* pbox = get_optional(obj, "pbox")) {
        const ordered_json& interval = as_array(*pbox, "options.pbox");
        if (interval.size() != 2) fail("options.pbox: expected [lo, hi]");
        options.pbox[0] = as_number(interval[0], "options.pbox");
        options.pbox[1] = as_number(interval[1], "options.pbox");
        if (!(options.pbox[0] < options.pbox[1])) {
            fail("options.pbox: interval must satisfy lo < hi");
        }
    }
    return options;
}

}  // namespace

Problem load_problem(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        fail(std::string("JSON parse error at byte ") +
             std::to_string(e.byte) + ": " + e.what());
    }
    const ordered_json& root = as_object(doc, "document");
    check_keys(root,
               {"chart", "algebroid", "connection", "presymplectic",
                "poisson", "momentum", "hflux", "dirac", "options"},
               "document");

    Problem problem;
    problem.chart = parse_chart(get_required(root, "chart", "document"));
    const Chart& chart = problem.chart;
    const std::size_t n = chart.dim();

    const ordered_json& alg = as_object(
        get_required(root, "algebroid", "document"), "algebroid");
    check_keys(alg, {"rank", "rho", "C"}, "algebroid");
    const std::size_t rank =
        as_count(get_required(alg, "rank", "algebroid"), "algebroid.rank");
    problem.algebroid.chart = chart;
    problem.algebroid.rank = rank;
    problem.algebroid.rho = parse_matrix(get_required(alg, "rho", "algebroid"),
                                         chart, rank, n, "algebroid.rho");
    problem.algebroid.C = structure_input(get_required(alg, "C", "algebroid"),
                                          chart, rank, "algebroid.C");

    if (const ordered_json* conn = get_optional(root, "connection")) {
        const ordered_json& obj = as_object(*conn, "connection");
        check_keys(obj, {"omega"}, "connection");
        problem.connection.omega =
            parse_cube(get_required(obj, "omega", "connection"), chart, rank,
                       rank, n, "connection.omega");
    } else {
        problem.connection = trivial_connection(rank, n);
    }

    if (const ordered_json* omega = get_optional(root, "presymplectic")) {
        const ordered_json& obj = as_object(*omega, "presymplectic");
        check_keys(obj, {"omega"}, "presymplectic");
        problem.presymplectic =
            antisymmetric_input(get_required(obj, "omega", "presymplectic"),
                                chart, "presymplectic.omega");
    }

    if (const ordered_json* pi = get_optional(root, "poisson")) {
        const ordered_json& obj = as_object(*pi, "poisson");
        check_keys(obj, {"pi"}, "poisson");
        problem.poisson = antisymmetric_input(
            get_required(obj, "pi", "poisson"), chart, "poisson.pi");
    }

    if (const ordered_json* mom = get_optional(root, "momentum")) {
        const ordered_json& obj = as_object(*mom, "momentum");
        check_keys(obj, {"mu"}, "momentum");
        problem.momentum = parse_list(get_required(obj, "mu", "momentum"),
                                      chart, rank, "momentum.mu");
    }

    if (const ordered_json* hflux = get_optional(root, "hflux")) {
        const ordered_json& obj = as_object(*hflux, "hflux");
        check_keys(obj, {"H"}, "hflux");
        problem.hflux = three_form_input(get_required(obj, "H", "hflux"),
                                         chart, "hflux.H");
    }

    if (const ordered_json* dirac = get_optional(root, "dirac")) {
        const ordered_json& obj = as_object(*dirac, "dirac");
        check_keys(obj, {"kind"}, "dirac");
        const std::string kind =
            as_string(get_required(obj, "kind", "dirac"), "dirac.kind");
        if (kind != "graph-omega" && kind != "graph-pi") {
            fail("dirac.kind: expected \"graph-omega\" or \"graph-pi\"");
        }
        problem.dirac_kind = kind;
    }

    problem.options = parse_options(get_optional(root, "options"));
    return problem;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw SchemaError("failed to read file: " + path);
    return buffer.str();
}

Problem load_problem_file(const std::string& path) {
    return load_problem(read_text_file(path));
}

}  // namespace momsec
