#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "momsec/algebroid.hpp"
#include "momsec/chart.hpp"
#include "momsec/connection.hpp"
#include "momsec/tensors.hpp"

namespace momsec {

/// Raised when a problem document is malformed: invalid JSON, missing or
/// mistyped fields, inconsistent dimensions, unparsable expressions, or
/// antisymmetry violations.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a suite needs an input block the document does not provide.
class MissingInputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Run options. Values given in the file are defaults; explicit CLI flags
/// override them.
struct Options {
    double tol = 1e-9;
    int points = 64;
    std::uint64_t seed = 0;
    /// Interval used for every auxiliary fiber coordinate (dual momenta,
    /// tangent lifts) when a check samples an enlarged space.
    std::array<double, 2> pbox{-1.0, 1.0};
};

/// A fully parsed and validated problem document.
struct Problem {
    Chart chart;
    LieAlgebroid algebroid;
    Connection connection;                    // trivial when omitted
    std::optional<ExprMatrix> presymplectic;  // omega, antisymmetric
    std::optional<ExprMatrix> poisson;        // pi, antisymmetric
    std::optional<Section> momentum;          // mu, one entry per frame section
    std::optional<ExprCube> hflux;            // H, totally antisymmetric
    std::optional<std::string> dirac_kind;    // "graph-omega" | "graph-pi"
    Options options;

    SamplePlan plan() const {
        return SamplePlan{.seed = options.seed,
                          .count = options.points,
                          .margin = 0.05};
    }
};

/// Parses a problem document from JSON text. Antisymmetric inputs are
/// canonicalized from their strictly increasing index entries; other entries
/// must be written as "0" or agree with the canonicalization at probe
/// points. Throws SchemaError on any violation.
Problem load_problem(const std::string& text);

/// Reads and parses a problem file; I/O failures also raise SchemaError.
Problem load_problem_file(const std::string& path);

/// Reads a whole file into a string; throws SchemaError on failure.
std::string read_text_file(const std::string& path);

}  // namespace momsec
