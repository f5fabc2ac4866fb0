#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "momsec/expr.hpp"

namespace momsec {

/// A coordinate chart: named coordinates with a rectangular sampling box.
struct Chart {
    std::vector<std::string> names;
    std::vector<std::pair<double, double>> box;  // [lo, hi] per coordinate

    std::size_t dim() const { return names.size(); }

    /// Returns a chart extended by extra fiber coordinates (used to sample
    /// total spaces such as a dual bundle over this chart).
    Chart extended(const std::vector<std::string>& extra_names,
                   const std::vector<std::pair<double, double>>& extra_box) const;
};

/// Deterministic counter-based sampling plan. Point j, coordinate i of an
/// n-dimensional chart consumes the stream value with counter
/// (j + offset)*n + i; splitting a plan therefore reproduces the exact same
/// points as the corresponding slice of the parent plan.
struct SamplePlan {
    std::uint64_t seed = 0;
    int count = 64;
    double margin = 0.05;
    std::uint64_t offset = 0;

    /// Splits into the first `at` points and the remaining ones.
    std::pair<SamplePlan, SamplePlan> split(int at) const;
};

/// A smooth map between charts, given by one target-coordinate expression in
/// the source coordinates per target coordinate.
struct SmoothMap {
    Chart source;
    Chart target;
    std::vector<Expr> components;  // indexed like target.names

    /// Jacobian matrix J[k][i] = d components[k] / d source.names[i].
    std::vector<std::vector<Expr>> jacobian() const;

    /// Evaluates the map at a source binding, returning target bindings.
    Env image_env(const Env& source_env) const;
};

/// SplitMix64 output function (counter-based use).
std::uint64_t splitmix64(std::uint64_t x);

/// Maps a 64-bit word to [0, 1) with 53-bit resolution.
double to_unit_interval(std::uint64_t x);

/// Coordinates of sample point `j` of the plan: uniform in the box shrunk
/// towards its center by the plan margin on each side.
std::vector<double> sample_point(const Chart& chart, const SamplePlan& plan,
                                 int j);

/// Variable bindings for sample point `j`.
Env sample_env(const Chart& chart, const SamplePlan& plan, int j);

}  // namespace momsec
