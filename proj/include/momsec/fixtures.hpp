#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "momsec/model.hpp"

namespace momsec {

/// A named, ready-to-run problem document bundled with the tool.
struct Fixture {
    std::string name;
    std::string description;
    std::string json;
};

/// The built-in examples: six consistent model problems (e1..e6) plus one
/// mutated copy of each that fails exactly one designated check.
const std::vector<Fixture>& fixture_catalog();

/// Looks a fixture up by name; returns nullptr when unknown.
const Fixture* find_fixture(const std::string& name);

/// A deterministic random problem with a constant invertible bivector, a
/// momentum section of polynomial degree at most two, anchor defined as the
/// sharp of the momentum gradient, and the trivial connection. Draws a base
/// family (abelian, Heisenberg, sl2, or affine), a dimension (2 or 4), a
/// scaling, and a random unimodular linear change of coordinates from the
/// index. Every output satisfies the axioms and all Poisson momentum
/// conditions by construction.
Problem random_poisson_problem(std::uint64_t index);

}  // namespace momsec
