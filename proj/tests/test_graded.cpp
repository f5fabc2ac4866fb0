#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "momsec/algebroid.hpp"
#include "momsec/connection.hpp"
#include "momsec/courant.hpp"
#include "momsec/extended.hpp"
#include "momsec/geometry.hpp"
#include "momsec/graded.hpp"

using namespace momsec;

namespace {

const SamplePlan kPlan{.seed = 0, .count = 64, .margin = 0.05};
constexpr double kTol = 1e-9;

Chart square() { return Chart{{"x", "y"}, {{-1.0, 1.0}, {-1.0, 1.0}}}; }

Chart half_line() { return Chart{{"x"}, {{0.25, 2.0}}}; }

Chart box3() {
    return Chart{{"x", "y", "z"}, {{-1.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}}};
}

ExprMatrix plane_pi(double c) {
    return antisymmetric_from_upper(2, {{{0, 1}, Expr::constant(c)}});
}

// Poisson on the 3-box: {x, y} = 1, {y, z} = x.
ExprMatrix lifted_pi() {
    return antisymmetric_from_upper(
        3, {{{0, 1}, Expr::constant(1.0)}, {{1, 2}, Expr::variable("x")}});
}

// Not Poisson: {x, y} = 1, {y, z} = y.
ExprMatrix skew_pi() {
    return antisymmetric_from_upper(
        3, {{{0, 1}, Expr::constant(1.0)}, {{1, 2}, Expr::variable("y")}});
}

// Rank-2 bracket on the half line with [e_1, e_2] = e_1.
LieAlgebroid affine_line(double c12 = 1.0) {
    LieAlgebroid A{half_line(), 2, {{Expr::constant(1.0)}, {Expr::variable("x")}},
                   zero_cube(2, 2, 2)};
    ExprCube C = zero_cube(2, 2, 2);
    C[0][1][0] = Expr::constant(c12);
    A.C = antisymmetrize_structure(C);
    return A;
}

struct PoissonFixture {
    LieAlgebroid A;
    ExprMatrix pi;
    Section mu;
};

PoissonFixture rotation_poisson() {
    LieAlgebroid A{square(), 1, {{Expr::parse("y"), Expr::parse("-x")}},
                   zero_cube(1, 1, 1)};
    return {A, plane_pi(1.0), {Expr::parse("(x^2 + y^2)/2")}};
}

PoissonFixture parabola_poisson() {
    LieAlgebroid A{square(), 2, zero_matrix(2, 2), zero_cube(2, 2, 2)};
    A.rho[0][1] = Expr::constant(-1.0);
    A.rho[1][1] = Expr::parse("-2*x");
    return {A, plane_pi(1.0), {Expr::parse("x"), Expr::parse("x^2")}};
}

// Momenta (x, y) with anchors matching the first-order conditions but not
// the pairwise one.
PoissonFixture crossed_poisson() {
    LieAlgebroid A{square(), 2, zero_matrix(2, 2), zero_cube(2, 2, 2)};
    A.rho[0][1] = Expr::constant(-1.0);
    A.rho[1][0] = Expr::constant(1.0);
    return {A, plane_pi(1.0), {Expr::parse("x"), Expr::parse("y")}};
}

PoissonFixture sl2_poisson() {
    LieAlgebroid A{square(), 3, zero_matrix(3, 2), zero_cube(3, 3, 3)};
    A.rho[0][1] = Expr::parse("-x");
    A.rho[1][0] = Expr::parse("x");
    A.rho[1][1] = Expr::parse("-y");
    A.rho[2][0] = Expr::parse("y");
    ExprCube C = zero_cube(3, 3, 3);
    C[0][1][0] = Expr::constant(-2.0);
    C[0][2][1] = Expr::constant(-1.0);
    C[1][2][2] = Expr::constant(-2.0);
    A.C = antisymmetrize_structure(C);
    return {A, plane_pi(1.0),
            {Expr::parse("x^2/2"), Expr::parse("x*y"), Expr::parse("y^2/2")}};
}

double coefficient_at(const GradedPolynomial& p,
                      const std::vector<std::size_t>& key, const Env& env) {
    auto it = p.terms.find(key);
    return it == p.terms.end() ? 0.0 : it->second.eval(env);
}

// Largest coefficient magnitude over a few sample points.
double max_coefficient(const Chart& chart, const GradedPolynomial& p) {
    double worst = 0.0;
    for (int j = 0; j < 5; ++j) {
        const Env env = sample_env(chart, kPlan, j);
        for (const auto& [factors, coeff] : p.terms) {
            worst = std::max(worst, std::abs(coeff.eval(env)));
        }
    }
    return worst;
}

GradedPolynomial random_monomial(const GradedSpace& space, std::uint64_t seed,
                                 std::uint64_t& counter) {
    for (;;) {
        Expr coeff = random_polynomial(space.base, seed, counter);
        const std::size_t count = splitmix64(seed ^ (0xFACEu + ++counter)) % 4;
        std::vector<std::size_t> factors;
        for (std::size_t k = 0; k < count; ++k) {
            factors.push_back(splitmix64(seed ^ (0xBEEFu + ++counter)) %
                              space.fibers.size());
        }
        GradedPolynomial m = gp_monomial(space, coeff, factors);
        if (!m.empty()) return m;
    }
}

}  // namespace

TEST_CASE("graded monomials canonicalize with Koszul signs") {
    const GradedSpace space = m_side_space(square());
    const std::size_t eta1 = space.fiber_index("eta1");
    const std::size_t y1 = space.fiber_index("y1");
    const std::size_t xi1 = space.fiber_index("xi1");
    const Env env = sample_env(square(), kPlan, 0);

    GradedPolynomial swapped =
        gp_monomial(space, Expr::constant(1.0), {y1, eta1});
    REQUIRE(swapped.terms.size() == 1);
    CHECK(coefficient_at(swapped, {eta1, y1}, env) == doctest::Approx(-1.0));

    CHECK(gp_monomial(space, Expr::constant(1.0), {y1, y1}).empty());
    CHECK(gp_monomial(space, Expr::constant(1.0), {xi1, xi1}).terms.size() ==
          1);

    GradedPolynomial left = gp_multiply(space, gp_coordinate(space, eta1),
                                        gp_coordinate(space, y1));
    GradedPolynomial right = gp_multiply(space, gp_coordinate(space, y1),
                                         gp_coordinate(space, eta1));
    CHECK(coefficient_at(left, {eta1, y1}, env) == doctest::Approx(1.0));
    CHECK(coefficient_at(right, {eta1, y1}, env) == doctest::Approx(-1.0));

    CHECK(factor_parity(space, {eta1}) == 1);
    CHECK(factor_parity(space, {eta1, y1}) == 0);
    CHECK(factor_parity(space, {xi1}) == 0);
    CHECK(polynomial_parity(space, gp_coordinate(space, eta1)) == 1);
    CHECK_THROWS_AS(polynomial_parity(
                        space, gp_add(gp_coordinate(space, eta1),
                                      gp_coordinate(space, xi1))),
                    std::invalid_argument);
    CHECK_THROWS_AS(space.fiber_index("nope"), std::invalid_argument);
}

TEST_CASE("generator brackets follow the pairing table") {
    const Chart chart = square();
    const GradedSpace space = m_side_space(chart);
    const Env env = sample_env(chart, kPlan, 1);
    const auto c = [&](const std::string& name) {
        return gp_coordinate(space, space.fiber_index(name));
    };
    const auto scalar_value = [&](const GradedPolynomial& p) {
        return coefficient_at(p, {}, env);
    };

    CHECK(scalar_value(gp_bracket(space, c("eta1"), c("y1"))) ==
          doctest::Approx(1.0));
    CHECK(scalar_value(gp_bracket(space, c("y1"), c("eta1"))) ==
          doctest::Approx(1.0));
    CHECK(gp_bracket(space, c("eta1"), c("y2")).empty());
    CHECK(scalar_value(gp_bracket(space, c("s"), c("t"))) ==
          doctest::Approx(1.0));
    CHECK(scalar_value(gp_bracket(space, c("t"), c("s"))) ==
          doctest::Approx(1.0));
    CHECK(gp_bracket(space, c("eta1"), c("eta2")).empty());

    const GradedPolynomial f = gp_scalar(Expr::parse("x*y"));
    CHECK(scalar_value(gp_bracket(space, c("xi1"), f)) ==
          doctest::Approx(-env.at("y")));
    CHECK(scalar_value(gp_bracket(space, f, c("xi1"))) ==
          doctest::Approx(env.at("y")));
    CHECK(scalar_value(gp_bracket(space, c("xi2"), f)) ==
          doctest::Approx(-env.at("x")));

    const GradedSpace bundle = n_side_space(chart, 2);
    const auto b = [&](const std::string& name) {
        return gp_coordinate(bundle, bundle.fiber_index(name));
    };
    CHECK(coefficient_at(gp_bracket(bundle, b("q1"), b("p1")), {}, env) ==
          doctest::Approx(1.0));
    CHECK(coefficient_at(gp_bracket(bundle, b("p1"), b("q1")), {}, env) ==
          doctest::Approx(1.0));
    CHECK(gp_bracket(bundle, b("q1"), b("p2")).empty());
}

TEST_CASE("graded bracket satisfies antisymmetry and Leibniz") {
    const Chart chart = square();
    const GradedSpace space = m_side_space(chart);
    std::uint64_t counter = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const GradedPolynomial F = random_monomial(space, 11, counter);
        const GradedPolynomial G = random_monomial(space, 11, counter);
        const GradedPolynomial H = random_monomial(space, 11, counter);
        const int pf = polynomial_parity(space, F);
        const int pg = polynomial_parity(space, G);
        const double sign = (pf * pg) % 2 != 0 ? -1.0 : 1.0;

        // {F, G} + (-1)^{|F||G|} {G, F} = 0.
        GradedPolynomial anti = gp_bracket(space, F, G);
        GradedPolynomial rev = gp_bracket(space, G, F);
        for (auto& [key, coeff] : rev.terms) coeff = sign * coeff;
        CHECK(max_coefficient(chart, gp_add(anti, rev)) <= 1e-12);

        // {F, G H} - {F, G} H - (-1)^{|F||G|} G {F, H} = 0.
        GradedPolynomial lhs =
            gp_bracket(space, F, gp_multiply(space, G, H));
        lhs = gp_subtract(
            lhs, gp_multiply(space, gp_bracket(space, F, G), H));
        GradedPolynomial tail =
            gp_multiply(space, G, gp_bracket(space, F, H));
        for (auto& [key, coeff] : tail.terms) coeff = sign * coeff;
        CHECK(max_coefficient(chart, gp_subtract(lhs, tail)) <= 1e-12);
    }
}

TEST_CASE("graded Jacobi identity holds on random triples") {
    const Chart chart = square();
    const GradedSpace space = m_side_space(chart);
    std::uint64_t counter = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const GradedPolynomial F = random_monomial(space, 23, counter);
        const GradedPolynomial G = random_monomial(space, 23, counter);
        const GradedPolynomial H = random_monomial(space, 23, counter);
        const int pf = polynomial_parity(space, F);
        const int pg = polynomial_parity(space, G);
        const double sign = (pf * pg) % 2 != 0 ? -1.0 : 1.0;

        // {F, {G, H}} = {{F, G}, H} + (-1)^{|F||G|} {G, {F, H}}.
        GradedPolynomial lhs =
            gp_bracket(space, F, gp_bracket(space, G, H));
        lhs = gp_subtract(
            lhs, gp_bracket(space, gp_bracket(space, F, G), H));
        GradedPolynomial tail =
            gp_bracket(space, G, gp_bracket(space, F, H));
        for (auto& [key, coeff] : tail.terms) coeff = sign * coeff;
        CHECK(max_coefficient(chart, gp_subtract(lhs, tail)) <= 1e-9);
    }
}

TEST_CASE("generator polynomials freeze the expected coefficients") {
    const Chart chart = square();
    const GradedSpace space = m_side_space(chart);
    const Env env = sample_env(chart, kPlan, 2);
    const auto id = [&](const std::string& n) { return space.fiber_index(n); };

    SUBCASE("constant bivector") {
        const GradedPolynomial th = theta_m(space, plane_pi(2.0));
        REQUIRE(th.terms.size() == 3);
        CHECK(coefficient_at(th, {id("y2"), id("xi1")}, env) ==
              doctest::Approx(2.0));
        CHECK(coefficient_at(th, {id("y1"), id("xi2")}, env) ==
              doctest::Approx(-2.0));
        CHECK(coefficient_at(th, {id("y1"), id("y2"), id("s")}, env) ==
              doctest::Approx(-2.0));
    }

    SUBCASE("linear bivector") {
        const GradedPolynomial th = theta_m(
            space, antisymmetric_from_upper(2, {{{0, 1}, Expr::parse("x")}}));
        REQUIRE(th.terms.size() == 4);
        const double x = env.at("x");
        CHECK(coefficient_at(th, {id("y2"), id("xi1")}, env) ==
              doctest::Approx(x));
        CHECK(coefficient_at(th, {id("y1"), id("xi2")}, env) ==
              doctest::Approx(-x));
        CHECK(coefficient_at(th, {id("eta1"), id("y1"), id("y2")}, env) ==
              doctest::Approx(-1.0));
        CHECK(coefficient_at(th, {id("y1"), id("y2"), id("s")}, env) ==
              doctest::Approx(-x));
    }

    SUBCASE("anchored bracket generator") {
        const LieAlgebroid A = affine_line();
        const GradedSpace bundle = n_side_space(A.chart, A.rank);
        const GradedPolynomial th = theta_n(bundle, A);
        const Env line_env = sample_env(A.chart, kPlan, 2);
        const auto bid = [&](const std::string& n) {
            return bundle.fiber_index(n);
        };
        REQUIRE(th.terms.size() == 3);
        CHECK(coefficient_at(th, {bid("q1"), bid("xi1")}, line_env) ==
              doctest::Approx(1.0));
        CHECK(coefficient_at(th, {bid("q2"), bid("xi1")}, line_env) ==
              doctest::Approx(line_env.at("x")));
        CHECK(coefficient_at(th, {bid("q1"), bid("q2"), bid("p1")},
                             line_env) == doctest::Approx(1.0));
    }
}

TEST_CASE("derived brackets reproduce frozen values") {
    const Chart chart = square();
    const GradedSpace space = m_side_space(chart);
    const GradedPolynomial th = theta_m(space, plane_pi(2.0));
    const Env env = sample_env(chart, kPlan, 3);
    const auto c = [&](const std::string& name) {
        return gp_coordinate(space, space.fiber_index(name));
    };

    // {{eta^1, Theta_M}, eta^2} = pi^12 s.
    GradedPolynomial out = m_derived_bracket(space, th, c("eta1"), c("eta2"));
    REQUIRE(out.terms.size() == 1);
    CHECK(coefficient_at(out, {space.fiber_index("s")}, env) ==
          doctest::Approx(2.0));

    // {{eta^1, Theta_M}, g s} = pi^12 (dg/dy) s for g = y.
    GradedPolynomial gs = gp_monomial(space, Expr::variable("y"),
                                      {space.fiber_index("s")});
    out = m_derived_bracket(space, th, c("eta1"), gs);
    REQUIRE(out.terms.size() == 1);
    CHECK(coefficient_at(out, {space.fiber_index("s")}, env) ==
          doctest::Approx(2.0));

    // Line bundle with anchor x d_x: -{{p, Theta_N}, f p} = x f' p.
    const LieAlgebroid line{half_line(), 1, {{Expr::variable("x")}},
                            zero_cube(1, 1, 1)};
    const GradedSpace bundle = n_side_space(line.chart, line.rank);
    const GradedPolynomial th_n = theta_n(bundle, line);
    const std::size_t p1 = bundle.fiber_index("p1");
    const GradedPolynomial fp =
        gp_monomial(bundle, Expr::parse("x^2"), {p1});
    const GradedPolynomial derived = n_derived_bracket(
        bundle, th_n, gp_coordinate(bundle, p1), fp);
    REQUIRE(derived.terms.size() == 1);
    const Env line_env = sample_env(line.chart, kPlan, 3);
    CHECK(coefficient_at(derived, {p1}, line_env) ==
          doctest::Approx(2.0 * line_env.at("x") * line_env.at("x")));
}

TEST_CASE("master equations mirror the integrability verdicts") {
    SUBCASE("bundle side tracks the bracket axioms") {
        const LieAlgebroid good = affine_line();
        CheckResult res = master_equation_n(good, kPlan, kTol);
        CHECK(res.passed);
        for (const CheckResult& axiom : check_axioms(good, kPlan, kTol)) {
            CHECK(axiom.passed);
        }

        const LieAlgebroid bad = affine_line(2.0);
        res = master_equation_n(bad, kPlan, kTol);
        CHECK_FALSE(res.passed);
        CHECK(res.max_residual > 0.1);
        bool any_axiom_failed = false;
        for (const CheckResult& axiom : check_axioms(bad, kPlan, kTol)) {
            if (!axiom.passed) any_axiom_failed = true;
        }
        CHECK(any_axiom_failed);
    }

    SUBCASE("bivector side tracks the Poisson condition") {
        CHECK(master_equation_m(square(), plane_pi(1.0), kPlan, kTol).passed);
        CHECK(master_equation_m(
                  square(),
                  antisymmetric_from_upper(2, {{{0, 1}, Expr::parse("1 + x^2")}}),
                  kPlan, kTol)
                  .passed);
        CHECK(master_equation_m(box3(), lifted_pi(), kPlan, kTol).passed);
        CHECK(check_poisson(box3(), lifted_pi(), kPlan, kTol).passed);

        const CheckResult bad =
            master_equation_m(box3(), skew_pi(), kPlan, kTol);
        CHECK_FALSE(bad.passed);
        CHECK(bad.max_residual > 0.1);
        CHECK_FALSE(check_poisson(box3(), skew_pi(), kPlan, kTol).passed);
    }
}

TEST_CASE("homological fields square to zero exactly when integrable") {
    CHECK(homological_a1_check(affine_line(), kPlan, kTol).passed);
    const CheckResult bad_a1 =
        homological_a1_check(affine_line(2.0), kPlan, kTol);
    CHECK_FALSE(bad_a1.passed);
    CHECK(bad_a1.max_residual > 0.1);

    CHECK(homological_tstar_r_check(box3(), lifted_pi(), kPlan, kTol).passed);
    CHECK(homological_tstar_r_check(square(), plane_pi(1.0), kPlan, kTol)
              .passed);
    const CheckResult bad_dual =
        homological_tstar_r_check(box3(), skew_pi(), kPlan, kTol);
    CHECK_FALSE(bad_dual.passed);
    CHECK(bad_dual.max_residual > 0.1);
}

TEST_CASE("derived brackets reproduce the section-level brackets") {
    // Bivector side: holds as an algebraic identity, Poisson or not.
    CHECK(derived_reproduction_m(square(), plane_pi(1.0), kPlan, kTol).passed);
    CHECK(derived_reproduction_m(box3(), lifted_pi(), kPlan, kTol).passed);
    CHECK(derived_reproduction_m(box3(), skew_pi(), kPlan, kTol).passed);

    // Bundle side: holds for arbitrary anchored data.
    CHECK(derived_reproduction_n(affine_line(), kPlan, kTol).passed);
    CHECK(derived_reproduction_n(affine_line(2.0), kPlan, kTol).passed);
    CHECK(derived_reproduction_n(sl2_poisson().A, kPlan, kTol).passed);
}

TEST_CASE("momentum substitution freezes the embedded image") {
    const PoissonFixture fix = rotation_poisson();
    const Connection conn = trivial_connection(fix.A.rank, fix.A.dim());
    const GradedSpace n_space = n_side_space(fix.A.chart, fix.A.rank);
    const GradedSpace m_space = m_side_space(fix.A.chart);
    const Env env = sample_env(fix.A.chart, kPlan, 4);

    const GradedPolynomial image = momentum_substitution(
        n_space, m_space, fix.A, conn, fix.mu,
        gp_coordinate(n_space, n_space.fiber_index("p1")));
    REQUIRE(image.terms.size() == 3);
    const double x = env.at("x");
    const double y = env.at("y");
    CHECK(coefficient_at(image, {m_space.fiber_index("eta1")}, env) ==
          doctest::Approx(-x));
    CHECK(coefficient_at(image, {m_space.fiber_index("eta2")}, env) ==
          doctest::Approx(-y));
    CHECK(coefficient_at(image, {m_space.fiber_index("s")}, env) ==
          doctest::Approx((x * x + y * y) / 2.0));

    CHECK_THROWS_AS(
        momentum_substitution(n_space, m_space, fix.A, conn, fix.mu,
                              gp_coordinate(n_space,
                                            n_space.fiber_index("q1"))),
        std::invalid_argument);
}

TEST_CASE("graded Poisson map check isolates broken momenta") {
    const Connection conn1 = trivial_connection(1, 2);
    const Connection conn2 = trivial_connection(2, 2);
    const Connection conn3 = trivial_connection(3, 2);

    const PoissonFixture good = rotation_poisson();
    CheckResult res = graded_poisson_map_check(good.A, conn1, good.pi,
                                               good.mu, kPlan, kTol);
    CHECK(res.passed);
    CHECK(res.max_residual <= 1e-9);

    PoissonFixture shifted = rotation_poisson();
    shifted.mu[0] = shifted.mu[0] + Expr::variable("x");
    res = graded_poisson_map_check(shifted.A, conn1, shifted.pi, shifted.mu,
                                   kPlan, kTol);
    CHECK_FALSE(res.passed);
    CHECK(res.max_residual > 1e-3);

    const PoissonFixture pair = parabola_poisson();
    CHECK(graded_poisson_map_check(pair.A, conn2, pair.pi, pair.mu, kPlan,
                                   kTol)
              .passed);

    const PoissonFixture crossed = crossed_poisson();
    res = graded_poisson_map_check(crossed.A, conn2, crossed.pi, crossed.mu,
                                   kPlan, kTol);
    CHECK_FALSE(res.passed);
    CHECK(res.max_residual > 1e-3);

    const PoissonFixture three = sl2_poisson();
    CHECK(graded_poisson_map_check(three.A, conn3, three.pi, three.mu, kPlan,
                                   kTol)
              .passed);
}

TEST_CASE("graded fiber names must not collide with base coordinates") {
    CHECK_THROWS_AS(m_side_space(Chart{{"s", "u"}, {{0.0, 1.0}, {0.0, 1.0}}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(n_side_space(Chart{{"q1"}, {{0.0, 1.0}}}, 1),
                    std::invalid_argument);
}
