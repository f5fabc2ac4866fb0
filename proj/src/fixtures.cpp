#include "momsec/fixtures.hpp"

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "momsec/expr.hpp"
#include "momsec/geometry.hpp"
#include "momsec/tensors.hpp"

namespace momsec {

namespace {

const char* kE1 = R"({
  "chart": {"names": ["x", "y"], "box": [[-1, 1], [-1, 1]]},
  "algebroid": {"rank": 1, "rho": [["-y", "x"]], "C": [[["0"]]]},
  "presymplectic": {"omega": [["0", "1"], ["0", "0"]]},
  "momentum": {"mu": ["(x^2 + y^2) / 2"]},
  "dirac": {"kind": "graph-omega"}
}
)";

const char* kE1Broken = R"({
  "chart": {"names": ["x", "y"], "box": [[-1, 1], [-1, 1]]},
  "algebroid": {"rank": 1, "rho": [["-y", "x"]], "C": [[["0"]]]},
  "presymplectic": {"omega": [["0", "1"], ["0", "0"]]},
  "momentum": {"mu": ["x^2 + y^2"]},
  "dirac": {"kind": "graph-omega"}
}
)";

const char* kE2 = R"({
  "chart": {"names": ["x", "y"], "box": [[-1, 1], [-1, 1]]},
  "algebroid": {"rank": 1, "rho": [["y", "-x"]], "C": [[["0"]]]},
  "poisson": {"pi": [["0", "1"], ["0", "0"]]},
  "momentum": {"mu": ["(x^2 + y^2) / 2"]},
  "dirac": {"kind": "graph-pi"}
}
)";

const char* kE2Broken = R"({
  "chart": {"names": ["x", "y"], "box": [[-1, 1], [-1, 1]]},
  "algebroid": {"rank": 1, "rho": [["y", "-x"]], "C": [[["0"]]]},
  "poisson": {"pi": [["0", "1"], ["0", "0"]]},
  "momentum": {"mu": ["(x^2 + y^2) / 2 + x"]},
  "dirac": {"kind": "graph-pi"}
}
)";

const char* kE3 = R"({
  "chart": {"names": ["x"], "box": [[0.25, 2]]},
  "algebroid": {"rank": 2, "rho": [["1"], ["x"]],
                "C": [[["0", "0"], ["1", "0"]],
                      [["0", "0"], ["0", "0"]]]}
}
)";

const char* kE3Broken = R"({
  "chart": {"names": ["x"], "box": [[0.25, 2]]},
  "algebroid": {"rank": 2, "rho": [["1"], ["x"]],
                "C": [[["0", "0"], ["2", "0"]],
                      [["0", "0"], ["0", "0"]]]}
}
)";

const char* kE4 = R"({
  "chart": {"names": ["x", "y"], "box": [[-1, 1], [-1, 1]]},
  "algebroid": {"rank": 2, "rho": [["0", "x"], ["-x", "0"]],
                "C": [[["0", "0"], ["1", "0"]],
                      [["0", "0"], ["0", "0"]]]},
  "poisson": {"pi": [["0", "x"], ["0", "0"]]}
}
)";

const char* kE4Broken = R"({
  "chart": {"names": ["x", "y"], "box": [[-1, 1], [-1, 1]]},
  "algebroid": {"rank": 2, "rho": [["0", "x"], ["-x", "0"]],
                "C": [[["0", "0"], ["-1", "0"]],
                      [["0", "0"], ["0", "0"]]]},
  "poisson": {"pi": [["0", "x"], ["0", "0"]]}
}
)";

const char* kE5 = R"({
  "chart": {"names": ["x", "y"], "box": [[-1, 1], [-1, 1]]},
  "algebroid": {"rank": 3,
                "rho": [["1", "0"], ["0", "1"], ["0", "0"]],
                "C": [[["0", "0", "0"], ["0", "0", "1"], ["0", "0", "0"]],
                      [["0", "0", "0"], ["0", "0", "0"], ["0", "0", "0"]],
                      [["0", "0", "0"], ["0", "0", "0"], ["0", "0", "0"]]]},
  "presymplectic": {"omega": [["0", "1"], ["0", "0"]]},
  "momentum": {"mu": ["-y", "x", "1"]},
  "dirac": {"kind": "graph-omega"}
}
)";

const char* kE5Broken = R"({
  "chart": {"names": ["x", "y"], "box": [[-1, 1], [-1, 1]]},
  "algebroid": {"rank": 3,
                "rho": [["1", "0"], ["0", "1"], ["0", "0"]],
                "C": [[["0", "0", "0"], ["0", "0", "1"], ["0", "0", "0"]],
                      [["0", "0", "0"], ["0", "0", "0"], ["0", "0", "0"]],
                      [["0", "0", "0"], ["0", "0", "0"], ["0", "0", "0"]]]},
  "presymplectic": {"omega": [["0", "1"], ["0", "0"]]},
  "momentum": {"mu": ["-y", "x", "2"]},
  "dirac": {"kind": "graph-omega"}
}
)";

const char* kE6 = R"({
  "chart": {"names": ["x", "y"], "box": [[-1, 1], [-1, 1]]},
  "algebroid": {"rank": 2, "rho": [["0", "-1"], ["0", "-2*x"]],
                "C": [[["0", "0"], ["0", "0"]],
                      [["0", "0"], ["0", "0"]]]},
  "poisson": {"pi": [["0", "1"], ["0", "0"]]},
  "momentum": {"mu": ["x", "x^2"]},
  "dirac": {"kind": "graph-pi"}
}
)";

const char* kE6Broken = R"({
  "chart": {"names": ["x", "y"], "box": [[-1, 1], [-1, 1]]},
  "algebroid": {"rank": 2, "rho": [["0", "-1"], ["1", "0"]],
                "C": [[["0", "0"], ["0", "0"]],
                      [["0", "0"], ["0", "0"]]]},
  "poisson": {"pi": [["0", "1"], ["0", "0"]]},
  "momentum": {"mu": ["x", "y"]},
  "dirac": {"kind": "graph-pi"}
}
)";

/// One family of compatible (mu, C) data over the standard bivector on the
/// first coordinate pair, satisfying {mu_a, mu_b} = -C^c_ab mu_c with
/// constant C.
struct Family {
    std::size_t rank = 0;
    std::vector<const char*> mu;
    // Entries (a, b, c, value) of C^c_ab for a < b; the rest follows by
    // antisymmetry.
    std::vector<std::array<double, 4>> c_entries;
};

const Family& family(std::size_t which) {
    static const std::vector<Family> families{
        // abelian: commuting momenta, zero bracket.
        {2, {"x1", "x1^2"}, {}},
        // Heisenberg: {x1, x2} = 1 pairs with a central generator.
        {3, {"x1", "x2", "1"}, {{0, 1, 2, -1.0}}},
        // sl2: quadratic momenta of the linear symplectic action.
        {3,
         {"x1^2 / 2", "x1 * x2", "x2^2 / 2"},
         {{0, 1, 0, -2.0}, {0, 2, 1, -1.0}, {1, 2, 2, -2.0}}},
        // affine: one linear and one mixed quadratic momentum.
        {2, {"x1", "x1 * x2"}, {{0, 1, 0, -1.0}}},
    };
    return families[which % families.size()];
}

using Dense = std::vector<std::vector<double>>;

Dense identity_matrix(std::size_t n) {
    Dense m(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1.0;
    return m;
}

/// In-place right multiplication by a shear: column b gains c * column a.
void apply_shear(Dense& m, std::size_t a, std::size_t b, double c) {
    for (std::size_t i = 0; i < m.size(); ++i) m[i][b] += c * m[i][a];
}

}  // namespace

const std::vector<Fixture>& fixture_catalog() {
    static const std::vector<Fixture> catalog{
        {"e1", "rotation action on the symplectic plane", kE1},
        {"e1-broken-mu",
         "e1 with the momentum doubled; fails exactly momentum-s2", kE1Broken},
        {"e2", "rotation anchor over the constant bivector", kE2},
        {"e2-broken-mu",
         "e2 with a linear term added to the momentum; fails exactly "
         "momentum-p2",
         kE2Broken},
        {"e3", "rank-2 action algebroid on an interval", kE3},
        {"e3-broken-c",
         "e3 with a wrong structure constant; fails exactly anchor-compat",
         kE3Broken},
        {"e4", "bivector algebroid of a linear bivector", kE4},
        {"e4-broken-c",
         "e4 with the structure function negated; fails exactly "
         "anchor-compat",
         kE4Broken},
        {"e5", "Heisenberg action on the symplectic plane", kE5},
        {"e5-broken-mu",
         "e5 with the central momentum doubled; fails exactly momentum-s3",
         kE5Broken},
        {"e6", "rank-2 momentum pair over the constant bivector", kE6},
        {"e6-broken-mu",
         "e6 with an incompatible momentum pair; fails exactly momentum-p3",
         kE6Broken},
    };
    return catalog;
}

const Fixture* find_fixture(const std::string& name) {
    for (const Fixture& fixture : fixture_catalog()) {
        if (fixture.name == name) return &fixture;
    }
    return nullptr;
}

Problem random_poisson_problem(std::uint64_t index) {
    const Family& fam = family(index % 4);
    const std::size_t n = ((index / 4) % 2 == 0) ? 2 : 4;
    const double lambda = std::vector<double>{1.0, 2.0, 0.5}[(index / 8) % 3];

    Chart chart;
    for (std::size_t i = 0; i < n; ++i) {
        chart.names.push_back("x" + std::to_string(i + 1));
        chart.box.push_back({-1.0, 1.0});
    }

    // Standard constant bivector: one symplectic block per coordinate pair.
    Dense pi0(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i + 1 < n; i += 2) {
        pi0[i][i + 1] = 1.0;
        pi0[i + 1][i] = -1.0;
    }

    // Random unimodular change of coordinates T as a product of shears with
    // small integer coefficients; its inverse is the reversed product of the
    // negated shears.
    std::uint64_t state = splitmix64(0x5EEDF1ED ^ index);
    std::vector<std::array<double, 3>> shears;
    for (int k = 0; k < 3; ++k) {
        const std::size_t a = splitmix64(state++) % n;
        std::size_t b = splitmix64(state++) % n;
        if (b == a) b = (b + 1) % n;
        const double c =
            static_cast<double>(splitmix64(state++) % 5) - 2.0;  // -2..2
        shears.push_back({static_cast<double>(a), static_cast<double>(b), c});
    }
    Dense T = identity_matrix(n);
    Dense Tinv = identity_matrix(n);
    for (const auto& s : shears) {
        apply_shear(T, static_cast<std::size_t>(s[0]),
                    static_cast<std::size_t>(s[1]), s[2]);
    }
    for (auto it = shears.rbegin(); it != shears.rend(); ++it) {
        apply_shear(Tinv, static_cast<std::size_t>((*it)[0]),
                    static_cast<std::size_t>((*it)[1]), -(*it)[2]);
    }

    // Transformed bivector pi'^{kl} = Tinv^k_i Tinv^l_j pi0^{ij}: constant
    // and invertible because T is unimodular.
    ExprMatrix pi = zero_matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
            double value = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    value += Tinv[k][i] * Tinv[l][j] * pi0[i][j];
                }
            }
            pi[k][l] = Expr::constant(value);
        }
    }

    // Pulled-back momenta mu'_a = lambda * mu_a(T x), substituted
    // simultaneously.
    std::map<std::string, Expr> change;
    for (std::size_t i = 0; i < n; ++i) {
        Expr image = Expr::constant(0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (T[i][j] == 0.0) continue;
            image = image +
                    Expr::constant(T[i][j]) * Expr::variable(chart.names[j]);
        }
        change.emplace(chart.names[i], image);
    }
    Section mu;
    for (std::size_t a = 0; a < fam.rank; ++a) {
        const Expr base = Expr::parse(fam.mu[a]);
        mu.push_back(Expr::constant(lambda) * base.substitute(change));
    }

    // C scales with lambda and is untouched by the coordinate change.
    ExprCube C = zero_cube(fam.rank, fam.rank, fam.rank);
    for (const auto& entry : fam.c_entries) {
        const auto a = static_cast<std::size_t>(entry[0]);
        const auto b = static_cast<std::size_t>(entry[1]);
        const auto c = static_cast<std::size_t>(entry[2]);
        C[a][b][c] = Expr::constant(lambda * entry[3]);
        C[b][a][c] = Expr::constant(-lambda * entry[3]);
    }

    // Anchor: the sharp of each momentum gradient.
    ExprMatrix rho = zero_matrix(fam.rank, n);
    for (std::size_t a = 0; a < fam.rank; ++a) {
        OneForm grad;
        for (std::size_t i = 0; i < n; ++i) {
            grad.push_back(mu[a].derivative(chart.names[i]));
        }
        const VectorField image = sharp(pi, grad);
        for (std::size_t i = 0; i < n; ++i) rho[a][i] = image[i];
    }

    Problem problem;
    problem.chart = chart;
    problem.algebroid = LieAlgebroid{chart, fam.rank, rho, C};
    problem.connection = trivial_connection(fam.rank, n);
    problem.poisson = pi;
    problem.momentum = mu;
    return problem;
}

}  // namespace momsec
