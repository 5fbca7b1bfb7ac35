#pragma once

#include "varlat/isoperimetric.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace varlat {

/// Fully instantiated problem: Lagrangian, order cone, boundary data and an
/// optional integral constraint.
struct Problem {
    std::string name;
    Lagrangian L;
    Cone cone;
    Boundary boundary;
    std::optional<IntegralConstraint> constraint;
    double constraint_scale = 1.0;
    std::optional<BuildingParams> building;
};

struct LagrangianSpec {
    std::string builtin;                            // registry name, or empty
    nlohmann::json params = nlohmann::json::object(); // builtin parameters
    int state_dim = 0;                              // expression form
    std::vector<std::string> components;            // expression form, one per criterion

    bool operator==(const LagrangianSpec&) const = default;
};

struct ConstraintSpec {
    std::string builtin;
    nlohmann::json params = nlohmann::json::object();
    std::vector<std::string> components; // G_i(y) in the variables y / y1..yn
    Vector target;                       // int G dt = target
};

bool operator==(const ConstraintSpec& l, const ConstraintSpec& r);

struct SolverSpec {
    int nodes = 200;
    double gtol = 1e-8;
    double rtol = 1e-6;
    int max_iterations = 5000;
    int samples = 21;
    BaseParameterization base = BaseParameterization::automatic;
    std::uint64_t seed = 0;
    double cert_tol = 1e-6;

    bool operator==(const SolverSpec&) const = default;
};

/**
 * On-disk problem description (JSON). Keys: "interval" [a, b],
 * "boundary" {"A": [...], "B": [...]}, "cone" (see cone_from_json),
 * "lagrangian" {"builtin", "params"} or {"state_dim", "components"},
 * optional "constraint" {"builtin", "params"} or {"components", "target"},
 * and "solver" options.
 */
struct ProblemConfig {
    double a = 0.0;
    double b = 1.0;
    Vector A;
    Vector B;
    nlohmann::json cone;
    LagrangianSpec lagrangian;
    std::optional<ConstraintSpec> constraint;
    SolverSpec solver;
};

bool operator==(const ProblemConfig& l, const ProblemConfig& r);

/// Throws ConfigError naming the offending field.
ProblemConfig parse_config(const nlohmann::json& j);
nlohmann::json to_json(const ProblemConfig& config);
ProblemConfig load_config(const std::string& path);

/// Validates dimensions (d, n, m) and builds the problem.
Problem instantiate(const ProblemConfig& config);

/// example-3.1, example-4, quadratic-isoperimetric, building.
const std::vector<std::string>& builtin_names();

/**
 * Canonical configuration of a built-in problem. "example-4" takes the cone
 * variant as a suffix ("example-4/C2") or a "cone" parameter; C1 when absent.
 */
ProblemConfig builtin_config(const std::string& name, const nlohmann::json& params = nlohmann::json::object());

/// Built-in Lagrangian by registry name.
Lagrangian builtin_lagrangian(const std::string& name, const nlohmann::json& params);

// Closed forms used as oracles and in the self-test.

/// y(t) for L = (p^2/2, p^2/2 + y t) and any zeta with zeta_1 + zeta_2 != 0.
double example31_solution(const Vector& zeta, double A, double B, double t);

/// y(t) for L = (p^2 + 4 y^2, t p + p^2), zeta = (z1, 1 - z1), y(0) = 0, y(1) = 1.
double example4_solution(double zeta1, double t);

} // namespace varlat
