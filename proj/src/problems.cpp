#include "varlat/problems.hpp"

#include "varlat/expression.hpp"

#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>

namespace varlat {

namespace {

using nlohmann::json;

bool same_vector(const Vector& l, const Vector& r)
{
    return l.size() == r.size() && (l.size() == 0 || l == r);
}

Vector read_vector(const json& j, const std::string& field)
{
    if (!j.is_array() || j.empty()) throw ConfigError(field, "expected a nonempty array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ConfigError(field + "[" + std::to_string(i) + "]", "expected a number");
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
}

json write_vector(const Vector& v)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

double number(const json& params, const char* key, double fallback, const std::string& field)
{
    if (!params.contains(key)) return fallback;
    if (!params[key].is_number()) throw ConfigError(field + "." + key, "expected a number");
    return params[key].get<double>();
}

template <std::size_t K>
std::array<double, K> numbers(const json& params, const char* key, std::array<double, K> fallback,
                              const std::string& field)
{
    if (!params.contains(key)) return fallback;
    const Vector v = read_vector(params[key], field + "." + key);
    if (v.size() != static_cast<Eigen::Index>(K))
        throw ConfigError(field + "." + key, "expected " + std::to_string(K) + " entries");
    std::array<double, K> out{};
    for (std::size_t i = 0; i < K; ++i) out[i] = v[static_cast<Eigen::Index>(i)];
    return out;
}

BuildingParams building_params(const json& params, const std::string& field)
{
    if (!params.is_object()) throw ConfigError(field, "expected an object");
    BuildingParams p;
    p.a = number(params, "a", p.a, field);
    p.h = number(params, "h", p.h, field);
    p.V = number(params, "V", p.V, field);
    p.alpha = numbers(params, "alpha", p.alpha, field);
    p.beta = numbers(params, "beta", p.beta, field);
    p.theta1 = number(params, "theta1", p.theta1, field);
    p.theta2 = number(params, "theta2", p.theta2, field);
    if (!(p.a > 0)) throw ConfigError(field + ".a", "must be positive");
    if (!(p.h > 0)) throw ConfigError(field + ".h", "must be positive");
    if (!(p.V > 0)) throw ConfigError(field + ".V", "must be positive");
    return p;
}

json building_json(const BuildingParams& p)
{
    return {{"a", p.a},         {"h", p.h},          {"V", p.V}, {"alpha", p.alpha}, {"beta", p.beta},
            {"theta1", p.theta1}, {"theta2", p.theta2}};
}

int criteria_param(const json& params, const std::string& field)
{
    const double d = number(params, "criteria", 1.0, field);
    if (d != 1.0 && d != 2.0) throw ConfigError(field + ".criteria", "expected 1 or 2");
    return static_cast<int>(d);
}

struct Example31 {
    template <typename S>
    VectorX<S> operator()(S t, const VectorX<S>& y, const VectorX<S>& p) const
    {
        VectorX<S> out(2);
        out[0] = 0.5 * p[0] * p[0];
        out[1] = 0.5 * p[0] * p[0] + y[0] * t;
        return out;
    }
};

struct Example4 {
    template <typename S>
    VectorX<S> operator()(S t, const VectorX<S>& y, const VectorX<S>& p) const
    {
        VectorX<S> out(2);
        out[0] = p[0] * p[0] + 4.0 * y[0] * y[0];
        out[1] = t * p[0] + p[0] * p[0];
        return out;
    }
};

struct QuadraticIso {
    int criteria;

    template <typename S>
    VectorX<S> operator()(S, const VectorX<S>& y, const VectorX<S>& p) const
    {
        VectorX<S> out(criteria);
        out[0] = p[0] * p[0];
        if (criteria == 2) out[1] = p[0] * p[0] + y[0] * y[0];
        return out;
    }
};

struct ShiftedValue {
    double c;

    template <typename S>
    VectorX<S> operator()(const VectorX<S>& y) const
    {
        VectorX<S> out(1);
        out[0] = y[0] - c;
        return out;
    }
};

std::vector<std::string> lagrangian_variables(int n)
{
    std::vector<std::string> vars{"t"};
    for (int i = 1; i <= n; ++i) vars.push_back("y" + std::to_string(i));
    for (int i = 1; i <= n; ++i) vars.push_back("p" + std::to_string(i));
    if (n == 1) {
        vars.push_back("y");
        vars.push_back("p");
    }
    return vars;
}

std::vector<std::string> constraint_variables(int n)
{
    std::vector<std::string> vars;
    for (int i = 1; i <= n; ++i) vars.push_back("y" + std::to_string(i));
    if (n == 1) vars.push_back("y");
    return vars;
}

struct ExpressionLagrangian {
    std::shared_ptr<const std::vector<Expression>> components;
    int n;

    template <typename S>
    VectorX<S> operator()(S t, const VectorX<S>& y, const VectorX<S>& p) const
    {
        std::vector<S> vars;
        vars.reserve(static_cast<std::size_t>(2 * n + 3));
        vars.push_back(t);
        for (int i = 0; i < n; ++i) vars.push_back(y[i]);
        for (int i = 0; i < n; ++i) vars.push_back(p[i]);
        if (n == 1) {
            vars.push_back(y[0]);
            vars.push_back(p[0]);
        }
        VectorX<S> out(static_cast<Eigen::Index>(components->size()));
        for (std::size_t k = 0; k < components->size(); ++k) out[static_cast<Eigen::Index>(k)] = (*components)[k].eval(vars.data());
        return out;
    }
};

struct ExpressionConstraint {
    std::shared_ptr<const std::vector<Expression>> components;
    Vector shift; // target / (b - a)
    int n;

    template <typename S>
    VectorX<S> operator()(const VectorX<S>& y) const
    {
        std::vector<S> vars;
        for (int i = 0; i < n; ++i) vars.push_back(y[i]);
        if (n == 1) vars.push_back(y[0]);
        VectorX<S> out(static_cast<Eigen::Index>(components->size()));
        for (std::size_t k = 0; k < components->size(); ++k)
            out[static_cast<Eigen::Index>(k)] = (*components)[k].eval(vars.data()) - shift[static_cast<Eigen::Index>(k)];
        return out;
    }
};

std::vector<Expression> parse_components(const std::vector<std::string>& texts, const std::vector<std::string>& vars,
                                         const std::string& field)
{
    std::vector<Expression> out;
    for (std::size_t k = 0; k < texts.size(); ++k) {
        try {
            out.push_back(Expression::parse(texts[k], vars));
        } catch (const Error& e) {
            throw ConfigError(field + "[" + std::to_string(k) + "]", e.what());
        }
    }
    return out;
}

std::vector<std::string> read_strings(const json& j, const std::string& field)
{
    if (!j.is_array() || j.empty()) throw ConfigError(field, "expected a nonempty array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_string()) throw ConfigError(field + "[" + std::to_string(i) + "]", "expected a string");
        out.push_back(j[i].get<std::string>());
    }
    return out;
}

bool is_builtin(const std::string& name)
{
    const auto& names = builtin_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

IntegralConstraint builtin_constraint(const std::string& name, const json& params, double& scale)
{
    if (name == "quadratic-isoperimetric") {
        const double c = number(params, "c", 1.0, "constraint.params");
        scale = std::abs(c);
        IntegralConstraint G = IntegralConstraint::from_functor(1, 1, ShiftedValue{c}, "mean-value");
        G.bounded_gradient_growth = true;
        return G;
    }
    if (name == "building") {
        const BuildingParams p = building_params(params, "constraint.params");
        scale = p.V / p.h;
        return building_constraint(p);
    }
    throw ConfigError("constraint.builtin", "no built-in constraint named '" + name + "'");
}

} // namespace

bool operator==(const ConstraintSpec& l, const ConstraintSpec& r)
{
    return l.builtin == r.builtin && l.params == r.params && l.components == r.components &&
           same_vector(l.target, r.target);
}

bool operator==(const ProblemConfig& l, const ProblemConfig& r)
{
    return l.a == r.a && l.b == r.b && same_vector(l.A, r.A) && same_vector(l.B, r.B) && l.cone == r.cone &&
           l.lagrangian == r.lagrangian && l.constraint == r.constraint && l.solver == r.solver;
}

const std::vector<std::string>& builtin_names()
{
    static const std::vector<std::string> names{"example-3.1", "example-4", "quadratic-isoperimetric", "building"};
    return names;
}

Lagrangian builtin_lagrangian(const std::string& name, const json& params)
{
    if (!params.is_object()) throw ConfigError("lagrangian.params", "expected an object");
    if (name == "example-3.1") {
        Lagrangian L = Lagrangian::from_functor(2, 1, Example31{}, name);
        L.growth = {true, true, 2.0};
        return L;
    }
    if (name == "example-4") {
        Lagrangian L = Lagrangian::from_functor(2, 1, Example4{}, name);
        L.growth = {true, true, 2.0};
        return L;
    }
    if (name == "quadratic-isoperimetric") {
        const int d = criteria_param(params, "lagrangian.params");
        Lagrangian L = Lagrangian::from_functor(d, 1, QuadraticIso{d}, name);
        L.growth = {true, true, 2.0};
        return L;
    }
    if (name == "building") return building_lagrangian(building_params(params, "lagrangian.params"));
    throw ConfigError("lagrangian.builtin", "unknown built-in '" + name + "'");
}

ProblemConfig builtin_config(const std::string& name, const json& params)
{
    if (!params.is_object()) throw ConfigError("params", "expected an object");
    ProblemConfig c;
    const auto slash = name.find('/');
    const std::string base = name.substr(0, slash);
    std::string variant = slash == std::string::npos ? "" : name.substr(slash + 1);
    if (slash != std::string::npos && base != "example-4")
        throw ConfigError("builtin", "only example-4 has variants, got '" + name + "'");
    const json orthant2 = {{"kind", "orthant"}, {"dim", 2}};

    if (base == "example-3.1" || base == "example-4") {
        c.a = 0.0;
        c.b = 1.0;
        c.A = make_vector({0.0});
        c.B = make_vector({1.0});
        c.cone = orthant2;
        c.lagrangian.builtin = base;
        if (base == "example-4") {
            if (variant.empty()) variant = params.value("cone", std::string("C1"));
            if (variant == "C1")
                c.cone = orthant2;
            else if (variant == "C2")
                c.cone = {{"kind", "sector"}, {"theta_min", 0.0}, {"theta_max", std::numbers::pi / 3}};
            else if (variant == "C3")
                c.cone = {{"kind", "sector"}, {"theta_min", -std::numbers::pi / 4}, {"theta_max", std::numbers::pi / 2}};
            else
                throw ConfigError("builtin", "example-4 variants are C1, C2, C3, got '" + variant + "'");
        }
        return c;
    }
    if (base == "quadratic-isoperimetric") {
        const int d = criteria_param(params, "params");
        c.a = 0.0;
        c.b = 1.0;
        c.A = make_vector({0.0});
        c.B = make_vector({0.0});
        c.cone = {{"kind", "orthant"}, {"dim", d}};
        c.lagrangian.builtin = base;
        c.lagrangian.params = {{"criteria", d}};
        c.constraint = ConstraintSpec{base, {{"c", number(params, "c", 1.0, "params")}}, {}, Vector()};
        c.solver.samples = d == 1 ? 1 : 21;
        return c;
    }
    if (base == "building") {
        const BuildingParams p = building_params(params, "params");
        c.a = -p.a;
        c.b = p.a;
        c.A = Vector::Zero(2);
        c.B = Vector::Zero(2);
        c.cone = orthant2;
        c.lagrangian.builtin = base;
        c.lagrangian.params = building_json(p);
        c.constraint = ConstraintSpec{base, building_json(p), {}, Vector()};
        c.solver.nodes = 400;
        c.solver.base = BaseParameterization::sum_one;
        c.solver.samples = 11;
        return c;
    }
    throw ConfigError("builtin", "unknown built-in problem '" + name + "'");
}

ProblemConfig parse_config(const json& j)
{
    if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
    ProblemConfig c;
    if (j.contains("builtin")) {
        if (!j["builtin"].is_string()) throw ConfigError("builtin", "expected a string");
        c = builtin_config(j["builtin"].get<std::string>(), j.value("params", json::object()));
    } else {
        if (!j.contains("interval")) throw ConfigError("interval", "missing");
        const Vector iv = read_vector(j["interval"], "interval");
        if (iv.size() != 2) throw ConfigError("interval", "expected [a, b]");
        c.a = iv[0];
        c.b = iv[1];
        if (!(c.a < c.b)) throw ConfigError("interval", "expected a < b");

        if (!j.contains("boundary") || !j["boundary"].is_object())
            throw ConfigError("boundary", "expected an object with A and B");
        const json& bd = j["boundary"];
        if (!bd.contains("A")) throw ConfigError("boundary.A", "missing");
        if (!bd.contains("B")) throw ConfigError("boundary.B", "missing");
        c.A = read_vector(bd["A"], "boundary.A");
        c.B = read_vector(bd["B"], "boundary.B");

        if (!j.contains("cone")) throw ConfigError("cone", "missing");
        c.cone = j["cone"];
        cone_from_json(c.cone);

        if (!j.contains("lagrangian") || !j["lagrangian"].is_object())
            throw ConfigError("lagrangian", "expected an object");
        const json& lj = j["lagrangian"];
        if (lj.contains("builtin")) {
            if (!lj["builtin"].is_string() || !is_builtin(lj["builtin"].get<std::string>()))
                throw ConfigError("lagrangian.builtin", "expected one of example-3.1, example-4, "
                                                        "quadratic-isoperimetric, building");
            c.lagrangian.builtin = lj["builtin"].get<std::string>();
            c.lagrangian.params = lj.value("params", json::object());
            builtin_lagrangian(c.lagrangian.builtin, c.lagrangian.params);
        } else {
            if (!lj.contains("state_dim") || !lj["state_dim"].is_number_integer() || lj["state_dim"].get<int>() < 1)
                throw ConfigError("lagrangian.state_dim", "expected a positive integer");
            c.lagrangian.state_dim = lj["state_dim"].get<int>();
            if (!lj.contains("components")) throw ConfigError("lagrangian.components", "missing");
            c.lagrangian.components = read_strings(lj["components"], "lagrangian.components");
            parse_components(c.lagrangian.components, lagrangian_variables(c.lagrangian.state_dim),
                             "lagrangian.components");
        }

        if (j.contains("constraint") && !j["constraint"].is_null()) {
            const json& cj = j["constraint"];
            if (!cj.is_object()) throw ConfigError("constraint", "expected an object");
            ConstraintSpec spec;
            if (cj.contains("builtin")) {
                if (!cj["builtin"].is_string()) throw ConfigError("constraint.builtin", "expected a string");
                spec.builtin = cj["builtin"].get<std::string>();
                spec.params = cj.value("params", json::object());
                double scale = 1.0;
                builtin_constraint(spec.builtin, spec.params, scale);
            } else {
                if (!cj.contains("components")) throw ConfigError("constraint.components", "missing");
                spec.components = read_strings(cj["components"], "constraint.components");
                if (!cj.contains("target")) throw ConfigError("constraint.target", "missing");
                spec.target = read_vector(cj["target"], "constraint.target");
                if (spec.target.size() != static_cast<Eigen::Index>(spec.components.size()))
                    throw ConfigError("constraint.target", "needs one entry per constraint component");
                parse_components(spec.components, constraint_variables(static_cast<int>(c.A.size())),
                                 "constraint.components");
            }
            c.constraint = std::move(spec);
        }
    }

    if (j.contains("solver")) {
        const json& s = j["solver"];
        if (!s.is_object()) throw ConfigError("solver", "expected an object");
        static const std::vector<std::string> keys{"nodes",   "gtol", "rtol", "max_iterations",
                                                   "samples", "base", "seed", "cert_tol"};
        for (const auto& [key, value] : s.items()) {
            if (std::find(keys.begin(), keys.end(), key) == keys.end())
                throw ConfigError("solver." + key, "unknown option");
            const std::string field = "solver." + key;
            if (key == "base") {
                if (!value.is_string()) throw ConfigError(field, "expected a string");
                try {
                    c.solver.base = parse_base_parameterization(value.get<std::string>());
                } catch (const Error& e) {
                    throw ConfigError(field, e.what());
                }
            } else if (key == "nodes" || key == "max_iterations" || key == "samples" || key == "seed") {
                if (!value.is_number_integer() || value.get<long long>() < (key == "seed" ? 0 : 1))
                    throw ConfigError(field, "expected a positive integer");
                if (key == "nodes") c.solver.nodes = value.get<int>();
                if (key == "max_iterations") c.solver.max_iterations = value.get<int>();
                if (key == "samples") c.solver.samples = value.get<int>();
                if (key == "seed") c.solver.seed = value.get<std::uint64_t>();
            } else {
                if (!value.is_number() || !(value.get<double>() > 0)) throw ConfigError(field, "expected a positive number");
                if (key == "gtol") c.solver.gtol = value.get<double>();
                if (key == "rtol") c.solver.rtol = value.get<double>();
                if (key == "cert_tol") c.solver.cert_tol = value.get<double>();
            }
        }
    }
    // Dimensional consistency before anything is solved.
    instantiate(c);
    return c;
}

json to_json(const ProblemConfig& c)
{
    json j;
    j["interval"] = {c.a, c.b};
    j["boundary"] = {{"A", write_vector(c.A)}, {"B", write_vector(c.B)}};
    j["cone"] = c.cone;
    if (!c.lagrangian.builtin.empty())
        j["lagrangian"] = {{"builtin", c.lagrangian.builtin}, {"params", c.lagrangian.params}};
    else
        j["lagrangian"] = {{"state_dim", c.lagrangian.state_dim}, {"components", c.lagrangian.components}};
    if (c.constraint) {
        if (!c.constraint->builtin.empty())
            j["constraint"] = {{"builtin", c.constraint->builtin}, {"params", c.constraint->params}};
        else
            j["constraint"] = {{"components", c.constraint->components}, {"target", write_vector(c.constraint->target)}};
    }
    j["solver"] = {{"nodes", c.solver.nodes},     {"gtol", c.solver.gtol},
                   {"rtol", c.solver.rtol},       {"max_iterations", c.solver.max_iterations},
                   {"samples", c.solver.samples}, {"base", to_string(c.solver.base)},
                   {"seed", c.solver.seed},       {"cert_tol", c.solver.cert_tol}};
    return j;
}

ProblemConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open file");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path, e.what());
    }
    return parse_config(j);
}

Problem instantiate(const ProblemConfig& c)
{
    if (!(c.a < c.b)) throw ConfigError("interval", "expected a < b");
    const Cone cone = cone_from_json(c.cone);
    std::optional<Lagrangian> L;
    if (!c.lagrangian.builtin.empty()) {
        L = builtin_lagrangian(c.lagrangian.builtin, c.lagrangian.params);
    } else {
        const int n = c.lagrangian.state_dim;
        if (n < 1) throw ConfigError("lagrangian.state_dim", "expected a positive integer");
        auto comps = std::make_shared<const std::vector<Expression>>(
            parse_components(c.lagrangian.components, lagrangian_variables(n), "lagrangian.components"));
        L = Lagrangian::from_functor(static_cast<int>(comps->size()), n, ExpressionLagrangian{comps, n}, "expression");
    }
    if (L->criteria() != cone.dim())
        throw ConfigError("cone", "cone dimension " + std::to_string(cone.dim()) + " does not match the " +
                                      std::to_string(L->criteria()) + " Lagrangian components");
    if (c.A.size() != L->state_dim())
        throw ConfigError("boundary.A", "expected " + std::to_string(L->state_dim()) + " entries");
    if (c.B.size() != L->state_dim())
        throw ConfigError("boundary.B", "expected " + std::to_string(L->state_dim()) + " entries");

    Problem p{c.lagrangian.builtin.empty() ? std::string("custom") : c.lagrangian.builtin, *L, cone,
              Boundary{c.a, c.b, c.A, c.B}};
    if (c.constraint) {
        if (!c.constraint->builtin.empty()) {
            p.constraint = builtin_constraint(c.constraint->builtin, c.constraint->params, p.constraint_scale);
        } else {
            const int n = L->state_dim();
            auto comps = std::make_shared<const std::vector<Expression>>(
                parse_components(c.constraint->components, constraint_variables(n), "constraint.components"));
            if (c.constraint->target.size() != static_cast<Eigen::Index>(comps->size()))
                throw ConfigError("constraint.target", "needs one entry per constraint component");
            p.constraint = IntegralConstraint::from_functor(
                static_cast<int>(comps->size()), n,
                ExpressionConstraint{comps, Vector(c.constraint->target / (c.b - c.a)), n}, "expression");
            p.constraint_scale = c.constraint->target.lpNorm<Eigen::Infinity>();
        }
        if (p.constraint->state_dim() != L->state_dim())
            throw ConfigError("constraint", "state dimension does not match the Lagrangian");
    }
    if (c.lagrangian.builtin == "building") p.building = building_params(c.lagrangian.params, "lagrangian.params");
    return p;
}

double example31_solution(const Vector& zeta, double A, double B, double t)
{
    const double k = zeta[1] / (6.0 * (zeta[0] + zeta[1]));
    return k * t * t * t + (B - A - k) * t + A;
}

double example4_solution(double z1, double t)
{
    if (z1 == 0.0) return -0.25 * t * t + 1.25 * t;
    const double r = 2.0 * std::sqrt(z1);
    const double den = 8.0 * z1 * (std::exp(r) - std::exp(-r));
    const double c1 = ((1.0 - z1) * (std::exp(-r) - 1.0) + 8.0 * z1) / den;
    const double c2 = -((1.0 - z1) * (std::exp(r) - 1.0) + 8.0 * z1) / den;
    return c1 * std::exp(r * t) + c2 * std::exp(-r * t) + (1.0 - z1) / (8.0 * z1);
}

} // namespace varlat
