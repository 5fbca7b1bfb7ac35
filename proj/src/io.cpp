#include "varlat/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace varlat {

using nlohmann::json;

std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_arc_csv(std::ostream& out, const Arc& arc)
{
    out << "t";
    for (int j = 1; j <= arc.state_dim(); ++j) out << ",y" << j;
    out << "\n";
    for (int i = 0; i < arc.grid().nodes(); ++i) {
        out << format_double(arc.grid().t(i));
        for (int j = 0; j < arc.state_dim(); ++j) out << "," << format_double(arc.values()(i, j));
        out << "\n";
    }
}

void write_points_csv(std::ostream& out, const std::vector<Vector>& points, const std::vector<std::string>& header)
{
    for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
    out << "\n";
    for (const auto& p : points) {
        for (Eigen::Index k = 0; k < p.size(); ++k) out << (k ? "," : "") << format_double(p[k]);
        out << "\n";
    }
}

json vector_json(const Vector& v)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

Vector vector_from_json(const json& j, const std::string& field)
{
    if (!j.is_array()) throw ConfigError(field, "expected an array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ConfigError(field + "[" + std::to_string(i) + "]", "expected a number");
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
}

json arc_json(const Arc& arc)
{
    json rows = json::array();
    for (int i = 0; i < arc.grid().nodes(); ++i) rows.push_back(vector_json(arc.node(i)));
    return {{"a", arc.grid().a}, {"b", arc.grid().b}, {"interior", arc.grid().interior}, {"values", rows}};
}

Arc arc_from_json(const json& j, const std::string& field)
{
    if (!j.is_object()) throw ConfigError(field, "expected an object");
    for (const char* k : {"a", "b", "interior", "values"})
        if (!j.contains(k)) throw ConfigError(field + "." + k, "missing");
    const Grid grid{j["a"].get<double>(), j["b"].get<double>(), j["interior"].get<int>()};
    const json& rows = j["values"];
    if (!rows.is_array() || static_cast<int>(rows.size()) != grid.nodes())
        throw ConfigError(field + ".values", "expected one row per node");
    Matrix values;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Vector r = vector_from_json(rows[i], field + ".values[" + std::to_string(i) + "]");
        if (i == 0) values.resize(grid.nodes(), r.size());
        if (r.size() != values.cols()) throw ConfigError(field + ".values", "ragged rows");
        values.row(static_cast<Eigen::Index>(i)) = r.transpose();
    }
    try {
        return Arc(grid, std::move(values));
    } catch (const Error& e) {
        throw ConfigError(field, e.what());
    }
}

json to_json(const SolveReport& r, bool with_arc)
{
    json j{{"zeta", vector_json(r.zeta)},
           {"J_value", vector_json(r.J_value)},
           {"scalar_value", r.scalar_value},
           {"iterations", r.iterations},
           {"gradient_norm", r.gradient_norm},
           {"converged", r.converged},
           {"max_weak_residual", r.max_weak_residual},
           {"global", r.global},
           {"status", r.status}};
    if (with_arc) j["arc"] = arc_json(r.arc);
    return j;
}

json to_json(const MultiplierReport& r, bool with_arc)
{
    json W = json::array();
    for (Eigen::Index i = 0; i < r.W_matrix.rows(); ++i) W.push_back(vector_json(r.W_matrix.row(i).transpose()));
    json j{{"zeta", vector_json(r.zeta)},
           {"lambda", vector_json(r.lambda)},
           {"J_value", vector_json(r.J_value)},
           {"scalar_value", r.scalar_value},
           {"constraint_residual", vector_json(r.constraint_residual)},
           {"stationarity_residual", r.stationarity_residual},
           {"W_matrix", W},
           {"W_condition", r.W_condition},
           {"W_warning", r.W_warning},
           {"lambda_from_probes", vector_json(r.lambda_from_probes)},
           {"probe_seed", r.probe_seed},
           {"outer_iterations", r.outer_iterations},
           {"residual_history", r.residual_history},
           {"success", r.success},
           {"status", r.status}};
    if (with_arc) j["arc"] = arc_json(r.arc);
    return j;
}

json to_json(const CertificationReport& r)
{
    json trials = json::array();
    for (const auto& t : r.trials) {
        json e{{"J", vector_json(t.J)}, {"member", t.member}, {"margin", t.witness.margin}};
        if (!t.member) e["separating_zeta"] = vector_json(t.witness.zeta);
        trials.push_back(e);
    }
    return {{"passed", r.passed}, {"failures", r.failures}, {"note", r.note}, {"trials", trials}};
}

json infimizer_json(const InfimizerSet& M, const ProblemConfig& config)
{
    json entries = json::array();
    for (const auto& e : M.entries) entries.push_back(to_json(e, true));
    json failures = json::array();
    for (const auto& f : M.failures) failures.push_back({{"zeta", vector_json(f.zeta)}, {"message", f.message}});
    json samples = json::array();
    for (const auto& s : M.base.samples) samples.push_back(vector_json(s));
    return {{"problem", to_json(config)},
            {"base", {{"parameterization", to_string(M.base.parameterization)}, {"samples", samples}}},
            {"convexified", M.image_inf.convexified()},
            {"entries", entries},
            {"failures", failures},
            {"image_inf", to_json(M.image_inf)}};
}

std::pair<ProblemConfig, InfimizerSet> infimizer_from_json(const json& j)
{
    if (!j.is_object()) throw ConfigError("infimizer", "expected an object");
    for (const char* k : {"problem", "base", "entries"})
        if (!j.contains(k)) throw ConfigError(std::string("infimizer.") + k, "missing");
    ProblemConfig config = parse_config(j["problem"]);
    Problem p = instantiate(config);
    DualBase base{dual(p.cone), parse_base_parameterization(j["base"].value("parameterization", "sum-one")), {}};
    for (std::size_t i = 0; i < j["base"]["samples"].size(); ++i)
        base.samples.push_back(vector_from_json(j["base"]["samples"][i], "base.samples[" + std::to_string(i) + "]"));
    std::vector<SolveReport> entries;
    for (std::size_t i = 0; i < j["entries"].size(); ++i) {
        const json& e = j["entries"][i];
        const std::string f = "entries[" + std::to_string(i) + "]";
        if (!e.contains("arc")) throw ConfigError(f + ".arc", "missing");
        SolveReport r{vector_from_json(e.at("zeta"), f + ".zeta"), arc_from_json(e["arc"], f + ".arc"),
                      vector_from_json(e.at("J_value"), f + ".J_value")};
        r.scalar_value = e.value("scalar_value", r.zeta.dot(r.J_value));
        r.iterations = e.value("iterations", 0);
        r.gradient_norm = e.value("gradient_norm", 0.0);
        r.converged = e.value("converged", false);
        r.max_weak_residual = e.value("max_weak_residual", 0.0);
        r.global = e.value("global", false);
        r.status = e.value("status", std::string());
        entries.push_back(std::move(r));
    }
    std::vector<SolveFailure> failures;
    if (j.contains("failures"))
        for (const auto& f : j["failures"]) failures.push_back({vector_from_json(f.at("zeta"), "failures.zeta"), f.value("message", "")});
    InfimizerSet M = assemble_infimizer(p.L, p.cone, p.boundary, std::move(base), std::move(entries),
                                        std::move(failures), j.value("convexified", true));
    return {std::move(config), std::move(M)};
}

void write_file(const std::string& path, const std::string& content)
{
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << content;
    if (!out) throw Error("failed writing " + path);
}

} // namespace varlat
