#include "varlat/functional.hpp"
#include "varlat/io.hpp"
#include "varlat/parallel.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

using namespace varlat;
using nlohmann::json;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCheckFailed = 3;

struct Common {
    std::string problem;
    std::string params;
    std::string zeta;
    std::string out;
    std::string report;
    std::string infimizer;
    int nodes = 0;
    int samples = 0;
    int trials = 100;
    long long seed = -1;
    double tol = 0.0;
    double extension = 1.0;
    bool staircase = false;
};

json read_json_file(const std::string& path, const std::string& field)
{
    std::ifstream in(path);
    if (!in) throw ConfigError(field, "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(field, std::string("invalid JSON in '") + path + "': " + e.what());
    }
}

/// Inline JSON object or path to a JSON file.
json params_json(const std::string& text)
{
    if (text.empty()) return json::object();
    if (!text.empty() && text.front() == '{') {
        try {
            return json::parse(text);
        } catch (const json::parse_error& e) {
            throw ConfigError("params", e.what());
        }
    }
    return read_json_file(text, "params");
}

/// Path to a configuration file, or a built-in name with optional --params.
ProblemConfig resolve_problem(const Common& c)
{
    if (c.problem.empty()) throw ConfigError("problem", "required");
    ProblemConfig cfg;
    if (std::filesystem::is_regular_file(c.problem)) {
        cfg = parse_config(read_json_file(c.problem, "problem"));
    } else {
        const std::string base = c.problem.substr(0, c.problem.find('/'));
        const auto& names = builtin_names();
        if (std::find(names.begin(), names.end(), base) == names.end())
            throw ConfigError("problem", "'" + c.problem + "' is neither a file nor a built-in problem");
        cfg = builtin_config(c.problem, params_json(c.params));
    }
    if (c.nodes > 0) cfg.solver.nodes = c.nodes;
    if (c.samples > 0) cfg.solver.samples = c.samples;
    if (c.seed >= 0) cfg.solver.seed = static_cast<std::uint64_t>(c.seed);
    return parse_config(to_json(cfg));
}

Vector parse_zeta(const std::string& text, int d)
{
    if (text.empty()) throw ConfigError("zeta", "required");
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("zeta", "'" + item + "' is not a number");
        }
    }
    if (static_cast<int>(parts.size()) != d)
        throw ConfigError("zeta", "expected " + std::to_string(d) + " components, got " + std::to_string(parts.size()));
    return Eigen::Map<Vector>(parts.data(), d);
}

SolveOptions solve_options(const ProblemConfig& cfg, const Common& c)
{
    SolveOptions s;
    s.nodes = cfg.solver.nodes;
    s.gtol = c.tol > 0 ? c.tol : cfg.solver.gtol;
    s.rtol = cfg.solver.rtol;
    s.max_iterations = cfg.solver.max_iterations;
    s.seed = cfg.solver.seed;
    return s;
}

ConstrainedOptions constrained_options(const ProblemConfig& cfg, const Problem& p)
{
    ConstrainedOptions o;
    o.solve.nodes = cfg.solver.nodes;
    o.solve.max_iterations = cfg.solver.max_iterations;
    o.solve.seed = cfg.solver.seed;
    o.constraint_scale = p.constraint_scale;
    o.probe_seed = cfg.solver.seed;
    return o;
}

DualBase make_base(const Problem& p, const ProblemConfig& cfg)
{
    return base_samples(dual(p.cone), cfg.solver.base, cfg.solver.samples);
}

std::string arc_csv(const Arc& arc)
{
    std::ostringstream out;
    write_arc_csv(out, arc);
    return out.str();
}

std::string front_csv(const UpperSet& image, double extension)
{
    std::ostringstream out;
    std::vector<std::string> header;
    for (int k = 1; k <= image.dim(); ++k) header.push_back("z" + std::to_string(k));
    write_points_csv(out, boundary_polyline(image, extension), header);
    return out.str();
}

void emit(const std::string& path, const std::string& content)
{
    if (path.empty() || path == "-")
        std::cout << content;
    else
        write_file(path, content);
}

InfimizerSet sweep_problem(const Problem& p, const ProblemConfig& cfg, const Common& c)
{
    const DualBase base = make_base(p, cfg);
    if (p.constraint) {
        SweepOptions o;
        o.constrained = constrained_options(cfg, p);
        o.seed = cfg.solver.seed;
        o.convexified = !c.staircase;
        return constrained_sweep(p.L, *p.constraint, p.cone, p.boundary, base, o).infimizer;
    }
    InfimizerOptions o;
    o.solve = solve_options(cfg, c);
    o.convexified = !c.staircase;
    return build_infimizer(p.L, p.cone, p.boundary, base, o);
}

int run_solve(const Common& c, bool require_constraint)
{
    const ProblemConfig cfg = resolve_problem(c);
    const Problem p = instantiate(cfg);
    const Vector zeta = parse_zeta(c.zeta, p.cone.dim());
    if (!in_dual(p.cone, zeta)) throw ConfigError("zeta", "not a nonzero element of the dual cone");
    if (require_constraint && !p.constraint) throw ConfigError("problem", "has no integral constraint");
    json report;
    std::string csv;
    bool ok = false;
    if (p.constraint) {
        const MultiplierReport r = solve_constrained_zeta(p.L, *p.constraint, zeta, p.boundary, constrained_options(cfg, p));
        report = to_json(r);
        csv = arc_csv(r.arc);
        ok = r.success;
    } else {
        const SolveReport r = solve_zeta(p.L, zeta, p.boundary, solve_options(cfg, c));
        report = to_json(r);
        csv = arc_csv(r.arc);
        ok = r.converged;
    }
    if (!c.out.empty()) write_file(c.out, csv);
    emit(c.report, report.dump(2) + "\n");
    return ok ? 0 : kExitCheckFailed;
}

int run_sweep(const Common& c)
{
    const ProblemConfig cfg = resolve_problem(c);
    const Problem p = instantiate(cfg);
    const InfimizerSet M = sweep_problem(p, cfg, c);
    const std::string out = c.out.empty() ? "infimizer.json" : c.out;
    write_file(out, infimizer_json(M, cfg).dump(1) + "\n");
    if (!c.report.empty() && M.cone.dim() == 2) write_file(c.report, front_csv(M.image_inf, c.extension));
    std::cout << "entries " << M.entries.size() << ", failures " << M.failures.size() << ", converged "
              << (M.all_converged() ? "yes" : "no") << "\n";
    return M.failures.empty() && M.all_converged() ? 0 : kExitCheckFailed;
}

int run_certify(const Common& c)
{
    if (c.infimizer.empty()) throw ConfigError("infimizer", "required");
    auto [cfg, M] = infimizer_from_json(read_json_file(c.infimizer, "infimizer"));
    const std::uint64_t seed = c.seed >= 0 ? static_cast<std::uint64_t>(c.seed) : cfg.solver.seed;
    const double tol = c.tol > 0 ? c.tol : cfg.solver.cert_tol;
    const int N = M.entries.empty() ? cfg.solver.nodes : M.entries.front().arc.interior();
    const auto trials = random_trial_arcs(M.boundary, N, c.trials, seed);
    const CertificationReport r = certify_infimizer(M, trials, tol);
    if (!c.out.empty()) write_file(c.out, to_json(r).dump(2) + "\n");
    std::cout << "trials " << r.trials.size() << ", failures " << r.failures << ", " << (r.passed ? "PASS" : "FAIL")
              << "\n";
    if (!r.note.empty()) std::cout << "note: " << r.note << "\n";
    return r.passed ? 0 : kExitCheckFailed;
}

int run_boundary(const Common& c)
{
    InfimizerSet M = [&] {
        if (!c.infimizer.empty()) return infimizer_from_json(read_json_file(c.infimizer, "infimizer")).second;
        const ProblemConfig cfg = resolve_problem(c);
        return sweep_problem(instantiate(cfg), cfg, c);
    }();
    if (M.cone.dim() != 2) throw ConfigError("cone", "boundary polylines are only defined for d = 2");
    emit(c.out.empty() ? "front.csv" : c.out, front_csv(M.image_inf, c.extension));
    return 0;
}

int run_building(const Common& c, int zeta_samples, bool numeric)
{
    const ProblemConfig cfg = [&] {
        Common b = c;
        b.problem = "building";
        return resolve_problem(b);
    }();
    const Problem p = instantiate(cfg);
    const BuildingParams& params = *p.building;
    if (zeta_samples < 2) throw ConfigError("zeta-samples", "need at least 2");
    const std::string dir = c.out.empty() ? "shapes" : c.out;
    const int N = cfg.solver.nodes;

    // Compute everything before writing so that failures leave no partial output.
    std::vector<BuildingSolution> solutions;
    std::vector<Vector> front;
    json summary = json::array();
    for (int k = 0; k < zeta_samples; ++k) {
        const double z1 = static_cast<double>(k) / (zeta_samples - 1);
        solutions.push_back(building_closed_form(params, make_vector({z1, 1.0 - z1})));
        const Vector J = functional_J(p.L, solutions.back().arc(N));
        front.push_back(make_vector({z1, solutions.back().lambda, J[0], J[1]}));
        summary.push_back({{"zeta1", z1},
                           {"lambda", solutions.back().lambda},
                           {"A1", solutions.back().A1},
                           {"A2", solutions.back().A2},
                           {"J", vector_json(J)}});
    }
    std::vector<std::optional<MultiplierReport>> reports(numeric ? solutions.size() : 0);
    double worst = 0.0;
    if (numeric) {
        const ConstrainedOptions o = constrained_options(cfg, p);
        parallel_for(solutions.size(), [&](std::size_t i) {
            reports[i] = solve_constrained_zeta(p.L, *p.constraint, solutions[i].zeta, p.boundary, o);
        });
        for (std::size_t i = 0; i < solutions.size(); ++i) {
            const MultiplierReport& r = *reports[i];
            const double err = (r.arc.values() - solutions[i].arc(N).values()).lpNorm<Eigen::Infinity>();
            summary[i]["numeric"] = {{"lambda", r.lambda[0]},
                                     {"max_node_error", err},
                                     {"constraint_residual", r.constraint_residual[0]},
                                     {"success", r.success}};
            worst = std::max(worst, err);
        }
    }
    for (std::size_t i = 0; i < solutions.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "zeta_%03zu.csv", i);
        write_file((std::filesystem::path(dir) / name).string(), arc_csv(solutions[i].arc(N)));
    }
    {
        std::ostringstream out;
        write_points_csv(out, front, {"zeta1", "lambda", "J1", "J2"});
        write_file((std::filesystem::path(dir) / "front.csv").string(), out.str());
    }
    write_file((std::filesystem::path(dir) / "summary.json").string(), summary.dump(2) + "\n");
    std::cout << "wrote " << solutions.size() << " shape pairs to " << dir << "\n";
    if (numeric) std::cout << "max node error vs closed form " << format_double(worst) << "\n";
    return 0;
}

// ---- selftest ----

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

int run_selftest(const Common& c)
{
    const std::uint64_t seed = c.seed >= 0 ? static_cast<std::uint64_t>(c.seed) : 0;
    const std::string dir = c.out.empty() ? "selftest_out" : c.out;
    std::vector<Check> checks;
    json artifacts;

    // example-3.1 closed forms.
    {
        const ProblemConfig cfg = builtin_config("example-3.1");
        const Problem p = instantiate(cfg);
        const std::vector<Vector> zetas{make_vector({0, 1}), make_vector({0.5, 0.5}), make_vector({1, 0})};
        std::vector<std::optional<SolveReport>> reports(zetas.size());
        SolveOptions o;
        o.nodes = 200;
        o.seed = seed;
        parallel_for(zetas.size(), [&](std::size_t i) { reports[i] = solve_zeta(p.L, zetas[i], p.boundary, o); });
        for (std::size_t i = 0; i < zetas.size(); ++i) {
            const Arc exact = Arc::sample(p.boundary, o.nodes, [&](double t) {
                return make_vector({example31_solution(zetas[i], 0.0, 1.0, t)});
            });
            const double err = (reports[i]->arc.values() - exact.values()).lpNorm<Eigen::Infinity>();
            checks.push_back({"example-3.1 zeta=(" + format_double(zetas[i][0]) + "," + format_double(zetas[i][1]) + ")",
                              err <= 1e-4 && reports[i]->converged, "max node error " + fmt(err)});
            artifacts["example-3.1"].push_back({{"zeta", vector_json(zetas[i])}, {"max_node_error", err}});
            write_file((std::filesystem::path(dir) / ("example31_" + std::to_string(i) + ".csv")).string(),
                       arc_csv(reports[i]->arc));
        }
    }

    // example-4 closed forms and infimizers under C1 and C2.
    {
        const ProblemConfig cfg = builtin_config("example-4");
        const Problem p = instantiate(cfg);
        const std::vector<double> z1s{0.0, 0.25, 0.5, 0.75, 1.0};
        std::vector<double> errors(z1s.size());
        SolveOptions o;
        o.nodes = 200;
        o.seed = seed;
        parallel_for(z1s.size(), [&](std::size_t i) {
            const SolveReport r = solve_zeta(p.L, make_vector({z1s[i], 1 - z1s[i]}), p.boundary, o);
            const Arc exact = Arc::sample(p.boundary, o.nodes, [&](double t) {
                return make_vector({example4_solution(z1s[i], t)});
            });
            errors[i] = r.converged ? (r.arc.values() - exact.values()).lpNorm<Eigen::Infinity>() : kInfinity;
        });
        for (std::size_t i = 0; i < z1s.size(); ++i) {
            checks.push_back({"example-4 zeta1=" + format_double(z1s[i]), errors[i] <= 1e-4,
                              "max node error " + fmt(errors[i])});
            artifacts["example-4"].push_back({{"zeta1", z1s[i]}, {"max_node_error", errors[i]}});
        }

        double c1_end = 0.0, c2_end = 0.0;
        for (const char* variant : {"example-4/C1", "example-4/C2"}) {
            ProblemConfig vc = builtin_config(variant);
            vc.solver.samples = 11;
            vc.solver.base = BaseParameterization::sum_one;
            vc.solver.seed = seed;
            const Problem vp = instantiate(vc);
            InfimizerOptions io;
            io.solve = solve_options(vc, Common{});
            const InfimizerSet M = build_infimizer(vp.L, vp.cone, vp.boundary, make_base(vp, vc), io);
            const double end = M.base.samples.back()[0];
            (std::string(variant) == "example-4/C1" ? c1_end : c2_end) = end;
            const auto trials = random_trial_arcs(M.boundary, vc.solver.nodes, 50, seed);
            const CertificationReport cert = certify_infimizer(M, trials, vc.solver.cert_tol);
            checks.push_back({std::string(variant) + " certification", cert.passed && M.all_converged(),
                              std::to_string(cert.failures) + " of 50 trials outside"});
            const std::string tag = std::string(variant) == "example-4/C1" ? "C1" : "C2";
            write_file((std::filesystem::path(dir) / ("example4_front_" + tag + ".csv")).string(),
                       front_csv(M.image_inf, 1.0));
            artifacts["example-4-" + tag] = {{"base_end_zeta1", end}, {"certification_failures", cert.failures}};
        }
        const double expected = (3 + std::sqrt(3.0)) / 2;
        checks.push_back({"example-4 base ranges", std::abs(c1_end - 1.0) < 1e-12 && std::abs(c2_end - expected) < 1e-12,
                          "C1 ends at " + format_double(c1_end) + ", C2 at " + format_double(c2_end)});
    }

    // Quadratic isoperimetric problem: y = 6c t(1-t), multiplier 24c. At N = 1000 the
    // discrete multiplier is 24c / (1 - h^2), so the thresholds follow h^2.
    {
        const ProblemConfig cfg = builtin_config("quadratic-isoperimetric", {{"c", 1.0}});
        const Problem p = instantiate(cfg);
        ConstrainedOptions o = constrained_options(cfg, p);
        o.solve.nodes = 1000;
        const MultiplierReport r = solve_constrained_zeta(p.L, *p.constraint, make_vector({1.0}), p.boundary, o);
        const Arc exact = Arc::sample(p.boundary, o.solve.nodes, [](double t) { return make_vector({6 * t * (1 - t)}); });
        const double err = (r.arc.values() - exact.values()).lpNorm<Eigen::Infinity>();
        const double lerr = std::abs(r.lambda[0] - 24.0);
        checks.push_back({"quadratic-isoperimetric c=1", r.success && err <= 1e-5 && lerr <= 1e-4,
                          "arc error " + fmt(err) + ", multiplier error " + fmt(lerr)});
        artifacts["quadratic-isoperimetric"] = {{"lambda", r.lambda[0]}, {"max_node_error", err}};
    }

    // Building problem against the closed form.
    {
        const ProblemConfig cfg = builtin_config("building");
        const Problem p = instantiate(cfg);
        const std::vector<double> z1s{0.0, 0.5, 1.0};
        std::vector<std::optional<MultiplierReport>> reports(z1s.size());
        std::vector<BuildingSolution> exact;
        for (double z1 : z1s) exact.push_back(building_closed_form(*p.building, make_vector({z1, 1 - z1})));
        const ConstrainedOptions o = constrained_options(cfg, p);
        parallel_for(z1s.size(), [&](std::size_t i) {
            reports[i] = solve_constrained_zeta(p.L, *p.constraint, exact[i].zeta, p.boundary, o);
        });
        for (std::size_t i = 0; i < z1s.size(); ++i) {
            const MultiplierReport& r = *reports[i];
            const double err = (r.arc.values() - exact[i].arc(o.solve.nodes).values()).lpNorm<Eigen::Infinity>();
            const double cres = std::abs(r.constraint_residual[0]);
            checks.push_back({"building zeta1=" + format_double(z1s[i]),
                              r.success && err <= 1e-4 && cres <= 1e-8 * (1 + p.constraint_scale),
                              "max node error " + fmt(err) + ", lambda " + format_double(exact[i].lambda)});
            artifacts["building"].push_back(
                {{"zeta1", z1s[i]}, {"lambda_closed_form", exact[i].lambda}, {"max_node_error", err}});
            write_file((std::filesystem::path(dir) / ("building_" + std::to_string(i) + ".csv")).string(),
                       arc_csv(r.arc));
        }
    }

    write_file((std::filesystem::path(dir) / "selftest.json").string(), artifacts.dump(2) + "\n");
    int failed = 0;
    for (const auto& ch : checks) {
        std::printf("%-4s  %-40s  %s\n", ch.pass ? "PASS" : "FAIL", ch.name.c_str(), ch.detail.c_str());
        failed += !ch.pass;
    }
    std::printf("%zu checks, %d failed\n", checks.size(), failed);
    return failed ? kExitCheckFailed : 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Set-valued variational problems: scalarized solves, infimizers, certification"};
    app.require_subcommand(1);
    Common c;
    int zeta_samples = 11;
    bool numeric = false;

    auto add_problem = [&](CLI::App* s) {
        s->add_option("--problem", c.problem, "problem JSON file or built-in name (e.g. example-4/C2)");
        s->add_option("--params", c.params, "built-in parameters: inline JSON object or JSON file");
        s->add_option("--nodes", c.nodes, "interior grid nodes");
        s->add_option("--seed", c.seed, "random seed");
    };

    auto* solve = app.add_subcommand("solve", "zeta-solution of one scalarized problem");
    add_problem(solve);
    solve->add_option("--zeta", c.zeta, "dual direction z1,...,zd")->required();
    solve->add_option("--out", c.out, "arc CSV");
    solve->add_option("--report", c.report, "report JSON (stdout when absent)");
    solve->add_option("--tol", c.tol, "gradient tolerance");

    auto* csolve = app.add_subcommand("constrained-solve", "zeta-solution under the integral constraint");
    add_problem(csolve);
    csolve->add_option("--zeta", c.zeta, "dual direction z1,...,zd")->required();
    csolve->add_option("--out", c.out, "arc CSV");
    csolve->add_option("--report", c.report, "report JSON (stdout when absent)");

    auto* sweep = app.add_subcommand("sweep", "solve over a dual base and build the infimizer");
    add_problem(sweep);
    sweep->add_option("--samples", c.samples, "dual base samples");
    sweep->add_option("--out", c.out, "infimizer JSON")->default_str("infimizer.json");
    sweep->add_option("--front", c.report, "also write the boundary polyline CSV (d = 2)");
    sweep->add_option("--tol", c.tol, "gradient tolerance");
    sweep->add_flag("--staircase", c.staircase, "keep the union of translated cones instead of its convex hull");

    auto* certify = app.add_subcommand("certify", "membership test of random trial arcs");
    certify->add_option("--infimizer", c.infimizer, "infimizer JSON written by sweep")->required();
    certify->add_option("--trials", c.trials, "number of trial arcs");
    certify->add_option("--seed", c.seed, "random seed");
    certify->add_option("--tol", c.tol, "membership tolerance");
    certify->add_option("--out", c.out, "certification report JSON");

    auto* boundary = app.add_subcommand("boundary", "boundary polyline of the image infimum (d = 2)");
    add_problem(boundary);
    boundary->add_option("--infimizer", c.infimizer, "infimizer JSON written by sweep");
    boundary->add_option("--samples", c.samples, "dual base samples when sweeping");
    boundary->add_option("--out", c.out, "polyline CSV")->default_str("front.csv");
    boundary->add_option("--extension", c.extension, "length of the unbounded end rays");
    boundary->add_flag("--staircase", c.staircase, "union of translated cones instead of its convex hull");

    auto* building = app.add_subcommand("building", "closed-form shapes of the building problem");
    building->add_option("--params", c.params, "building parameters: inline JSON object or JSON file");
    building->add_option("--zeta-samples", zeta_samples, "number of zeta1 values in [0, 1]");
    building->add_option("--nodes", c.nodes, "interior grid nodes");
    building->add_option("--out", c.out, "output directory")->default_str("shapes");
    building->add_flag("--numeric", numeric, "also run the constrained solver and report errors");

    auto* selftest = app.add_subcommand("selftest", "closed-form example suite");
    selftest->add_option("--seed", c.seed, "random seed");
    selftest->add_option("--out", c.out, "artifact directory")->default_str("selftest_out");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return run_solve(c, false);
        if (csolve->parsed()) return run_solve(c, true);
        if (sweep->parsed()) return run_sweep(c);
        if (certify->parsed()) return run_certify(c);
        if (boundary->parsed()) return run_boundary(c);
        if (building->parsed()) return run_building(c, zeta_samples, numeric);
        if (selftest->parsed()) return run_selftest(c);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error in " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitRuntime;
}
