// Acceptance suite: one line per criterion, exit status 1 if any criterion fails.

#include "oracles.hpp"

#include "varlat/functional.hpp"
#include "varlat/io.hpp"
#include "varlat/parallel.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

using namespace varlat;

#ifndef VARLAT_CLI_PATH
#error "VARLAT_CLI_PATH must point at the command-line binary"
#endif

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
        }
    }
    void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string sci(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

const Boundary unit{0, 1, make_vector({0}), make_vector({1})};

double max_node_error(const Arc& y, const std::function<double(double)>& f)
{
    double e = 0;
    for (int i = 0; i < y.grid().nodes(); ++i) e = std::max(e, std::abs(y.values()(i, 0) - f(y.grid().t(i))));
    return e;
}

SolveOptions with_nodes(int N)
{
    SolveOptions o;
    o.nodes = N;
    return o;
}

Lagrangian ex31() { return builtin_lagrangian("example-3.1", nlohmann::json::object()); }
Lagrangian ex4() { return builtin_lagrangian("example-4", nlohmann::json::object()); }

InfimizerSet infimizer_for(const std::string& name, int samples, int N = 200)
{
    const Problem p = instantiate(builtin_config(name));
    InfimizerOptions o;
    o.solve = with_nodes(N);
    return build_infimizer(p.L, p.cone, p.boundary, base_samples(dual(p.cone), BaseParameterization::automatic, samples),
                           o);
}

// 1. example-3.1 closed forms with second-order refinement.
Outcome criterion1()
{
    Outcome out;
    const std::vector<std::pair<Vector, std::function<double(double)>>> cases{
        {make_vector({0, 1}), [](double t) { return t * t * t / 6 + 5 * t / 6; }},
        {make_vector({0.5, 0.5}), [](double t) { return t * t * t / 12 + 11 * t / 12; }},
        {make_vector({1, 0}), [](double t) { return t; }}};
    double w200 = 0, w400 = 0;
    for (const auto& [z, f] : cases) {
        const SolveReport a = solve_zeta(ex31(), z, unit, with_nodes(200));
        const SolveReport b = solve_zeta(ex31(), z, unit, with_nodes(400));
        out.require(a.converged && b.converged, "convergence");
        w200 = std::max(w200, max_node_error(a.arc, f));
        w400 = std::max(w400, max_node_error(b.arc, f));
    }
    out.require(w200 <= 1e-4, "N=200 error " + sci(w200));
    out.require(w400 <= 2.5e-5, "N=400 error " + sci(w400));
    out.note("max node error " + sci(w200) + " (N=200), " + sci(w400) + " (N=400)");
    return out;
}

// 2. example-4 closed forms and the general example-3.1 formula for random zeta.
Outcome criterion2()
{
    Outcome out;
    double w4 = 0;
    for (double z1 : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const SolveReport r = solve_zeta(ex4(), make_vector({z1, 1 - z1}), unit, with_nodes(200));
        out.require(r.converged, "convergence at zeta1=" + format_double(z1));
        w4 = std::max(w4, max_node_error(r.arc, [&](double t) { return oracle::example4(z1, t); }));
    }
    out.require(w4 <= 1e-4, "example-4 error " + sci(w4));
    std::mt19937_64 rng(0);
    std::uniform_real_distribution<double> U(0, 1), AB(-1, 1);
    double w31 = 0;
    for (int k = 0; k < 10; ++k) {
        const double z1 = U(rng), z2 = U(rng), A = AB(rng), B = AB(rng);
        const Boundary bd{0, 1, make_vector({A}), make_vector({B})};
        const SolveReport r = solve_zeta(ex31(), make_vector({z1, z2}), bd, with_nodes(200));
        w31 = std::max(w31, max_node_error(r.arc, [&](double t) { return oracle::example31(z1, z2, A, B, t); }));
    }
    out.require(w31 <= 1e-4, "general formula error " + sci(w31));
    out.note("example-4 error " + sci(w4) + ", random-zeta example-3.1 error " + sci(w31));
    return out;
}

// 3. Positive scaling invariance.
Outcome criterion3()
{
    Outcome out;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(0, 1);
    double worst = 0;
    for (int k = 0; k < 10; ++k) {
        const Vector z = make_vector({U(rng), U(rng)});
        const Lagrangian L = k % 2 ? ex31() : ex4();
        const SolveReport base = solve_zeta(L, z, unit, with_nodes(200));
        for (double s : {0.5, 2.0, 10.0}) {
            const SolveReport r = solve_zeta(L, s * z, unit, with_nodes(200));
            worst = std::max(worst, (r.arc.values() - base.arc.values()).lpNorm<Eigen::Infinity>());
        }
    }
    out.require(worst <= 1e-6, "scaling deviation " + sci(worst));
    out.note("max node deviation " + sci(worst));
    return out;
}

// 4. phi(v) >= phi(0) - tol at every base zeta of certified infimizers.
Outcome criterion4()
{
    Outcome out;
    std::mt19937_64 rng(2);
    std::normal_distribution<double> G;
    double worst = kInfinity;
    for (const char* name : {"example-3.1", "example-4"}) {
        const InfimizerSet M = infimizer_for(name, 21);
        const CertificationReport cert = certify_infimizer(M, random_trial_arcs(M.boundary, 200, 50, 0));
        out.require(cert.passed && M.all_converged(), std::string(name) + " certification");
        for (const auto& e : M.entries) {
            const double v0 = phi(M, e.zeta, Perturbation::zero(e.arc.grid(), 1));
            for (int k = 0; k < 50; ++k) {
                const Perturbation v = random_perturbation(e.arc.grid(), 1, rng) * G(rng);
                const double slack = phi(M, e.zeta, v) - v0 + 1e-7 * (1 + std::abs(v0));
                worst = std::min(worst, slack);
            }
        }
    }
    out.require(worst >= 0, "Lemma property, worst slack " + sci(worst));
    out.note("2 x 21 base zetas x 50 perturbations, worst slack " + sci(worst));
    return out;
}

// 5. Set-valued Euler-Lagrange equation.
Outcome criterion5()
{
    Outcome out;
    std::mt19937_64 rng(3);
    double worst_offset = 0;
    int generators = 0, excluded = 0;
    const double pi = std::numbers::pi;
    for (const char* name : {"example-4/C1", "example-4/C2", "example-4/C3"}) {
        const InfimizerSet M = infimizer_for(name, 41);
        const Cone& C = M.cone;
        for (const auto& e : M.entries) {
            for (int k = 0; k < 20; ++k) {
                const Perturbation v = random_perturbation(e.arc.grid(), 1, rng);
                worst_offset = std::max(worst_offset, std::abs(support(set_derivative(M, e.zeta, v), e.zeta)));
            }
        }
        // Intersection of the sampled half-spaces for one direction v.
        const Perturbation v = random_perturbation(M.entries[0].arc.grid(), 1, rng);
        std::vector<UpperSet> hs;
        for (const auto& e : M.entries) hs.push_back(set_derivative(M, e.zeta, v));
        const UpperSet meet = lattice_sup(hs);
        for (Eigen::Index g = 0; g < C.generator_count(); ++g) {
            const bool in = membership(meet, C.generator(g), 1e-5);
            out.require(in, std::string(name) + " generator outside");
            generators += in;
        }
        std::uniform_real_distribution<double> U(-pi, pi);
        int tested = 0;
        while (tested < 20) {
            const double th = U(rng);
            const Vector z = make_vector({std::cos(th), std::sin(th)});
            if (distance(C, z) < 0.1) continue;
            ++tested;
            const bool out_of_meet = !membership(meet, z, 1e-5);
            out.require(out_of_meet, std::string(name) + " exterior point kept");
            excluded += out_of_meet;
        }
    }
    out.require(worst_offset <= 1e-5, "offset " + sci(worst_offset));
    out.note("worst |offset| " + sci(worst_offset) + ", generators kept " + std::to_string(generators) +
             ", exterior points excluded " + std::to_string(excluded) + "/60");
    return out;
}

// 6. Certification under the three cones, and failure when an end of the base is removed.
Outcome criterion6()
{
    Outcome out;
    std::string summary;
    for (const char* name : {"example-4/C1", "example-4/C2", "example-4/C3"}) {
        const InfimizerSet M = infimizer_for(name, 21);
        const auto trials = random_trial_arcs(M.boundary, 200, 50, 6);
        const CertificationReport full = certify_infimizer(M, trials, 1e-6);
        out.require(full.passed, std::string(name) + " full base: " + std::to_string(full.failures) + " failures");

        std::vector<SolveReport> kept(M.entries.begin(), M.entries.end() - 1);
        DualBase b = M.base;
        b.samples.pop_back();
        const InfimizerSet cut = assemble_infimizer(M.L, M.cone, M.boundary, b, kept, {});
        std::vector<Arc> with_end = trials;
        with_end.push_back(M.entries.back().arc);
        const CertificationReport r = certify_infimizer(cut, with_end, 1e-6);
        bool reported = false;
        for (const auto& t : r.trials)
            if (!t.member) reported |= t.witness.zeta.size() == 2 && t.witness.margin < 0;
        out.require(r.failures >= 1 && reported, std::string(name) + " missing endpoint not detected");
        const Vector removed = M.entries.back().zeta.normalized();
        double cosang = -1;
        for (const auto& t : r.trials)
            if (!t.member) cosang = std::max(cosang, t.witness.zeta.normalized().dot(removed));
        summary += std::string(summary.empty() ? "" : ", ") + name + ": 0/50 outside, " + std::to_string(r.failures) +
                   " outside without the end (separating zeta at cos " + sci(cosang) + " to the removed one)";
    }
    out.note(summary);
    return out;
}

// 7. Lattice laws and the zeta-difference.
Outcome criterion7()
{
    Outcome out;
    const Cone R2 = Cone::orthant(2);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-2, 2);
    std::uniform_int_distribution<int> K(1, 4), M(1, 4);
    long checks = 0, violations = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const bool conv = trial % 2;
        std::vector<UpperSet> col;
        std::vector<Eigen::Vector2d> all;
        for (int m = M(rng); m > 0; --m) {
            std::vector<Vector> p;
            for (int k = K(rng); k > 0; --k) {
                p.push_back(make_vector({U(rng), U(rng)}));
                all.emplace_back(p.back()[0], p.back()[1]);
            }
            col.push_back(UpperSet::generated(R2, p, conv));
        }
        const UpperSet inf = lattice_inf(col), sup = lattice_sup(col);
        for (int i = 0; i < 50; ++i)
            for (int j = 0; j < 50; ++j) {
                const Vector z = make_vector({-3 + 6.0 * i / 49, -3 + 6.0 * j / 49});
                const Eigen::Vector2d z2(z[0], z[1]);
                bool any = false, every = true;
                for (const auto& s : col) {
                    const bool in = membership(s, z);
                    any |= in;
                    every &= in;
                }
                const bool in_inf = membership(inf, z), in_sup = membership(sup, z);
                // Lower bound and greatest: inf equals the union (F) or its closed hull (G).
                const bool strict = conv ? oracle::in_orthant_hull(all, z2, -1e-7) : oracle::in_orthant_staircase(all, z2, -1e-7);
                const bool loose = conv ? oracle::in_orthant_hull(all, z2, 1e-7) : oracle::in_orthant_staircase(all, z2, 1e-7);
                violations += (any && !in_inf) + (strict && !in_inf) + (!loose && in_inf);
                // Upper bound and least: sup equals the intersection.
                violations += (in_sup && !every) + (every && !in_sup);
                checks += 5;
            }
    }
    out.require(violations == 0, std::to_string(violations) + " lattice violations");

    long zchecks = 0, zviol = 0;
    std::normal_distribution<double> N;
    std::uniform_real_distribution<double> W(0, 1);
    for (int trial = 0; trial < 100; ++trial) {
        const double w = W(rng);
        const Vector zeta = make_vector({w, 1 - w});
        std::vector<Vector> pa{make_vector({N(rng), N(rng)}), make_vector({N(rng), N(rng)})};
        std::vector<Vector> pb{make_vector({N(rng), N(rng)}), make_vector({N(rng), N(rng)}), make_vector({N(rng), N(rng)})};
        const UpperSet A = UpperSet::generated(R2, pa, trial % 2), B = UpperSet::generated(R2, pb, trial % 2);
        const UpperSet D = zeta_difference(A, B, zeta);
        for (int s = 0; s < 20; ++s) {
            const Vector z = make_vector({2 * N(rng), 2 * N(rng)});
            // z + B in A (+) H+(zeta): every generator of z + B has zeta . (z + b) >= min_a zeta . a.
            double min_a = kInfinity, min_b = kInfinity;
            for (const auto& a : pa) min_a = std::min(min_a, zeta.dot(a));
            for (const auto& b : pb) min_b = std::min(min_b, zeta.dot(b));
            const double margin = zeta.dot(z) + min_b - min_a;
            if (std::abs(margin) < 1e-9) continue;
            ++zchecks;
            zviol += membership(D, z) != (margin >= 0);
        }
    }
    out.require(zviol == 0, std::to_string(zviol) + " zeta-difference mismatches");
    out.note(std::to_string(checks) + " lattice checks, " + std::to_string(zchecks) + " zeta-difference checks, " +
             std::to_string(violations + zviol) + " violations");
    return out;
}

// 8. Gradients against central differences, and weak residuals at certified solutions.
Outcome criterion8()
{
    Outcome out;
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> U(0.05, 1);
    std::normal_distribution<double> G;
    double worst = 0;
    for (const auto& name : builtin_names()) {
        const Problem p = instantiate(builtin_config(name));
        const int d = p.L.criteria();
        for (int k = 0; k < 100; ++k) {
            Vector zeta(d);
            for (int i = 0; i < d; ++i) zeta[i] = U(rng);
            const Arc line = Arc::straight(p.boundary, 60);
            const Arc y = line + random_perturbation(line.grid(), p.boundary.state_dim(), rng) * G(rng);
            const Perturbation v = random_perturbation(y.grid(), y.state_dim(), rng);
            const double fd = oracle::directional_fd([&](double s) { return functional_Jzeta(p.L, zeta, y + v * s); });
            const double an = grad_Jzeta(p.L, zeta, y).dot(v.interior_vector());
            worst = std::max(worst, std::abs(fd - an) / std::abs(an));
        }
    }
    out.require(worst <= 1e-5, "gradient relative error " + sci(worst));
    double residual = 0;
    int solutions = 0;
    for (const char* name : {"example-3.1", "example-4/C1", "example-4/C2", "example-4/C3"}) {
        const InfimizerSet M = infimizer_for(name, 21);
        if (!certify_infimizer(M, random_trial_arcs(M.boundary, 200, 20, 8)).passed) {
            out.require(false, std::string(name) + " not certified");
            continue;
        }
        for (const auto& e : M.entries) {
            residual = std::max(residual, max_hat_residual(M.L, e.zeta, e.arc));
            ++solutions;
        }
    }
    out.require(residual <= 1e-6, "weak residual " + sci(residual));
    out.note("gradient relative error " + sci(worst) + " (400 pairs), weak residual " + sci(residual) + " over " +
             std::to_string(solutions) + " certified solutions");
    return out;
}

// 9. Isoperimetric oracles.
Outcome criterion9()
{
    Outcome out;
    // Quadratic problem. The discrete multiplier is 24c / (1 - h^2), so N = 10000 brings the
    // discretization error below 1e-6 for |c| <= 2.
    double lam_err = 0, arc_err = 0;
    for (double c : {0.1, 1.0, -2.0}) {
        const Problem p = instantiate(builtin_config("quadratic-isoperimetric", {{"c", c}}));
        ConstrainedOptions o;
        o.solve.nodes = 10000;
        o.constraint_scale = p.constraint_scale;
        const MultiplierReport r = solve_constrained_zeta(p.L, *p.constraint, make_vector({1}), p.boundary, o);
        out.require(r.success, "quadratic c=" + format_double(c) + ": " + r.status);
        lam_err = std::max(lam_err, std::abs(r.lambda[0] - 24 * c));
        arc_err = std::max(arc_err, max_node_error(r.arc, [&](double t) { return 6 * c * t * (1 - t); }));
    }
    out.require(lam_err <= 1e-6, "multiplier error " + sci(lam_err));
    out.require(arc_err <= 1e-6, "parabola error " + sci(arc_err));

    // Building problem with the default parameters.
    const Problem p = instantiate(builtin_config("building"));
    const oracle::Building ob;
    const std::vector<double> z1s{0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<std::optional<MultiplierReport>> reports(z1s.size());
    ConstrainedOptions o;
    o.solve.nodes = 400;
    o.constraint_scale = p.constraint_scale;
    parallel_for(z1s.size(), [&](std::size_t i) {
        reports[i] = solve_constrained_zeta(p.L, *p.constraint, make_vector({z1s[i], 1 - z1s[i]}), p.boundary, o);
    });
    double node_err = 0, closed_res = 0, numeric_res = 0;
    bool ends = true;
    for (std::size_t i = 0; i < z1s.size(); ++i) {
        const MultiplierReport& r = *reports[i];
        out.require(r.success, "building zeta1=" + format_double(z1s[i]) + ": " + r.status);
        const double lam = ob.lambda(z1s[i]);
        const double A1 = ob.A1(z1s[i]), A2 = ob.A2(z1s[i]);
        closed_res = std::max(closed_res, std::abs(ob.area(z1s[i], lam) - ob.V / ob.h));
        const BuildingSolution s = building_closed_form(*p.building, r.zeta);
        closed_res = std::max(closed_res, std::abs(building_volume(s.A1, s.A2, ob.a, s.lambda) - ob.V / ob.h));
        numeric_res = std::max(numeric_res, std::abs(r.constraint_residual[0]));
        for (int k = 0; k < r.arc.grid().nodes(); ++k) {
            const double t = r.arc.grid().t(k);
            node_err = std::max({node_err, std::abs(r.arc.values()(k, 0) - oracle::Building::curve(A1, lam, ob.a, t)),
                                 std::abs(r.arc.values()(k, 1) + oracle::Building::curve(A2, lam, ob.a, t))});
        }
        ends &= r.arc.node(0).isZero(0.0) && r.arc.node(r.arc.grid().nodes() - 1).isZero(0.0);
        ends &= s.y1(-ob.a) == 0.0 && s.y1(ob.a) == 0.0 && s.y2(-ob.a) == 0.0 && s.y2(ob.a) == 0.0;
    }
    out.require(node_err <= 1e-4, "building node error " + sci(node_err));
    out.require(closed_res <= 1e-8, "volume equation residual " + sci(closed_res));
    out.require(numeric_res <= 1e-8, "numeric constraint residual " + sci(numeric_res));
    out.require(ends, "boundary values");
    out.note("quadratic: multiplier error " + sci(lam_err) + " against +24c, parabola error " + sci(arc_err) +
             "; building: node error " + sci(node_err) + ", volume residual " + sci(closed_res) + " (closed form), " +
             sci(numeric_res) + " (numeric), ends exactly zero");
    return out;
}

// 10. Determinism of the self-test artifacts.
Outcome criterion10()
{
    namespace fs = std::filesystem;
    Outcome out;
    const fs::path root = fs::temp_directory_path() / "varlat_acceptance_determinism";
    fs::remove_all(root);
    fs::create_directories(root);
    for (const char* run : {"a", "b"}) {
        const std::string cmd = "cd '" + root.string() + "' && '" VARLAT_CLI_PATH "' selftest --seed 0 --out " + run +
                                " > " + run + ".stdout 2>&1";
        const int status = std::system(cmd.c_str());
        out.require(status == 0, std::string("selftest run ") + run + " exit status");
    }
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    };
    int files = 0;
    for (const auto& entry : fs::directory_iterator(root / "a")) {
        const fs::path other = root / "b" / entry.path().filename();
        out.require(fs::exists(other) && slurp(entry.path()) == slurp(other), entry.path().filename().string() + " differs");
        ++files;
    }
    for (const auto& entry : fs::directory_iterator(root / "b")) out.require(fs::exists(root / "a" / entry.path().filename()), "extra file");
    out.require(slurp(root / "a.stdout") == slurp(root / "b.stdout"), "stdout differs");
    out.require(files > 0, "no artifacts");
    out.note(std::to_string(files) + " artifacts and the printed table identical across two runs");
    return out;
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, Outcome (*)()>> criteria{
        {"closed-form zeta-solutions, first example", criterion1},
        {"closed-form zeta-solutions, three-cone example", criterion2},
        {"positive scaling invariance", criterion3},
        {"zero minimizes phi at certified infimizers", criterion4},
        {"set-valued Euler-Lagrange equation", criterion5},
        {"infimizer certification", criterion6},
        {"lattice laws and zeta-difference", criterion7},
        {"gradients and weak residuals", criterion8},
        {"isoperimetric oracles", criterion9},
        {"selftest determinism", criterion10},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %2zu %s  %s (%.1fs): %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    secs, o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
