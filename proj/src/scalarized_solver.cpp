#include "varlat/scalarized_solver.hpp"

#include "varlat/functional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace varlat {

namespace {

Vector random_box(std::mt19937_64& rng, int n, double box)
{
    std::uniform_real_distribution<double> u(-box, box);
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = u(rng);
    return v;
}

Vector random_direction(std::mt19937_64& rng, int n)
{
    std::normal_distribution<double> g;
    Vector v(n);
    do {
        for (int i = 0; i < n; ++i) v[i] = g(rng);
    } while (v.norm() < 1e-8);
    return v.normalized();
}

} // namespace

SolveReport solve_zeta(const Lagrangian& L, const Vector& zeta, const Boundary& boundary, const SolveOptions& options)
{
    if (zeta.size() != L.criteria()) throw Error("zeta has the wrong dimension");
    if (zeta.isZero(0.0)) throw Error("zeta must be nonzero");
    if (boundary.state_dim() != L.state_dim() || boundary.end.size() != boundary.start.size())
        throw Error("boundary values do not match the Lagrangian state dimension");
    if (options.nodes < 1) throw Error("nodes must be positive");

    Arc start = options.initial ? *options.initial : Arc::straight(boundary, options.nodes);
    if (start.interior() != options.nodes || start.state_dim() != L.state_dim())
        throw Error("initial arc does not match the requested grid");

    const int n = L.state_dim();
    const Grid grid = start.grid();
    Objective objective = [&](const Vector& x, Vector& g) {
        const Arc y = start.with_interior(x);
        g = grad_Jzeta(L, zeta, y);
        return functional_Jzeta(L, zeta, y);
    };
    QuasiNewtonOptions qn;
    qn.gtol = options.gtol;
    qn.max_iterations = options.max_iterations;
    qn.memory = options.memory;
    const auto result =
        minimize_lbfgs(objective, start.interior_vector(), qn, stiffness_preconditioner(grid.interior, n, grid.step()));

    Arc arc = start.with_interior(result.x);
    SolveReport report{zeta, arc, functional_J(L, arc)};
    report.scalar_value = zeta.dot(report.J_value);
    report.iterations = result.iterations;
    report.gradient_norm = result.gradient.lpNorm<Eigen::Infinity>();
    report.max_weak_residual = max_hat_residual(L, zeta, arc);
    report.converged = result.converged && report.max_weak_residual <= options.rtol;
    report.status = result.status;
    if (report.converged && options.convexity_samples > 0) {
        const Lagrangian scalar(
            1, n, [&](double t, const Vector& y, const Vector& p) { return Vector::Constant(1, L.scalarized(zeta, t, y, p)); });
        report.global =
            check_convexity(scalar, Cone::orthant(1), boundary.a, boundary.b, options.convexity_samples, options.seed)
                .convex;
        if (!report.global) report.status += "; sampled convexity failed, minimizer may be local";
    }
    return report;
}

CoercivityReport check_coercivity(const Lagrangian& L, const DualBase& base, double a, double b, int sample_budget,
                                  const CoercivityOptions& options)
{
    const int n = L.state_dim();
    const double q = options.exponent;
    std::vector<double> levels{0.0};
    for (int k = 0; k < options.p_levels; ++k) levels.push_back(std::pow(2.0, k) * options.p_max / std::pow(2.0, options.p_levels - 1));

    // Sample points are shared by every zeta so the fits are comparable.
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> ut(a, b);
    struct Sample {
        double t;
        Vector y; // unit box, scaled per test
        Vector dir;
    };
    std::vector<Sample> samples;
    for (double t : {a, b}) {
        samples.push_back({t, Vector::Zero(n), Vector::Unit(n, 0)});
        samples.push_back({t, Vector::Zero(n), -Vector::Unit(n, 0)});
        for (double s : {-1.0, 1.0}) {
            samples.push_back({t, Vector::Constant(n, s), Vector::Unit(n, 0)});
            samples.push_back({t, Vector::Constant(n, s), -Vector::Unit(n, 0)});
        }
    }
    for (int i = 0; i < sample_budget; ++i) samples.push_back({ut(rng), random_box(rng, n, 1.0), random_direction(rng, n)});

    auto min_level = [&](const Vector& zeta, double P, double Y) {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& s : samples) m = std::min(m, L.scalarized(zeta, s.t, Vector(Y * s.y), Vector(P * s.dir)));
        return m;
    };

    CoercivityReport report;
    report.all_coercive = true;
    report.worst_margin = std::numeric_limits<double>::infinity();
    for (const Vector& zeta : base.samples) {
        CoercivityEntry e;
        e.zeta = zeta;
        std::vector<double> m1, m2;
        for (double P : levels) {
            m1.push_back(min_level(zeta, P, options.y_box));
            m2.push_back(min_level(zeta, P, 2.0 * options.y_box));
        }
        const std::size_t top = levels.size() - 1;
        const std::size_t half = levels.size() / 2;
        double alpha = std::numeric_limits<double>::infinity();
        for (std::size_t k = std::max<std::size_t>(half, 1); k <= top; ++k)
            alpha = std::min(alpha, m1[k] / std::pow(levels[k], q));
        const double last = m1[top] / std::pow(levels[top], q);
        const double prev = m1[top - 1] / std::pow(levels[top - 1], q);
        if (!(alpha > 0) || last < 0.75 * prev) alpha = 0.0;
        e.alpha = alpha;
        double beta1 = 0.0, beta2 = 0.0;
        for (std::size_t k = 0; k <= top; ++k) {
            beta1 = std::max(beta1, alpha * std::pow(levels[k], q) - m1[k]);
            beta2 = std::max(beta2, alpha * std::pow(levels[k], q) - m2[k]);
        }
        e.beta = beta1;
        e.beta_bounded = beta2 <= 1.5 * beta1 + 1e-9 * (1.0 + std::abs(beta1));
        e.q_fit = (m1[top] > 0 && m1[top - 1] > 0) ? std::log2(m1[top] / m1[top - 1]) / std::log2(levels[top] / levels[top - 1])
                                                   : std::numeric_limits<double>::quiet_NaN();
        e.coercive = e.alpha > 0 && e.beta_bounded;
        report.all_coercive = report.all_coercive && e.coercive;
        report.worst_margin = std::min(report.worst_margin, e.coercive ? e.alpha : 0.0);
        report.entries.push_back(std::move(e));
    }
    if (report.entries.empty()) report.worst_margin = 0.0;
    if (!report.all_coercive)
        report.note = "coercivity not observed for some zeta; existence may still hold (Poincare-type argument not checked)";
    return report;
}

ConvexityReport check_convexity(const Lagrangian& L, const Cone& cone, double a, double b, int sample_budget,
                                std::uint64_t seed, double box)
{
    if (cone.dim() != L.criteria()) throw Error("cone dimension does not match the Lagrangian");
    const int n = L.state_dim();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ut(a, b), us(0.05, 0.95);
    ConvexityReport report;
    report.worst_defect = Vector::Zero(L.criteria());
    for (int i = 0; i < sample_budget; ++i) {
        const double t = ut(rng);
        const Vector y1 = random_box(rng, n, box), p1 = random_box(rng, n, box);
        const Vector y2 = random_box(rng, n, box), p2 = random_box(rng, n, box);
        const double s = us(rng);
        const Vector l1 = L(t, y1, p1), l2 = L(t, y2, p2);
        const Vector lm = L(t, Vector(s * y1 + (1 - s) * y2), Vector(s * p1 + (1 - s) * p2));
        const Vector defect = s * l1 + (1 - s) * l2 - lm;
        const double scale = 1.0 + l1.cwiseAbs().maxCoeff() + l2.cwiseAbs().maxCoeff();
        const double dist = distance(cone, defect);
        ++report.samples;
        if (dist > 1e-9 * scale) {
            ++report.violations;
            report.convex = false;
        }
        if (dist >= report.worst_distance) {
            report.worst_distance = dist;
            report.worst_defect = defect;
        }
        if (defect.norm() <= 1e-12 * scale) ++report.nonstrict;
    }
    return report;
}

} // namespace varlat
