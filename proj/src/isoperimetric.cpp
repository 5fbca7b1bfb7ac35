#include "varlat/isoperimetric.hpp"

#include "varlat/functional.hpp"
#include "varlat/parallel.hpp"

#include <Eigen/SVD>

#include <numbers>
#include <sstream>

namespace varlat {

IntegralConstraint::IntegralConstraint(int count, int state_dim, GFn g, GradFn grad, std::string name)
    : count_(count), state_dim_(state_dim), name_(std::move(name)), g_(std::move(g)), grad_(std::move(grad))
{
    if (count_ < 1) throw Error("constraint count must be positive");
    if (state_dim_ < 1) throw Error("constraint state dimension must be positive");
    if (!g_) throw Error("constraint needs an evaluation function");
}

Vector IntegralConstraint::operator()(const Vector& y) const
{
    Vector v = g_(y);
    if (v.size() != count_) throw Error("constraint returned a vector of the wrong size");
    return v;
}

Matrix IntegralConstraint::gradient(const Vector& y) const
{
    if (grad_) return grad_(y);
    Matrix g(count_, state_dim_);
    for (int j = 0; j < state_dim_; ++j) {
        const double step = 1e-6 * (1.0 + std::abs(y[j]));
        Vector up = y, down = y;
        up[j] += step;
        down[j] -= step;
        g.col(j) = ((*this)(up) - (*this)(down)) / (2.0 * step);
    }
    return g;
}

double gradient_mismatch(const IntegralConstraint& G, std::mt19937_64& rng, int samples, double box)
{
    std::uniform_real_distribution<double> u(-box, box);
    const int n = G.state_dim();
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        Vector y(n);
        for (int i = 0; i < n; ++i) y[i] = u(rng);
        const Matrix exact = G.gradient(y);
        for (int j = 0; j < n; ++j) {
            const double step = 1e-6 * (1.0 + std::abs(y[j]));
            Vector up = y, down = y;
            up[j] += step;
            down[j] -= step;
            const Vector fd = (G(up) - G(down)) / (2.0 * step);
            worst = std::max(worst, (fd - exact.col(j)).lpNorm<Eigen::Infinity>() / (1.0 + fd.lpNorm<Eigen::Infinity>()));
        }
    }
    return worst;
}

Vector constraint_integral(const IntegralConstraint& G, const Arc& y)
{
    return integrate_nodes(y, G.count(), [&](double, const Vector& x) { return G(x); });
}

Lagrangian augmented_lagrangian(const Lagrangian& L, const IntegralConstraint& G, const Vector& zeta,
                                const Vector& lambda)
{
    if (G.state_dim() != L.state_dim()) throw Error("constraint state dimension does not match the Lagrangian");
    if (lambda.size() != G.count()) throw Error("multiplier has the wrong dimension");
    auto eval = [L, G, zeta, lambda](double t, const Vector& y, const Vector& p) -> Vector {
        return Vector::Constant(1, zeta.dot(L(t, y, p)) - lambda.dot(G(y)));
    };
    auto dy = [L, G, zeta, lambda](double t, const Vector& y, const Vector& p) -> Matrix {
        return (zeta.transpose() * L.dy(t, y, p) - lambda.transpose() * G.gradient(y));
    };
    auto dp = [L, zeta](double t, const Vector& y, const Vector& p) -> Matrix {
        return zeta.transpose() * L.dp(t, y, p);
    };
    return Lagrangian(1, L.state_dim(), eval, dy, dp, L.name() + "/augmented");
}

std::vector<Perturbation> constraint_probes(const Grid& grid, int state_dim, int count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    const int modes = 6;
    const double len = grid.b - grid.a;
    std::vector<Perturbation> out;
    for (int j = 0; j < count; ++j) {
        Matrix c(modes, state_dim);
        for (int m = 0; m < modes; ++m)
            for (int i = 0; i < state_dim; ++i) c(m, i) = g(rng) / (m + 1);
        out.push_back(Perturbation::sample(grid, state_dim, [&](double t) {
            Vector v = Vector::Zero(state_dim);
            for (int m = 0; m < modes; ++m) v += c.row(m).transpose() * std::sin((m + 1) * std::numbers::pi * (t - grid.a) / len);
            return v;
        }));
    }
    return out;
}

namespace {

Matrix probe_matrix(const IntegralConstraint& G, const Arc& y, const std::vector<Perturbation>& probes)
{
    const Grid& grid = y.grid();
    const double h = grid.step();
    Matrix W = Matrix::Zero(G.count(), static_cast<Eigen::Index>(probes.size()));
    for (int i = 0; i < grid.nodes(); ++i) {
        const double w = (i == 0 || i == grid.nodes() - 1) ? 0.5 * h : h;
        const Matrix grad = G.gradient(y.node(i));
        for (std::size_t j = 0; j < probes.size(); ++j) W.col(j) += w * grad * probes[j].values().row(i).transpose();
    }
    return W;
}

double condition_number(const Matrix& W)
{
    Eigen::JacobiSVD<Matrix> svd(W);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s[s.size() - 1] == 0.0) return kInfinity;
    return s[0] / s[s.size() - 1];
}

} // namespace

Arc project_feasible(const IntegralConstraint& G, const Arc& y, const std::vector<Perturbation>& probes, double tol)
{
    Arc cur = y;
    Vector r = constraint_integral(G, cur);
    const double scale = 1.0 + r.lpNorm<Eigen::Infinity>();
    for (int it = 0; it < 50; ++it) {
        if (r.lpNorm<Eigen::Infinity>() <= tol * scale) return cur;
        const Matrix W = probe_matrix(G, cur, probes);
        if (!(condition_number(W) < 1e12)) throw Error("no feasible arc: constraint Jacobian along the probes is singular");
        const Vector step = W.fullPivLu().solve(-r);
        Perturbation move = Perturbation::zero(y.grid(), y.state_dim());
        for (std::size_t j = 0; j < probes.size(); ++j) move = move + step[static_cast<Eigen::Index>(j)] * probes[j];
        cur = cur + move;
        r = constraint_integral(G, cur);
    }
    if (r.lpNorm<Eigen::Infinity>() <= tol * scale) return cur;
    throw Error("no feasible arc: projection onto the integral constraint did not converge");
}

MultiplierReport solve_constrained_zeta(const Lagrangian& L, const IntegralConstraint& G, const Vector& zeta,
                                        const Boundary& boundary, const ConstrainedOptions& options)
{
    if (G.state_dim() != L.state_dim()) throw Error("constraint state dimension does not match the Lagrangian");
    if (zeta.size() != L.criteria()) throw Error("zeta has the wrong dimension");
    if (zeta.isZero(0.0)) throw Error("zeta must be nonzero");
    const int m = G.count();
    const int n = L.state_dim();

    const Arc line = Arc::straight(boundary, options.solve.nodes);
    const auto probes = constraint_probes(line.grid(), n, m, options.probe_seed);
    const Arc feasible = project_feasible(G, line, probes);

    const Vector one = Vector::Ones(1);
    auto inner = [&](const Vector& lambda, const Arc& warm) {
        SolveOptions opts = options.solve;
        // Raw gradient entries carry a factor h; the constraint integral needs the density to be small.
        opts.gtol = options.solve.gtol * line.grid().step();
        opts.initial = warm;
        return solve_zeta(augmented_lagrangian(L, G, zeta, lambda), one, boundary, opts);
    };

    Vector lambda = options.initial_lambda ? *options.initial_lambda : Vector::Zero(m);
    if (lambda.size() != m) throw Error("initial multiplier has the wrong dimension");
    SolveReport cur = inner(lambda, feasible);
    Vector r = constraint_integral(G, cur.arc);
    const double tol = options.outer_tol * (1.0 + options.constraint_scale);
    std::vector<double> history;
    int outer = 0;
    for (; outer < options.max_outer; ++outer) {
        history.push_back(r.lpNorm<Eigen::Infinity>());
        if (history.back() <= tol) break;

        // Inner solutions count only when they are (near) stationary: past the admissible
        // multiplier range the augmented functional has no minimizer and the solver stalls.
        auto usable = [&](const SolveReport& s) { return s.max_weak_residual <= options.stol; };
        Matrix jac(m, m);
        for (int i = 0; i < m; ++i) {
            const double delta = 1e-6 * (1.0 + std::abs(lambda[i]));
            double sign = 1.0;
            Vector shifted = lambda;
            shifted[i] += delta;
            SolveReport probe = inner(shifted, cur.arc);
            if (!usable(probe)) {
                sign = -1.0;
                shifted[i] = lambda[i] - delta;
                probe = inner(shifted, cur.arc);
            }
            jac.col(i) = sign * (constraint_integral(G, probe.arc) - r) / delta;
        }
        const Vector full = jac.fullPivLu().solve(-r);
        if (!full.allFinite()) break;
        bool accepted = false;
        double t = 1.0;
        for (int k = 0; k < 30 && !accepted; ++k, t *= 0.5) {
            const Vector trial = lambda + t * full;
            std::optional<SolveReport> next;
            try {
                next = inner(trial, cur.arc);
            } catch (const Error&) {
                continue; // non-finite objective
            }
            const Vector rn = constraint_integral(G, next->arc);
            if (usable(*next) && rn.allFinite() && rn.lpNorm<Eigen::Infinity>() < r.lpNorm<Eigen::Infinity>()) {
                lambda = trial;
                cur = std::move(*next);
                r = rn;
                accepted = true;
            }
        }
        if (!accepted) break;
    }
    if (history.empty() || history.back() != r.lpNorm<Eigen::Infinity>()) history.push_back(r.lpNorm<Eigen::Infinity>());

    const double ctol = options.ctol * (1.0 + options.constraint_scale);
    if (!(r.lpNorm<Eigen::Infinity>() <= ctol)) {
        std::ostringstream os;
        os.precision(6);
        os << "multiplier iteration stalled with constraint residual " << r.lpNorm<Eigen::Infinity>()
           << " after " << outer << " steps";
        throw StagnationError(os.str(), history);
    }

    MultiplierReport rep{zeta, lambda, cur.arc};
    rep.J_value = functional_J(L, cur.arc);
    rep.scalar_value = zeta.dot(rep.J_value);
    rep.constraint_residual = r;
    rep.stationarity_residual = max_hat_residual(augmented_lagrangian(L, G, zeta, lambda), one, cur.arc);
    rep.W_matrix = probe_matrix(G, cur.arc, probes);
    rep.W_condition = condition_number(rep.W_matrix);
    rep.W_warning = !(rep.W_condition <= 1e6);
    Vector P(m);
    for (int j = 0; j < m; ++j) P[j] = weak_EL_residual(L, zeta, cur.arc, probes[j]);
    rep.lambda_from_probes = rep.W_matrix.transpose().fullPivLu().solve(P);
    rep.probes.resize(static_cast<Eigen::Index>(cur.arc.grid().interior) * n, m);
    for (int j = 0; j < m; ++j) rep.probes.col(j) = probes[j].interior_vector();
    rep.probe_seed = options.probe_seed;
    rep.outer_iterations = outer;
    rep.residual_history = std::move(history);
    rep.success = rep.stationarity_residual <= options.stol;
    rep.status = rep.success ? "converged (inner: " + cur.status + ")" : "not stationary: " + cur.status;
    if (rep.W_warning) rep.status += "; probe matrix near singular, nondegeneracy may fail";
    return rep;
}

Arc BuildingSolution::arc(int interior) const
{
    return Arc::sample(building_boundary(params), interior, [&](double t) {
        Vector v(2);
        v << y1(t), y2(t);
        return v;
    });
}

namespace {

// A^2 / l^2 (asin u - u sqrt(1 - u^2)), u = l a / A: the area under one curve.
double curve_area(double A, double a, double lambda)
{
    const double u = lambda * a / A;
    double g;
    if (u < 1e-3) {
        const double u2 = u * u;
        g = u * u2 * (2.0 / 3.0 + u2 * (1.0 / 5.0 + u2 * 3.0 / 28.0));
    } else {
        g = std::asin(u) - u * std::sqrt(1.0 - u * u);
    }
    return A * A / (lambda * lambda) * g;
}

} // namespace

double building_volume(double A1, double A2, double a, double lambda)
{
    if (lambda == 0.0) return 0.0;
    return curve_area(A1, a, lambda) + curve_area(A2, a, lambda);
}

BuildingSolution building_closed_form(const BuildingParams& params, const Vector& zeta)
{
    if (zeta.size() != 2) throw Error("building problem has two criteria");
    if (!(zeta.minCoeff() >= 0) || zeta.isZero(0.0)) throw Error("zeta must lie in the nonnegative quadrant");
    if (!(params.a > 0) || !(params.h > 0) || !(params.V > 0)) throw Error("building needs a, h, V > 0");
    BuildingSolution sol;
    sol.params = params;
    sol.zeta = zeta;
    sol.A1 = zeta[0] * params.alpha[0] + zeta[1] * params.beta1_prime();
    sol.A2 = zeta[0] * params.alpha[1] + zeta[1] * params.beta[1];
    if (!(sol.A1 > 0) || !(sol.A2 > 0)) throw Error("building coefficients A1, A2 must be positive");

    const double target = params.V / params.h;
    const double eps = 1e-12;
    double lo = eps;
    double hi = (1.0 - eps) * std::min(sol.A1, sol.A2) / params.a;
    auto F = [&](double l) { return building_volume(sol.A1, sol.A2, params.a, l) - target; };
    if (!(F(hi) > 0)) {
        throw Error("no multiplier in (0, min(A1, A2) / a): the volume V / h exceeds what the closed form can "
                    "enclose (solvability needs A1 < A2 and a large enough enclosed area at the bracket end)");
    }
    for (int it = 0; it < 400 && hi - lo > 1e-17 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (F(mid) > 0)
            hi = mid;
        else
            lo = mid;
    }
    sol.lambda = std::abs(F(lo)) < std::abs(F(hi)) ? lo : hi;
    return sol;
}

namespace {

struct BuildingFunctor {
    BuildingParams p;

    template <typename S>
    VectorX<S> operator()(S, const VectorX<S>& y, const VectorX<S>& v) const
    {
        using std::sqrt;
        (void)y;
        const S r1 = sqrt(S(1) + v[0] * v[0]);
        const S r2 = sqrt(S(1) + v[1] * v[1]);
        VectorX<S> out(2);
        out[0] = p.alpha[0] * r1 + p.alpha[1] * r2 + p.alpha[2];
        out[1] = p.beta1_prime() * r1 + p.beta[1] * r2 + p.beta[2] - p.beta4_prime() * v[0];
        return out;
    }
};

struct BuildingVolumeFunctor {
    double offset;

    template <typename S>
    VectorX<S> operator()(const VectorX<S>& y) const
    {
        VectorX<S> out(1);
        out[0] = y[0] - y[1] - offset;
        return out;
    }
};

} // namespace

Lagrangian building_lagrangian(const BuildingParams& params)
{
    Lagrangian L = Lagrangian::from_functor(2, 2, BuildingFunctor{params}, "building");
    L.growth = {true, true, 2.0};
    return L;
}

IntegralConstraint building_constraint(const BuildingParams& params)
{
    IntegralConstraint G = IntegralConstraint::from_functor(
        1, 2, BuildingVolumeFunctor{params.V / (2.0 * params.a * params.h)}, "building-volume");
    G.bounded_gradient_growth = true;
    return G;
}

Boundary building_boundary(const BuildingParams& params)
{
    return Boundary{-params.a, params.a, Vector::Zero(2), Vector::Zero(2)};
}

double constrained_offset(const Lagrangian& L, const IntegralConstraint& G, const MultiplierReport& report,
                          const Perturbation& v)
{
    const Arc& y = report.arc;
    const int n = y.state_dim();
    std::vector<Perturbation> probes;
    for (Eigen::Index j = 0; j < report.probes.cols(); ++j)
        probes.push_back(Perturbation::from_interior(y.grid(), n, report.probes.col(j)));
    const Vector dh = probe_matrix(G, y, {v}).col(0);
    const Vector sigma = -report.W_matrix.fullPivLu().solve(dh);
    Perturbation dw = v;
    for (std::size_t j = 0; j < probes.size(); ++j) dw = dw + sigma[static_cast<Eigen::Index>(j)] * probes[j];
    return weak_EL_residual(L, report.zeta, y, dw);
}

ConstrainedSweep constrained_sweep(const Lagrangian& L, const IntegralConstraint& G, const Cone& cone,
                                   const Boundary& boundary, const DualBase& base, const SweepOptions& options)
{
    if (base.samples.empty()) throw Error("dual base has no samples");
    const std::size_t count = base.samples.size();
    std::vector<std::optional<MultiplierReport>> slots(count);
    std::vector<double> offsets(count, 0.0);
    std::vector<std::string> errors(count);
    parallel_for(count, [&](std::size_t i) {
        try {
            MultiplierReport rep = solve_constrained_zeta(L, G, base.samples[i], boundary, options.constrained);
            std::mt19937_64 rng(options.seed + i);
            for (int k = 0; k < options.offset_directions; ++k) {
                const Perturbation v = random_perturbation(rep.arc.grid(), rep.arc.state_dim(), rng);
                offsets[i] = std::max(offsets[i], std::abs(constrained_offset(L, G, rep, v)));
            }
            slots[i] = std::move(rep);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });
    std::vector<MultiplierReport> reports;
    std::vector<double> kept_offsets;
    std::vector<SolveReport> entries;
    std::vector<SolveFailure> failures;
    for (std::size_t i = 0; i < count; ++i) {
        if (!slots[i]) {
            failures.push_back({base.samples[i], errors[i]});
            continue;
        }
        const MultiplierReport& r = *slots[i];
        SolveReport e{r.zeta, r.arc, r.J_value};
        e.scalar_value = r.scalar_value;
        e.iterations = r.outer_iterations;
        e.gradient_norm = r.stationarity_residual;
        e.max_weak_residual = r.stationarity_residual;
        e.converged = r.success;
        e.status = r.status;
        entries.push_back(std::move(e));
        reports.push_back(r);
        kept_offsets.push_back(offsets[i]);
    }
    InfimizerSet M =
        assemble_infimizer(L, cone, boundary, base, std::move(entries), std::move(failures), options.convexified);
    return ConstrainedSweep{std::move(M), std::move(reports), std::move(kept_offsets)};
}

} // namespace varlat
