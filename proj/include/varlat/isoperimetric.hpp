#pragma once

#include "varlat/infimizer.hpp"

#include <array>
#include <cmath>

namespace varlat {

/**
 * Integral constraint int_a^b G(y(t)) dt = 0 with G : R^n -> R^m and its
 * Jacobian (m x n). Jacobians come from a caller callable, from automatic
 * differentiation (`from_functor`), or from central differences.
 */
class IntegralConstraint {
public:
    using GFn = std::function<Vector(const Vector&)>;
    using GradFn = std::function<Matrix(const Vector&)>;

    IntegralConstraint(int count, int state_dim, GFn g, GradFn grad = {}, std::string name = {});

    /// Functor with `template <class S> VectorX<S> operator()(const VectorX<S>& y) const`.
    template <typename Functor>
    static IntegralConstraint from_functor(int count, int state_dim, Functor f, std::string name = {});

    int count() const { return count_; }
    int state_dim() const { return state_dim_; }
    const std::string& name() const { return name_; }

    Vector operator()(const Vector& y) const;
    Matrix gradient(const Vector& y) const;

    /// Declared bound |grad G_i(y)| <= K (|y|^(q-1) + 1); metadata only.
    bool bounded_gradient_growth = false;

private:
    int count_;
    int state_dim_;
    std::string name_;
    GFn g_;
    GradFn grad_;
};

/// Largest relative mismatch between the Jacobian and central differences.
double gradient_mismatch(const IntegralConstraint& G, std::mt19937_64& rng, int samples = 20, double box = 2.0);

/// Trapezoidal int G(y) dt along the arc.
Vector constraint_integral(const IntegralConstraint& G, const Arc& y);

/// L_aug = zeta . L - lambda . G(y), as a scalar Lagrangian.
Lagrangian augmented_lagrangian(const Lagrangian& L, const IntegralConstraint& G, const Vector& zeta,
                                const Vector& lambda);

struct ConstrainedOptions {
    SolveOptions solve = [] {
        SolveOptions s;
        s.gtol = 1e-12;
        s.convexity_samples = 0;
        return s;
    }();
    double outer_tol = 1e-10; // on |int G|_inf, scaled by 1 + constraint_scale
    int max_outer = 60;
    double constraint_scale = 1.0;
    double ctol = 1e-8; // success threshold on the constraint, scaled like outer_tol
    double stol = 1e-6; // success threshold on the stationarity residual
    std::uint64_t probe_seed = 0;
    std::optional<Vector> initial_lambda;
};

struct MultiplierReport {
    Vector zeta;
    Vector lambda;
    Arc arc;
    Vector J_value;
    double scalar_value = 0.0;
    Vector constraint_residual;
    double stationarity_residual = 0.0;
    Matrix W_matrix;
    double W_condition = 0.0;
    bool W_warning = false;
    /// Multiplier recovered from the probe equations, W^{-T} P.
    Vector lambda_from_probes;
    Matrix probes; // interior vectors of the w_j, one per column
    std::uint64_t probe_seed = 0;
    int outer_iterations = 0;
    std::vector<double> residual_history;
    bool success = false;
    std::string status;
};

/// Raised when the outer multiplier iteration stalls.
class StagnationError : public Error {
public:
    StagnationError(const std::string& what, std::vector<double> history)
        : Error(what), history_(std::move(history))
    {
    }
    const std::vector<double>& history() const { return history_; }

private:
    std::vector<double> history_;
};

/// m zero-endpoint probes w_j built from sine modes with seeded coefficients.
std::vector<Perturbation> constraint_probes(const Grid& grid, int state_dim, int count, std::uint64_t seed);

/// Move `y` along the probes until int G = 0 (Newton). Throws if no feasible arc is reached.
Arc project_feasible(const IntegralConstraint& G, const Arc& y, const std::vector<Perturbation>& probes,
                     double tol = 1e-12);

/**
 * Minimize J_zeta over arcs with fixed ends and int G = 0. Outer Newton
 * iteration on lambda (finite-difference Jacobian, step halving), inner
 * warm-started solves of J_zeta - lambda . int G.
 */
MultiplierReport solve_constrained_zeta(const Lagrangian& L, const IntegralConstraint& G, const Vector& zeta,
                                        const Boundary& boundary, const ConstrainedOptions& options = {});

struct BuildingParams {
    double a = 10.0;
    double h = 3.0;
    double V = 300.0;
    std::array<double, 3> alpha{1.0, 1.0, 1.0};
    std::array<double, 4> beta{1.0, 1.0, 1.0, 0.5};
    double theta1 = 1.0;
    double theta2 = 0.5;

    double beta1_prime() const { return beta[0] - beta[3] * theta1; }
    double beta4_prime() const { return beta[3] * (theta1 - theta2); }
};

/**
 * Closed-form constrained zeta-solution of the building shape problem:
 * y1 = (sqrt(A1^2 - l^2 t^2) - sqrt(A1^2 - l^2 a^2)) / l,
 * y2 = -(sqrt(A2^2 - l^2 t^2) - sqrt(A2^2 - l^2 a^2)) / l.
 */
struct BuildingSolution {
    BuildingParams params;
    Vector zeta;
    double A1 = 0.0;
    double A2 = 0.0;
    double lambda = 0.0;

    template <typename S>
    S y1(S t) const
    {
        using std::sqrt;
        return (sqrt(A1 * A1 - lambda * lambda * t * t) - std::sqrt(A1 * A1 - lambda * lambda * params.a * params.a)) /
               lambda;
    }
    template <typename S>
    S y2(S t) const
    {
        using std::sqrt;
        return -(sqrt(A2 * A2 - lambda * lambda * t * t) - std::sqrt(A2 * A2 - lambda * lambda * params.a * params.a)) /
               lambda;
    }
    /// Node samples on [-a, a] with `interior` interior nodes.
    Arc arc(int interior) const;
};

/// Left side of the volume constraint, int (y1 - y2) dt, as a function of lambda.
double building_volume(double A1, double A2, double a, double lambda);

/// Solves for lambda in (eps, (1 - eps) min(A1, A2) / a) by bisection.
BuildingSolution building_closed_form(const BuildingParams& params, const Vector& zeta);

/// (construction cost, heating cost) Lagrangian, C = R^2_+.
Lagrangian building_lagrangian(const BuildingParams& params);
/// G(y) = y1 - y2 - V / (2 a h).
IntegralConstraint building_constraint(const BuildingParams& params);
Boundary building_boundary(const BuildingParams& params);

struct ConstrainedSweep {
    InfimizerSet infimizer;
    std::vector<MultiplierReport> reports; // successful solves, base order
    /// Per report: max |offset| of the constrained set derivative over the probe directions v.
    std::vector<double> offsets;
};

struct SweepOptions {
    ConstrainedOptions constrained;
    int offset_directions = 5;
    std::uint64_t seed = 0;
    bool convexified = true;
};

/**
 * Offset of the constrained set derivative at a solved zeta along
 * w(s) = s v + sum_i sigma_i(s) w_i, sigma'(0) = -W^{-1} dh/ds.
 */
double constrained_offset(const Lagrangian& L, const IntegralConstraint& G, const MultiplierReport& report,
                          const Perturbation& v);

ConstrainedSweep constrained_sweep(const Lagrangian& L, const IntegralConstraint& G, const Cone& cone,
                                   const Boundary& boundary, const DualBase& base, const SweepOptions& options = {});

template <typename Functor>
IntegralConstraint IntegralConstraint::from_functor(int count, int state_dim, Functor f, std::string name)
{
    auto grad = [f, count, state_dim](const Vector& y) -> Matrix {
        using AD = Eigen::AutoDiffScalar<Vector>;
        VectorX<AD> ya(state_dim);
        for (int i = 0; i < state_dim; ++i) ya[i] = AD(y[i], state_dim, i);
        VectorX<AD> out = f(ya);
        Matrix g = Matrix::Zero(count, state_dim);
        for (int r = 0; r < count; ++r)
            if (out[r].derivatives().size()) g.row(r) = out[r].derivatives().transpose();
        return g;
    };
    return IntegralConstraint(count, state_dim, [f](const Vector& y) -> Vector { return f(y); }, grad,
                              std::move(name));
}

} // namespace varlat
