#pragma once

#include "varlat/core.hpp"

#include <unsupported/Eigen/AutoDiff>

#include <functional>
#include <random>
#include <string>

namespace varlat {

/// Growth conditions a Lagrangian is declared (not verified) to satisfy.
struct GrowthFlags {
    bool bounded_growth = false;     // |L| <= K (|y|^q + |p|^q + 1)
    bool bounded_derivative = false; // |D_y L|, |D_p L| <= K (|y|^(q-1) + |p|^(q-1) + 1)
    double exponent = 2.0;           // Sobolev exponent q (metadata only)
};

/**
 * Vector-valued Lagrangian L(t, y, p) : [a,b] x R^n x R^n -> R^d with its
 * partial Jacobians D_y L and D_p L (d x n each).
 *
 * Partials come from one of three places: callables supplied by the caller,
 * forward-mode automatic differentiation of a functor templated on the
 * scalar type (`from_functor`), or central finite differences with step
 * 1e-6 (1 + |x|) when neither is available.
 */
class Lagrangian {
public:
    using EvalFn = std::function<Vector(double, const Vector&, const Vector&)>;
    using PartialFn = std::function<Matrix(double, const Vector&, const Vector&)>;
    /// Returns (D_y L, D_p L) in one call.
    using JacobianFn = std::function<void(double, const Vector&, const Vector&, Matrix&, Matrix&)>;

    Lagrangian(int criteria, int state_dim, EvalFn eval, PartialFn dy = {}, PartialFn dp = {},
               std::string name = {});

    /**
     * Wrap a functor `f` with a member template
     * `template <class S> VectorX<S> operator()(S t, const VectorX<S>& y, const VectorX<S>& p) const`.
     * Partials are exact, obtained with Eigen's AutoDiffScalar.
     */
    template <typename Functor>
    static Lagrangian from_functor(int criteria, int state_dim, Functor f, std::string name = {});

    int criteria() const { return criteria_; }
    int state_dim() const { return state_dim_; }
    const std::string& name() const { return name_; }
    bool has_exact_partials() const { return static_cast<bool>(jacobian_); }

    Vector operator()(double t, const Vector& y, const Vector& p) const;
    void partials(double t, const Vector& y, const Vector& p, Matrix& dy, Matrix& dp) const;
    Matrix dy(double t, const Vector& y, const Vector& p) const;
    Matrix dp(double t, const Vector& y, const Vector& p) const;

    /// L_zeta = zeta . L.
    double scalarized(const Vector& zeta, double t, const Vector& y, const Vector& p) const;

    GrowthFlags growth;

private:
    int criteria_;
    int state_dim_;
    std::string name_;
    EvalFn eval_;
    JacobianFn jacobian_;
};

/// Largest relative mismatch between the partials and central finite
/// differences of the values over `samples` random points in [a,b] x box^2n.
double partials_mismatch(const Lagrangian& L, double a, double b, std::mt19937_64& rng, int samples = 20,
                         double box = 2.0);

/// Throws if `partials_mismatch` exceeds 1e-5.
void check_partials(const Lagrangian& L, double a, double b);

namespace detail {

// Derivative storage is stack-allocated up to 8 entries (state_dim <= 4).
using SmallDerivative = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 8, 1>;

template <typename Der, typename Functor>
void autodiff_jacobian(const Functor& f, int criteria, int n, double t, const Vector& y, const Vector& p,
                       Matrix& dy, Matrix& dp)
{
    using AD = Eigen::AutoDiffScalar<Der>;
    VectorX<AD> ya(n), pa(n);
    for (int i = 0; i < n; ++i) {
        ya[i] = AD(y[i], 2 * n, i);
        pa[i] = AD(p[i], 2 * n, n + i);
    }
    VectorX<AD> out = f(AD(t), ya, pa);
    dy.resize(criteria, n);
    dp.resize(criteria, n);
    for (int r = 0; r < criteria; ++r) {
        const auto& der = out[r].derivatives();
        for (int i = 0; i < n; ++i) {
            dy(r, i) = der.size() ? der[i] : 0.0;
            dp(r, i) = der.size() ? der[n + i] : 0.0;
        }
    }
}

} // namespace detail

template <typename Functor>
Lagrangian Lagrangian::from_functor(int criteria, int state_dim, Functor f, std::string name)
{
    Lagrangian L(criteria, state_dim,
                 [f](double t, const Vector& y, const Vector& p) -> Vector { return f(t, y, p); }, {}, {},
                 std::move(name));
    L.jacobian_ = [f, criteria, state_dim](double t, const Vector& y, const Vector& p, Matrix& dy, Matrix& dp) {
        if (state_dim <= 4)
            detail::autodiff_jacobian<detail::SmallDerivative>(f, criteria, state_dim, t, y, p, dy, dp);
        else
            detail::autodiff_jacobian<Vector>(f, criteria, state_dim, t, y, p, dy, dp);
    };
    return L;
}

} // namespace varlat
