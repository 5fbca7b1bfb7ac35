#pragma once

// Independent reference values for the tests. Nothing here calls into the
// library's closed forms; formulas are re-derived from the Euler-Lagrange
// equations of each built-in problem.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

/// L = (p^2/2, p^2/2 + y t): (z1 + z2) y'' = z2 t on [0, 1], y(0) = A, y(1) = B.
inline double example31(double z1, double z2, double A, double B, double t)
{
    const double c3 = z2 / (6.0 * (z1 + z2));
    return c3 * t * t * t + (B - A - c3) * t + A;
}

/// L = (p^2 + 4 y^2, t p + p^2), zeta = (z1, 1 - z1): y'' - 4 z1 y = -(1 - z1) / 2, y(0) = 0, y(1) = 1.
/// Written with cosh/sinh, unlike the exponential form displayed in the literature.
inline double example4(double z1, double t)
{
    if (std::abs(z1) < 1e-8) return -0.25 * t * t + 1.25 * t; // cosh/sinh form cancels badly near 0
    const double k = 2.0 * std::sqrt(z1);
    const double K = (1.0 - z1) / (8.0 * z1);
    const double c2 = (1.0 - K + K * std::cosh(k)) / std::sinh(k);
    return K - K * std::cosh(k * t) + c2 * std::sinh(k * t);
}

/// Central difference of f at 0, extrapolated once (Richardson). A step of 1e-3 keeps the
/// rounding of J values of order 100 well below directional derivatives of order 1e-5.
inline double directional_fd(const std::function<double(double)>& f, double h = 1e-3)
{
    auto D = [&](double s) { return (f(s) - f(-s)) / (2 * s); };
    return (4 * D(h / 2) - D(h)) / 3;
}

/// Composite Simpson rule with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels = 20000)
{
    if (panels % 2) ++panels;
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

/// Building problem oracle: lambda from Simpson quadrature of y1 - y2 and bisection,
/// no use of the closed-form circular-segment area.
struct Building {
    double a = 10, h = 3, V = 300;
    double alpha1 = 1, alpha2 = 1, beta1 = 1, beta2 = 1, beta4 = 0.5, theta1 = 1;

    double A1(double z1) const { return z1 * alpha1 + (1 - z1) * (beta1 - beta4 * theta1); }
    double A2(double z1) const { return z1 * alpha2 + (1 - z1) * beta2; }

    static double curve(double A, double lambda, double a, double t)
    {
        return (std::sqrt(A * A - lambda * lambda * t * t) - std::sqrt(A * A - lambda * lambda * a * a)) / lambda;
    }

    double area(double z1, double lambda) const
    {
        const double a1 = A1(z1), a2 = A2(z1);
        return simpson([&](double t) { return curve(a1, lambda, a, t) + curve(a2, lambda, a, t); }, -a, a, 4000);
    }

    double lambda(double z1) const
    {
        double lo = 1e-9, hi = (1 - 1e-12) * std::min(A1(z1), A2(z1)) / a;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (area(z1, mid) > V / h ? hi : lo) = mid;
        }
        return 0.5 * (lo + hi);
    }
};

/// Brute-force membership in cl U (p_i + C) for the nonnegative orthant.
inline bool in_orthant_staircase(const std::vector<Eigen::Vector2d>& points, const Eigen::Vector2d& z, double tol)
{
    for (const auto& p : points)
        if (z[0] >= p[0] - tol && z[1] >= p[1] - tol) return true;
    return false;
}

/// Membership in co(P) + R^2_+ for planar P: z dominates a point of some segment
/// [p_i, p_j] (the lower-left boundary of the hull consists of such segments).
/// Each coordinate gives a linear inequality in the segment weight.
inline bool in_orthant_hull(const std::vector<Eigen::Vector2d>& points, const Eigen::Vector2d& z, double tol)
{
    if (in_orthant_staircase(points, z, tol)) return true;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            double lo = 0.0, hi = 1.0;
            for (int k = 0; k < 2; ++k) {
                // q_k(w) = p_j + w (p_i - p_j) <= z_k + tol
                const double slope = points[i][k] - points[j][k];
                const double rhs = z[k] + tol - points[j][k];
                if (slope > 0)
                    hi = std::min(hi, rhs / slope);
                else if (slope < 0)
                    lo = std::max(lo, rhs / slope);
                else if (rhs < 0)
                    hi = -1.0;
            }
            if (lo <= hi) return true;
        }
    return false;
}

} // namespace oracle
