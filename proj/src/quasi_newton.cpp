#include "varlat/quasi_newton.hpp"

#include <cmath>
#include <deque>
#include <memory>

namespace varlat {

namespace {

struct Pair {
    Vector s;
    Vector y;
    double rho;
};

Vector precondition(const Preconditioner& p, const Vector& v)
{
    return p ? p(v) : v;
}

} // namespace

QuasiNewtonResult minimize_lbfgs(const Objective& objective, Vector x0, const QuasiNewtonOptions& options,
                                 const Preconditioner& preconditioner)
{
    QuasiNewtonResult res;
    res.x = std::move(x0);
    res.gradient.resize(res.x.size());
    res.value = objective(res.x, res.gradient);
    if (!std::isfinite(res.value)) throw Error("objective is not finite at the initial point");

    std::deque<Pair> pairs;
    double gamma = 1.0;
    int flat = 0; // consecutive steps with a decrease below rounding level
    Vector g_new(res.x.size());

    for (res.iterations = 0; res.iterations < options.max_iterations; ++res.iterations) {
        if (res.gradient.lpNorm<Eigen::Infinity>() <= options.gtol) {
            res.converged = true;
            res.status = "gradient tolerance reached";
            return res;
        }

        // Two-loop recursion.
        Vector q = res.gradient;
        std::vector<double> alpha(pairs.size());
        for (std::size_t i = pairs.size(); i-- > 0;) {
            alpha[i] = pairs[i].rho * pairs[i].s.dot(q);
            q -= alpha[i] * pairs[i].y;
        }
        Vector r = gamma * precondition(preconditioner, q);
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const double beta = pairs[i].rho * pairs[i].y.dot(r);
            r += pairs[i].s * (alpha[i] - beta);
        }
        Vector d = -r;
        double slope = res.gradient.dot(d);
        if (!(slope < 0)) {
            pairs.clear();
            gamma = 1.0;
            d = -precondition(preconditioner, res.gradient);
            slope = res.gradient.dot(d);
            if (!(slope < 0)) {
                res.status = "no descent direction";
                return res;
            }
        }

        double step = 1.0;
        bool accepted = false;
        double f_new = 0.0;
        Vector x_new;
        for (int bt = 0; bt < options.max_backtracks; ++bt) {
            x_new = res.x + step * d;
            f_new = objective(x_new, g_new);
            if (std::isfinite(f_new)) {
                if (f_new <= res.value + options.armijo * step * slope) {
                    accepted = true;
                    break;
                }
                const double noise = 1e-14 * (1.0 + std::abs(res.value));
                if (f_new <= res.value + noise && std::abs(g_new.dot(d)) <= 0.9 * std::abs(slope)) {
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (!pairs.empty()) {
                pairs.clear();
                gamma = 1.0;
                continue;
            }
            res.status = "line search failed";
            return res;
        }

        flat = (res.value - f_new <= 1e-15 * (1.0 + std::abs(res.value))) ? flat + 1 : 0;
        Vector s = x_new - res.x;
        Vector y = g_new - res.gradient;
        const double sy = s.dot(y);
        if (sy > 1e-14 * s.norm() * y.norm()) {
            pairs.push_back({s, y, 1.0 / sy});
            if (static_cast<int>(pairs.size()) > options.memory) pairs.pop_front();
            const double yPy = y.dot(precondition(preconditioner, y));
            if (yPy > 0) gamma = sy / yPy;
        }
        res.x = std::move(x_new);
        res.value = f_new;
        res.gradient = g_new;
        if (flat >= 10 && res.gradient.lpNorm<Eigen::Infinity>() > options.gtol) {
            res.status = "stalled at rounding level";
            ++res.iterations;
            return res;
        }
    }
    res.converged = res.gradient.lpNorm<Eigen::Infinity>() <= options.gtol;
    res.status = res.converged ? "gradient tolerance reached" : "iteration cap reached";
    return res;
}

Preconditioner stiffness_preconditioner(int interior, int components, double h)
{
    // Cholesky factor of tridiag(-1, 2, -1): diagonal l_i, subdiagonal -1 / l_{i-1}.
    auto diag = std::make_shared<std::vector<double>>(static_cast<std::size_t>(interior));
    for (int i = 0; i < interior; ++i) {
        const double prev = i == 0 ? 0.0 : 1.0 / ((*diag)[i - 1] * (*diag)[i - 1]);
        (*diag)[i] = std::sqrt(2.0 - prev);
    }
    return [diag, interior, components, h](const Vector& v) {
        Vector out(v.size());
        std::vector<double> z(static_cast<std::size_t>(interior));
        const auto& l = *diag;
        for (int c = 0; c < components; ++c) {
            // Forward: L z = v.
            for (int i = 0; i < interior; ++i) {
                double rhs = v[i * components + c];
                if (i > 0) rhs += z[i - 1] / l[i - 1];
                z[i] = rhs / l[i];
            }
            // Backward: L' x = z.
            for (int i = interior - 1; i >= 0; --i) {
                double rhs = z[i];
                if (i + 1 < interior) rhs += out[(i + 1) * components + c] / l[i];
                out[i * components + c] = rhs / l[i];
            }
        }
        return Vector(out * h);
    };
}

} // namespace varlat
