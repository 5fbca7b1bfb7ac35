#include "varlat/lagrangian.hpp"

#include <cmath>
#include <sstream>

namespace varlat {

Lagrangian::Lagrangian(int criteria, int state_dim, EvalFn eval, PartialFn dy, PartialFn dp, std::string name)
    : criteria_(criteria), state_dim_(state_dim), name_(std::move(name)), eval_(std::move(eval))
{
    if (criteria < 1) throw Error("Lagrangian needs at least one criterion");
    if (state_dim < 1) throw Error("Lagrangian needs a positive state dimension");
    if (!eval_) throw Error("Lagrangian needs an evaluation function");
    if (static_cast<bool>(dy) != static_cast<bool>(dp))
        throw Error("Lagrangian partials must be given for both y and p or for neither");
    if (dy) {
        jacobian_ = [dy = std::move(dy), dp = std::move(dp)](double t, const Vector& y, const Vector& p, Matrix& my,
                                                             Matrix& mp) {
            my = dy(t, y, p);
            mp = dp(t, y, p);
        };
    }
}

Vector Lagrangian::operator()(double t, const Vector& y, const Vector& p) const
{
    Vector v = eval_(t, y, p);
    if (v.size() != criteria_) throw Error("Lagrangian '" + name_ + "' returned a vector of the wrong size");
    return v;
}

void Lagrangian::partials(double t, const Vector& y, const Vector& p, Matrix& dy, Matrix& dp) const
{
    if (jacobian_) {
        jacobian_(t, y, p, dy, dp);
        return;
    }
    const int n = state_dim_;
    dy.resize(criteria_, n);
    dp.resize(criteria_, n);
    Vector yy = y;
    Vector pp = p;
    for (int i = 0; i < n; ++i) {
        const double hy = 1e-6 * (1.0 + std::abs(y[i]));
        yy[i] = y[i] + hy;
        Vector fp = eval_(t, yy, p);
        yy[i] = y[i] - hy;
        Vector fm = eval_(t, yy, p);
        yy[i] = y[i];
        dy.col(i) = (fp - fm) / (2 * hy);

        const double hp = 1e-6 * (1.0 + std::abs(p[i]));
        pp[i] = p[i] + hp;
        fp = eval_(t, y, pp);
        pp[i] = p[i] - hp;
        fm = eval_(t, y, pp);
        pp[i] = p[i];
        dp.col(i) = (fp - fm) / (2 * hp);
    }
}

Matrix Lagrangian::dy(double t, const Vector& y, const Vector& p) const
{
    Matrix a, b;
    partials(t, y, p, a, b);
    return a;
}

Matrix Lagrangian::dp(double t, const Vector& y, const Vector& p) const
{
    Matrix a, b;
    partials(t, y, p, a, b);
    return b;
}

double Lagrangian::scalarized(const Vector& zeta, double t, const Vector& y, const Vector& p) const
{
    return zeta.dot((*this)(t, y, p));
}

double partials_mismatch(const Lagrangian& L, double a, double b, std::mt19937_64& rng, int samples, double box)
{
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> time(a, b);
    const int n = L.state_dim();
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const double t = time(rng);
        Vector y(n), p(n);
        for (int i = 0; i < n; ++i) {
            y[i] = box * unit(rng);
            p[i] = box * unit(rng);
        }
        Matrix dy, dp;
        L.partials(t, y, p, dy, dp);
        for (int i = 0; i < n; ++i) {
            for (int which = 0; which < 2; ++which) {
                Vector yy = y;
                Vector pp = p;
                double& x = which == 0 ? yy[i] : pp[i];
                const double base = x;
                const double h = 1e-6 * (1.0 + std::abs(base));
                x = base + h;
                Vector fp = L(t, yy, pp);
                x = base - h;
                Vector fm = L(t, yy, pp);
                Vector fd = (fp - fm) / (2 * h);
                Vector an = which == 0 ? Vector(dy.col(i)) : Vector(dp.col(i));
                const double scale = std::max(1.0, an.cwiseAbs().maxCoeff());
                worst = std::max(worst, (fd - an).cwiseAbs().maxCoeff() / scale);
            }
        }
    }
    return worst;
}

void check_partials(const Lagrangian& L, double a, double b)
{
    std::mt19937_64 rng(12345);
    const double mismatch = partials_mismatch(L, a, b, rng);
    if (!(mismatch <= 1e-5)) {
        std::ostringstream os;
        os << "Lagrangian '" << L.name() << "': partial derivatives disagree with finite differences (relative "
           << mismatch << ")";
        throw Error(os.str());
    }
}

} // namespace varlat
