#include "nnls.hpp"

#include <limits>
#include <vector>

namespace varlat::detail {

namespace {

// Unconstrained least squares restricted to the passive columns.
Vector solve_passive(const Matrix& A, const Vector& b, const std::vector<bool>& passive)
{
    std::vector<Eigen::Index> cols;
    for (Eigen::Index j = 0; j < A.cols(); ++j)
        if (passive[static_cast<std::size_t>(j)]) cols.push_back(j);
    Vector full = Vector::Zero(A.cols());
    if (cols.empty()) return full;
    Matrix sub(A.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = A.col(cols[k]);
    Vector z = sub.colPivHouseholderQr().solve(b);
    for (std::size_t k = 0; k < cols.size(); ++k) full[cols[k]] = z[static_cast<Eigen::Index>(k)];
    return full;
}

} // namespace

Vector nnls(const Matrix& A, const Vector& b, int max_iterations)
{
    const Eigen::Index n = A.cols();
    if (max_iterations <= 0) max_iterations = static_cast<int>(3 * n + 10);
    const double tol = 10 * std::numeric_limits<double>::epsilon() * A.norm() * static_cast<double>(n + 1);

    std::vector<bool> passive(static_cast<std::size_t>(n), false);
    Vector x = Vector::Zero(n);
    Vector w = A.transpose() * (b - A * x);

    for (int outer = 0; outer < max_iterations; ++outer) {
        Eigen::Index best = -1;
        double best_w = tol;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!passive[static_cast<std::size_t>(j)] && w[j] > best_w) {
                best_w = w[j];
                best = j;
            }
        }
        if (best < 0) break;
        passive[static_cast<std::size_t>(best)] = true;

        for (int inner = 0; inner < max_iterations; ++inner) {
            Vector z = solve_passive(A, b, passive);
            bool feasible = true;
            for (Eigen::Index j = 0; j < n; ++j)
                if (passive[static_cast<std::size_t>(j)] && z[j] <= 0) feasible = false;
            if (feasible) {
                x = z;
                break;
            }
            double alpha = 1.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (passive[static_cast<std::size_t>(j)] && z[j] <= 0) {
                    double denom = x[j] - z[j];
                    if (denom > 0) alpha = std::min(alpha, x[j] / denom);
                }
            }
            x += alpha * (z - x);
            for (Eigen::Index j = 0; j < n; ++j) {
                if (passive[static_cast<std::size_t>(j)] && x[j] <= tol) {
                    passive[static_cast<std::size_t>(j)] = false;
                    x[j] = 0;
                }
            }
        }
        w = A.transpose() * (b - A * x);
    }
    return x;
}

double nnls_residual(const Matrix& A, const Vector& b)
{
    return (A * nnls(A, b) - b).norm();
}

} // namespace varlat::detail
