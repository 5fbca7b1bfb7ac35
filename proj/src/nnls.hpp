#pragma once

#include "varlat/core.hpp"

namespace varlat::detail {

/// Lawson-Hanson active-set solve of min ||A x - b|| subject to x >= 0.
Vector nnls(const Matrix& A, const Vector& b, int max_iterations = 0);

/// ||A x* - b|| at the nonnegative least-squares solution x*.
double nnls_residual(const Matrix& A, const Vector& b);

} // namespace varlat::detail
