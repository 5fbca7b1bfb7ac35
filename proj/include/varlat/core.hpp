#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace varlat {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Absolute tolerance used for numerical closures and membership tests.
inline constexpr double kDefaultTol = 1e-9;

/// Tolerance on dot products in general-dimension cone duality.
inline constexpr double kConeTol = 1e-10;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a problem or file fails validation.
class ConfigError : public Error {
public:
    ConfigError(const std::string& field, const std::string& message)
        : Error(field + ": " + message), field_(field)
    {
    }

    const std::string& field() const { return field_; }

private:
    std::string field_;
};

inline Vector make_vector(std::initializer_list<double> values)
{
    Vector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v[i++] = x;
    return v;
}

} // namespace varlat
