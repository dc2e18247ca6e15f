#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rmtlab {

using Complex = std::complex<double>;

using MatrixXd = Eigen::MatrixXd;
using MatrixXcd = Eigen::MatrixXcd;
using VectorXd = Eigen::VectorXd;
using VectorXcd = Eigen::VectorXcd;
using Matrix2d = Eigen::Matrix2d;
using Matrix2cd = Eigen::Matrix2cd;
using Matrix3d = Eigen::Matrix3d;
using Matrix4cd = Eigen::Matrix4cd;
using Vector3d = Eigen::Vector3d;

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionError : Error {
    using Error::Error;
};
struct DomainError : Error {
    using Error::Error;
};
struct SolverError : Error {
    using Error::Error;
};
struct InfeasibleMomentsError : Error {
    using Error::Error;
};
struct InsufficientDataError : Error {
    using Error::Error;
};
struct QuadratureError : Error {
    using Error::Error;
};
struct ValidationError : Error {
    using Error::Error;
};

}  // namespace rmtlab
