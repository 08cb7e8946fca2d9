#pragma once

#include <Eigen/Core>

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ris {

template <class Scalar>
using complex_t = std::complex<Scalar>;

template <class Scalar, int Rows = Eigen::Dynamic, int Cols = Eigen::Dynamic>
using cmat_type = Eigen::Matrix<complex_t<Scalar>, Rows, Cols>;

template <class Scalar, int Rows = Eigen::Dynamic>
using ccolvec_type = Eigen::Matrix<complex_t<Scalar>, Rows, 1>;

template <class Scalar, int Cols = Eigen::Dynamic>
using crowvec_type = Eigen::Matrix<complex_t<Scalar>, 1, Cols>;

template <class Scalar, int Rows = Eigen::Dynamic>
using vec_type = Eigen::Matrix<Scalar, Rows, 1>;

template <class Scalar>
using point_type = Eigen::Matrix<Scalar, 3, 1>;

using Position3D = point_type<double>;

template <class Scalar>
inline constexpr Scalar pi_v = std::numbers::pi_v<Scalar>;

/// Raised when a caller passes a value outside an operation's domain.
class invalid_parameter : public std::invalid_argument
{
public:
    explicit invalid_parameter(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised for geometry with no defined direction (coincident points, zero-length hops).
class degenerate_geometry : public std::domain_error
{
public:
    explicit degenerate_geometry(const std::string& what) : std::domain_error(what) {}
};

class dimension_mismatch : public std::invalid_argument
{
public:
    explicit dimension_mismatch(const std::string& what) : std::invalid_argument(what) {}
};

} // namespace ris
