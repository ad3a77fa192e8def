#pragma once

#include <Eigen/Dense>
#include <complex>

namespace rcsteer {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double deg_to_rad(double deg) noexcept { return deg * (kPi / 180.0); }
inline constexpr double rad_to_deg(double rad) noexcept { return rad * (180.0 / kPi); }

}  // namespace rcsteer
