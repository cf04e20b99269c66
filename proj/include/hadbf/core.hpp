// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace hadbf
{

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

// Violated precondition: wrong dimensions, empty inputs, bad sizes.
class ContractError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain (e.g. |theta| > pi/2).
class DomainError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

// Ill-conditioned or singular linear system.
class NumericalError : public std::runtime_error
{
public:
    NumericalError(const std::string &what, double condition_number)
        : std::runtime_error(what), condition_number_(condition_number) {}

    double condition_number() const { return condition_number_; }

private:
    double condition_number_;
};

// APALS scan rejected every grid point.
class SearchFailure : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace hadbf
