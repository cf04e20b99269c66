// SPDX-License-Identifier: Apache-2.0
#include "hadbf/closed_form.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace hadbf
{

LoadingPolicy LoadingPolicy::fixed(double xi)
{
    if (!(xi >= 0.0))
        throw ContractError("fixed loading level must be >= 0");
    return {Kind::kFixed, xi};
}

double smf_loading_level(const CovarianceEstimate &covariance, const CVector &presumed_steering)
{
    if (presumed_steering.size() != covariance.dimension())
        throw ContractError("steering length does not match covariance dimension");
    const double norm = presumed_steering.norm();
    if (norm == 0.0)
        throw ContractError("presumed steering must be nonzero");
    const CVector a = presumed_steering / norm;
    return std::max(0.0, a.dot(covariance.matrix * a).real());
}

double smf_loading_level(const SnapshotBlock &block, const CVector &presumed_steering)
{
    return smf_loading_level(sample_covariance(block), presumed_steering);
}

double loading_level(const CovarianceEstimate &covariance, const CVector &effective_steering,
                     const LoadingPolicy &loading)
{
    switch (loading.kind)
    {
    case LoadingPolicy::Kind::kNone:
        return 0.0;
    case LoadingPolicy::Kind::kFixed:
        return loading.level;
    case LoadingPolicy::Kind::kSmf:
        return smf_loading_level(covariance, effective_steering);
    }
    return 0.0;
}

DigitalWeights capon_weights(const CovarianceEstimate &covariance, const CVector &effective_steering,
                             const LoadingPolicy &loading)
{
    const int d = covariance.dimension();
    if (d == 0 || covariance.matrix.cols() != d)
        throw ContractError("covariance must be square and non-empty");
    if (effective_steering.size() != d)
        throw ContractError("steering length does not match covariance dimension");
    if (effective_steering.squaredNorm() == 0.0)
        throw ContractError("steering must be nonzero");

    const double xi = loading_level(covariance, effective_steering, loading);
    const CMatrix loaded = covariance.matrix + xi * CMatrix::Identity(d, d);

    Eigen::SelfAdjointEigenSolver<CMatrix> eig(loaded, Eigen::EigenvaluesOnly);
    const double lmax = eig.eigenvalues().maxCoeff();
    const double lmin = eig.eigenvalues().minCoeff();
    const double cond = lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
    if (!(cond <= kConditionLimit))
    {
        std::ostringstream msg;
        msg << "loaded covariance is ill-conditioned (condition number " << cond << ", loading " << xi << ")";
        throw NumericalError(msg.str(), cond);
    }

    Eigen::LLT<CMatrix> llt(loaded);
    if (llt.info() != Eigen::Success)
        throw NumericalError("Cholesky factorization of the loaded covariance failed", cond);
    const CVector y = llt.solve(effective_steering);
    const Complex denom = effective_steering.dot(y); // a^H R^-1 a
    return DigitalWeights::complex(y / denom);
}

DigitalWeights solve_digital(const Scenario &scenario, const AnalogBeamformer &f_rf, const SnapshotBlock &block,
                             ClosedFormMethod method, std::optional<double> presumed_theta, double dl_level)
{
    if (block.dimension() != f_rf.n_subarrays())
        throw ContractError("snapshot dimension does not match the analog beamformer");
    const double look = presumed_theta.value_or(scenario.theta_desired);
    const CVector at = effective_steering(f_rf, look, scenario.element_spacing);
    const CovarianceEstimate r = sample_covariance(block);
    switch (method)
    {
    case ClosedFormMethod::kScb:
        return capon_weights(r, at, LoadingPolicy::none());
    case ClosedFormMethod::kDl:
        return capon_weights(r, at, LoadingPolicy::fixed(dl_level));
    case ClosedFormMethod::kSmf:
        return capon_weights(r, at, LoadingPolicy::smf());
    }
    throw ContractError("unknown closed-form method");
}

} // namespace hadbf
