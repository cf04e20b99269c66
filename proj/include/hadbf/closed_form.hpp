// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "hadbf/array.hpp"
#include "hadbf/hybrid.hpp"

namespace hadbf
{

inline constexpr double kDefaultDiagonalLoading = 30.0;
inline constexpr double kConditionLimit = 1e12;

struct LoadingPolicy
{
    enum class Kind
    {
        kNone,  // standard Capon
        kFixed, // diagonal loading with a fixed level
        kSmf,   // level = a^H R a with a the normalized presumed steering
    };

    Kind kind = Kind::kNone;
    double level = 0.0;

    static LoadingPolicy none() { return {Kind::kNone, 0.0}; }
    static LoadingPolicy fixed(double xi);
    static LoadingPolicy smf() { return {Kind::kSmf, 0.0}; }
};

// (R + xi I)^-1 a / (a^H (R + xi I)^-1 a), via a Hermitian factorization.
// Throws NumericalError when the loaded covariance is singular or its
// condition number exceeds kConditionLimit.
DigitalWeights capon_weights(const CovarianceEstimate &covariance, const CVector &effective_steering,
                             const LoadingPolicy &loading);

// Loading level actually applied by `loading` on `covariance`.
double loading_level(const CovarianceEstimate &covariance, const CVector &effective_steering,
                     const LoadingPolicy &loading);

double smf_loading_level(const CovarianceEstimate &covariance, const CVector &presumed_steering);
double smf_loading_level(const SnapshotBlock &block, const CVector &presumed_steering);

enum class ClosedFormMethod
{
    kScb,
    kDl,
    kSmf,
};

// Closed-form combiner for the block collected through `f_rf`. The look
// direction is `presumed_theta` when given, otherwise the scenario's
// desired DOA. Pass AnalogBeamformer::identity(N) for the fully digital
// baselines.
DigitalWeights solve_digital(const Scenario &scenario, const AnalogBeamformer &f_rf, const SnapshotBlock &block,
                             ClosedFormMethod method, std::optional<double> presumed_theta = std::nullopt,
                             double dl_level = kDefaultDiagonalLoading);

} // namespace hadbf
