#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "hadbf/array.hpp"
#include "hadbf/closed_form.hpp"
#include "hadbf/hybrid.hpp"

using namespace hadbf;

namespace
{

CovarianceEstimate random_covariance(int n, std::uint64_t seed, int q = 64)
{
    Rng rng = make_rng(seed, {4});
    CMatrix x(n, q);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < q; ++k)
            x(i, k) = complex_gaussian(rng, 1.0);
    CovarianceEstimate c;
    c.n_snapshots = q;
    c.matrix = x * x.adjoint() / double(q);
    c.matrix = 0.5 * (c.matrix + c.matrix.adjoint()).eval();
    return c;
}

CVector explicit_capon(const CMatrix &r, const CVector &a)
{
    const CMatrix inv = r.inverse();
    const CVector num = inv * a;
    const Complex den = a.adjoint() * num;
    return num / den;
}

} // namespace

TEST_CASE("Capon weights match an explicit inverse")
{
    const CovarianceEstimate c = random_covariance(6, 1);
    const CVector a = steering_vector(0.3, 6);
    const DigitalWeights w = capon_weights(c, a, LoadingPolicy::none());
    CHECK((w.vector() - explicit_capon(c.matrix, a)).norm() < 1e-10);
    const Complex resp = w.vector().adjoint() * a;
    CHECK(std::abs(resp - Complex(1.0)) < 1e-10);
}

TEST_CASE("diagonal loading adds the fixed level")
{
    const CovarianceEstimate c = random_covariance(5, 2);
    const CVector a = steering_vector(-0.2, 5);
    const DigitalWeights w = capon_weights(c, a, LoadingPolicy::fixed(30.0));
    const CMatrix loaded = c.matrix + 30.0 * CMatrix::Identity(5, 5);
    CHECK((w.vector() - explicit_capon(loaded, a)).norm() < 1e-10);
    CHECK(loading_level(c, a, LoadingPolicy::fixed(30.0)) == 30.0);
    CHECK_THROWS(LoadingPolicy::fixed(-1.0));
}

TEST_CASE("SMF loading level is the normalized quadratic form")
{
    const CovarianceEstimate c = random_covariance(4, 3);
    const CVector a = steering_vector(0.1, 4);
    const CVector an = a / a.norm();
    double brute = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            brute += (std::conj(an(i)) * c.matrix(i, j) * an(j)).real();
    CHECK(smf_loading_level(c, a) == doctest::Approx(brute).epsilon(1e-12));
    CHECK(loading_level(c, a, LoadingPolicy::smf()) == doctest::Approx(brute).epsilon(1e-12));
}

TEST_CASE("singular covariance raises NumericalError")
{
    CovarianceEstimate c;
    c.n_snapshots = 1;
    const CVector x = steering_vector(0.4, 4);
    c.matrix = x * x.adjoint();
    CHECK_THROWS_AS(capon_weights(c, steering_vector(0.0, 4), LoadingPolicy::none()), NumericalError);
    // loading repairs it
    CHECK_NOTHROW(capon_weights(c, steering_vector(0.0, 4), LoadingPolicy::fixed(1.0)));
}

TEST_CASE("dimension mismatch is a contract error")
{
    const CovarianceEstimate c = random_covariance(4, 5);
    CHECK_THROWS_AS(capon_weights(c, steering_vector(0.0, 5), LoadingPolicy::none()), ContractError);
}

TEST_CASE("Capon output power is minimal among distortionless combiners")
{
    const CovarianceEstimate c = random_covariance(8, 6, 200);
    const CVector a = steering_vector(0.25, 8);
    const CVector w = capon_weights(c, a, LoadingPolicy::none()).vector();
    const double best = (w.adjoint() * c.matrix * w).real()(0);
    Rng rng = make_rng(99, {1});
    for (int k = 0; k < 200; ++k)
    {
        CVector v(8);
        for (int i = 0; i < 8; ++i)
            v(i) = complex_gaussian(rng, 1.0);
        v = DigitalWeights::complex(v).distortionless(a).vector();
        CHECK((v.adjoint() * c.matrix * v).real()(0) >= best * (1 - 1e-12));
    }
}

TEST_CASE("solve_digital uses the presumed direction")
{
    const Scenario s = reference_scenario(16, 128, 0.0);
    const AnalogBeamformer id = AnalogBeamformer::identity(16);
    Rng rng = make_rng(3, {0});
    const SnapshotBlock b = generate_snapshots(s, id, rng);
    const double look = deg_to_rad(2.0);
    for (ClosedFormMethod m : {ClosedFormMethod::kScb, ClosedFormMethod::kDl, ClosedFormMethod::kSmf})
    {
        const DigitalWeights w = solve_digital(s, id, b, m, look);
        const Complex r = w.vector().adjoint() * steering_vector(look, 16);
        CHECK(std::abs(r - Complex(1.0)) < 1e-9);
    }
}
