#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "cvclone/gaussian.hpp"
#include "cvclone/sum1_source.hpp"
#include "test_support.hpp"

namespace cvclone {
namespace {

using testing::max_abs_diff;

GaussianState twin_beam(double n) { return covariance_matrix(SymmetricSum1{1, n}.params()); }

Matrix2 rotation(double theta) {
  Matrix2 r;
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

// ---------------------------------------------------------------- states

TEST(CoherentState, VacuumAtOrigin) {
  const auto s = coherent_state({0.0, 0.0});
  EXPECT_EQ(s.n_modes(), 1);
  EXPECT_DOUBLE_EQ(s.mean()(0), 0.0);
  EXPECT_DOUBLE_EQ(s.mean()(1), 0.0);
  EXPECT_LT(max_abs_diff(s.cov(), 0.5 * Matrix::Identity(2, 2)), 1e-15);
}

TEST(CoherentState, RealAndImaginaryUnitAmplitudes) {
  const auto re = coherent_state({1.0, 0.0});
  EXPECT_NEAR(re.mean()(0), std::numbers::sqrt2, 1e-15);
  EXPECT_NEAR(re.mean()(1), 0.0, 1e-15);
  const auto im = coherent_state({0.0, 1.0});
  EXPECT_NEAR(im.mean()(0), 0.0, 1e-15);
  EXPECT_NEAR(im.mean()(1), std::numbers::sqrt2, 1e-15);
  EXPECT_LT(max_abs_diff(im.cov(), 0.5 * Matrix::Identity(2, 2)), 1e-15);
}

TEST(CoherentState, NonFiniteAmplitudeRejected) {
  EXPECT_THROW(coherent_state({std::nan(""), 0.0}), DomainError);
  EXPECT_THROW(coherent_state({0.0, INFINITY}), DomainError);
}

TEST(GaussianState, RejectsAsymmetricOrUnphysicalCovariance) {
  Matrix asym = 0.5 * Matrix::Identity(2, 2);
  asym(0, 1) = 0.1;
  EXPECT_THROW(GaussianState(Vector::Zero(2), asym), DomainError);
  EXPECT_THROW(GaussianState(Vector::Zero(2), 0.3 * Matrix::Identity(2, 2)), DomainError);
  EXPECT_THROW(GaussianState(Vector::Zero(3), 0.5 * Matrix::Identity(2, 2)), DomainError);
}

// ---------------------------------------------------------------- channel

TEST(ThermalLoss, ZeroTimeIsIdentity) {
  const auto s = twin_beam(0.7);
  const auto out = apply_thermal_loss(s, ThermalLossParams{0.0, 0.4});
  EXPECT_LT(max_abs_diff(out.cov(), s.cov()), 1e-15);
  EXPECT_LT(max_abs_diff(out.mean(), s.mean()), 1e-15);
}

TEST(ThermalLoss, LongTimeReachesThermalFixedPoint) {
  const auto out = apply_thermal_loss(displace(twin_beam(2.0), std::vector<Vector2>{{3.0, 1.0}, {-2.0, 0.5}}),
                                      ThermalLossParams{100.0, 0.3});
  EXPECT_LT(max_abs_diff(out.cov(), 0.8 * Matrix::Identity(4, 4)), 1e-10);
  EXPECT_LT(out.mean().cwiseAbs().maxCoeff(), 1e-10);
}

TEST(ThermalLoss, CoherentStateHalfTransmission) {
  const auto out = apply_thermal_loss(coherent_state({2.0, 0.0}), ThermalLossParams{std::log(2.0), 0.5});
  EXPECT_NEAR(out.mean()(0), 2.0, 1e-12);
  EXPECT_NEAR(out.mean()(1), 0.0, 1e-15);
  EXPECT_LT(max_abs_diff(out.cov(), 0.75 * Matrix::Identity(2, 2)), 1e-12);
}

TEST(ThermalLoss, SemigroupInTime) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = displace(covariance_matrix(Sum1Params({u(rng), u(rng)})),
                            std::vector<Vector2>{{u(rng), -u(rng)}, {u(rng), u(rng)}, {-u(rng), u(rng)}});
    const double ta = u(rng);
    const double tb = u(rng);
    const double mu = u(rng);
    const auto two_step = apply_thermal_loss(apply_thermal_loss(s, {ta, mu}), {tb, mu});
    const auto one_step = apply_thermal_loss(s, {ta + tb, mu});
    EXPECT_LT(max_abs_diff(two_step.cov(), one_step.cov()), 1e-12);
    EXPECT_LT(max_abs_diff(two_step.mean(), one_step.mean()), 1e-12);
  }
}

TEST(ThermalLoss, ThermalStateIsInvariant) {
  for (double tau : {0.1, 1.0, 7.0}) {
    const auto out = apply_thermal_loss(GaussianState::thermal(2, 0.6), ThermalLossParams{tau, 0.6});
    EXPECT_LT(max_abs_diff(out.cov(), 1.1 * Matrix::Identity(4, 4)), 1e-14);
  }
}

TEST(ThermalLoss, PerModeParameters) {
  const std::vector<ThermalLossParams> params{{0.5, 0.0}, {1.5, 1.0}};
  const auto out = apply_thermal_loss(GaussianState::vacuum(2), params);
  EXPECT_NEAR(out.cov()(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(out.cov()(2, 2), std::exp(-1.5) * 0.5 + (1.0 - std::exp(-1.5)) * 1.5, 1e-15);
}

TEST(ThermalLoss, RejectsBadParameters) {
  const auto s = GaussianState::vacuum(2);
  EXPECT_THROW(apply_thermal_loss(s, ThermalLossParams{-0.1, 0.0}), DomainError);
  EXPECT_THROW(apply_thermal_loss(s, ThermalLossParams{0.1, -1.0}), DomainError);
  const std::vector<ThermalLossParams> one{{0.1, 0.0}};
  EXPECT_THROW(apply_thermal_loss(s, one), DomainError);
}

// ---------------------------------------------------------------- displacement and marginals

TEST(Displace, ZeroShiftAndInverse) {
  const auto s = twin_beam(1.0);
  const std::vector<Vector2> zero{Vector2::Zero(), Vector2::Zero()};
  EXPECT_LT(max_abs_diff(displace(s, zero).mean(), s.mean()), 1e-15);
  const std::vector<Vector2> shift{{1.5, -2.0}, {0.3, 0.1}};
  const std::vector<Vector2> back{{-1.5, 2.0}, {-0.3, -0.1}};
  const auto round_trip = displace(displace(s, shift), back);
  EXPECT_LT(max_abs_diff(round_trip.mean(), s.mean()), 1e-15);
  EXPECT_LT(max_abs_diff(round_trip.cov(), s.cov()), 1e-15);
}

TEST(Displace, ShiftedVacuumIsCoherent) {
  const std::vector<Vector2> shift{{std::numbers::sqrt2, 0.0}};
  const auto s = displace(coherent_state({0.0, 0.0}), shift);
  const auto c = coherent_state({1.0, 0.0});
  EXPECT_LT(max_abs_diff(s.mean(), c.mean()), 1e-15);
  EXPECT_LT(max_abs_diff(s.cov(), c.cov()), 1e-15);
}

TEST(Displace, LengthMismatchRejected) {
  const std::vector<Vector2> one{{1.0, 0.0}};
  EXPECT_THROW(displace(GaussianState::vacuum(2), one), DomainError);
}

TEST(PartialTrace, KeepAllIsIdentity) {
  const auto s = covariance_matrix(Sum1Params({0.3, 0.8}));
  const auto kept = partial_trace(s, {0, 1, 2});
  EXPECT_LT(max_abs_diff(kept.cov(), s.cov()), 1e-15);
}

TEST(PartialTrace, ProductStateMarginal) {
  Matrix cov = 0.5 * Matrix::Identity(4, 4);
  cov.block<2, 2>(2, 2) = 1.7 * Matrix2::Identity();
  const auto kept = partial_trace(GaussianState(Vector::Zero(4), cov), {1});
  EXPECT_LT(max_abs_diff(kept.cov(), 1.7 * Matrix::Identity(2, 2)), 1e-15);
}

TEST(PartialTrace, TwinBeamMarginalsAreThermal) {
  for (double n : {0.0, 0.4, 3.0}) {
    for (int k : {0, 1}) {
      const auto kept = partial_trace(twin_beam(n), {k});
      EXPECT_LT(max_abs_diff(kept.cov(), (n + 0.5) * Matrix::Identity(2, 2)), 1e-15);
      EXPECT_LT(kept.mean().cwiseAbs().maxCoeff(), 1e-15);
    }
  }
}

TEST(PartialTrace, InvalidKeepSetsRejected) {
  const auto s = GaussianState::vacuum(3);
  EXPECT_THROW(partial_trace(s, {}), DomainError);
  EXPECT_THROW(partial_trace(s, {3}), DomainError);
  EXPECT_THROW(partial_trace(s, {-1}), DomainError);
  EXPECT_THROW(partial_trace(s, {1, 1}), DomainError);
}

TEST(PartialTrace, KeepsModeOrder) {
  const auto s = covariance_matrix(Sum1Params({0.1, 0.9}));
  const auto kept = partial_trace(s, {2, 0});
  EXPECT_NEAR(kept.cov()(0, 0), s.cov()(0, 0), 1e-15);
  EXPECT_NEAR(kept.cov()(2, 2), s.cov()(4, 4), 1e-15);
}

// ---------------------------------------------------------------- conditioning

TEST(DoubleHomodyne, UncoupledSupportLeavesRemainderUnchanged) {
  Matrix cov = 0.5 * Matrix::Identity(4, 4);
  cov.block<2, 2>(2, 2) = 0.9 * Matrix2::Identity();
  const GaussianState support(Vector::Zero(4), cov);
  for (const Vector2& z : {Vector2(0.0, 0.0), Vector2(1.5, -3.0)}) {
    const auto c = condition_on_double_homodyne(support, 0, 0.5 * Matrix2::Identity(), Vector2::Zero(), {z});
    EXPECT_LT(max_abs_diff(c.state.cov(), 0.9 * Matrix::Identity(2, 2)), 1e-15);
  }
}

TEST(DoubleHomodyne, CentredTwinBeamAtOriginHasZeroMean) {
  const auto c = condition_on_double_homodyne(twin_beam(1.0), 0, 0.5 * Matrix2::Identity(), Vector2::Zero(),
                                              {Vector2::Zero()});
  EXPECT_LT(c.state.mean().cwiseAbs().maxCoeff(), 1e-15);
}

TEST(DoubleHomodyne, OutcomeDensityIntegratesToOne) {
  const auto support = apply_thermal_loss(covariance_matrix(Sum1Params({0.6, 1.1})), ThermalLossParams{0.4, 0.2});
  const Vector2 ref = coherent_mean({0.8, -1.2});
  const auto density = [&](double x, double y) {
    return condition_on_double_homodyne(support, 0, 0.5 * Matrix2::Identity(), ref, {Vector2(x, y)})
        .probability_density;
  };
  // outcome mean is mean_0 - P ref = (-ref_q, ref_p); the spread is a few units
  const double total = testing::integrate_2d(density, -ref(0) - 15.0, -ref(0) + 15.0, ref(1) - 15.0, ref(1) + 15.0);
  EXPECT_NEAR(total, 1.0, 1e-6);
}

TEST(DoubleHomodyne, LawOfTotalCovariance) {
  const auto support = apply_thermal_loss(covariance_matrix(Sum1Params({0.5, 1.0})),
                                          std::vector<ThermalLossParams>{{0.3, 0.2}, {0.6, 0.2}, {0.6, 0.2}});
  const Matrix2 ref_cov = 0.5 * Matrix2::Identity();
  const Vector2 ref_mean = coherent_mean({0.5, 0.5});
  const Matrix2 flip = momentum_flip();
  const Matrix2 joint = support.mode_cov(0) + flip * ref_cov * flip;
  const Matrix2 chol = joint.llt().matrixL();
  const Vector2 centre = support.mode_mean(0) - flip * ref_mean;

  std::mt19937_64 rng(2718);
  std::normal_distribution<double> normal;
  constexpr int kSamples = 40000;
  Matrix means(4, kSamples);
  Matrix cond_cov = Matrix::Zero(4, 4);
  for (int i = 0; i < kSamples; ++i) {
    const Vector2 z = centre + chol * Vector2(normal(rng), normal(rng));
    const auto c = condition_on_double_homodyne(support, 0, ref_cov, ref_mean, {z});
    means.col(i) = c.state.mean();
    cond_cov += c.state.cov() / kSamples;
  }
  const Vector avg = means.rowwise().mean();
  const Matrix centred = means.colwise() - avg;
  const Matrix spread = centred * centred.transpose() / (kSamples - 1.0);
  const Matrix total = cond_cov + spread;
  const auto marginal = partial_trace(support, {1, 2});

  for (int j = 0; j < 4; ++j) {
    for (int k = 0; k < 4; ++k) {
      const Eigen::ArrayXd prod = centred.row(j).array() * centred.row(k).array();
      const double se = std::sqrt((prod - prod.mean()).square().sum() / (kSamples - 1.0) / kSamples);
      EXPECT_NEAR(total(j, k), marginal.cov()(j, k), 3.0 * se + 1e-12) << "entry " << j << "," << k;
    }
    const double se_mean = std::sqrt(spread(j, j) / kSamples);
    EXPECT_NEAR(avg(j), marginal.mean()(j), 3.0 * se_mean + 1e-12);
  }
}

TEST(DoubleHomodyne, ErrorsReported) {
  const auto support = twin_beam(1.0);
  EXPECT_THROW(condition_on_double_homodyne(support, 2, 0.5 * Matrix2::Identity(), Vector2::Zero(), {}),
               DomainError);
  EXPECT_THROW(condition_on_double_homodyne(GaussianState::vacuum(1), 0, 0.5 * Matrix2::Identity(), Vector2::Zero(),
                                            {}),
               DomainError);
  // a huge squeezed reference makes A+M ill-conditioned
  Matrix2 squeezed;
  squeezed << 1e14, 0.0, 0.0, 1e-14;
  EXPECT_THROW(condition_on_double_homodyne(GaussianState::vacuum(2), 0, squeezed, Vector2::Zero(), {}),
               NumericalError);
}

// ---------------------------------------------------------------- fidelity

TEST(FidelityToCoherent, SelfOverlapIsOne) {
  for (const std::complex<double> a : {std::complex<double>{0.0, 0.0}, {1.2, -0.7}, {-3.0, 4.0}}) {
    EXPECT_NEAR(fidelity_to_coherent(coherent_state(a), a), 1.0, 1e-15);
  }
}

TEST(FidelityToCoherent, ThermalVacuumOverlapMatchesFockOccupation) {
  // <0|rho_th|0> is the zero-photon probability of a geometric distribution
  for (double mu : {0.0, 0.3, 2.0}) {
    const double p0 = 1.0 - mu / (1.0 + mu);
    EXPECT_NEAR(fidelity_to_coherent(GaussianState::thermal(1, mu), {0.0, 0.0}), p0, 1e-15);
  }
}

TEST(FidelityToCoherent, IsotropicNoiseWithMatchedMean) {
  for (double f : {0.9, 2.0 / 3.0, 0.4}) {
    const std::complex<double> alpha{0.3, -1.1};
    const Vector2 mean = coherent_mean(alpha);
    const GaussianState s(mean, (1.0 / f - 0.5) * Matrix::Identity(2, 2));
    EXPECT_NEAR(fidelity_to_coherent(s, alpha), f, 1e-14);
  }
}

TEST(FidelityToCoherent, InvariantUnderCommonRotation) {
  Matrix cov(2, 2);
  cov << 1.3, 0.4, 0.4, 0.8;
  const GaussianState s(Vector2(0.7, -0.2), cov);
  const std::complex<double> alpha{0.9, 0.5};
  const double reference = fidelity_to_coherent(s, alpha);
  for (double theta : {0.3, 1.0, 2.5, -1.7}) {
    const Matrix2 r = rotation(theta);
    const GaussianState rotated(r * s.mode_mean(0), r * s.mode_cov(0) * r.transpose());
    EXPECT_NEAR(fidelity_to_coherent(rotated, alpha * std::polar(1.0, theta)), reference, 1e-14);
  }
}

TEST(FidelityToCoherent, RequiresSingleMode) {
  EXPECT_THROW(fidelity_to_coherent(GaussianState::vacuum(2), {0.0, 0.0}), DomainError);
}

// ---------------------------------------------------------------- symplectic spectrum

TEST(SymplecticEigenvalues, VacuumAndThermal) {
  for (double v : symplectic_eigenvalues(0.5 * Matrix::Identity(6, 6))) EXPECT_NEAR(v, 0.5, 1e-14);
  for (double v : symplectic_eigenvalues(1.8 * Matrix::Identity(4, 4))) EXPECT_NEAR(v, 1.8, 1e-14);
}

TEST(SymplecticEigenvalues, TwinBeamIsPure) {
  for (double n : {0.0, 0.5, 1.0, 10.0}) {
    const auto nu = symplectic_eigenvalues(twin_beam(n).cov());
    ASSERT_EQ(nu.size(), 2u);
    for (double v : nu) EXPECT_NEAR(v, 0.5, 1e-10);
    const auto ref = testing::symplectic_spectrum_reference(twin_beam(n).cov());
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(nu[i], ref[i], 1e-9);
  }
}

TEST(SymplecticEigenvalues, AgreesWithGenericEigensolver) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = apply_thermal_loss(covariance_matrix(Sum1Params({u(rng), u(rng), u(rng)})),
                                      ThermalLossParams{u(rng), u(rng)});
    const auto nu = symplectic_eigenvalues(s.cov());
    const auto ref = testing::symplectic_spectrum_reference(s.cov());
    ASSERT_EQ(nu.size(), ref.size());
    for (std::size_t i = 0; i < nu.size(); ++i) EXPECT_NEAR(nu[i], ref[i], 1e-9);
  }
}

TEST(SymplecticEigenvalues, PartiallyTransposedMatrixHandled) {
  Matrix cov = twin_beam(1.0).cov();
  cov.row(3) *= -1.0;
  cov.col(3) *= -1.0;
  const auto nu = symplectic_eigenvalues(cov);
  EXPECT_NEAR(nu.front(), 1.0 / (2.0 * (3.0 + 2.0 * std::numbers::sqrt2)), 1e-12);
}

TEST(SymplecticEigenvalues, RejectsNonSymmetric) {
  Matrix cov = 0.5 * Matrix::Identity(2, 2);
  cov(0, 1) = 0.2;
  EXPECT_THROW(symplectic_eigenvalues(cov), DomainError);
}

// ---------------------------------------------------------------- separability

TEST(PptCriterion, VacuumIsSeparable) {
  const auto s = GaussianState::vacuum(3);
  EXPECT_NEAR(ppt_min_symplectic(s, {{0}, {1, 2}}), 0.5, 1e-14);
  EXPECT_NEAR(ppt_min_symplectic(s, {{0, 2}, {1}}), 0.5, 1e-14);
}

TEST(PptCriterion, TwinBeamClosedForm) {
  const double expected = 1.0 / (2.0 * (3.0 + 2.0 * std::numbers::sqrt2));
  EXPECT_NEAR(ppt_min_symplectic(twin_beam(1.0), {{0}, {1}}), expected, 1e-12);
  EXPECT_NEAR(expected, 0.08579, 1e-5);
}

TEST(PptCriterion, ThreeModeResourceEntangledAcrossReceiverCut) {
  const auto s = covariance_matrix(SymmetricSum1{2, 0.5}.params());
  EXPECT_LT(ppt_min_symplectic(s, {{1}, {0, 2}}), 0.5);
}

TEST(PptCriterion, InvalidPartitionsRejected) {
  const auto s = GaussianState::vacuum(3);
  EXPECT_THROW(ppt_min_symplectic(s, {{0}, {1}}), DomainError);
  EXPECT_THROW(ppt_min_symplectic(s, {{0, 1}, {1, 2}}), DomainError);
  EXPECT_THROW(ppt_min_symplectic(s, {{}, {0, 1, 2}}), DomainError);
  EXPECT_THROW(ppt_min_symplectic(s, {{0, 1}, {5}}), DomainError);
}

// ---------------------------------------------------------------- physicality

TEST(Physicality, PreservedByEveryOperation) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int trial = 0; trial < 25; ++trial) {
    const auto source = covariance_matrix(Sum1Params({u(rng), u(rng)}));
    const auto lossy = apply_thermal_loss(source, ThermalLossParams{u(rng), u(rng)});
    const auto shifted = displace(lossy, std::vector<Vector2>{{u(rng), u(rng)}, {u(rng), 0.0}, {0.0, u(rng)}});
    const auto cond = condition_on_double_homodyne(shifted, 0, 0.5 * Matrix2::Identity(), Vector2(u(rng), -u(rng)),
                                                   {Vector2(u(rng), u(rng))});
    for (const GaussianState* s : {&source, &lossy, &shifted, &cond.state}) {
      EXPECT_GE(s->min_symplectic_eigenvalue(), 0.5 - 1e-9);
    }
    EXPECT_GE(partial_trace(lossy, {2}).min_symplectic_eigenvalue(), 0.5 - 1e-9);
  }
}

}  // namespace
}  // namespace cvclone
