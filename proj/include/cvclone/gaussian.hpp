#pragma once

// Gaussian states of n bosonic modes in the (q_1, p_1, ..., q_n, p_n)
// ordering with q = (a + a^dag)/sqrt(2): vacuum variance 1/2 per quadrature,
// and a coherent state |alpha> has mean sqrt(2) * (Re alpha, Im alpha).

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cvclone/errors.hpp"

namespace cvclone {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Vector2 = Eigen::Vector2d;
using Matrix2 = Eigen::Matrix2d;

inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kPhysicalityTolerance = 1e-9;
inline constexpr double kSymplecticPairingTolerance = 1e-9;
inline constexpr double kMaxConditionNumber = 1e12;

/// Diag(1, -1): momentum reflection on a single mode.
inline Matrix2 momentum_flip() {
  Matrix2 p;
  p << 1.0, 0.0, 0.0, -1.0;
  return p;
}

/// Standard symplectic form on n modes, blocks ((0, 1), (-1, 0)).
inline Matrix symplectic_form(int n_modes) {
  Matrix omega = Matrix::Zero(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

inline std::vector<double> symplectic_eigenvalues(const Matrix& cov);

/// Mean vector and covariance matrix of an n-mode Gaussian state.
///
/// The covariance is symmetrized on construction; inputs whose asymmetry
/// exceeds kSymmetryTolerance (relative to the largest entry) or that violate
/// the uncertainty principle by more than kPhysicalityTolerance are rejected.
class GaussianState {
 public:
  GaussianState(Vector mean, Matrix cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
    detail::require(cov_.rows() > 0 && cov_.rows() % 2 == 0 && cov_.rows() == cov_.cols(),
                    "covariance must be a non-empty 2n x 2n matrix");
    detail::require(mean_.size() == cov_.rows(), "mean length must equal covariance dimension");
    detail::require(mean_.allFinite() && cov_.allFinite(), "state contains non-finite entries");
    const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
    detail::require((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() <= kSymmetryTolerance * scale,
                    "covariance matrix is not symmetric");
    cov_ = 0.5 * (cov_ + cov_.transpose());
    const auto nu = symplectic_eigenvalues(cov_);
    if (nu.front() < 0.5 - kPhysicalityTolerance) {
      throw DomainError("unphysical covariance: minimum symplectic eigenvalue " +
                        std::to_string(nu.front()) + " < 1/2");
    }
  }

  static GaussianState vacuum(int n_modes) {
    detail::require(n_modes > 0, "mode count must be positive");
    return {Vector::Zero(2 * n_modes), 0.5 * Matrix::Identity(2 * n_modes, 2 * n_modes)};
  }

  static GaussianState thermal(int n_modes, double mean_photons) {
    detail::require(n_modes > 0, "mode count must be positive");
    detail::require(mean_photons >= 0.0, "thermal photon number must be nonnegative");
    return {Vector::Zero(2 * n_modes),
            (mean_photons + 0.5) * Matrix::Identity(2 * n_modes, 2 * n_modes)};
  }

  int n_modes() const { return static_cast<int>(mean_.size() / 2); }
  const Vector& mean() const { return mean_; }
  const Matrix& cov() const { return cov_; }

  Vector2 mode_mean(int k) const { return mean_.segment<2>(2 * k); }
  Matrix2 mode_cov(int k) const { return cov_.block<2, 2>(2 * k, 2 * k); }

  double min_symplectic_eigenvalue() const { return symplectic_eigenvalues(cov_).front(); }

 private:
  Vector mean_;
  Matrix cov_;
};

/// Per-mode thermal-loss channel: effective propagation time tau (amplitude
/// decays as e^{-tau/2}) into an environment with mu mean thermal photons.
struct ThermalLossParams {
  double tau = 0.0;
  double mu = 0.0;

  double kappa() const { return mu + 0.5; }
  double transmissivity() const { return std::exp(-tau); }
};

/// Complex outcome of a double-homodyne detection, stored as (Re z, Im z).
struct MeasurementOutcome {
  Vector2 z = Vector2::Zero();
};

/// Bipartition of the modes of a state.
struct ModePartition {
  std::vector<int> group_a;
  std::vector<int> group_b;

  void validate(int n_modes) const {
    detail::require(!group_a.empty() && !group_b.empty(), "partition groups must be nonempty");
    std::vector<int> seen(static_cast<std::size_t>(n_modes), 0);
    for (const auto* group : {&group_a, &group_b}) {
      for (int k : *group) {
        detail::require(k >= 0 && k < n_modes, "partition mode index out of range");
        detail::require(seen[static_cast<std::size_t>(k)]++ == 0, "partition groups overlap");
      }
    }
    detail::require(static_cast<int>(group_a.size() + group_b.size()) == n_modes,
                    "partition does not cover every mode");
  }
};

/// Symplectic spectrum of a symmetric covariance matrix: the moduli of the
/// eigenvalues of i*Omega*cov, paired (+nu, -nu) and returned ascending.
inline std::vector<double> symplectic_eigenvalues(const Matrix& cov) {
  detail::require(cov.rows() > 0 && cov.rows() % 2 == 0 && cov.rows() == cov.cols(),
                  "covariance must be a non-empty 2n x 2n matrix");
  const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
  detail::require((cov - cov.transpose()).cwiseAbs().maxCoeff() <= kSymmetryTolerance * scale,
                  "covariance matrix is not symmetric");
  const int n = static_cast<int>(cov.rows() / 2);
  const Matrix omega = symplectic_form(n);
  const Matrix sym = 0.5 * (cov + cov.transpose());

  std::vector<double> spectrum;
  spectrum.reserve(static_cast<std::size_t>(2 * n));
  Eigen::LLT<Matrix> llt(sym);
  if (llt.info() == Eigen::Success) {
    // cov = L L^T, so Omega cov is similar to the antisymmetric L^T Omega L and
    // i L^T Omega L is Hermitian with eigenvalues +-nu.
    const Matrix lower = llt.matrixL();
    const Matrix anti = lower.transpose() * omega * lower;
    const Eigen::MatrixXcd herm = std::complex<double>(0.0, 1.0) * anti.cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
      spectrum.push_back(solver.eigenvalues()(k));
    }
  } else {
    Eigen::EigenSolver<Matrix> solver(omega * sym, false);
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
      spectrum.push_back(-solver.eigenvalues()(k).imag());
    }
  }
  std::sort(spectrum.begin(), spectrum.end());

  std::vector<double> nu;
  nu.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double low = spectrum[static_cast<std::size_t>(k)];
    const double high = spectrum[static_cast<std::size_t>(2 * n - 1 - k)];
    if (std::abs(low + high) > kSymplecticPairingTolerance * scale) {
      throw NumericalError("symplectic spectrum does not pair into +-nu");
    }
    nu.push_back(0.5 * (high - low));
  }
  std::sort(nu.begin(), nu.end());
  return nu;
}

inline GaussianState coherent_state(std::complex<double> alpha) {
  detail::require(std::isfinite(alpha.real()) && std::isfinite(alpha.imag()),
                  "coherent amplitude must be finite");
  Vector mean(2);
  mean << std::numbers::sqrt2 * alpha.real(), std::numbers::sqrt2 * alpha.imag();
  return {mean, 0.5 * Matrix::Identity(2, 2)};
}

/// Quadrature mean of |alpha> under the sqrt(2) convention.
inline Vector2 coherent_mean(std::complex<double> alpha) {
  return {std::numbers::sqrt2 * alpha.real(), std::numbers::sqrt2 * alpha.imag()};
}

/// cov' = G^{1/2} cov G^{1/2} + (1 - G)(mu + 1/2), mean' = G^{1/2} mean, with
/// G = diag(e^{-tau_k}) per mode.
inline GaussianState apply_thermal_loss(const GaussianState& state,
                                        std::span<const ThermalLossParams> params) {
  const int n = state.n_modes();
  detail::require(static_cast<int>(params.size()) == n, "one loss parameter set per mode required");
  Vector gain(2 * n);
  Vector floor(2 * n);
  for (int k = 0; k < n; ++k) {
    const auto& p = params[static_cast<std::size_t>(k)];
    detail::require(p.tau >= 0.0 && std::isfinite(p.tau), "loss time tau must be nonnegative");
    detail::require(p.mu >= 0.0 && std::isfinite(p.mu), "thermal photons mu must be nonnegative");
    const double g = std::exp(-p.tau);
    gain.segment<2>(2 * k).setConstant(std::sqrt(g));
    floor.segment<2>(2 * k).setConstant((1.0 - g) * p.kappa());
  }
  Matrix cov = gain.asDiagonal() * state.cov() * gain.asDiagonal();
  cov.diagonal() += floor;
  Vector mean = gain.cwiseProduct(state.mean());
  return {std::move(mean), std::move(cov)};
}

inline GaussianState apply_thermal_loss(const GaussianState& state, ThermalLossParams uniform) {
  const std::vector<ThermalLossParams> params(static_cast<std::size_t>(state.n_modes()), uniform);
  return apply_thermal_loss(state, params);
}

inline GaussianState displace(const GaussianState& state, std::span<const Vector2> shifts) {
  detail::require(static_cast<int>(shifts.size()) == state.n_modes(), "one shift per mode required");
  Vector mean = state.mean();
  for (std::size_t k = 0; k < shifts.size(); ++k) {
    mean.segment<2>(2 * static_cast<Eigen::Index>(k)) += shifts[k];
  }
  return {std::move(mean), state.cov()};
}

/// Reduced state on the modes in `keep` (ascending mode order).
inline GaussianState partial_trace(const GaussianState& state, std::vector<int> keep) {
  detail::require(!keep.empty(), "keep-set must be nonempty");
  std::sort(keep.begin(), keep.end());
  detail::require(std::adjacent_find(keep.begin(), keep.end()) == keep.end(),
                  "keep-set contains duplicates");
  detail::require(keep.front() >= 0 && keep.back() < state.n_modes(), "keep-set index out of range");
  const auto n = static_cast<Eigen::Index>(keep.size());
  Vector mean(2 * n);
  Matrix cov(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int src_i = keep[static_cast<std::size_t>(i)];
    mean.segment<2>(2 * i) = state.mode_mean(src_i);
    for (Eigen::Index j = 0; j < n; ++j) {
      const int src_j = keep[static_cast<std::size_t>(j)];
      cov.block<2, 2>(2 * i, 2 * j) = state.cov().block<2, 2>(2 * src_i, 2 * src_j);
    }
  }
  return {std::move(mean), std::move(cov)};
}

/// Result of conditioning a support state on a double-homodyne outcome.
struct ConditionalState {
  GaussianState state;
  double probability_density = 0.0;
};

/// Double-homodyne detection of `measured_mode` jointly with a reference mode
/// in the Gaussian state (reference_mean, reference_cov). The outcome z is the
/// pair (q_m - q_ref, p_m + p_ref), so X = P*reference_mean + z - mean_m is
/// centred with covariance A + M, M = P*reference_cov*P. The conditional state
/// of the remaining modes has covariance B - C^T (A+M)^{-1} C and mean
/// mean_rest + C^T (A+M)^{-1} X; the returned density integrates to one over z.
inline ConditionalState condition_on_double_homodyne(const GaussianState& support, int measured_mode,
                                                     const Matrix2& reference_cov,
                                                     const Vector2& reference_mean,
                                                     const MeasurementOutcome& outcome) {
  const int n = support.n_modes();
  detail::require(n >= 2, "support must have at least two modes");
  detail::require(measured_mode >= 0 && measured_mode < n, "measured mode index out of range");
  detail::require(outcome.z.allFinite(), "measurement outcome must be finite");
  detail::require((reference_cov - reference_cov.transpose()).cwiseAbs().maxCoeff() <= kSymmetryTolerance,
                  "reference covariance must be symmetric");

  std::vector<int> rest;
  for (int k = 0; k < n; ++k) {
    if (k != measured_mode) rest.push_back(k);
  }
  const auto r = static_cast<Eigen::Index>(rest.size());
  Matrix coupling(2, 2 * r);
  Matrix rest_cov(2 * r, 2 * r);
  Vector rest_mean(2 * r);
  for (Eigen::Index i = 0; i < r; ++i) {
    const int src_i = rest[static_cast<std::size_t>(i)];
    coupling.block<2, 2>(0, 2 * i) = support.cov().block<2, 2>(2 * measured_mode, 2 * src_i);
    rest_mean.segment<2>(2 * i) = support.mode_mean(src_i);
    for (Eigen::Index j = 0; j < r; ++j) {
      const int src_j = rest[static_cast<std::size_t>(j)];
      rest_cov.block<2, 2>(2 * i, 2 * j) = support.cov().block<2, 2>(2 * src_i, 2 * src_j);
    }
  }

  const Matrix2 flip = momentum_flip();
  Matrix2 joint = support.mode_cov(measured_mode) + flip * reference_cov * flip;
  joint = 0.5 * (joint + joint.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix2> eig(joint, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues()(0);
  const double hi = eig.eigenvalues()(1);
  if (!(lo > 0.0) || hi / lo > kMaxConditionNumber) {
    throw NumericalError("double-homodyne covariance A+M is singular or ill-conditioned (eigenvalues " +
                         std::to_string(lo) + ", " + std::to_string(hi) + ")");
  }
  Eigen::LLT<Matrix2> llt(joint);
  const Vector2 centred = flip * reference_mean + outcome.z - support.mode_mean(measured_mode);
  const Matrix gain = llt.solve(coupling).transpose();  // C^T (A+M)^{-1}

  Matrix cond_cov = rest_cov - gain * coupling;
  cond_cov = 0.5 * (cond_cov + cond_cov.transpose());
  Vector cond_mean = rest_mean + gain * centred;

  const double quad = centred.dot(llt.solve(centred));
  const double density =
      std::exp(-0.5 * quad) / (2.0 * std::numbers::pi * std::sqrt(joint.determinant()));
  return {GaussianState(std::move(cond_mean), std::move(cond_cov)), density};
}

/// Overlap <alpha| rho |alpha> for a single-mode Gaussian rho:
/// exp(-1/2 d^T (cov + I/2)^{-1} d) / sqrt(det(cov + I/2)), d = mean - sqrt2*alpha.
inline double fidelity_to_coherent(const GaussianState& state, std::complex<double> alpha) {
  detail::require(state.n_modes() == 1, "fidelity_to_coherent expects a single-mode state");
  const Matrix2 sum = state.mode_cov(0) + 0.5 * Matrix2::Identity();
  const Vector2 offset = state.mode_mean(0) - coherent_mean(alpha);
  return std::exp(-0.5 * offset.dot(sum.inverse() * offset)) / std::sqrt(sum.determinant());
}

/// Partial transpose (momentum flip on group_b) followed by the smallest
/// symplectic eigenvalue. A value below 1/2 certifies inseparability.
inline double ppt_min_symplectic(const GaussianState& state, const ModePartition& partition) {
  partition.validate(state.n_modes());
  Vector reflect = Vector::Ones(2 * state.n_modes());
  for (int k : partition.group_b) reflect(2 * k + 1) = -1.0;
  const Matrix transposed = reflect.asDiagonal() * state.cov() * reflect.asDiagonal();
  return symplectic_eigenvalues(transposed).front();
}

}  // namespace cvclone
