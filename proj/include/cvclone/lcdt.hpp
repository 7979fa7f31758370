#pragma once

// Local cloning + direct transmission: the input travels tau0, is cloned by a
// phase-covariant Gaussian cloner (added noise nbar = (m-1)/m per quadrature),
// and each clone travels tauc to its receiver. Only the single-clone marginal
// is modelled; the channels act independently on each clone.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>

#include <boost/math/tools/roots.hpp>

#include "cvclone/errors.hpp"
#include "cvclone/gaussian.hpp"
#include "cvclone/telecloning.hpp"

namespace cvclone {

struct LcdtConfig {
  int m = 2;
  double tau0 = 0.0;
  double tauc = 0.0;
  double mu = 0.0;

  double tau_tot() const { return tau0 + tauc; }
  double nbar() const { return static_cast<double>(m - 1) / m; }

  void validate() const {
    detail::require(m >= 2, "local cloning requires m >= 2");
    detail::require(std::isfinite(tau0) && tau0 >= 0.0, "tau0 must be nonnegative");
    detail::require(std::isfinite(tauc) && tauc >= 0.0, "tauc must be nonnegative");
    detail::require(std::isfinite(mu) && mu >= 0.0, "mu must be nonnegative");
  }
};

/// Input alphabet: complex amplitudes drawn from exp(-|alpha|^2/Omega^2)/(pi Omega^2).
struct GaussianAlphabet {
  double omega_sq = 0.0;

  double omega() const { return std::sqrt(omega_sq); }
  double density(std::complex<double> alpha) const {
    return std::exp(-std::norm(alpha) / omega_sq) / (std::numbers::pi * omega_sq);
  }
};

/// Single-clone marginal of the optimal symmetric 1 -> m Gaussian cloner.
inline GaussianState apply_cloning_map(const GaussianState& state, int m) {
  detail::require(m >= 2, "cloning requires m >= 2");
  detail::require(state.n_modes() == 1, "cloning map acts on a single mode");
  const double nbar = static_cast<double>(m - 1) / m;
  Matrix cov = state.cov();
  cov.diagonal().array() += nbar;
  return {state.mean(), std::move(cov)};
}

/// Clone state at the receiver: propagate tau0, clone, propagate tauc.
inline GaussianState lcdt_clone_state(const LcdtConfig& config, std::complex<double> alpha) {
  config.validate();
  const auto before = apply_thermal_loss(coherent_state(alpha), ThermalLossParams{config.tau0, config.mu});
  const auto cloned = apply_cloning_map(before, config.m);
  return apply_thermal_loss(cloned, ThermalLossParams{config.tauc, config.mu});
}

namespace detail {

/// Denominator 1 + nbar e^{-tauc} + (1 - e^{-tau}) mu of the local fidelity.
inline double lcdt_denominator(double nbar, double tauc, double tau_tot, double mu) {
  return 1.0 + nbar * std::exp(-tauc) + (1.0 - std::exp(-tau_tot)) * mu;
}

/// Coefficient of |alpha|^2 in the exponent numerator: (1 - e^{-tau/2})^2.
inline double lcdt_damping(double tau_tot) {
  const double d = -std::expm1(-0.5 * tau_tot);
  return d * d;
}

}  // namespace detail

/// F_d = exp(-(1 - e^{-tau/2})^2 |alpha|^2 / D) / D.
inline double lcdt_fidelity(const LcdtConfig& config, std::complex<double> alpha) {
  config.validate();
  const double d = detail::lcdt_denominator(config.nbar(), config.tauc, config.tau_tot(), config.mu);
  return std::exp(-detail::lcdt_damping(config.tau_tot()) * std::norm(alpha) / d) / d;
}

/// |alpha|^2 above which the cloner should move away from the sender.
inline double admissibility_threshold(int m, double tau_tot, double mu) {
  const double nbar = static_cast<double>(m - 1) / m;
  const double e = std::expm1(0.5 * tau_tot);
  return (nbar - mu + std::exp(tau_tot) * (1.0 + mu)) / (e * e);
}

struct ClonerLocation {
  double tau_c_opt = 0.0;
  double f_at_opt = 0.0;
  bool interior = false;
  /// Unconstrained stationary point of F_d in tauc; may fall outside [0, tau].
  double tau_c_stationary = 0.0;
};

/// |alpha|^2 above which the stationary point passes tauc = 0 and the best
/// placement is at the receivers.
inline double receiver_edge_threshold(int m, double tau_tot, double mu) {
  const double d_max = detail::lcdt_denominator(static_cast<double>(m - 1) / m, 0.0, tau_tot, mu);
  return d_max / detail::lcdt_damping(tau_tot);
}

/// Best split of tau_tot between pre- and post-cloning propagation. F_d as a
/// function of D is maximal at D = (1 - e^{-tau/2})^2 |alpha|^2, which lies in
/// the reachable range only between the admissibility threshold and
/// receiver_edge_threshold; there F_d = 1/(e D) < 1/e. Below that window the
/// cloner sits at the sender (tauc = tau), above it at the receivers (tauc = 0).
inline ClonerLocation optimize_cloner_location(int m, double tau_tot, double mu, std::complex<double> alpha) {
  detail::require(std::isfinite(tau_tot) && tau_tot > 0.0, "tau_tot must be positive");
  const LcdtConfig at_sender{m, 0.0, tau_tot, mu};
  at_sender.validate();
  const double nbar = at_sender.nbar();
  const double target = detail::lcdt_damping(tau_tot) * std::norm(alpha);
  const double shifted = target - 1.0 - (1.0 - std::exp(-tau_tot)) * mu;
  const double stationary = shifted > 0.0 ? -std::log(shifted / nbar) : std::numeric_limits<double>::infinity();
  if (std::norm(alpha) <= admissibility_threshold(m, tau_tot, mu) || stationary >= tau_tot) {
    return {tau_tot, lcdt_fidelity(at_sender, alpha), false, stationary};
  }
  if (stationary <= 0.0) {
    return {0.0, lcdt_fidelity(LcdtConfig{m, tau_tot, 0.0, mu}, alpha), false, stationary};
  }
  return {stationary, lcdt_fidelity(LcdtConfig{m, tau_tot - stationary, stationary, mu}, alpha), true, stationary};
}

/// Average of F_d (cloner at the sender) over the Gaussian alphabet, in closed
/// form A / (1 + B Omega^2) with A = 1/D and B = (1 - e^{-tau/2})^2 / D. This is
/// m e^tau / (m [1 - mu + Omega^2 (1 - 2 e^{tau/2}) + e^tau (1 + mu + Omega^2)] - 1).
inline double averaged_fidelity(int m, double tau_tot, double mu, GaussianAlphabet alphabet) {
  detail::require(std::isfinite(alphabet.omega_sq) && alphabet.omega_sq >= 0.0,
                  "alphabet variance must be nonnegative");
  const LcdtConfig config{m, 0.0, tau_tot, mu};
  config.validate();
  const double d = detail::lcdt_denominator(config.nbar(), tau_tot, tau_tot, mu);
  return 1.0 / (d + detail::lcdt_damping(tau_tot) * alphabet.omega_sq);
}

/// Comparison of the adopted averaged fidelity and admissibility threshold
/// against the alternative printed forms (no "-1" in the averaged-fidelity
/// denominator; quadrature means without the sqrt(2) factor, which doubles
/// |alpha~|^2).
struct PrintedFormDiagnostic {
  double averaged_adopted = 0.0;
  double averaged_printed = 0.0;
  double averaged_abs_diff = 0.0;
  double admissibility_adopted = 0.0;
  double admissibility_printed = 0.0;
};

inline PrintedFormDiagnostic printed_form_diagnostic(int m, double tau_tot, double mu, GaussianAlphabet alphabet) {
  PrintedFormDiagnostic d;
  d.averaged_adopted = averaged_fidelity(m, tau_tot, mu, alphabet);
  const double e = std::exp(tau_tot);
  const double eh = std::exp(0.5 * tau_tot);
  const double w = alphabet.omega_sq;
  d.averaged_printed = m * e / (m * (1.0 - mu + w * (1.0 - 2.0 * eh) + e * (1.0 + mu + w)));
  d.averaged_abs_diff = std::abs(d.averaged_adopted - d.averaged_printed);
  d.admissibility_adopted = admissibility_threshold(m, tau_tot, mu);
  d.admissibility_printed = 2.0 * d.admissibility_adopted;
  return d;
}

/// Alphabet widths (as Omega^2) above which telecloning beats the local
/// strategy. omega_c_sq is present only when regime C applies at (m, tau, mu).
struct OmegaThresholds {
  double omega_a_sq = 0.0;
  std::optional<double> omega_c_sq;

  double omega_a() const { return std::sqrt(omega_a_sq); }
  std::optional<double> omega_c() const {
    if (!omega_c_sq) return std::nullopt;
    return std::sqrt(std::max(0.0, *omega_c_sq));
  }
};

inline OmegaThresholds omega_thresholds(int m, double tau_tot, double mu) {
  detail::require(m >= 2, "thresholds require m >= 2");
  detail::require(std::isfinite(tau_tot) && tau_tot > 0.0, "tau_tot must be positive");
  detail::require(std::isfinite(mu) && mu >= 0.0, "mu must be nonnegative");
  const double eh = std::exp(0.5 * tau_tot);
  const double em1 = std::expm1(0.5 * tau_tot);
  OmegaThresholds t;
  t.omega_a_sq = (1.0 + eh) * (m - 1) / (em1 * m);
  if (classify_regime(m, tau_tot, mu) == Regime::C) {
    const double num = 1.0 + m * (mu - 1.0) + m * eh * eh * (1.0 + mu) -
                       std::sqrt(static_cast<double>(m)) * eh * (1.0 + mu + m * mu);
    t.omega_c_sq = num / (m * em1 * em1);
  }
  return t;
}

/// Omega^2 at which the optimized telecloning fidelity of `regime` equals the
/// averaged local fidelity, by bracketing root search (independent of the
/// closed-form thresholds). Returns nullopt if no crossing exists.
inline std::optional<double> omega_crossover_numeric(int m, double tau_tot, double mu, Regime regime) {
  double f_tele = 0.0;
  switch (regime) {
    case Regime::A: f_tele = fidelity_regime_a(m, tau_tot, mu); break;
    case Regime::B: f_tele = fidelity_regime_b(tau_tot, mu); break;
    case Regime::C: f_tele = fidelity_regime_c(m, tau_tot, mu); break;
  }
  const auto gap = [&](double w) { return averaged_fidelity(m, tau_tot, mu, GaussianAlphabet{w}) - f_tele; };
  double lo = 0.0;
  double hi = 1.0;
  if (gap(lo) <= 0.0) return std::nullopt;
  while (gap(hi) > 0.0) {
    hi *= 2.0;
    if (hi > 1e12) return std::nullopt;
  }
  std::uintmax_t iters = 300;
  const auto [a, b] = boost::math::tools::toms748_solve(gap, lo, hi, boost::math::tools::eps_tolerance<double>(52),
                                                         iters);
  return 0.5 * (a + b);
}

}  // namespace cvclone
