#pragma once

// SU(m,1) coherent states: the (m+1)-mode pure Gaussian states generated from
// vacuum by a parametric pump on mode a_0 and beam-splitter couplings among
// the receiver modes a_1..a_m. Mode a_0 is block 0; receivers follow in order.

#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "cvclone/errors.hpp"
#include "cvclone/gaussian.hpp"

namespace cvclone {

/// Mean photon numbers N_1..N_m of the receiver modes; N_0 = sum N_k.
class Sum1Params {
 public:
  explicit Sum1Params(std::vector<double> photon_numbers) : photon_numbers_(std::move(photon_numbers)) {
    detail::require(!photon_numbers_.empty(), "at least one receiver mode is required");
    for (double n : photon_numbers_) {
      detail::require(std::isfinite(n) && n >= 0.0, "photon numbers must be finite and nonnegative");
    }
  }

  int m() const { return static_cast<int>(photon_numbers_.size()); }
  const std::vector<double>& photon_numbers() const { return photon_numbers_; }
  /// N_h for receiver h in 1..m.
  double photon_number(int h) const { return photon_numbers_.at(static_cast<std::size_t>(h - 1)); }
  double n0() const { return std::accumulate(photon_numbers_.begin(), photon_numbers_.end(), 0.0); }

  double normalization() const { return 1.0 / (1.0 + n0()); }
  double amplitude_ratio(int h) const { return std::sqrt(photon_number(h) / (1.0 + n0())); }

 private:
  std::vector<double> photon_numbers_;
};

/// Symmetric source: N_1 = ... = N_m = N, N_0 = m N.
struct SymmetricSum1 {
  int m = 1;
  double n_per_mode = 0.0;

  Sum1Params params() const {
    detail::require(m >= 1, "m must be at least 1");
    return Sum1Params(std::vector<double>(static_cast<std::size_t>(m), n_per_mode));
  }
};

/// Covariance matrix of |Psi_m>: diagonal blocks (N_k + 1/2) I, a_0/a_h blocks
/// sqrt(N_h (N_0 + 1)) P and receiver/receiver blocks sqrt(N_i N_j) I.
inline GaussianState covariance_matrix(const Sum1Params& params) {
  const int m = params.m();
  const double n0 = params.n0();
  const int dim = 2 * (m + 1);
  Matrix cov = Matrix::Zero(dim, dim);
  const Matrix2 id = Matrix2::Identity();
  const Matrix2 flip = momentum_flip();

  cov.block<2, 2>(0, 0) = (n0 + 0.5) * id;
  for (int h = 1; h <= m; ++h) {
    const double nh = params.photon_number(h);
    cov.block<2, 2>(2 * h, 2 * h) = (nh + 0.5) * id;
    const Matrix2 a_block = std::sqrt(nh * (n0 + 1.0)) * flip;
    cov.block<2, 2>(0, 2 * h) = a_block;
    cov.block<2, 2>(2 * h, 0) = a_block;
    for (int j = h + 1; j <= m; ++j) {
      const Matrix2 b_block = std::sqrt(nh * params.photon_number(j)) * id;
      cov.block<2, 2>(2 * h, 2 * j) = b_block;
      cov.block<2, 2>(2 * j, 2 * h) = b_block;
    }
  }
  return {Vector::Zero(dim), std::move(cov)};
}

/// Truncated Fock expansion of |Psi_m> over receiver occupations with total
/// photon number <= cutoff. Mode a_0 carries the sum of the receiver counts.
struct FockAmplitudes {
  int cutoff = 0;
  std::map<std::vector<int>, double> amplitudes;
  double captured_norm = 0.0;
  /// Set when the truncation keeps less than half the norm.
  bool low_norm_warning = false;
};

namespace detail {

template <typename Visit>
void for_each_occupation(int m, int cutoff, Visit&& visit) {
  std::vector<int> occ(static_cast<std::size_t>(m), 0);
  auto fill = [&](auto&& self, int k, int remaining) -> void {
    if (k == m) {
      visit(occ);
      return;
    }
    for (int n = 0; n <= remaining; ++n) {
      occ[static_cast<std::size_t>(k)] = n;
      self(self, k + 1, remaining - n);
    }
    occ[static_cast<std::size_t>(k)] = 0;
  };
  fill(fill, 0, cutoff);
}

}  // namespace detail

/// amplitude(n_1..n_m) = sqrt(Z) prod C_k^{n_k} sqrt((sum n)!) / sqrt(prod n_k!),
/// evaluated in log space.
inline FockAmplitudes fock_state_amplitudes(const Sum1Params& params, int cutoff) {
  detail::require(cutoff >= 0, "cutoff must be nonnegative");
  const int m = params.m();
  std::vector<double> log_ratio(static_cast<std::size_t>(m));
  for (int h = 1; h <= m; ++h) {
    const double c = params.amplitude_ratio(h);
    log_ratio[static_cast<std::size_t>(h - 1)] = c > 0.0 ? std::log(c) : -INFINITY;
  }
  const double log_norm = 0.5 * std::log(params.normalization());

  FockAmplitudes out;
  out.cutoff = cutoff;
  detail::for_each_occupation(m, cutoff, [&](const std::vector<int>& occ) {
    double log_amp = log_norm;
    int total = 0;
    for (int k = 0; k < m; ++k) {
      const int nk = occ[static_cast<std::size_t>(k)];
      total += nk;
      if (nk > 0) {
        if (std::isinf(log_ratio[static_cast<std::size_t>(k)])) return;
        log_amp += nk * log_ratio[static_cast<std::size_t>(k)] - 0.5 * std::lgamma(nk + 1.0);
      }
    }
    log_amp += 0.5 * std::lgamma(total + 1.0);
    const double amp = std::exp(log_amp);
    if (amp == 0.0) return;
    out.amplitudes.emplace(occ, amp);
    out.captured_norm += amp * amp;
  });
  out.low_norm_warning = out.captured_norm < 0.5;
  return out;
}

namespace detail {

/// Sparse real state vector over full occupations (n_0, n_1, ..., n_m).
using FockVector = std::map<std::vector<int>, double>;

inline FockVector lower(const FockVector& psi, int mode) {
  FockVector out;
  for (const auto& [occ, amp] : psi) {
    const int n = occ[static_cast<std::size_t>(mode)];
    if (n == 0) continue;
    auto next = occ;
    --next[static_cast<std::size_t>(mode)];
    out[next] += amp * std::sqrt(static_cast<double>(n));
  }
  return out;
}

inline double inner(const FockVector& bra, const FockVector& ket) {
  double acc = 0.0;
  for (const auto& [occ, amp] : ket) {
    if (auto it = bra.find(occ); it != bra.end()) acc += it->second * amp;
  }
  return acc;
}

}  // namespace detail

/// Independent oracle for covariance_matrix: second moments of the quadratures
/// evaluated as Fock-space expectation values over the truncated expansion.
/// Amplitudes are real, so all q/p cross moments vanish identically.
inline Matrix covariance_from_fock_oracle(const Sum1Params& params, int cutoff) {
  const auto expansion = fock_state_amplitudes(params, cutoff);
  if (expansion.captured_norm < 1.0 - 1e-8) {
    throw NumericalError("Fock cutoff " + std::to_string(cutoff) + " too small: captured norm " +
                         std::to_string(expansion.captured_norm));
  }
  const int modes = params.m() + 1;
  detail::FockVector psi;
  const double renorm = 1.0 / std::sqrt(expansion.captured_norm);
  for (const auto& [occ, amp] : expansion.amplitudes) {
    std::vector<int> full;
    full.reserve(static_cast<std::size_t>(modes));
    full.push_back(std::accumulate(occ.begin(), occ.end(), 0));
    full.insert(full.end(), occ.begin(), occ.end());
    psi.emplace(std::move(full), amp * renorm);
  }

  std::vector<detail::FockVector> lowered;
  lowered.reserve(static_cast<std::size_t>(modes));
  for (int k = 0; k < modes; ++k) lowered.push_back(detail::lower(psi, k));

  // first moments <a_k>, normal-ordered <a_j^dag a_k>, and <a_j a_k>
  Vector first(modes);
  Matrix creation_annihilation(modes, modes);
  Matrix annihilation_pair(modes, modes);
  for (int j = 0; j < modes; ++j) {
    first(j) = detail::inner(psi, lowered[static_cast<std::size_t>(j)]);
    const auto twice = [&](int k) { return detail::lower(lowered[static_cast<std::size_t>(k)], j); };
    for (int k = 0; k < modes; ++k) {
      creation_annihilation(j, k) =
          detail::inner(lowered[static_cast<std::size_t>(j)], lowered[static_cast<std::size_t>(k)]);
      annihilation_pair(j, k) = detail::inner(psi, twice(k));
    }
  }

  Matrix cov = Matrix::Zero(2 * modes, 2 * modes);
  for (int j = 0; j < modes; ++j) {
    for (int k = 0; k < modes; ++k) {
      const double delta = j == k ? 0.5 : 0.0;
      const double qq = annihilation_pair(j, k) + creation_annihilation(j, k) + delta;
      const double pp = -annihilation_pair(j, k) + creation_annihilation(j, k) + delta;
      cov(2 * j, 2 * k) = qq - 2.0 * first(j) * first(k);
      cov(2 * j + 1, 2 * k + 1) = pp;
    }
  }
  return cov;
}

struct PartitionReport {
  ModePartition partition;
  double min_symplectic = 0.0;
};

/// PPT test on every bipartition of the m+1 modes (mode a_0 kept in group_a).
inline std::vector<PartitionReport> check_full_inseparability(const Sum1Params& params) {
  const int modes = params.m() + 1;
  if (modes > 6) {
    throw DomainError("exhaustive bipartition enumeration limited to 6 modes; supply explicit partitions "
                      "to ppt_min_symplectic instead");
  }
  const auto state = covariance_matrix(params);
  std::vector<PartitionReport> reports;
  for (unsigned mask = 1; mask < (1U << params.m()); ++mask) {
    ModePartition partition;
    partition.group_a.push_back(0);
    for (int h = 1; h < modes; ++h) {
      if (mask & (1U << (h - 1))) {
        partition.group_b.push_back(h);
      } else {
        partition.group_a.push_back(h);
      }
    }
    const double nu = ppt_min_symplectic(state, partition);
    reports.push_back({std::move(partition), nu});
  }
  return reports;
}

}  // namespace cvclone
