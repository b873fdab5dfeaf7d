#pragma once

#include <span>
#include <vector>

#include "dofd/fem1d.hpp"
#include "dofd/kernel.hpp"
#include "dofd/parallel.hpp"

namespace dofd {

/// Uniform grid t_n = n tau on [0, T], tau = T / N.
struct TimeGrid {
  double T = 0.0;
  int N = 0;

  static TimeGrid uniform(double T, int N);
  double tau() const { return T / N; }
  double time(int n) const { return n == N ? T : n * tau(); }
};

/// Backward-Euler convolution quadrature weights b_0..b_{N-1}: the Taylor
/// coefficients of ((1-xi)/tau) w((1-xi)/tau).
struct CqWeights {
  double tau = 0.0;
  std::vector<double> b;
  /// max_j |Im b_j| / max_j |b_j| observed before the imaginary parts were dropped.
  double imag_residue = 0.0;

  int size() const { return static_cast<int>(b.size()); }
};

/// FFT length used by weights_fft for N weights.
std::size_t cq_fft_length(int N);

/// Samples the generating function on |xi| = rho, transforms, and rescales
/// by rho^-j. Throws ToleranceError if the imaginary residue exceeds 1e-10.
CqWeights weights_fft(const KernelSymbol& kernel, double tau, int N, Exec exec = Exec::Parallel);
CqWeights weights_fft(const WeightFunction& mu, const AlphaQuadrature& quad, double tau, int N);

/// Solves Q_n(U) + A_h U^n = Q_n(1) vh for n = 1..N, with
/// Q_n(U) = sum_{j=1}^n b_{n-j} U^j. Returns U^1..U^N.
std::vector<DofVector> step_scheme(const FemSystem& sys, const CqWeights& weights, const TimeGrid& grid,
                                   std::span<const double> vh, Exec exec = Exec::Parallel);
/// Same recursion for explicit mass and stiffness matrices.
std::vector<DofVector> step_scheme(const SymTridiagonal<double>& mass, const SymTridiagonal<double>& stiffness,
                                   const CqWeights& weights, const TimeGrid& grid, std::span<const double> vh,
                                   Exec exec = Exec::Parallel);

/// Memory term sum_{j=1}^{n-1} b_{n-j} U^j for every DOF. The history is
/// stored per DOF (history[i * stride + (j-1)] = U^j_i) and `rev` holds
/// rev[m] = b_{stride-m}, so each DOF reduces one contiguous dot product
/// in fixed order regardless of the thread count.
void history_sums(std::span<const double> history, std::size_t stride, std::span<const double> rev, int n,
                  std::span<double> out, Exec exec);

}  // namespace dofd
