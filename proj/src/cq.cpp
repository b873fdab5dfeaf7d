#include "dofd/cq.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "dofd/error.hpp"

namespace dofd {

TimeGrid TimeGrid::uniform(double T, int N) {
  if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("time horizon must be positive");
  if (N < 1) throw DomainError("time grid needs N >= 1 steps");
  return {T, N};
}

std::size_t cq_fft_length(int N) {
  // Heavy oversampling keeps rho^-j close to 1 for j < N, so roundoff in
  // the transform is not amplified; past 4096 weights the cost dominates.
  const std::size_t n = static_cast<std::size_t>(N);
  const std::size_t factor = N <= 4096 ? 32 : 4;
  return std::bit_ceil(std::max<std::size_t>(factor * n, 64));
}

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

CqWeights weights_fft(const KernelSymbol& kernel, double tau, int N, Exec exec) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("time step must be positive");
  if (N < 1) throw DomainError("need at least one weight");
  const std::size_t L = cq_fft_length(N);
  // rho^L = eps: aliasing from b_{j+L} is at rounding level.
  const double rho = std::pow(std::numeric_limits<double>::epsilon(), 1.0 / static_cast<double>(L));

  std::vector<cplx> samples(L);
  for_each_index(L, exec, [&](std::size_t l) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(l) / static_cast<double>(L);
    const cplx xi = std::polar(rho, theta);
    const cplx s = (1.0 - xi) / tau;
    if (s.imag() == 0.0 && s.real() <= 0.0) throw BranchError("CQ sample on the branch cut");
    samples[l] = kernel.eval(s).zw;
  });

  std::vector<cplx> coeffs(L);
  {
    fftw_plan plan;
    {
      std::lock_guard lock(planner_mutex());
      plan = fftw_plan_dft_1d(static_cast<int>(L), reinterpret_cast<fftw_complex*>(samples.data()),
                              reinterpret_cast<fftw_complex*>(coeffs.data()), FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }

  CqWeights out;
  out.tau = tau;
  out.b.resize(static_cast<std::size_t>(N));
  double max_re = 0.0, max_im = 0.0;
  double scale = 1.0 / static_cast<double>(L);
  for (int j = 0; j < N; ++j) {
    const cplx b = coeffs[static_cast<std::size_t>(j)] * scale;
    out.b[static_cast<std::size_t>(j)] = b.real();
    max_re = std::max(max_re, std::abs(b.real()));
    max_im = std::max(max_im, std::abs(b.imag()));
    scale /= rho;
  }
  out.imag_residue = max_re > 0.0 ? max_im / max_re : 0.0;
  if (out.imag_residue > 1e-10)
    throw ToleranceError("CQ weights have imaginary residue " + std::to_string(out.imag_residue));
  return out;
}

CqWeights weights_fft(const WeightFunction& mu, const AlphaQuadrature& quad, double tau, int N) {
  return weights_fft(KernelSymbol(mu, quad), tau, N);
}

void history_sums(std::span<const double> history, std::size_t stride, std::span<const double> rev, int n,
                  std::span<double> out, Exec exec) {
  const std::size_t terms = n > 1 ? static_cast<std::size_t>(n - 1) : 0;
  const double* r = rev.data() + (stride - static_cast<std::size_t>(n) + 1);
  const auto dofs = static_cast<long long>(out.size());
  auto one = [&](long long i) {
    const double* u = history.data() + static_cast<std::size_t>(i) * stride;
    double acc = 0.0;
    for (std::size_t m = 0; m < terms; ++m) acc += r[m] * u[m];
    out[static_cast<std::size_t>(i)] = acc;
  };
  if (exec == Exec::Serial) {
    for (long long i = 0; i < dofs; ++i) one(i);
  } else {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < dofs; ++i) one(i);
  }
}

std::vector<DofVector> step_scheme(const SymTridiagonal<double>& mass, const SymTridiagonal<double>& stiffness,
                                   const CqWeights& weights, const TimeGrid& grid, std::span<const double> vh,
                                   Exec exec) {
  const std::size_t dofs = mass.size();
  if (vh.size() != dofs || stiffness.size() != dofs) throw MismatchError("CQ: vector and matrices disagree in size");
  if (std::abs(weights.tau - grid.tau()) > 1e-12 * grid.tau())
    throw MismatchError("CQ weights were generated for tau = " + std::to_string(weights.tau) +
                        ", grid has tau = " + std::to_string(grid.tau()));
  if (weights.size() < grid.N) throw MismatchError("CQ: fewer weights than time steps");

  const auto steps = static_cast<std::size_t>(grid.N);
  const std::vector<double>& b = weights.b;

  const TridiagonalLU<double> lu = factor_shifted(b[0], mass, stiffness);

  std::vector<double> rev(steps + 1, 0.0);
  for (std::size_t m = 1; m <= steps; ++m) rev[m] = b[steps - m];

  std::vector<double> history(dofs * steps);
  std::vector<double> memory(dofs), rhs(dofs), load(dofs);
  double q1 = 0.0;  // Q_n(1) = b_0 + ... + b_{n-1}
  for (std::size_t n = 1; n <= steps; ++n) {
    q1 += b[n - 1];
    history_sums(history, steps, rev, static_cast<int>(n), memory, exec);
    for (std::size_t i = 0; i < dofs; ++i) rhs[i] = q1 * vh[i] - memory[i];
    mass.apply(std::span<const double>(rhs), std::span<double>(load));
    lu.solve_in_place(load);
    for (std::size_t i = 0; i < dofs; ++i) history[i * steps + (n - 1)] = load[i];
  }

  std::vector<DofVector> out(steps, DofVector(dofs));
  for (std::size_t i = 0; i < dofs; ++i)
    for (std::size_t n = 0; n < steps; ++n) out[n][i] = history[i * steps + n];
  return out;
}

std::vector<DofVector> step_scheme(const FemSystem& sys, const CqWeights& weights, const TimeGrid& grid,
                                   std::span<const double> vh, Exec exec) {
  return step_scheme(sys.mass(), sys.stiffness(), weights, grid, vh, exec);
}

}  // namespace dofd
