#pragma once

#include <complex>
#include <span>
#include <vector>

#include "dofd/fem1d.hpp"
#include "dofd/kernel.hpp"
#include "dofd/parallel.hpp"

namespace dofd {

/// Hyperbolic contour z(xi) = lambda (1 + sin(i xi - psi)) sampled at
/// xi_j = j k, j = 0..N. Only the upper half is stored; the lower half is
/// its complex conjugate.
struct ContourPlan {
  static constexpr double kPsi = 1.1721;
  static constexpr double kC0 = 1.0818;
  static constexpr double kC1 = 4.4920;

  int N = 0;
  double t = 0.0;  // time the step k and scale lambda were tuned for
  double psi = kPsi;
  double c0 = kC0;
  double c1 = kC1;
  double k = 0.0;
  double lambda = 0.0;
  std::vector<cplx> nodes;  // z_j
  std::vector<cplx> zetas;  // zeta_j = lambda cos(i xi_j - psi), z'(xi_j) = i zeta_j
};

/// k = c0/N and lambda = c1 N / t. Throws DomainError for N < 1 or t <= 0.
ContourPlan build_plan(int N, double t);
/// Same contour family with a prescribed scale lambda, for evaluating many
/// times on one set of elliptic solves. `t` records the tuning time c1 N / lambda.
ContourPlan build_plan_fixed(int N, double lambda);

/// The N+1 elliptic solutions phi_j of (z_j w_j mass + stiffness) phi_j =
/// w_j mass vh. They do not depend on t, so one set serves every
/// evaluation time on the same contour.
class ContourSolution {
 public:
  ContourSolution(ContourPlan plan, std::vector<ComplexDofVector> phi);

  const ContourPlan& plan() const { return plan_; }
  const std::vector<ComplexDofVector>& resolvents() const { return phi_; }

  /// (k/pi) [ 1/2 Re(e^{z_0 t} zeta_0 phi_0) + sum_{j>=1} Re(e^{z_j t} zeta_j phi_j) ],
  /// summed in the fixed order j = 0..N. Throws DomainError if Re(z_j) t > 700.
  DofVector evaluate(double t) const;

 private:
  ContourPlan plan_;
  std::vector<ComplexDofVector> phi_;
};

/// Solves the N+1 elliptic problems; they run concurrently under Exec::Parallel.
ContourSolution solve_resolvents(const ContourPlan& plan, const FemSystem& sys, const KernelSymbol& kernel,
                                 std::span<const double> vh, Exec exec = Exec::Parallel);

/// U_{N,h}(plan.t).
DofVector solve_contour(const ContourPlan& plan, const FemSystem& sys, const KernelSymbol& kernel,
                        std::span<const double> vh, Exec exec = Exec::Parallel);
DofVector solve_contour(const ContourPlan& plan, const FemSystem& sys, const WeightFunction& mu,
                        const AlphaQuadrature& quad, std::span<const double> vh);

/// Convenience: U_{N,h}(t) with the plan tuned to t.
DofVector laplace_solution(const FemSystem& sys, const KernelSymbol& kernel, std::span<const double> vh, int N,
                           double t, Exec exec = Exec::Parallel);

/// ||U_{N,h}(t)||_{L2} for each t, the contour retuned per time.
std::vector<double> decay_study(const KernelSymbol& kernel, const FemSystem& sys, std::span<const double> vh,
                                int N, std::span<const double> times, Exec exec = Exec::Parallel);

}  // namespace dofd
