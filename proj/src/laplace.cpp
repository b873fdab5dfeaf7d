#include "dofd/laplace.hpp"

#include <cmath>
#include <numbers>

#include "dofd/error.hpp"

namespace dofd {

namespace {

ContourPlan make_plan(int N, double lambda, double t) {
  ContourPlan plan;
  plan.N = N;
  plan.t = t;
  plan.k = plan.c0 / N;
  plan.lambda = lambda;
  plan.nodes.resize(static_cast<std::size_t>(N) + 1);
  plan.zetas.resize(static_cast<std::size_t>(N) + 1);
  const double sin_psi = std::sin(plan.psi), cos_psi = std::cos(plan.psi);
  for (int j = 0; j <= N; ++j) {
    const double xi = j * plan.k;
    // sin(i xi - psi) = -sin(psi) cosh(xi) + i cos(psi) sinh(xi)
    // cos(i xi - psi) =  cos(psi) cosh(xi) + i sin(psi) sinh(xi)
    const double ch = std::cosh(xi), sh = std::sinh(xi);
    plan.nodes[static_cast<std::size_t>(j)] = {lambda * (1.0 - sin_psi * ch), lambda * cos_psi * sh};
    plan.zetas[static_cast<std::size_t>(j)] = {lambda * cos_psi * ch, lambda * sin_psi * sh};
  }
  return plan;
}

}  // namespace

ContourPlan build_plan(int N, double t) {
  if (N < 1) throw DomainError("contour needs N >= 1");
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("contour target time must be positive");
  return make_plan(N, ContourPlan::kC1 * N / t, t);
}

ContourPlan build_plan_fixed(int N, double lambda) {
  if (N < 1) throw DomainError("contour needs N >= 1");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("contour scale lambda must be positive");
  return make_plan(N, lambda, ContourPlan::kC1 * N / lambda);
}

ContourSolution::ContourSolution(ContourPlan plan, std::vector<ComplexDofVector> phi)
    : plan_(std::move(plan)), phi_(std::move(phi)) {
  if (phi_.size() != plan_.nodes.size()) throw MismatchError("one resolvent per contour node expected");
}

DofVector ContourSolution::evaluate(double t) const {
  if (!(t > 0.0)) throw DomainError("evaluation time must be positive");
  const std::size_t n = phi_.front().size();
  DofVector u(n, 0.0);
  for (std::size_t j = 0; j < phi_.size(); ++j) {
    const cplx z = plan_.nodes[j];
    if (z.real() * t > 700.0) throw DomainError("e^{z t} overflows: Re(z_j) t exceeds 700");
    const cplx scale = std::exp(z * t) * plan_.zetas[j] * (j == 0 ? 0.5 : 1.0);
    const ComplexDofVector& phi = phi_[j];
    for (std::size_t i = 0; i < n; ++i) u[i] += (scale * phi[i]).real();
  }
  const double factor = plan_.k / std::numbers::pi;
  for (double& x : u) x *= factor;
  return u;
}

ContourSolution solve_resolvents(const ContourPlan& plan, const FemSystem& sys, const KernelSymbol& kernel,
                                 std::span<const double> vh, Exec exec) {
  if (vh.size() != sys.dofs()) throw MismatchError("initial vector does not match the mesh");
  std::vector<ComplexDofVector> phi(plan.nodes.size());
  for_each_index(plan.nodes.size(), exec, [&](std::size_t j) {
    const KernelEval e = kernel.eval(plan.nodes[j]);
    ComplexDofVector rhs(vh.size());
    for (std::size_t i = 0; i < vh.size(); ++i) rhs[i] = e.w * vh[i];
    phi[j] = solve_helmholtz(sys, e.zw, rhs);
  });
  return ContourSolution(plan, std::move(phi));
}

DofVector solve_contour(const ContourPlan& plan, const FemSystem& sys, const KernelSymbol& kernel,
                        std::span<const double> vh, Exec exec) {
  return solve_resolvents(plan, sys, kernel, vh, exec).evaluate(plan.t);
}

DofVector solve_contour(const ContourPlan& plan, const FemSystem& sys, const WeightFunction& mu,
                        const AlphaQuadrature& quad, std::span<const double> vh) {
  return solve_contour(plan, sys, KernelSymbol(mu, quad), vh);
}

DofVector laplace_solution(const FemSystem& sys, const KernelSymbol& kernel, std::span<const double> vh, int N,
                           double t, Exec exec) {
  return solve_contour(build_plan(N, t), sys, kernel, vh, exec);
}

std::vector<double> decay_study(const KernelSymbol& kernel, const FemSystem& sys, std::span<const double> vh,
                                int N, std::span<const double> times, Exec exec) {
  std::vector<double> norms(times.size());
  for (std::size_t i = 0; i < times.size(); ++i)
    norms[i] = l2_norm(sys, laplace_solution(sys, kernel, vh, N, times[i], exec));
  return norms;
}

}  // namespace dofd
