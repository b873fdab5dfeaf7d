#include "dofd/kernel.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "dofd/error.hpp"

namespace dofd {

KernelSymbol::KernelSymbol(const WeightFunction& mu, const AlphaQuadrature& quad)
    : sup_norm_(mu.sup_norm()) {
  exponents_.reserve(quad.size());
  coeffs_.reserve(quad.size());
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const double m = mu(quad.nodes()[q]);
    if (m == 0.0) continue;
    exponents_.push_back(quad.nodes()[q] - 1.0);
    coeffs_.push_back(quad.weights()[q] * m);
  }
}

KernelEval KernelSymbol::eval(cplx z) const {
  if (z == cplx{0.0, 0.0}) throw DomainError("w(z) is undefined at z = 0");
  if (z.imag() == 0.0 && z.real() < 0.0) throw DomainError("z lies on the branch cut (-inf, 0)");
  const cplx log_z = std::log(z);
  cplx w{0.0, 0.0};
  for (std::size_t q = 0; q < exponents_.size(); ++q) w += coeffs_[q] * std::exp(exponents_[q] * log_z);
  return {z, w, z * w};
}

KernelEval eval_w(const WeightFunction& mu, const AlphaQuadrature& quad, cplx z) {
  return KernelSymbol(mu, quad).eval(z);
}

cplx eval_zw(const WeightFunction& mu, const AlphaQuadrature& quad, cplx z) {
  return KernelSymbol(mu, quad).eval(z).zw;
}

double log_ratio_bound(double r) {
  const double l = std::log(r);
  if (std::abs(l) < 1e-12) return 1.0 - 0.5 * l;
  return -std::expm1(-l) / l;
}

namespace {

std::string describe(cplx z) {
  std::ostringstream os;
  os.precision(17);
  os << "z = (" << z.real() << ", " << z.imag() << ")";
  return os.str();
}

}  // namespace

BoundReport kernel_bound_check(const KernelSymbol& kernel, std::span<const cplx> samples) {
  constexpr double slack = 1e-12;
  BoundReport report;
  report.min_ratio = std::numeric_limits<double>::infinity();
  for (const cplx z : samples) {
    const KernelEval e = kernel.eval(z);
    const double r = std::abs(z);
    const double upper = kernel.sup_norm() * log_ratio_bound(r);
    const double abs_w = std::abs(e.w);
    if (abs_w > upper * (1.0 + slack))
      throw BoundViolation("upper bound |w(z)| <= ||mu|| (|z|-1)/(|z| log|z|) fails at " + describe(z));
    const double radial = r * kernel.eval(cplx{r, 0.0}).w.real();
    const double abs_zw = std::abs(e.zw);
    if (abs_zw > radial * (1.0 + slack))
      throw BoundViolation("comparison |z w(z)| <= |z| w(|z|) fails at " + describe(z));
    report.min_ratio = std::min(report.min_ratio, abs_zw / radial);
    report.max_upper_ratio = std::max(report.max_upper_ratio, abs_w / upper);
    ++report.samples;
  }
  return report;
}

BoundReport kernel_bound_check(const WeightFunction& mu, const AlphaQuadrature& quad,
                               std::span<const cplx> samples) {
  return kernel_bound_check(KernelSymbol(mu, quad), samples);
}

}  // namespace dofd
