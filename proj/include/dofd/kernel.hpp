#pragma once

#include <complex>
#include <span>
#include <vector>

#include "dofd/weight.hpp"

namespace dofd {

using cplx = std::complex<double>;

struct KernelEval {
  cplx z;
  cplx w;
  cplx zw;
};

/// The symbol w(z) = int_0^1 z^(alpha-1) mu(alpha) dalpha with the alpha
/// integral replaced by a fixed quadrature. mu is sampled once at
/// construction; evaluation is a pure function of z.
class KernelSymbol {
 public:
  KernelSymbol(const WeightFunction& mu, const AlphaQuadrature& quad);

  /// Principal branch. Throws DomainError for z = 0 or z on the negative real axis.
  KernelEval eval(cplx z) const;
  cplx w(cplx z) const { return eval(z).w; }
  cplx zw(cplx z) const { return eval(z).zw; }

  double sup_norm() const { return sup_norm_; }
  std::size_t size() const { return exponents_.size(); }

 private:
  std::vector<double> exponents_;  // alpha_q - 1
  std::vector<double> coeffs_;     // weight_q * mu(alpha_q)
  double sup_norm_;
};

KernelEval eval_w(const WeightFunction& mu, const AlphaQuadrature& quad, cplx z);
cplx eval_zw(const WeightFunction& mu, const AlphaQuadrature& quad, cplx z);

/// (r - 1) / (r log r), continued by 1 at r = 1.
double log_ratio_bound(double r);

struct BoundReport {
  std::size_t samples = 0;
  /// min over samples of |z w(z)| / (|z| w(|z|))
  double min_ratio = 0.0;
  /// max over samples of |w(z)| / (sup_norm (|z|-1)/(|z| log|z|))
  double max_upper_ratio = 0.0;
};

/// Checks |w(z)| <= ||mu|| (|z|-1)/(|z| log|z|) and |z w(z)| <= |z| w(|z|)
/// on every sample, with a relative rounding slack of 1e-12. Throws
/// BoundViolation naming the first failing sample.
BoundReport kernel_bound_check(const KernelSymbol& kernel, std::span<const cplx> samples);
BoundReport kernel_bound_check(const WeightFunction& mu, const AlphaQuadrature& quad,
                               std::span<const cplx> samples);

}  // namespace dofd
