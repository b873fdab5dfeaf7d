#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dofd {

enum class WeightKind { PolyHalfSquared, IndicatorHalfOne, Constant, Tabulated };

/// Nonnegative order density mu(alpha) on [0, 1].
///
/// Breakpoints mark the alpha values where mu is not smooth; quadrature
/// rules in alpha are split there.
class WeightFunction {
 public:
  /// mu(alpha) = (alpha - 1/2)^2
  static WeightFunction poly_half_squared();
  /// mu = indicator of [1/2, 1]
  static WeightFunction indicator_half_one();
  static WeightFunction constant();
  /// Piecewise-linear interpolation of (alpha, mu) pairs. The abscissae must
  /// be strictly increasing, start at 0 and end at 1; values must be >= 0.
  static WeightFunction tabulated(std::vector<double> alpha, std::vector<double> mu);
  /// Two-column whitespace-separated text file; '#' starts a comment.
  static WeightFunction load_table(const std::filesystem::path& path);

  double operator()(double alpha) const;

  WeightKind kind() const { return kind_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  double sup_norm() const { return sup_norm_; }
  std::string name() const;

  /// Set when mu(0) mu(1) = 0. Such weights are accepted, but the error
  /// theory for the schemes assumes mu(0) mu(1) > 0.
  std::optional<std::string> hypothesis_warning() const;

 private:
  WeightFunction(WeightKind kind, std::vector<double> breakpoints);

  WeightKind kind_;
  std::vector<double> breakpoints_;
  std::vector<double> table_alpha_;
  std::vector<double> table_mu_;
  double sup_norm_ = 0.0;
};

/// Composite Gauss-Legendre rule for integrals over alpha in [0, 1].
class AlphaQuadrature {
 public:
  /// `order` points on each smooth piece of mu. Weights without breakpoints
  /// are still split at 1/2.
  static AlphaQuadrature composite(const WeightFunction& mu, int order = 32);
  /// `order` points on each interval [cuts[i], cuts[i+1]].
  static AlphaQuadrature gauss_legendre(int order, std::span<const double> cuts);

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  int order() const { return order_; }
  std::size_t size() const { return nodes_.size(); }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
  int order_ = 0;
};

/// Gauss-Legendre nodes and weights on [-1, 1], ascending.
void gauss_legendre_rule(int order, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace dofd
