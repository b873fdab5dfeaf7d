#include "dofd/weight.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/math/special_functions/legendre.hpp>

#include "dofd/error.hpp"

namespace dofd {

WeightFunction::WeightFunction(WeightKind kind, std::vector<double> breakpoints)
    : kind_(kind), breakpoints_(std::move(breakpoints)) {}

WeightFunction WeightFunction::poly_half_squared() {
  WeightFunction mu(WeightKind::PolyHalfSquared, {});
  mu.sup_norm_ = 0.25;
  return mu;
}

WeightFunction WeightFunction::indicator_half_one() {
  WeightFunction mu(WeightKind::IndicatorHalfOne, {0.5});
  mu.sup_norm_ = 1.0;
  return mu;
}

WeightFunction WeightFunction::constant() {
  WeightFunction mu(WeightKind::Constant, {});
  mu.sup_norm_ = 1.0;
  return mu;
}

WeightFunction WeightFunction::tabulated(std::vector<double> alpha, std::vector<double> mu) {
  if (alpha.size() != mu.size() || alpha.size() < 2)
    throw DomainError("weight table needs at least two (alpha, mu) pairs");
  if (alpha.front() != 0.0 || alpha.back() != 1.0)
    throw DomainError("weight table must start at alpha = 0 and end at alpha = 1");
  for (std::size_t i = 1; i < alpha.size(); ++i)
    if (!(alpha[i] > alpha[i - 1]))
      throw DomainError("weight table abscissae must be strictly increasing");
  for (double m : mu)
    if (!(m >= 0.0) || !std::isfinite(m))
      throw DomainError("weight table values must be finite and nonnegative");
  const double sup = *std::max_element(mu.begin(), mu.end());
  if (sup == 0.0) throw DomainError("weight table is identically zero");

  std::vector<double> interior(alpha.begin() + 1, alpha.end() - 1);
  WeightFunction w(WeightKind::Tabulated, std::move(interior));
  w.table_alpha_ = std::move(alpha);
  w.table_mu_ = std::move(mu);
  w.sup_norm_ = sup;
  return w;
}

WeightFunction WeightFunction::load_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open weight table '" + path.string() + "'");
  std::vector<double> alpha, mu;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    double a, m;
    if (!(fields >> a)) continue;
    if (!(fields >> m))
      throw DomainError(path.string() + ":" + std::to_string(lineno) + ": expected two columns");
    alpha.push_back(a);
    mu.push_back(m);
  }
  return tabulated(std::move(alpha), std::move(mu));
}

double WeightFunction::operator()(double alpha) const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("mu evaluated outside [0, 1]");
  switch (kind_) {
    case WeightKind::PolyHalfSquared:
      return (alpha - 0.5) * (alpha - 0.5);
    case WeightKind::IndicatorHalfOne:
      return alpha >= 0.5 ? 1.0 : 0.0;
    case WeightKind::Constant:
      return 1.0;
    case WeightKind::Tabulated: {
      auto it = std::upper_bound(table_alpha_.begin(), table_alpha_.end(), alpha);
      if (it == table_alpha_.end()) return table_mu_.back();
      const auto hi = static_cast<std::size_t>(it - table_alpha_.begin());
      const std::size_t lo = hi - 1;
      const double s = (alpha - table_alpha_[lo]) / (table_alpha_[hi] - table_alpha_[lo]);
      return (1.0 - s) * table_mu_[lo] + s * table_mu_[hi];
    }
  }
  return 0.0;
}

std::string WeightFunction::name() const {
  switch (kind_) {
    case WeightKind::PolyHalfSquared: return "poly-half";
    case WeightKind::IndicatorHalfOne: return "indicator";
    case WeightKind::Constant: return "const";
    case WeightKind::Tabulated: return "table";
  }
  return "?";
}

std::optional<std::string> WeightFunction::hypothesis_warning() const {
  if ((*this)(0.0) * (*this)(1.0) > 0.0) return std::nullopt;
  return "weight '" + name() + "' has mu(0) mu(1) = 0; the convergence theory assumes "
         "mu(0) mu(1) > 0";
}

void gauss_legendre_rule(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  if (order < 1) throw DomainError("Gauss-Legendre order must be >= 1");
  // Nonnegative zeros, ascending; zero is included for odd order.
  const std::vector<double> half = boost::math::legendre_p_zeros<double>(order);
  nodes.clear();
  weights.clear();
  auto weight_at = [order](double x) {
    const double dp = boost::math::legendre_p_prime(order, x);
    return 2.0 / ((1.0 - x * x) * dp * dp);
  };
  for (auto it = half.rbegin(); it != half.rend(); ++it) {
    if (*it == 0.0) continue;
    nodes.push_back(-*it);
    weights.push_back(weight_at(*it));
  }
  for (double x : half) {
    nodes.push_back(x);
    weights.push_back(weight_at(x));
  }
}

AlphaQuadrature AlphaQuadrature::gauss_legendre(int order, std::span<const double> cuts) {
  if (cuts.size() < 2) throw DomainError("alpha quadrature needs at least one interval");
  std::vector<double> ref_nodes, ref_weights;
  gauss_legendre_rule(order, ref_nodes, ref_weights);
  AlphaQuadrature q;
  q.order_ = order;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (!(b > a)) throw DomainError("alpha quadrature cuts must be increasing");
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t k = 0; k < ref_nodes.size(); ++k) {
      q.nodes_.push_back(mid + half * ref_nodes[k]);
      q.weights_.push_back(half * ref_weights[k]);
    }
  }
  return q;
}

AlphaQuadrature AlphaQuadrature::composite(const WeightFunction& mu, int order) {
  std::vector<double> cuts{0.0};
  if (mu.breakpoints().empty()) {
    cuts.push_back(0.5);
  } else {
    for (double b : mu.breakpoints())
      if (b > 0.0 && b < 1.0) cuts.push_back(b);
  }
  cuts.push_back(1.0);
  return gauss_legendre(order, cuts);
}

}  // namespace dofd
