#include "dofd/fem1d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "dofd/error.hpp"
#include "dofd/weight.hpp"

namespace dofd {

Mesh1D::Mesh1D(int intervals) : intervals_(intervals), h_(0.0) {
  if (intervals < 2) throw DomainError("mesh needs at least 2 subintervals");
  h_ = 1.0 / static_cast<double>(intervals);
}

FemSystem::FemSystem(Mesh1D mesh) : mesh_(mesh) {
  const std::size_t n = mesh_.dofs();
  const double h = mesh_.h();
  mass_.diag.assign(n, 2.0 * h / 3.0);
  mass_.off.assign(n - 1, h / 6.0);
  stiffness_.diag.assign(n, 2.0 / h);
  stiffness_.off.assign(n - 1, -1.0 / h);
}

DofVector FemSystem::apply_mass(std::span<const double> x) const {
  DofVector y(x.size());
  mass_.apply(x, std::span<double>(y));
  return y;
}

DofVector FemSystem::apply_stiffness(std::span<const double> x) const {
  DofVector y(x.size());
  stiffness_.apply(x, std::span<double>(y));
  return y;
}

// --- initial data -----------------------------------------------------------

InitialData InitialData::smooth_sin() {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  return InitialData(InitialKind::SmoothSin, [](double x) { return std::sin(two_pi * x); },
                     [](double x) { return two_pi * std::cos(two_pi * x); });
}

InitialData InitialData::indicator_half() {
  InitialData v(InitialKind::IndicatorHalf, [](double x) { return x < 0.5 ? 1.0 : 0.0; }, {});
  v.jumps_ = {0.5};
  return v;
}

InitialData InitialData::singular_pow() {
  InitialData v(InitialKind::SingularPow, [](double x) { return std::pow(x, -0.25); }, {});
  v.endpoint_exponent_ = -0.25;
  return v;
}

InitialData InitialData::custom(Fn f, Fn df, std::vector<double> jumps) {
  InitialData v(InitialKind::Custom, std::move(f), std::move(df));
  std::sort(jumps.begin(), jumps.end());
  v.jumps_ = std::move(jumps);
  return v;
}

std::string InitialData::name() const {
  switch (kind_) {
    case InitialKind::SmoothSin: return "sin";
    case InitialKind::IndicatorHalf: return "indicator";
    case InitialKind::SingularPow: return "singular";
    case InitialKind::Custom: return "custom";
  }
  return "?";
}

namespace {

constexpr double kQuadTol = 1e-13;
// Acceptance of the adaptive Gauss comparison; node placement on very short
// elements already costs ~1e-12 relative.
constexpr double kAdaptTol = 1e-10;

struct GaussRule {
  std::vector<double> x, w;
  GaussRule() { gauss_legendre_rule(8, x, w); }
};

template <class F>
double gauss8(F& f, double a, double b, double* abs_sum = nullptr) {
  static const GaussRule rule;
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double sum = 0.0, mag = 0.0;
  for (std::size_t k = 0; k < rule.x.size(); ++k) {
    const double term = rule.w[k] * f(mid + half * rule.x[k]);
    sum += term;
    mag += std::abs(term);
  }
  if (abs_sum) *abs_sum = half * mag;
  return half * sum;
}

// 8-point Gauss on [a, b] accepted when it agrees with the two-half rule;
// otherwise bisect.
template <class F>
double adaptive_gauss(F& f, double a, double b, double whole, double tol, int depth) {
  const double mid = 0.5 * (a + b);
  const double left = gauss8(f, a, mid), right = gauss8(f, mid, b);
  const double refined = left + right;
  if (std::abs(refined - whole) <= tol) return refined;
  if (depth == 0 || !std::isfinite(refined))
    throw QuadratureError("load integration over [" + std::to_string(a) + ", " + std::to_string(b) +
                          "] did not converge");
  return adaptive_gauss(f, a, mid, left, 0.5 * tol, depth - 1) +
         adaptive_gauss(f, mid, b, right, 0.5 * tol, depth - 1);
}

// Integral of f over [a, b]. Pieces that start at x = 0 for data singular
// there use tanh-sinh, which tolerates the endpoint singularity.
template <class F>
double integrate_piece(F&& f, double a, double b, bool singular_left, double scale) {
  if (singular_left) {
    thread_local boost::math::quadrature::tanh_sinh<double> rule;
    double err = 0.0, l1 = 0.0;
    const double value = rule.integrate(f, a, b, kQuadTol, &err, &l1);
    if (!std::isfinite(value) || err > 1e-10 * std::max(1.0, l1))
      throw QuadratureError("singular load integration over [" + std::to_string(a) + ", " + std::to_string(b) +
                            "] did not converge");
    return value;
  }
  double magnitude = 0.0;
  const double whole = gauss8(f, a, b, &magnitude);
  // `scale` bounds the typical size of |f|: argument rounding near a zero
  // of f leaves an absolute error that the relative criterion cannot meet.
  const double tol = kAdaptTol * std::max(magnitude, (b - a) * scale);
  return adaptive_gauss(f, a, b, whole, tol, 30);
}

// Sum of f over [a, b], split at the jumps of v that fall inside.
template <class F>
double integrate_split(const InitialData& v, F&& f, double a, double b, double scale) {
  double total = 0.0;
  double lo = a;
  for (double j : v.jumps()) {
    if (j <= lo || j >= b) continue;
    total += integrate_piece(f, lo, j, lo == 0.0 && v.endpoint_exponent() < 0.0, scale);
    lo = j;
  }
  total += integrate_piece(f, lo, b, lo == 0.0 && v.endpoint_exponent() < 0.0, scale);
  return total;
}

// Mean of |f| over midpoints of a uniform grid on (0, 1).
template <class F>
double typical_size(F&& f) {
  constexpr int samples = 1024;
  double sum = 0.0;
  for (int i = 0; i < samples; ++i) sum += std::abs(f((i + 0.5) / samples));
  return std::isfinite(sum) ? sum / samples : 0.0;
}

DofVector solve_real(const SymTridiagonal<double>& A, DofVector rhs) {
  TridiagonalLU<double> lu(A.diag, A.off);
  lu.solve_in_place(rhs);
  return rhs;
}

}  // namespace

double InitialData::l2_norm() const {
  const std::size_t pieces = 16;
  auto square = [this](double x) { const double y = value_(x); return y * y; };
  const double scale = typical_size(square);
  double sum = 0.0;
  for (std::size_t p = 0; p < pieces; ++p) {
    const double a = static_cast<double>(p) / pieces, b = static_cast<double>(p + 1) / pieces;
    sum += integrate_split(*this, square, a, b, scale);
  }
  return std::sqrt(sum);
}

DofVector l2_project(const FemSystem& sys, const InitialData& v) {
  const Mesh1D& mesh = sys.mesh();
  const double h = mesh.h();
  const double scale = typical_size(v);
  DofVector load(sys.dofs(), 0.0);
  for (int e = 0; e < mesh.intervals(); ++e) {
    const double xl = mesh.node(static_cast<std::size_t>(e));
    const double xr = mesh.node(static_cast<std::size_t>(e + 1));
    if (e > 0) {
      load[static_cast<std::size_t>(e - 1)] +=
          integrate_split(v, [&](double x) { return v(x) * (xr - x) / h; }, xl, xr, scale);
    }
    if (e + 1 < mesh.intervals()) {
      load[static_cast<std::size_t>(e)] +=
          integrate_split(v, [&](double x) { return v(x) * (x - xl) / h; }, xl, xr, scale);
    }
  }
  return solve_real(sys.mass(), std::move(load));
}

DofVector ritz_project(const FemSystem& sys, const InitialData& v) {
  if (!v.has_derivative())
    throw NotApplicable("Ritz projection needs v in H1_0 with a derivative; '" + v.name() + "' has none");
  const Mesh1D& mesh = sys.mesh();
  const double h = mesh.h();
  auto dv = [&](double x) { return v.derivative(x); };
  const double scale = typical_size(dv);
  DofVector load(sys.dofs(), 0.0);
  for (int e = 0; e < mesh.intervals(); ++e) {
    const double xl = mesh.node(static_cast<std::size_t>(e));
    const double xr = mesh.node(static_cast<std::size_t>(e + 1));
    const double slope_integral = integrate_split(v, dv, xl, xr, scale) / h;
    if (e > 0) load[static_cast<std::size_t>(e - 1)] -= slope_integral;
    if (e + 1 < mesh.intervals()) load[static_cast<std::size_t>(e)] += slope_integral;
  }
  factor_shifted(0.0, sys.mass(), sys.stiffness()).solve_in_place(load);
  return load;
}

DofVector project_initial(const FemSystem& sys, const InitialData& v) {
  return v.has_derivative() ? ritz_project(sys, v) : l2_project(sys, v);
}

ComplexDofVector solve_helmholtz(const FemSystem& sys, std::complex<double> s,
                                 std::span<const std::complex<double>> rhs) {
  using cplx = std::complex<double>;
  const std::size_t n = sys.dofs();
  if (rhs.size() != n) throw MismatchError("Helmholtz right-hand side has the wrong length");
  // Extended precision: the contour sum amplifies solver roundoff by up to
  // exp(Re(z) t), and fine meshes make the operator badly conditioned.
  using wide = std::complex<long double>;
  ComplexDofVector b(n);
  sys.mass().apply(rhs, std::span<cplx>(b));
  std::vector<wide> x(b.begin(), b.end());
  factor_shifted(wide(s), sys.mass(), sys.stiffness()).solve_in_place(x);
  for (std::size_t i = 0; i < n; ++i) b[i] = cplx(x[i]);
  return b;
}

double l2_norm(const FemSystem& sys, std::span<const double> x) {
  const auto& M = sys.mass();
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double mx = M.diag[i] * x[i];
    if (i > 0) mx += M.off[i - 1] * x[i - 1];
    if (i + 1 < x.size()) mx += M.off[i] * x[i + 1];
    sum += x[i] * mx;
  }
  return std::sqrt(std::max(sum, 0.0));
}

DofVector prolong(const Mesh1D& coarse, std::span<const double> x, const Mesh1D& fine) {
  if (fine.intervals() % coarse.intervals() != 0)
    throw MeshMismatch("fine mesh (" + std::to_string(fine.intervals()) + ") is not a refinement of " +
                       std::to_string(coarse.intervals()));
  if (x.size() != coarse.dofs()) throw MismatchError("coarse vector has the wrong length");
  const int r = fine.intervals() / coarse.intervals();
  auto nodal = [&](int c) { return (c <= 0 || c >= coarse.intervals()) ? 0.0 : x[static_cast<std::size_t>(c - 1)]; };
  DofVector out(fine.dofs());
  for (int j = 1; j < fine.intervals(); ++j) {
    const int c = j / r;
    const double f = static_cast<double>(j % r) / r;
    out[static_cast<std::size_t>(j - 1)] = (1.0 - f) * nodal(c) + f * nodal(c + 1);
  }
  return out;
}

ErrorNorms error_norms(const Mesh1D& fine_mesh, std::span<const double> fine, const Mesh1D& coarse_mesh,
                       std::span<const double> coarse) {
  if (fine.size() != fine_mesh.dofs()) throw MismatchError("fine vector has the wrong length");
  const DofVector p = prolong(coarse_mesh, coarse, fine_mesh);
  const double h = fine_mesh.h();
  const int M = fine_mesh.intervals();
  auto diff = [&](int node) {
    return (node <= 0 || node >= M) ? 0.0 : fine[static_cast<std::size_t>(node - 1)] - p[static_cast<std::size_t>(node - 1)];
  };
  double l2 = 0.0, h1 = 0.0;
  for (int e = 0; e < M; ++e) {
    const double a = diff(e), b = diff(e + 1);
    l2 += h * (a * a + a * b + b * b) / 3.0;
    h1 += (b - a) * (b - a) / h;
  }
  return {std::sqrt(l2), std::sqrt(h1)};
}

}  // namespace dofd
