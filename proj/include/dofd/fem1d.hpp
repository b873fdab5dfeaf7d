#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dofd/tridiag.hpp"

namespace dofd {

using DofVector = std::vector<double>;
using ComplexDofVector = std::vector<std::complex<double>>;

/// Uniform partition of (0, 1) into M subintervals; only the M-1 interior
/// nodes carry unknowns (homogeneous Dirichlet conditions).
class Mesh1D {
 public:
  explicit Mesh1D(int intervals);

  int intervals() const { return intervals_; }
  double h() const { return h_; }
  std::size_t dofs() const { return static_cast<std::size_t>(intervals_ - 1); }
  /// Coordinate of node i, i = 0..M (0 and M are the boundary nodes).
  double node(std::size_t i) const { return static_cast<double>(i) * h_; }

 private:
  int intervals_;
  double h_;
};

/// P1 mass and stiffness matrices on the interior nodes of a Mesh1D.
class FemSystem {
 public:
  explicit FemSystem(Mesh1D mesh);
  explicit FemSystem(int intervals) : FemSystem(Mesh1D(intervals)) {}

  const Mesh1D& mesh() const { return mesh_; }
  std::size_t dofs() const { return mesh_.dofs(); }
  const SymTridiagonal<double>& mass() const { return mass_; }
  const SymTridiagonal<double>& stiffness() const { return stiffness_; }

  DofVector apply_mass(std::span<const double> x) const;
  DofVector apply_stiffness(std::span<const double> x) const;

 private:
  Mesh1D mesh_;
  SymTridiagonal<double> mass_;
  SymTridiagonal<double> stiffness_;
};

enum class InitialKind { SmoothSin, IndicatorHalf, SingularPow, Custom };

/// Initial value v on (0, 1).
class InitialData {
 public:
  using Fn = std::function<double(double)>;

  /// sin(2 pi x)
  static InitialData smooth_sin();
  /// indicator of (0, 1/2)
  static InitialData indicator_half();
  /// x^(-1/4)
  static InitialData singular_pow();
  /// Any integrable f; pass df to make the Ritz projection available.
  static InitialData custom(Fn f, Fn df = {}, std::vector<double> jumps = {});

  double operator()(double x) const { return value_(x); }
  double derivative(double x) const { return derivative_(x); }
  bool has_derivative() const { return static_cast<bool>(derivative_); }

  InitialKind kind() const { return kind_; }
  const std::vector<double>& jumps() const { return jumps_; }
  /// beta with v(x) ~ x^beta at 0, or 0 when v is bounded there.
  double endpoint_exponent() const { return endpoint_exponent_; }
  std::string name() const;

  /// ||v||_{L2(0,1)} by quadrature.
  double l2_norm() const;

 private:
  InitialData(InitialKind kind, Fn f, Fn df) : kind_(kind), value_(std::move(f)), derivative_(std::move(df)) {}

  InitialKind kind_;
  Fn value_;
  Fn derivative_;
  std::vector<double> jumps_;
  double endpoint_exponent_ = 0.0;
};

/// L2 projection: solves mass P = b with b_i = (v, phi_i).
DofVector l2_project(const FemSystem& sys, const InitialData& v);
/// Ritz projection: solves stiffness R = c with c_i = (v', phi_i').
/// Throws NotApplicable when v has no derivative.
DofVector ritz_project(const FemSystem& sys, const InitialData& v);
/// Discrete initial value: Ritz projection for data with a derivative
/// (smooth data), L2 projection otherwise.
DofVector project_initial(const FemSystem& sys, const InitialData& v);

/// Solves (s mass + stiffness) phi = mass rhs.
ComplexDofVector solve_helmholtz(const FemSystem& sys, std::complex<double> s,
                                 std::span<const std::complex<double>> rhs);

/// ||x||_{L2} of the piecewise-linear function with interior values x.
double l2_norm(const FemSystem& sys, std::span<const double> x);

/// Nodal interpolation of a coarse-mesh function onto a nested fine mesh.
DofVector prolong(const Mesh1D& coarse, std::span<const double> x, const Mesh1D& fine);

struct ErrorNorms {
  double l2 = 0.0;
  double h1 = 0.0;  // H1 seminorm, ||d/dx (fine - coarse)||
};

/// Exact L2 and H1-seminorm of fine - prolong(coarse). `fine.intervals()`
/// must be a multiple of `coarse.intervals()`; otherwise MeshMismatch.
ErrorNorms error_norms(const Mesh1D& fine_mesh, std::span<const double> fine,
                       const Mesh1D& coarse_mesh, std::span<const double> coarse);

}  // namespace dofd
