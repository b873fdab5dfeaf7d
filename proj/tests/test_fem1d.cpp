#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dofd/error.hpp"
#include "dofd/fem1d.hpp"
#include "oracles.hpp"

using namespace dofd;
using std::numbers::pi;
using cplx = std::complex<double>;

namespace {

InitialData hat(int M, int j) {
  const double h = 1.0 / M, xj = j * h;
  auto f = [=](double x) { return std::max(0.0, 1.0 - std::abs(x - xj) / h); };
  auto df = [=](double x) {
    if (std::abs(x - xj) >= h) return 0.0;
    return x < xj ? 1.0 / h : -1.0 / h;
  };
  return InitialData::custom(f, df, {xj - h, xj, xj + h});
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST(Mesh, Basics) {
  const Mesh1D m(8);
  EXPECT_EQ(m.dofs(), 7u);
  EXPECT_DOUBLE_EQ(m.h(), 0.125);
  EXPECT_DOUBLE_EQ(m.node(4), 0.5);
  EXPECT_THROW(Mesh1D(1), DomainError);
}

TEST(FemSystem, MatchesElementAssembly) {
  for (int M : {2, 3, 4, 9}) {
    const FemSystem sys(M);
    const Eigen::MatrixXd K = oracle::dense_operator(M, 0.0).real();
    const Eigen::MatrixXd Mm = oracle::dense_mass(M);
    const int n = M - 1;
    for (int i = 0; i < n; ++i) {
      EXPECT_NEAR(sys.stiffness().diag[i], K(i, i), 1e-12);
      EXPECT_NEAR(sys.mass().diag[i], Mm(i, i), 1e-14);
      if (i + 1 < n) {
        EXPECT_NEAR(sys.stiffness().off[i], K(i, i + 1), 1e-12);
        EXPECT_NEAR(sys.mass().off[i], Mm(i, i + 1), 1e-14);
      }
    }
  }
}

TEST(FemSystem, ApplyMatchesDense) {
  const int M = 7;
  const FemSystem sys(M);
  std::vector<double> x = {0.3, -1.0, 2.0, 0.5, 0.0, 4.0};
  const Eigen::Map<Eigen::VectorXd> xv(x.data(), x.size());
  const Eigen::VectorXd ym = oracle::dense_mass(M) * xv;
  const Eigen::VectorXd yk = oracle::dense_operator(M, 0.0).real() * xv;
  const auto am = sys.apply_mass(x), ak = sys.apply_stiffness(x);
  for (int i = 0; i < M - 1; ++i) {
    EXPECT_NEAR(am[i], ym(i), 1e-14);
    EXPECT_NEAR(ak[i], yk(i), 1e-12);
  }
}

TEST(Projection, HatFunctionIsReproduced) {
  const int M = 10;
  const FemSystem sys(M);
  for (int j : {1, 5, 9}) {
    const auto v = hat(M, j);
    std::vector<double> e(M - 1, 0.0);
    e[j - 1] = 1.0;
    EXPECT_LT(max_abs_diff(l2_project(sys, v), e), 1e-12) << j;
    EXPECT_LT(max_abs_diff(ritz_project(sys, v), e), 1e-12) << j;
  }
}

TEST(Projection, RitzOfQuadraticIsInterpolant) {
  // Nodal exactness of the 1D Ritz projection.
  const auto v = InitialData::custom([](double x) { return x * (1.0 - x); }, [](double x) { return 1.0 - 2.0 * x; });
  for (int M : {3, 8, 33}) {
    const FemSystem sys(M);
    const auto r = ritz_project(sys, v);
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double x = sys.mesh().node(i + 1);
      EXPECT_NEAR(r[i], x * (1.0 - x), 1e-13);
    }
  }
}

TEST(Projection, IndicatorSymmetry) {
  const auto ind = InitialData::indicator_half();
  const auto one = InitialData::custom([](double) { return 1.0; });
  for (int M : {4, 10, 64}) {
    const FemSystem sys(M);
    const auto p = l2_project(sys, ind), q = l2_project(sys, one);
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(p[i] + p[n - 1 - i], q[i], 1e-13);
  }
}

TEST(Projection, L2ProjectionRates) {
  const auto v = InitialData::smooth_sin();
  const Mesh1D ref_mesh(2048);
  const auto ref = l2_project(FemSystem(ref_mesh), v);
  std::vector<ErrorNorms> errs;
  for (int M : {16, 32, 64}) {
    const FemSystem sys(M);
    errs.push_back(error_norms(ref_mesh, ref, sys.mesh(), l2_project(sys, v)));
  }
  for (std::size_t i = 1; i < errs.size(); ++i) {
    EXPECT_NEAR(std::log2(errs[i - 1].l2 / errs[i].l2), 2.0, 0.05);
    EXPECT_NEAR(std::log2(errs[i - 1].h1 / errs[i].h1), 1.0, 0.05);
  }
}

TEST(Projection, SingularDataProjects) {
  const auto v = InitialData::singular_pow();
  EXPECT_NEAR(v.l2_norm(), std::sqrt(2.0), 1e-12);  // int x^{-1/2} = 2
  const FemSystem sys(16);
  const auto p = l2_project(sys, v);
  for (double x : p) EXPECT_TRUE(std::isfinite(x));
  EXPECT_GT(p[0], p[1]);
}

TEST(Projection, AutoChoosesByData) {
  const FemSystem sys(12);
  const auto s = InitialData::smooth_sin();
  const auto i = InitialData::indicator_half();
  EXPECT_EQ(project_initial(sys, s), ritz_project(sys, s));
  EXPECT_EQ(project_initial(sys, i), l2_project(sys, i));
  EXPECT_THROW(ritz_project(sys, i), NotApplicable);
}

TEST(InitialData, Norms) {
  EXPECT_NEAR(InitialData::smooth_sin().l2_norm(), 1.0 / std::sqrt(2.0), 1e-13);
  EXPECT_NEAR(InitialData::indicator_half().l2_norm(), 1.0 / std::sqrt(2.0), 1e-13);
  EXPECT_EQ(InitialData::singular_pow().endpoint_exponent(), -0.25);
}

TEST(Helmholtz, MatchesDenseLU) {
  struct Case {
    int M;
    cplx s;
  };
  for (const Case c : {Case{4, 1.0}, Case{64, cplx(10.0, 10.0)}, Case{200, cplx(-3.0, 4e4)}}) {
    const FemSystem sys(c.M);
    const int n = c.M - 1;
    ComplexDofVector rhs(n);
    for (int i = 0; i < n; ++i) rhs[i] = cplx(std::sin(1.0 + i), std::cos(0.5 * i));
    const auto x = solve_helmholtz(sys, c.s, rhs);
    const Eigen::MatrixXcd A = oracle::dense_operator(c.M, c.s);
    const Eigen::Map<const Eigen::VectorXcd> r(rhs.data(), n);
    const Eigen::VectorXcd b = oracle::dense_mass(c.M).cast<cplx>() * r;
    const Eigen::VectorXcd ref = A.partialPivLu().solve(b);
    const Eigen::Map<const Eigen::VectorXcd> xv(x.data(), n);
    EXPECT_LE((xv - ref).norm(), 1e-12 * ref.norm()) << c.M;
    EXPECT_LE((A * xv - b).norm(), 1e-12 * b.norm()) << c.M;
  }
}

TEST(Helmholtz, ConjugateSymmetryAndLinearity) {
  const FemSystem sys(50);
  const cplx s(3.0, -7.0);
  ComplexDofVector a(49), b(49), ab(49), ca(49);
  for (int i = 0; i < 49; ++i) {
    a[i] = std::sin(0.3 * i);
    b[i] = cplx(0.0, std::cos(0.1 * i));
    ab[i] = 2.0 * a[i] - 3.0 * b[i];
    ca[i] = std::conj(a[i]);
  }
  const auto xa = solve_helmholtz(sys, s, a), xb = solve_helmholtz(sys, s, b), xab = solve_helmholtz(sys, s, ab);
  const auto xc = solve_helmholtz(sys, std::conj(s), ca);
  for (int i = 0; i < 49; ++i) {
    EXPECT_LT(std::abs(xab[i] - (2.0 * xa[i] - 3.0 * xb[i])), 1e-13);
    EXPECT_LT(std::abs(xc[i] - std::conj(xa[i])), 1e-15);
  }
}

TEST(Helmholtz, SizeMismatch) {
  const FemSystem sys(8);
  ComplexDofVector rhs(5);
  EXPECT_THROW(solve_helmholtz(sys, 1.0, rhs), MismatchError);
}

TEST(ErrorNorms, SineAgainstZero) {
  const Mesh1D fine(4096), coarse(2);
  std::vector<double> x(fine.dofs());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(2.0 * pi * fine.node(i + 1));
  const std::vector<double> zero(coarse.dofs(), 0.0);
  const auto e = error_norms(fine, x, coarse, zero);
  EXPECT_NEAR(e.l2, 1.0 / std::sqrt(2.0), 1e-6);
  EXPECT_NEAR(e.h1, 2.0 * pi / std::sqrt(2.0), 1e-5);
}

TEST(ErrorNorms, IdenticalFunctionsGiveZero) {
  const Mesh1D coarse(5), fine(20);
  const std::vector<double> c = {1.0, -2.0, 0.5, 3.0};
  const auto f = prolong(coarse, c, fine);
  const auto e = error_norms(fine, f, coarse, c);
  EXPECT_LT(e.l2, 1e-15);
  EXPECT_LT(e.h1, 1e-13);
  EXPECT_NEAR(l2_norm(FemSystem(fine), f), l2_norm(FemSystem(coarse), c), 1e-14);
}

TEST(ErrorNorms, MeshMismatch) {
  const Mesh1D a(6), b(4);
  const std::vector<double> x(5, 0.0), y(3, 0.0);
  EXPECT_THROW(error_norms(a, x, b, y), MeshMismatch);
}

TEST(L2Norm, MatchesMassForm) {
  const FemSystem sys(9);
  std::vector<double> x = {1, 2, 3, 4, 5, 4, 3, 2};
  const auto mx = sys.apply_mass(x);
  double q = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) q += x[i] * mx[i];
  EXPECT_NEAR(l2_norm(sys, x), std::sqrt(q), 1e-14);
}
