#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dofd/fem1d.hpp"
#include "dofd/parallel.hpp"
#include "dofd/weight.hpp"

namespace dofd {

enum class Scheme { SemidiscreteSpatial, LaplaceInTime, CqInTime, SmallTime, LargeTimeDecay };
enum class TimeMethod { Laplace, Cq };
enum class Projection { Auto, L2, Ritz };

std::string to_string(Scheme s);
std::string to_string(Projection p);

struct ReferencePolicy {
  int mesh_multiple = 8;  // spatial studies: reference mesh = multiple * finest M
  int n_ref = 14;         // time studies: contour reference on the working mesh
};

/// One experiment. `meshes` lists the M values of a spatial study; every
/// other scheme runs on meshes.front(). `steps` holds contour sizes N
/// (Laplace) or step counts (CQ); `times` the observation times.
struct ExperimentSpec {
  Scheme scheme = Scheme::SemidiscreteSpatial;
  TimeMethod method = TimeMethod::Laplace;  // small-time studies only
  WeightFunction mu = WeightFunction::poly_half_squared();
  InitialData v = InitialData::smooth_sin();
  std::vector<int> meshes;
  std::vector<int> steps;
  std::vector<double> times;
  ReferencePolicy reference;
  Projection projection = Projection::Auto;
  int time_N = 10;  // contour size for spatial and decay solves
  int quad_order = 32;
  Exec exec = Exec::Parallel;

  /// Throws DomainError for empty or non-monotone lists and nonsensical sizes.
  void validate() const;
};

/// Fits ||u(10^k)|| ~ C / (k + k0): 1/||u|| is fitted affinely in k by least
/// squares. A fit without a positive slope falls back to C / k.
struct DecayFit {
  double C = 0.0;
  double k0 = 0.0;
  /// max_i |fit_i - u_i| / u_i
  double residual = 0.0;
  bool accepted = false;  // residual < 5%
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

struct RateRow {
  double param = 0.0;
  double error_l2 = 0.0;
  std::optional<double> error_h1;
  std::optional<double> rate;
};

struct RateReport {
  Scheme scheme = Scheme::SemidiscreteSpatial;
  std::vector<RateRow> rows;
  /// Algebraic studies: log2 ratio of the finest pair (per decade for the
  /// small-time scans). Exponential studies: least-squares r in e ~ C e^{-rN}.
  double fitted_rate = 0.0;
  std::optional<double> fitted_rate_h1;
  std::optional<double> theoretical_rate;
  /// CQ studies: max over n of ||U^n|| / ||v_h||.
  std::optional<double> stability;
  /// Decay reports: the C / (k + k0) fit of the norms.
  std::optional<DecayFit> decay;
  /// One-step reports: the affine fit of error / tau against |log10 tau|.
  std::optional<LinearFit> ratio_fit;
  std::vector<std::pair<std::string, std::string>> metadata;
};

/// L2 and H1 errors of the N = time_N contour solution at each t against a
/// reference on a mesh `mesh_multiple` times finer than the finest M. One
/// report per time.
std::vector<RateReport> spatial_study(const ExperimentSpec& spec);
/// Contour errors for each N against N_ref, with the exponential fit. One report per time.
std::vector<RateReport> laplace_study(const ExperimentSpec& spec);
/// CQ errors for each step count against the N_ref contour solution. One report per time.
std::vector<RateReport> cq_convergence(const ExperimentSpec& spec);
/// Errors at each t, with steps.front() CQ steps on [0, t] or the contour
/// with steps.front() points, against the N_ref contour solution. Rows are
/// indexed by t; the row rate is the per-decade slope to the previous row.
RateReport small_time_study(const ExperimentSpec& spec);
/// One CQ step of size tau for each tau in spec.times: rows carry
/// ||U^1 - u(tau)|| / ||v|| and, in the rate column, that error divided by tau.
RateReport one_step_study(const ExperimentSpec& spec);
/// ||U(t)|| / ||v|| at each t with the time_N contour.
RateReport decay_report(const ExperimentSpec& spec);

/// Throws DegenerateFit for fewer than three points or nonpositive values.
DecayFit decay_fit(std::span<const double> k, std::span<const double> norms);

struct ExponentialFit {
  double rate = 0.0;
  double log_constant = 0.0;
  std::size_t used = 0;
};
/// Least squares on log e = log C - r N over points with e >= floor.
/// Throws DomainError with fewer than two usable points.
ExponentialFit exponential_fit(std::span<const double> N, std::span<const double> errors, double floor = 1e-13);

/// Ordinary least squares y = intercept + slope x. Throws DegenerateFit with fewer than two points.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// log(e_coarse / e_fine) / log(p_coarse / p_fine), p being h for meshes,
/// tau for step counts and t for small-time scans.
double pair_rate(double e_coarse, double e_fine, double p_coarse, double p_fine);

/// Header `param,error_l2,error_h1,rate`, then per report its `#` metadata
/// and rows. Empty optional cells stay empty.
void write_csv(std::ostream& out, std::span<const RateReport> reports);

}  // namespace dofd
