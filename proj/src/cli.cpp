#include "dofd/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "dofd/cq.hpp"
#include "dofd/error.hpp"
#include "dofd/harness.hpp"
#include "dofd/laplace.hpp"

namespace dofd {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string mu = "poly-half";
  std::vector<std::string> v = {"sin"};
  std::string proj = "auto";
  std::string out;
  std::string scheme = "cq";
  std::vector<double> t;
  std::vector<double> tau;
  std::vector<int> M;
  std::vector<int> N;
  double T = 0.0;
  int steps = 0;
  int ref_mult = 8;
  int n_ref = 14;
  int quad_order = 32;
  int threads = 0;
};

WeightFunction parse_mu(const std::string& s) {
  if (s == "poly-half") return WeightFunction::poly_half_squared();
  if (s == "indicator") return WeightFunction::indicator_half_one();
  if (s == "const") return WeightFunction::constant();
  if (s.rfind("table:", 0) == 0) {
    try {
      return WeightFunction::load_table(s.substr(6));
    } catch (const Error& e) {
      throw UsageError(std::string("--mu: ") + e.what());
    }
  }
  throw UsageError("--mu: unknown weight '" + s + "' (poly-half, indicator, const or table:<path>)");
}

InitialData parse_v(const std::string& s) {
  if (s == "sin") return InitialData::smooth_sin();
  if (s == "indicator") return InitialData::indicator_half();
  if (s == "singular") return InitialData::singular_pow();
  throw UsageError("--v: unknown initial data '" + s + "' (sin, indicator or singular)");
}

Projection parse_proj(const std::string& s) {
  if (s == "auto") return Projection::Auto;
  if (s == "l2") return Projection::L2;
  if (s == "ritz") return Projection::Ritz;
  throw UsageError("--proj: unknown projection '" + s + "' (auto, l2 or ritz)");
}

template <class T>
void check_list(const std::vector<T>& xs, const char* flag, T lower, bool strict_lower) {
  if (xs.empty()) throw UsageError(std::string(flag) + ": needs at least one value");
  for (T x : xs) {
    const bool ok = strict_lower ? x > lower : x >= lower;
    if (!ok || !std::isfinite(static_cast<double>(x)))
      throw UsageError(std::string(flag) + ": value " + std::to_string(x) + " out of range");
  }
  const bool up = xs.size() < 2 || xs[1] > xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (up ? !(xs[i] > xs[i - 1]) : !(xs[i] < xs[i - 1]))
      throw UsageError(std::string(flag) + ": list must be strictly monotone");
}

void check_single(std::size_t n, const char* flag) {
  if (n != 1) throw UsageError(std::string(flag) + ": expects a single value");
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--mu", o.mu, "weight: poly-half, indicator, const or table:<path>")->capture_default_str();
  sub->add_option("--v", o.v, "initial data: sin, indicator or singular; studies take a comma list")
      ->delimiter(',')
      ->capture_default_str();
  sub->add_option("--proj", o.proj, "discrete initial value: auto, l2 or ritz")->capture_default_str();
  sub->add_option("--quad-order", o.quad_order, "Gauss points per alpha piece")->capture_default_str();
  sub->add_option("--threads", o.threads, "cap on worker threads (0: runtime default)");
  sub->add_option("--out", o.out, "output file (default stdout)");
}

CLI::Option* add_times(CLI::App* sub, Options& o, const char* help) {
  return sub->add_option("--t", o.t, help)->delimiter(',');
}

CLI::Option* add_meshes(CLI::App* sub, Options& o, const char* help) {
  return sub->add_option("--M", o.M, help)->delimiter(',');
}

CLI::Option* add_N(CLI::App* sub, Options& o, const char* help) {
  return sub->add_option("--N", o.N, help)->delimiter(',');
}

std::string g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_vector(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& meta,
                  const Mesh1D& mesh, const DofVector& u) {
  for (const auto& [k, val] : meta) out << "# " << k << ": " << val << '\n';
  out << "x,u\n";
  for (std::size_t i = 0; i < u.size(); ++i) out << g(mesh.node(i + 1)) << ',' << g(u[i]) << '\n';
}

ExperimentSpec base_spec(const Options& o, Scheme scheme) {
  ExperimentSpec s;
  s.scheme = scheme;
  s.mu = parse_mu(o.mu);
  if (o.v.empty()) throw UsageError("--v: needs at least one value");
  for (const auto& name : o.v) parse_v(name);  // rejects a bad entry before any work
  s.v = parse_v(o.v.front());
  s.projection = parse_proj(o.proj);
  s.quad_order = o.quad_order;
  s.reference.mesh_multiple = o.ref_mult;
  s.reference.n_ref = o.n_ref;
  s.times = o.t;
  s.meshes = o.M;
  if (o.quad_order < 1) throw UsageError("--quad-order: must be positive");
  if (o.ref_mult < 1) throw UsageError("--ref-mult: must be positive");
  if (o.n_ref < 1) throw UsageError("--n-ref: must be positive");
  if (o.threads < 0) throw UsageError("--threads: must be nonnegative");
  return s;
}

// One copy of `s` per --v entry.
std::vector<ExperimentSpec> per_data(const ExperimentSpec& s, const Options& o) {
  std::vector<ExperimentSpec> out;
  for (const auto& name : o.v) {
    out.push_back(s);
    out.back().v = parse_v(name);
  }
  return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distributed-order time-fractional diffusion on (0, 1): P1 finite elements in space, "
               "hyperbolic-contour Laplace inversion or backward-Euler convolution quadrature in time."};
  app.require_subcommand(1);

  Options sl, sc, sp, lr, cr, st, de;

  auto* solve_laplace = app.add_subcommand("solve-laplace", "contour solution U(t); requires --t and --M");
  add_common(solve_laplace, sl);
  add_times(solve_laplace, sl, "evaluation time")->required();
  add_meshes(solve_laplace, sl, "number of mesh intervals")->required();
  sl.N = {10};
  add_N(solve_laplace, sl, "contour points")->capture_default_str();

  auto* solve_cq = app.add_subcommand("solve-cq", "CQ solution U^steps at T; requires --T, --steps and --M");
  add_common(solve_cq, sc);
  solve_cq->add_option("--T", sc.T, "final time")->required();
  solve_cq->add_option("--steps", sc.steps, "number of time steps")->required();
  add_meshes(solve_cq, sc, "number of mesh intervals")->required();

  auto* spatial = app.add_subcommand("spatial-rates", "L2/H1 errors and rates under mesh refinement");
  sp.proj = "l2";
  add_common(spatial, sp);
  sp.t = {1.0, 1e-2, 1e-3};
  add_times(spatial, sp, "times")->capture_default_str();
  sp.M = {10, 20, 40, 80, 160, 320};
  add_meshes(spatial, sp, "mesh sizes")->capture_default_str();
  sp.N = {10};
  add_N(spatial, sp, "contour points of every solve")->capture_default_str();
  spatial->add_option("--ref-mult", sp.ref_mult, "reference mesh = multiple of the finest M")->capture_default_str();

  auto* laplace_rates = app.add_subcommand("laplace-rates", "contour errors and exponential rate in N");
  add_common(laplace_rates, lr);
  lr.t = {1.0, 1e-2, 1e-3};
  add_times(laplace_rates, lr, "times")->capture_default_str();
  lr.N = {3, 5, 7, 9, 11, 13};
  add_N(laplace_rates, lr, "contour sizes")->capture_default_str();
  lr.M = {100000};
  add_meshes(laplace_rates, lr, "mesh intervals")->capture_default_str();
  laplace_rates->add_option("--n-ref", lr.n_ref, "reference contour size")->capture_default_str();

  auto* cq_rates = app.add_subcommand("cq-rates", "CQ errors and rates in the number of steps");
  add_common(cq_rates, cr);
  cr.t = {1.0, 1e-2, 1e-3};
  add_times(cq_rates, cr, "times")->capture_default_str();
  cr.N = {10, 20, 40, 80, 160, 320};
  add_N(cq_rates, cr, "step counts")->capture_default_str();
  cr.M = {10000};
  add_meshes(cq_rates, cr, "mesh intervals")->capture_default_str();
  cq_rates->add_option("--n-ref", cr.n_ref, "reference contour size")->capture_default_str();

  auto* small = app.add_subcommand("small-time",
                                   "errors at t = 1e-4..1e-9 with a fixed N; with --scheme cq also the "
                                   "one-step ratio error/tau over --tau for the first --v");
  add_common(small, st);
  small->add_option("--scheme", st.scheme, "cq or laplace")->capture_default_str();
  st.t = {1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9};
  add_times(small, st, "times")->capture_default_str();
  add_N(small, st, "CQ steps on [0, t] (default 10) or contour points (default 5)");
  st.tau = {1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10, 1e-11, 1e-12};
  small->add_option("--tau", st.tau, "one-step sizes for the ratio block")->delimiter(',')->capture_default_str();
  st.M = {100000};
  add_meshes(small, st, "mesh intervals")->capture_default_str();
  small->add_option("--n-ref", st.n_ref, "reference contour size")->capture_default_str();

  auto* decay = app.add_subcommand("decay", "||U(t)|| / ||v|| at large t and the C / (log10 t + k0) fit");
  add_common(decay, de);
  de.t = {1e6, 1e8, 1e10, 1e12, 1e14, 1e16, 1e18};
  add_times(decay, de, "times")->capture_default_str();
  de.N = {10};
  add_N(decay, de, "contour points")->capture_default_str();
  de.M = {100000};
  add_meshes(decay, de, "mesh intervals")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  std::ostringstream csv;
  const Options* used = nullptr;
  auto run = [&]() -> std::function<void()> {
    if (solve_laplace->parsed()) {
      used = &sl;
      ExperimentSpec s = base_spec(sl, Scheme::LaplaceInTime);
      check_single(sl.v.size(), "--v");
      check_single(sl.t.size(), "--t");
      check_single(sl.M.size(), "--M");
      check_single(sl.N.size(), "--N");
      check_list(sl.t, "--t", 0.0, true);
      check_list(sl.M, "--M", 2, false);
      check_list(sl.N, "--N", 1, false);
      return [&, s] {
        const FemSystem sys(s.meshes.front());
        const KernelSymbol kernel(s.mu, AlphaQuadrature::composite(s.mu, s.quad_order));
        DofVector vh = s.projection == Projection::L2     ? l2_project(sys, s.v)
                       : s.projection == Projection::Ritz ? ritz_project(sys, s.v)
                                                          : project_initial(sys, s.v);
        const DofVector u = laplace_solution(sys, kernel, vh, sl.N.front(), s.times.front());
        write_vector(csv,
                     {{"scheme", "solve-laplace"}, {"mu", s.mu.name()}, {"v", s.v.name()}, {"t", g(s.times.front())},
                      {"N", std::to_string(sl.N.front())}, {"M", std::to_string(s.meshes.front())}},
                     sys.mesh(), u);
      };
    }
    if (solve_cq->parsed()) {
      used = &sc;
      ExperimentSpec s = base_spec(sc, Scheme::CqInTime);
      check_single(sc.v.size(), "--v");
      check_single(sc.M.size(), "--M");
      check_list(sc.M, "--M", 2, false);
      if (!(sc.T > 0.0) || !std::isfinite(sc.T)) throw UsageError("--T: must be positive");
      if (sc.steps < 1) throw UsageError("--steps: must be positive");
      return [&, s] {
        const FemSystem sys(s.meshes.front());
        const KernelSymbol kernel(s.mu, AlphaQuadrature::composite(s.mu, s.quad_order));
        DofVector vh = s.projection == Projection::L2     ? l2_project(sys, s.v)
                       : s.projection == Projection::Ritz ? ritz_project(sys, s.v)
                                                          : project_initial(sys, s.v);
        const TimeGrid grid = TimeGrid::uniform(sc.T, sc.steps);
        const auto U = step_scheme(sys, weights_fft(kernel, grid.tau(), grid.N), grid, vh);
        write_vector(csv,
                     {{"scheme", "solve-cq"}, {"mu", s.mu.name()}, {"v", s.v.name()}, {"T", g(sc.T)},
                      {"steps", std::to_string(sc.steps)}, {"M", std::to_string(s.meshes.front())}},
                     sys.mesh(), U.back());
      };
    }
    if (spatial->parsed()) {
      used = &sp;
      ExperimentSpec s = base_spec(sp, Scheme::SemidiscreteSpatial);
      check_list(sp.t, "--t", 0.0, true);
      check_list(sp.M, "--M", 2, false);
      check_single(sp.N.size(), "--N");
      check_list(sp.N, "--N", 1, false);
      s.time_N = sp.N.front();
      s.validate();
      return [&, specs = per_data(s, sp)] {
        std::vector<RateReport> reports;
        for (const auto& e : specs)
          for (auto& r : spatial_study(e)) reports.push_back(std::move(r));
        write_csv(csv, reports);
      };
    }
    if (laplace_rates->parsed()) {
      used = &lr;
      ExperimentSpec s = base_spec(lr, Scheme::LaplaceInTime);
      check_list(lr.t, "--t", 0.0, true);
      check_list(lr.N, "--N", 1, false);
      check_single(lr.M.size(), "--M");
      check_list(lr.M, "--M", 2, false);
      if (lr.N.size() < 2) throw UsageError("--N: the exponential fit needs at least two contour sizes");
      s.steps = lr.N;
      s.validate();
      return [&, specs = per_data(s, lr)] {
        std::vector<RateReport> reports;
        for (const auto& e : specs)
          for (auto& r : laplace_study(e)) reports.push_back(std::move(r));
        write_csv(csv, reports);
      };
    }
    if (cq_rates->parsed()) {
      used = &cr;
      ExperimentSpec s = base_spec(cr, Scheme::CqInTime);
      check_list(cr.t, "--t", 0.0, true);
      check_list(cr.N, "--N", 1, false);
      check_single(cr.M.size(), "--M");
      check_list(cr.M, "--M", 2, false);
      s.steps = cr.N;
      s.validate();
      return [&, specs = per_data(s, cr)] {
        std::vector<RateReport> reports;
        for (const auto& e : specs)
          for (auto& r : cq_convergence(e)) reports.push_back(std::move(r));
        write_csv(csv, reports);
      };
    }
    if (small->parsed()) {
      used = &st;
      ExperimentSpec s = base_spec(st, Scheme::SmallTime);
      if (st.scheme != "cq" && st.scheme != "laplace") throw UsageError("--scheme: expected cq or laplace");
      s.method = st.scheme == "cq" ? TimeMethod::Cq : TimeMethod::Laplace;
      if (st.N.empty()) st.N = {s.method == TimeMethod::Cq ? 10 : 5};
      check_single(st.N.size(), "--N");
      check_list(st.N, "--N", 1, false);
      check_list(st.t, "--t", 0.0, true);
      check_single(st.M.size(), "--M");
      check_list(st.M, "--M", 2, false);
      s.steps = st.N;
      s.validate();
      ExperimentSpec ratio = s;
      if (s.method == TimeMethod::Cq) {
        check_list(st.tau, "--tau", 0.0, true);
        ratio.times = st.tau;
        ratio.validate();
      }
      return [&, specs = per_data(s, st), ratio] {
        std::vector<RateReport> reports;
        for (const auto& e : specs) reports.push_back(small_time_study(e));
        if (ratio.method == TimeMethod::Cq) reports.push_back(one_step_study(ratio));
        write_csv(csv, reports);
      };
    }
    used = &de;
    ExperimentSpec s = base_spec(de, Scheme::LargeTimeDecay);
    check_list(de.t, "--t", 0.0, true);
    check_single(de.N.size(), "--N");
    check_list(de.N, "--N", 1, false);
    check_single(de.M.size(), "--M");
    check_list(de.M, "--M", 2, false);
    s.time_N = de.N.front();
    s.validate();
    return [&, specs = per_data(s, de)] {
      std::vector<RateReport> reports;
      for (const auto& e : specs) reports.push_back(decay_report(e));
      write_csv(csv, reports);
    };
  };

  std::function<void()> job;
  try {
    job = run();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  std::ofstream file;
  if (!used->out.empty()) {
    file.open(used->out);
    if (!file) {
      err << "error: --out: cannot open '" << used->out << "'\n";
      return 2;
    }
  }
  if (used->threads > 0) set_threads(used->threads);
  if (auto warning = parse_mu(used->mu).hypothesis_warning()) err << "warning: " << *warning << '\n';

  try {
    job();
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return 1;
  }

  (used->out.empty() ? out : file) << csv.str();
  return 0;
}

}  // namespace dofd
