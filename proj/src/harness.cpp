#include "dofd/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "dofd/cq.hpp"
#include "dofd/error.hpp"
#include "dofd/kernel.hpp"
#include "dofd/laplace.hpp"

namespace dofd {

namespace {

template <class T>
bool strictly_monotone(const std::vector<T>& xs) {
  if (xs.size() < 2) return true;
  const bool up = xs[1] > xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (up ? !(xs[i] > xs[i - 1]) : !(xs[i] < xs[i - 1])) return false;
  return true;
}

template <class T>
void require_list(const std::vector<T>& xs, const char* name) {
  if (xs.empty()) throw DomainError(std::string(name) + " list is empty");
  if (!strictly_monotone(xs)) throw DomainError(std::string(name) + " list is not monotone");
}

DofVector initial_vector(const FemSystem& sys, const InitialData& v, Projection p) {
  switch (p) {
    case Projection::L2: return l2_project(sys, v);
    case Projection::Ritz: return ritz_project(sys, v);
    case Projection::Auto: break;
  }
  return project_initial(sys, v);
}

double diff_norm(const FemSystem& sys, const DofVector& a, const DofVector& b) {
  DofVector d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return l2_norm(sys, d);
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (double x : xs) s += (s.empty() ? "" : " ") + fmt("%g", x);
  return s;
}

// Metadata common to every report of one spec.
std::vector<std::pair<std::string, std::string>> base_metadata(const ExperimentSpec& spec, double t) {
  return {{"scheme", to_string(spec.scheme)},
          {"mu", spec.mu.name()},
          {"v", spec.v.name()},
          {"t", fmt("%g", t)},
          {"projection", to_string(spec.projection)},
          {"quad_order", std::to_string(spec.quad_order)}};
}

KernelSymbol make_kernel(const ExperimentSpec& spec) {
  return KernelSymbol(spec.mu, AlphaQuadrature::composite(spec.mu, spec.quad_order));
}

void fill_pair_rates(std::vector<RateRow>& rows, auto scale) {
  for (std::size_t i = 1; i < rows.size(); ++i)
    rows[i].rate = pair_rate(rows[i - 1].error_l2, rows[i].error_l2, scale(rows[i - 1].param),
                             scale(rows[i].param));
}

}  // namespace

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::SemidiscreteSpatial: return "spatial";
    case Scheme::LaplaceInTime: return "laplace";
    case Scheme::CqInTime: return "cq";
    case Scheme::SmallTime: return "small-time";
    case Scheme::LargeTimeDecay: return "decay";
  }
  return "?";
}

std::string to_string(Projection p) {
  switch (p) {
    case Projection::Auto: return "auto";
    case Projection::L2: return "l2";
    case Projection::Ritz: return "ritz";
  }
  return "?";
}

void ExperimentSpec::validate() const {
  require_list(meshes, "mesh");
  require_list(times, "time");
  for (int M : meshes)
    if (M < 2) throw DomainError("mesh sizes must be at least 2");
  for (double t : times)
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("times must be positive and finite");
  const bool needs_steps = scheme == Scheme::LaplaceInTime || scheme == Scheme::CqInTime || scheme == Scheme::SmallTime;
  if (needs_steps) require_list(steps, "N");
  for (int N : steps)
    if (N < 1) throw DomainError("N values must be positive");
  if (reference.mesh_multiple < 1) throw DomainError("reference mesh multiple must be positive");
  if (reference.n_ref < 1) throw DomainError("reference N must be positive");
  if (time_N < 1) throw DomainError("contour size must be positive");
  if (quad_order < 1) throw DomainError("quadrature order must be positive");
}

double pair_rate(double e_coarse, double e_fine, double p_coarse, double p_fine) {
  return std::log(e_coarse / e_fine) / std::log(p_coarse / p_fine);
}

std::vector<RateReport> spatial_study(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.scheme != Scheme::SemidiscreteSpatial) throw DomainError("spatial_study needs a spatial spec");
  const KernelSymbol kernel = make_kernel(spec);
  const double nv = spec.v.l2_norm();
  const int ref_M = *std::max_element(spec.meshes.begin(), spec.meshes.end()) * spec.reference.mesh_multiple;
  const FemSystem ref_sys(ref_M);
  const DofVector ref_v = initial_vector(ref_sys, spec.v, spec.projection);

  const std::size_t nt = spec.times.size(), nm = spec.meshes.size();
  std::vector<DofVector> refs(nt);
  for_each_index(nt, spec.exec, [&](std::size_t i) {
    refs[i] = laplace_solution(ref_sys, kernel, ref_v, spec.time_N, spec.times[i], Exec::Serial);
  });

  std::vector<ErrorNorms> errs(nt * nm);
  for_each_index(nt * nm, spec.exec, [&](std::size_t c) {
    const std::size_t it = c / nm, im = c % nm;
    const FemSystem sys(spec.meshes[im]);
    const DofVector vh = initial_vector(sys, spec.v, spec.projection);
    const DofVector u = laplace_solution(sys, kernel, vh, spec.time_N, spec.times[it], Exec::Serial);
    errs[c] = error_norms(ref_sys.mesh(), refs[it], sys.mesh(), u);
  });

  std::vector<RateReport> out;
  for (std::size_t it = 0; it < nt; ++it) {
    RateReport r;
    r.scheme = spec.scheme;
    r.theoretical_rate = 2.0;
    for (std::size_t im = 0; im < nm; ++im) {
      const ErrorNorms& e = errs[it * nm + im];
      r.rows.push_back({static_cast<double>(spec.meshes[im]), e.l2 / nv, e.h1 / nv, std::nullopt});
    }
    auto h = [](double M) { return 1.0 / M; };
    fill_pair_rates(r.rows, h);
    if (nm >= 2) {
      const RateRow& a = r.rows[nm - 2];
      const RateRow& b = r.rows[nm - 1];
      r.fitted_rate = *b.rate;
      r.fitted_rate_h1 = pair_rate(*a.error_h1, *b.error_h1, h(a.param), h(b.param));
    }
    r.metadata = base_metadata(spec, spec.times[it]);
    r.metadata.push_back({"reference", "mesh " + std::to_string(ref_M) + ", contour N " + std::to_string(spec.time_N)});
    if (r.fitted_rate_h1) r.metadata.push_back({"rate_h1", fmt("%.6g", *r.fitted_rate_h1)});
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<RateReport> laplace_study(const ExperimentSpec& spec) {
  spec.validate();
  const KernelSymbol kernel = make_kernel(spec);
  const double nv = spec.v.l2_norm();
  const FemSystem sys(spec.meshes.front());
  const DofVector vh = initial_vector(sys, spec.v, spec.projection);

  const std::size_t nt = spec.times.size(), nn = spec.steps.size() + 1;  // last column: reference
  std::vector<DofVector> sol(nt * nn);
  for_each_index(nt * nn, spec.exec, [&](std::size_t c) {
    const std::size_t it = c / nn, in = c % nn;
    const int N = in + 1 == nn ? spec.reference.n_ref : spec.steps[in];
    sol[c] = laplace_solution(sys, kernel, vh, N, spec.times[it], Exec::Serial);
  });

  std::vector<RateReport> out;
  for (std::size_t it = 0; it < nt; ++it) {
    RateReport r;
    r.scheme = Scheme::LaplaceInTime;
    const DofVector& ref = sol[it * nn + nn - 1];
    std::vector<double> Ns, es;
    for (std::size_t in = 0; in + 1 < nn; ++in) {
      const double e = diff_norm(sys, sol[it * nn + in], ref) / nv;
      r.rows.push_back({static_cast<double>(spec.steps[in]), e, std::nullopt, std::nullopt});
      Ns.push_back(spec.steps[in]);
      es.push_back(e);
    }
    r.fitted_rate = exponential_fit(Ns, es).rate;
    r.metadata = base_metadata(spec, spec.times[it]);
    r.metadata.push_back({"mesh", std::to_string(spec.meshes.front())});
    r.metadata.push_back({"reference", "contour N " + std::to_string(spec.reference.n_ref) + ", same mesh"});
    r.metadata.push_back({"fit", "exponential, errors below 1e-13 excluded"});
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<RateReport> cq_convergence(const ExperimentSpec& spec) {
  spec.validate();
  const KernelSymbol kernel = make_kernel(spec);
  const double nv = spec.v.l2_norm();
  const FemSystem sys(spec.meshes.front());
  const DofVector vh = initial_vector(sys, spec.v, spec.projection);
  const double nvh = l2_norm(sys, vh);

  const std::size_t nt = spec.times.size(), nn = spec.steps.size();
  std::vector<DofVector> refs(nt);
  for_each_index(nt, spec.exec, [&](std::size_t i) {
    refs[i] = laplace_solution(sys, kernel, vh, spec.reference.n_ref, spec.times[i], Exec::Serial);
  });

  std::vector<double> errs(nt * nn), growth(nt * nn);
  for_each_index(nt * nn, spec.exec, [&](std::size_t c) {
    const std::size_t it = c / nn, in = c % nn;
    const TimeGrid grid = TimeGrid::uniform(spec.times[it], spec.steps[in]);
    const CqWeights w = weights_fft(kernel, grid.tau(), grid.N, Exec::Serial);
    const std::vector<DofVector> U = step_scheme(sys, w, grid, vh, Exec::Serial);
    double g = 0.0;
    for (const DofVector& u : U) g = std::max(g, l2_norm(sys, u) / nvh);
    errs[c] = diff_norm(sys, U.back(), refs[it]) / nv;
    growth[c] = g;
  });

  std::vector<RateReport> out;
  for (std::size_t it = 0; it < nt; ++it) {
    RateReport r;
    r.scheme = Scheme::CqInTime;
    r.theoretical_rate = 1.0;
    double g = 0.0;
    for (std::size_t in = 0; in < nn; ++in) {
      r.rows.push_back({static_cast<double>(spec.steps[in]), errs[it * nn + in], std::nullopt, std::nullopt});
      g = std::max(g, growth[it * nn + in]);
    }
    fill_pair_rates(r.rows, [](double N) { return 1.0 / N; });
    if (nn >= 2) r.fitted_rate = *r.rows.back().rate;
    r.stability = g;
    r.metadata = base_metadata(spec, spec.times[it]);
    r.metadata.push_back({"mesh", std::to_string(spec.meshes.front())});
    r.metadata.push_back({"reference", "contour N " + std::to_string(spec.reference.n_ref) + ", same mesh"});
    r.metadata.push_back({"stability", fmt("%.6f", g)});
    out.push_back(std::move(r));
  }
  return out;
}

RateReport small_time_study(const ExperimentSpec& spec) {
  spec.validate();
  const KernelSymbol kernel = make_kernel(spec);
  const double nv = spec.v.l2_norm();
  const FemSystem sys(spec.meshes.front());
  const DofVector vh = initial_vector(sys, spec.v, spec.projection);
  const int N = spec.steps.front();

  const std::size_t nt = spec.times.size();
  std::vector<double> errs(nt);
  for_each_index(nt, spec.exec, [&](std::size_t i) {
    const double t = spec.times[i];
    const DofVector ref = laplace_solution(sys, kernel, vh, spec.reference.n_ref, t, Exec::Serial);
    DofVector u;
    if (spec.method == TimeMethod::Cq) {
      const TimeGrid grid = TimeGrid::uniform(t, N);
      u = step_scheme(sys, weights_fft(kernel, grid.tau(), N, Exec::Serial), grid, vh, Exec::Serial).back();
    } else {
      u = laplace_solution(sys, kernel, vh, N, t, Exec::Serial);
    }
    errs[i] = diff_norm(sys, u, ref) / nv;
  });

  RateReport r;
  r.scheme = Scheme::SmallTime;
  for (std::size_t i = 0; i < nt; ++i) r.rows.push_back({spec.times[i], errs[i], std::nullopt, std::nullopt});
  fill_pair_rates(r.rows, [](double t) { return t; });
  if (nt >= 2) r.fitted_rate = *r.rows.back().rate;
  r.metadata = base_metadata(spec, spec.times.back());
  r.metadata[3].second = join(spec.times);
  r.metadata.push_back({"method", spec.method == TimeMethod::Cq ? "cq" : "laplace"});
  r.metadata.push_back({"N", std::to_string(N)});
  r.metadata.push_back({"mesh", std::to_string(spec.meshes.front())});
  r.metadata.push_back({"reference", "contour N " + std::to_string(spec.reference.n_ref) + ", same mesh"});
  r.metadata.push_back({"rate_column", "log-log slope against t"});
  return r;
}

RateReport one_step_study(const ExperimentSpec& spec) {
  spec.validate();
  const KernelSymbol kernel = make_kernel(spec);
  const double nv = spec.v.l2_norm();
  const FemSystem sys(spec.meshes.front());
  const DofVector vh = initial_vector(sys, spec.v, spec.projection);

  const std::size_t nt = spec.times.size();
  std::vector<double> errs(nt);
  for_each_index(nt, spec.exec, [&](std::size_t i) {
    const double tau = spec.times[i];
    const DofVector ref = laplace_solution(sys, kernel, vh, spec.reference.n_ref, tau, Exec::Serial);
    const TimeGrid grid = TimeGrid::uniform(tau, 1);
    const DofVector u = step_scheme(sys, weights_fft(kernel, tau, 1, Exec::Serial), grid, vh, Exec::Serial).back();
    errs[i] = diff_norm(sys, u, ref) / nv;
  });

  RateReport r;
  r.scheme = Scheme::SmallTime;
  std::vector<double> x, y;
  for (std::size_t i = 0; i < nt; ++i) {
    const double ratio = errs[i] / spec.times[i];
    r.rows.push_back({spec.times[i], errs[i], std::nullopt, ratio});
    x.push_back(std::abs(std::log10(spec.times[i])));
    y.push_back(ratio);
  }
  if (nt >= 2) {
    r.ratio_fit = linear_fit(x, y);
    r.fitted_rate = r.ratio_fit->slope;
  }
  r.metadata = base_metadata(spec, spec.times.front());
  r.metadata[3].second = join(spec.times);
  r.metadata.push_back({"method", "cq, one step"});
  r.metadata.push_back({"mesh", std::to_string(spec.meshes.front())});
  r.metadata.push_back({"reference", "contour N " + std::to_string(spec.reference.n_ref) + ", same mesh"});
  r.metadata.push_back({"rate_column", "error / tau"});
  if (r.ratio_fit) {
    r.metadata.push_back({"fit_slope", fmt("%.6g", r.ratio_fit->slope)});
    r.metadata.push_back({"fit_r2", fmt("%.6f", r.ratio_fit->r2)});
  }
  return r;
}

RateReport decay_report(const ExperimentSpec& spec) {
  spec.validate();
  const KernelSymbol kernel = make_kernel(spec);
  const double nv = spec.v.l2_norm();
  const FemSystem sys(spec.meshes.front());
  const DofVector vh = initial_vector(sys, spec.v, spec.projection);

  const std::size_t nt = spec.times.size();
  std::vector<double> norms(nt);
  for_each_index(nt, spec.exec, [&](std::size_t i) {
    norms[i] = l2_norm(sys, laplace_solution(sys, kernel, vh, spec.time_N, spec.times[i], Exec::Serial)) / nv;
  });

  RateReport r;
  r.scheme = Scheme::LargeTimeDecay;
  std::vector<double> ks;
  for (std::size_t i = 0; i < nt; ++i) {
    r.rows.push_back({spec.times[i], norms[i], std::nullopt, std::nullopt});
    ks.push_back(std::log10(spec.times[i]));
  }
  r.metadata = base_metadata(spec, spec.times.front());
  r.metadata[3].second = join(spec.times);
  r.metadata.push_back({"N", std::to_string(spec.time_N)});
  r.metadata.push_back({"mesh", std::to_string(spec.meshes.front())});
  r.metadata.push_back({"error_l2_column", "||U(t)|| / ||v||"});
  if (nt >= 3) {
    r.decay = decay_fit(ks, norms);
    r.metadata.push_back({"fit", "C / (log10 t + k0)"});
    r.metadata.push_back({"fit_C", fmt("%.6g", r.decay->C)});
    r.metadata.push_back({"fit_k0", fmt("%.6g", r.decay->k0)});
    r.metadata.push_back({"fit_residual", fmt("%.6f", r.decay->residual)});
  }
  return r;
}

DecayFit decay_fit(std::span<const double> k, std::span<const double> norms) {
  if (k.size() != norms.size()) throw MismatchError("decay fit: k and norms differ in length");
  if (k.size() < 3) throw DegenerateFit("decay fit needs at least three points");
  for (std::size_t i = 0; i < k.size(); ++i)
    if (!(norms[i] > 0.0) || !std::isfinite(norms[i]) || !(k[i] > 0.0))
      throw DegenerateFit("decay fit needs positive norms at positive log10 t");

  const std::size_t n = k.size();
  std::vector<double> inv(n);
  for (std::size_t i = 0; i < n; ++i) inv[i] = 1.0 / norms[i];
  const LinearFit lf = linear_fit(k, inv);

  DecayFit fit;
  bool affine = lf.slope > 0.0;
  if (affine) {
    fit.C = 1.0 / lf.slope;
    fit.k0 = lf.intercept / lf.slope;
    for (double ki : k) affine = affine && ki + fit.k0 > 0.0;
  }
  if (!affine) {
    // C / k with C minimizing the relative residuals
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double q = 1.0 / (k[i] * norms[i]);
      num += q;
      den += q * q;
    }
    fit.C = num / den;
    fit.k0 = 0.0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double model = fit.C / (k[i] + fit.k0);
    fit.residual = std::max(fit.residual, std::abs(model - norms[i]) / norms[i]);
  }
  fit.accepted = fit.residual < 0.05;
  return fit;
}

ExponentialFit exponential_fit(std::span<const double> N, std::span<const double> errors, double floor) {
  if (N.size() != errors.size()) throw MismatchError("exponential fit: N and errors differ in length");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < N.size(); ++i)
    if (errors[i] >= floor && errors[i] > 0.0 && std::isfinite(errors[i])) {
      x.push_back(N[i]);
      y.push_back(std::log(errors[i]));
    }
  if (x.size() < 2) throw DomainError("exponential fit needs at least two errors above the noise floor");
  const LinearFit lf = linear_fit(x, y);
  return {-lf.slope, lf.intercept, x.size()};
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw MismatchError("linear fit: x and y differ in length");
  const std::size_t n = x.size();
  if (n < 2) throw DegenerateFit("linear fit needs at least two points");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DegenerateFit("linear fit: all abscissae coincide");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += d * d;
  }
  f.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return f;
}

void write_csv(std::ostream& out, std::span<const RateReport> reports) {
  out << "param,error_l2,error_h1,rate\n";
  for (const RateReport& r : reports) {
    for (const auto& [key, value] : r.metadata) out << "# " << key << ": " << value << '\n';
    for (const RateRow& row : r.rows) {
      out << fmt("%.10g", row.param) << ',' << fmt("%.6e", row.error_l2) << ',';
      if (row.error_h1) out << fmt("%.6e", *row.error_h1);
      out << ',';
      if (row.rate) out << fmt("%.6g", *row.rate);
      out << '\n';
    }
  }
}

}  // namespace dofd
