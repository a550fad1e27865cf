// conik: scans, worst-case constructions, and solves for conic-barrier
// calculus experiments.  Exit codes: 0 success, 1 bound violation,
// 2 usage/contract error, 3 numerical non-convergence.

#include "conik/sampling.hpp"
#include "conik/serialize.hpp"
#include "conik/worstcase.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>

using namespace conik;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBoundViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNoConvergence = 3;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot open output file '" + path + "'");
  return out;
}

// The bound the scan is checked against: rho_theta for optimal self-scaled
// barriers, 4/3 under negative curvature, 2 theta in general.
std::pair<double, std::string> xi_bound(const Cone& cone) {
  if (cone.optimal_self_scaled() && cone.theta() >= 2.0) {
    return {tau_rho(cone.theta()).rho, "rho_theta"};
  }
  if (cone.negative_curvature()) return {4.0 / 3.0, "4/3"};
  return {2.0 * cone.theta(), "2*theta"};
}

Vector parse_s_spec(const Cone& cone, const std::string& spec) {
  if (spec == "ones") return Vector::Ones(cone.dim());
  if (spec == "identity") {
    if (cone.kind() == ConeKind::lmi_slice) {
      const auto& mats = *cone.lmi_mats();
      Vector s(cone.dim());
      for (int i = 0; i < cone.dim(); ++i) s(i) = mats[static_cast<size_t>(i)].trace();
      return s;
    }
    if (cone.kind() == ConeKind::psd) {
      return mat_to_svec(Eigen::MatrixXd::Identity(cone.psd_side(), cone.psd_side()));
    }
    throw DomainError("--s identity needs an lmi_slice or psd cone");
  }
  std::stringstream ss(spec);
  std::vector<double> vals;
  std::string tok;
  while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
  if (static_cast<int>(vals.size()) != cone.dim()) {
    throw DomainError("--s has " + std::to_string(vals.size()) + " entries, cone needs " +
                      std::to_string(cone.dim()));
  }
  Vector s(cone.dim());
  for (size_t i = 0; i < vals.size(); ++i) s(static_cast<int>(i)) = vals[i];
  return s;
}

struct ScanRecord {
  double xi_check, gamma_g, gamma_inf, mu_mu_tilde;
};

int cmd_xi_scan(const std::string& cone_spec, int samples, std::uint64_t seed,
                const std::string& out_path, const std::string& format) {
  ConePtr cone = parse_cone_spec(cone_spec);
  const auto [bound, bound_name] = xi_bound(*cone);

  const auto records = parallel_map(samples, [&](int i) {
    PairSampler sampler(cone, seed * 0x9e3779b9u + static_cast<std::uint64_t>(i));
    // strata: wild, moderate, near-central
    PrimalDualPair p = (i % 3 == 0)   ? sampler.pair(0.999, 1.5)
                       : (i % 3 == 1) ? sampler.pair(0.9, 1.0)
                                      : sampler.near_central_pair(1e-2);
    ScanRecord r;
    r.xi_check = xi_check_local(p).xi_check_local;
    r.gamma_g = gamma_g(p);
    r.gamma_inf = gamma_inf(p);
    r.mu_mu_tilde = p.mu * p.mu_tilde;
    return r;
  });

  double max_xi = 0.0;
  int violations = 0;
  for (const auto& r : records) {
    max_xi = std::max(max_xi, r.xi_check);
    if (r.xi_check > bound + 1e-9) ++violations;
  }

  if (format == "csv") {
    auto out = open_out(out_path);
    out << "xi_check,gamma_g,gamma_inf,mu_mu_tilde\n";
    for (const auto& r : records) {
      out << format_double(r.xi_check) << ',' << format_double(r.gamma_g) << ','
          << format_double(r.gamma_inf) << ',' << format_double(r.mu_mu_tilde) << '\n';
    }
  } else {
    auto out = open_out(out_path);
    JsonWriter w(out);
    w.begin_object();
    w.kv("schema", "conik/v1");
    w.kv("command", "xi-scan");
    w.kv("cone", cone->spec_string());
    w.kv("samples", samples);
    w.kv("seed", static_cast<std::int64_t>(seed));
    w.kv("bound", bound);
    w.kv("bound_kind", bound_name);
    w.kv("max_xi_check", max_xi);
    w.kv("violations", violations);
    w.key("records").begin_array();
    for (const auto& r : records) {
      w.begin_object();
      w.kv("xi_check", r.xi_check);
      w.kv("gamma_g", r.gamma_g);
      w.kv("gamma_inf", r.gamma_inf);
      w.kv("mu_mu_tilde", r.mu_mu_tilde);
      w.end_object();
    }
    w.end_array();
    w.end_object();
    out << '\n';
  }
  std::cout << "cone=" << cone->spec_string() << " samples=" << samples
            << " max_xi_check=" << format_double(max_xi) << " bound=" << format_double(bound)
            << " (" << bound_name << ")\n";
  return violations == 0 ? kExitOk : kExitBoundViolation;
}

// Level-set radius along a slice ray (fraction of the boundary distance).
double level_radius(const std::function<double(double)>& value_at, double level) {
  double lo = 1e-9, hi = 1.0 - 1e-9;
  if (value_at(hi) < level) return std::numeric_limits<double>::quiet_NaN();
  if (value_at(lo) > level) return 0.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (value_at(mid) > level ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

int cmd_worst_case(const std::string& cone_spec, const std::string& s_spec, double mu,
                   std::uint64_t seed, const std::string& out_path,
                   const std::string& grid_path) {
  ConePtr cone = parse_cone_spec(cone_spec);
  Barrier F(cone);
  const Vector s = parse_s_spec(*cone, s_spec);
  if (cone->dual_contains(s, 1e-10).verdict != Verdict::interior) {
    throw DomainError("--s is not interior to the dual cone");
  }
  if (mu <= 0.0) mu = 1.0 / F.theta();

  ExtremeVResult res = extreme_v_search(F, s, mu, 16, seed);
  std::vector<WorstCaseCertificate> certs;
  for (const auto& v : res.maximizers) certs.push_back(hatx_construct(F, s, v, mu));

  SupSearchResult slice_sup = xi_slice_sup_search(F, s, mu, 8, seed + 1, 20000);

  {
    auto out = open_out(out_path);
    JsonWriter w(out);
    w.begin_object();
    w.kv("schema", "conik/v1");
    w.kv("command", "worst-case");
    w.kv("cone", cone->spec_string());
    w.kv("s", s);
    w.kv("mu", mu);
    w.kv("found", res.found);
    w.kv("target_norm_sq", res.target_norm_sq);
    w.kv("best_norm_sq", res.best_norm_sq);
    w.kv("slice_sup_xi", slice_sup.best_xi);
    w.key("certificates").begin_array();
    for (const auto& c : certs) write_certificate(w, c);
    w.end_array();
    w.end_object();
    out << '\n';
  }

  // Slice-grid data for the figure-style plots (2-D slices only):
  // boundary, Dikin radii tau/(tau+1) and 1, gamma_G and gamma_inf level sets.
  if (!grid_path.empty() && cone->dim() == 3) {
    const Vector x_shadow = shadow_primal(F, s);
    const Vector center = mu * x_shadow;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(s);
    const Eigen::MatrixXd N = Eigen::MatrixXd(qr.householderQ()).rightCols(2);
    const double tau = tau_rho(F.theta()).tau;
    const SymMatrix Hc = F.hessian(center);

    auto out = open_out(grid_path);
    out << "theta,bx1,bx2,bx3,r_boundary,r_dikin_inner,r_dikin_unit,r_gamma_g,r_gamma_inf\n";
    const int grid = 720;
    for (int k = 0; k < grid; ++k) {
      const double th = 2.0 * M_PI * k / grid;
      const Vector d = N.col(0) * std::cos(th) + N.col(1) * std::sin(th);
      const double sigma = gauge_sigma(*cone, center, -d);
      const double rb = 1.0 / sigma;
      const Vector bx = center + rb * d;

      const double dn = std::sqrt(d.dot(Hc * d));
      const double r_inner = (tau / (tau + 1.0)) / dn;
      const double r_unit = 1.0 / dn;

      const auto gamma_g_at = [&](double f) {
        const Vector x = center + f * rb * d;
        const double mu_x = s.dot(x) / F.theta();
        const double mut = -F.gradient(x).dot(x_shadow) / F.theta();
        return F.theta() * (mu_x * mut - 1.0);
      };
      const auto gamma_inf_at = [&](double f) {
        const Vector x = center + f * rb * d;
        const double mu_x = s.dot(x) / F.theta();
        return gauge_sigma(*cone, x, mu_x * x_shadow) - 1.0;
      };
      const double rg = level_radius(gamma_g_at, 1.0 / (tau + 1.0)) * rb;
      const double ri = level_radius(gamma_inf_at, 1.0 / tau) * rb;

      out << format_double(th) << ',' << format_double(bx(0)) << ',' << format_double(bx(1))
          << ',' << format_double(bx(2)) << ',' << format_double(rb) << ','
          << format_double(r_inner) << ',' << format_double(r_unit) << ','
          << format_double(rg) << ',' << format_double(ri) << '\n';
    }
  }

  if (res.found) {
    std::cout << "found " << certs.size() << " attaining direction(s); xi at x_hat:";
    for (const auto& c : certs) std::cout << ' ' << format_double(c.xi_at_xhat);
    std::cout << '\n';
  } else {
    std::cout << "no attaining point: best norm^2 " << format_double(res.best_norm_sq)
              << " < target " << format_double(res.target_norm_sq) << "; slice sup xi "
              << format_double(slice_sup.best_xi) << '\n';
  }
  return kExitOk;
}

int cmd_solve(const std::string& instance_path, const std::string& scaling, double eps,
              const std::string& out_path, const std::string& trace_path) {
  ConicProgram prog = program_from_file(instance_path);
  ScalingKind kind;
  if (scaling == "nt") {
    kind = ScalingKind::nt;
  } else if (scaling == "integral") {
    kind = ScalingKind::integral;
  } else {
    throw DomainError("--scaling must be nt or integral");
  }

  IpmResult res = solve(prog, kind, eps);

  if (!out_path.empty()) {
    auto out = open_out(out_path);
    JsonWriter w(out);
    w.begin_object();
    w.kv("schema", "conik/v1");
    w.kv("status", status_name(res.status));
    w.kv("x", res.x);
    w.kv("y", res.y);
    w.kv("s", res.s);
    w.kv("objective", prog.c.dot(res.x));
    w.kv("gap", res.gap);
    w.kv("gap0", res.gap0);
    w.kv("kkt_solves", res.kkt_solves);
    w.end_object();
    out << '\n';
  }
  if (!trace_path.empty()) {
    auto out = open_out(trace_path);
    for (const auto& rec : res.trace) {
      JsonWriter w(out);
      write_trace_record(w, rec);
      out << '\n';
    }
  }
  std::cout << "status=" << status_name(res.status) << " iterations=" << res.kkt_solves
            << " gap=" << format_double(res.gap) << '\n';
  return res.status == SolveStatus::optimal ? kExitOk : kExitNoConvergence;
}

int cmd_report(const std::string& table, int samples, std::uint64_t seed,
               const std::string& out_path, const std::string& format) {
  if (table == "rho") {
    auto out = open_out(out_path);
    if (format == "csv") {
      out << "n,tau,rho\n";
      for (int n = 2; n <= 100; ++n) {
        TauRho tr = tau_rho(n);
        out << n << ',' << format_double(tr.tau) << ',' << format_double(tr.rho) << '\n';
      }
    } else {
      JsonWriter w(out);
      w.begin_object();
      w.kv("schema", "conik/v1");
      w.kv("command", "report-rho");
      w.key("rows").begin_array();
      for (int n = 2; n <= 100; ++n) {
        TauRho tr = tau_rho(n);
        w.begin_object();
        w.kv("n", n);
        w.kv("tau", tr.tau);
        w.kv("rho", tr.rho);
        w.end_object();
      }
      w.end_array();
      w.kv("rho_limit_check", std::abs(tau_rho(1e6).rho - 4.0 / 3.0));
      w.end_object();
      out << '\n';
    }
    return kExitOk;
  }

  if (table != "local-xi") throw DomainError("--table must be rho or local-xi");

  const std::vector<std::string> cones = {"orthant:4", "weighted:2,2", "psd:3",
                                          "soc:3",     "exp:1",        "toeplitz-tridiag:5"};
  bool violation = false;
  auto out = open_out(out_path);
  JsonWriter w(out);
  w.begin_object();
  w.kv("schema", "conik/v1");
  w.kv("command", "report-local-xi");
  w.kv("samples", samples);
  w.kv("seed", static_cast<std::int64_t>(seed));
  w.key("rows").begin_array();
  for (const auto& spec : cones) {
    ConePtr cone = parse_cone_spec(spec);
    PairSampler sampler(cone, seed);

    double near_max = 0.0, half_max_lower = 0.0, half_max_upper = 0.0, far_max = 0.0;
    int far_count = 0;
    for (int i = 0; i < samples; ++i) {
      PrimalDualPair near = sampler.near_central_pair(1e-3);
      near_max = std::max(near_max, xi_check_local(near).xi_check_local);

      PrimalDualPair half = sampler.half_dikin_pair(0.5);
      ComplexityReport rep = xi_local_bounds(half);
      half_max_lower = std::max(half_max_lower, rep.xi_lower);
      half_max_upper = std::max(half_max_upper, rep.xi_upper);

      if (auto far = sampler.far_pair(2.0, 50)) {
        far_max = std::max(far_max, xi_check_local(*far).xi_check_local);
        ++far_count;
      }
    }
    const bool near_ok = near_max < 1.2115;
    const bool half_ok = half_max_lower <= 3.0 + 1e-9;
    const bool far_ok = far_max <= 4.0 + 1e-8;
    violation = violation || !near_ok || !half_ok || !far_ok;

    w.begin_object();
    w.kv("cone", spec);
    w.kv("near_central_max_xi", near_max);
    w.kv("near_central_limit", 1.2115);
    w.kv("half_dikin_max_xi", half_max_lower);
    w.kv("half_dikin_max_xi_upper", half_max_upper);
    w.kv("half_dikin_limit", 3.0);
    w.kv("mu_mu_tilde_ge_2_max_xi", far_max);
    w.kv("mu_mu_tilde_ge_2_count", far_count);
    w.kv("mu_mu_tilde_ge_2_limit", 4.0);
    w.kv("pass", near_ok && half_ok && far_ok);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  out << '\n';
  return violation ? kExitBoundViolation : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "conik: barrier calculus, primal-dual scalings, and worst-case complexity "
      "experiments for conic optimization"};
  app.require_subcommand(1);

  std::string cone_spec, s_spec = "ones", out_path, grid_path, format = "json";
  std::string instance_path, scaling = "nt", trace_path, table = "rho";
  int samples = 1000;
  std::uint64_t seed = 0;
  double eps = 1e-8, mu = 0.0;

  auto* scan = app.add_subcommand(
      "xi-scan", "Sample interior pairs and check the local complexity measure against "
                 "its theoretical bound");
  scan->add_option("--cone", cone_spec,
                   "Cone spec: kind:params with '⊕' joining products, e.g. orthant:4, "
                   "weighted:2,2, psd:3, soc:3,5, exp:1, toeplitz-tridiag:5, exp:1⊕soc:3")
      ->required();
  scan->add_option("--samples", samples, "Number of sampled pairs");
  scan->add_option("--seed", seed, "RNG seed");
  scan->add_option("--out", out_path, "Output file")->required();
  scan->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* wc = app.add_subcommand(
      "worst-case", "Search extreme directions on a slice and build worst-case certificates");
  wc->add_option("--cone", cone_spec, "Cone spec (see xi-scan)")->required();
  wc->add_option("--s", s_spec, "Dual point: comma list, 'ones', or 'identity'");
  wc->add_option("--mu", mu, "Slice parameter (default 1/theta)");
  wc->add_option("--seed", seed, "RNG seed");
  wc->add_option("--out", out_path, "Certificate JSON file")->required();
  wc->add_option("--grid", grid_path, "Slice-grid CSV file (3-dimensional cones)");

  auto* sv = app.add_subcommand("solve", "Run the predictor-corrector solver on an instance");
  sv->add_option("--instance", instance_path, "Instance JSON file")->required();
  sv->add_option("--scaling", scaling, "nt or integral");
  sv->add_option("--eps", eps, "Relative duality-gap target");
  sv->add_option("--out", out_path, "Solution JSON file");
  sv->add_option("--trace", trace_path, "Trace JSON-lines file");

  auto* rp = app.add_subcommand("report", "Emit the rho table or the local-regime table");
  rp->add_option("--table", table, "rho or local-xi")
      ->check(CLI::IsMember({"rho", "local-xi"}));
  rp->add_option("--samples", samples, "Samples per regime (local-xi)");
  rp->add_option("--seed", seed, "RNG seed");
  rp->add_option("--out", out_path, "Output file")->required();
  rp->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (scan->parsed()) return cmd_xi_scan(cone_spec, samples, seed, out_path, format);
    if (wc->parsed()) return cmd_worst_case(cone_spec, s_spec, mu, seed, out_path, grid_path);
    if (sv->parsed()) return cmd_solve(instance_path, scaling, eps, out_path, trace_path);
    if (rp->parsed()) return cmd_report(table, samples, seed, out_path, format);
  } catch (const UnsupportedScalingError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ShadowSolveError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNoConvergence;
  } catch (const InternalConsistencyError& e) {
    std::cerr << "bound violation: " << e.what() << '\n';
    return kExitBoundViolation;
  }
  return kExitUsage;
}
