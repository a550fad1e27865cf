#pragma once

#include "conik/scaling.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace conik {

// minimize <c, x>  s.t.  A x = b, x in K, with a strictly feasible start
// for both sides (A* y0 + s0 = c).
struct ConicProgram {
  Eigen::MatrixXd A;
  Vector b, c;
  ConePtr cone;
  Vector x0, y0, s0;
};

ConicProgram gen_feasible_instance(ConePtr cone, int m, std::uint64_t seed);

enum class ScalingKind { nt, integral };

struct IpmOptions {
  double eta = 0.25;        // neighborhood gamma_G <= eta
  double eta_inner = 0.1;   // corrector exit level
  double backtrack = 0.8;
  double step_frac = 0.99;  // fraction of the gauge step to the boundary
  int max_kkt_solves = 500;
  int max_correctors = 12;
  int quad_order = 32;
  bool check_membership = true;  // certify T in T(x,s;4/3) on negative-curvature cones
  double membership_tol = 1e-6;
  double stall_step = 1e-12;
};

struct IterationRecord {
  int k = 0;
  double mu = 0.0;
  double gamma_g = 0.0;
  double gamma_inf = 0.0;
  double xi_check = 0.0;
  double step_predictor = 0.0;
  int correctors = 0;
  double membership_margin = 0.0;  // min normalized margin at xi = 4/3; NaN if unchecked
  std::string scaling;
};

enum class SolveStatus { optimal, stalled, iteration_limit };

const char* status_name(SolveStatus s);

struct IpmResult {
  SolveStatus status = SolveStatus::stalled;
  Vector x, y, s;
  double gap = 0.0;   // <s, x> at exit
  double gap0 = 0.0;  // <s0, x0>
  int kkt_solves = 0;
  double max_primal_residual = 0.0;  // max ||A x_k - b|| seen
  std::vector<IterationRecord> trace;
  std::string message;
};

// Feasible-start predictor-corrector; terminates when <s,x> <= eps <s0,x0>.
// Requesting the NT scaling on a nonsymmetric cone throws
// UnsupportedScalingError.
IpmResult solve(const ConicProgram& prog, ScalingKind scaling, double eps,
                const IpmOptions& opts = {});

struct IterationStudyRow {
  std::string cone;
  double theta = 0.0;
  int n = 0, m = 0;
  double median_iterations = 0.0;
  double bound = 0.0;  // 20 sqrt(theta) ln(1/eps)
};

struct IterationStudy {
  std::vector<IterationStudyRow> rows;
  double fitted_exponent = 0.0;  // slope of log iterations vs log theta
};

IterationStudy iteration_study(const std::vector<ConePtr>& family, double eps, std::uint64_t seed,
                               int seeds_per = 3, ScalingKind scaling = ScalingKind::nt);

}  // namespace conik
