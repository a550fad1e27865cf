#pragma once

#include "conik/scaling.hpp"

#include <cstdint>

namespace conik {

// R(x, s, v) = <F''_*(s)^{-1} v, v> / <F''(x) v, v>
double ratio_R(const PrimalDualPair& pair, const Vector& v);

struct VspaceResult {
  double xi;
  Vector v_opt;
  double alpha_opt;
};

// Worst-case complexity of the n-dimensional log barrier on the orthant via
// the v-space problem: symmetry-reduced 1-D minimization, cross-checked by a
// projected descent on the full variables for small n.
VspaceResult vspace_xi_orthant(int n);

// Worst-case primal point paired with s on the orthant: coordinate i is
// pulled to (tau/(tau+1)) mu x~_i, the others pushed to tau mu x~_j.
Vector worstcase_orthant(int n, const Vector& s, int i, double mu);

// sup of the local complexity measure for -c ln x1 - c ln x2 on the plane
// orthant, by the 1-D reduction in v-space.  c = 2 gives 1.07735.
double weighted_orthant_xi_sup(double c = 2.0);

struct ExtremeVResult {
  std::vector<Vector> maximizers;  // feasible v attaining the norm condition
  Vector best;                     // best feasible v found overall
  double best_norm_sq = 0.0;       // ||best - mu x~||^2_{mu x~}
  double target_norm_sq = 0.0;     // theta (theta - 1)
  bool found = false;
};

// Maximize <F''(x~) v, v> over { v in K : <s, v> = mu theta } by multi-start
// projected ascent, with a polar boundary scan when the slice is a curve.
ExtremeVResult extreme_v_search(const Barrier& F, const Vector& s, double mu, int n_starts = 16,
                                std::uint64_t seed = 0);

struct WorstCaseCheck {
  std::string clause;
  double margin;  // >= 0 passes
  bool pass;
};

struct WorstCaseCertificate {
  Vector v, x_hat, r, u, t;
  double ratio = 0.0;        // R(x_hat, s, v)
  double xi_at_xhat = 0.0;   // local complexity at (x_hat, s)
  double v_norm_sq = 0.0;    // ||v - mu x~||^2_{mu x~}
  double xhat_radius = 0.0;  // ||x_hat - mu x~||_{mu x~}
  bool valid = false;
  std::vector<WorstCaseCheck> checks;
};

// x_hat = (1 - tau) v + tau mu x~ with the dual certificates r, u, t; every
// clause is re-verified numerically and recorded.
WorstCaseCertificate hatx_construct(const Barrier& F, const Vector& s, const Vector& v, double mu);

struct SupSearchResult {
  Vector x, s;
  double best_xi = 0.0;
  int evaluations = 0;
};

// Multi-start maximization of the local complexity measure over interior
// pairs; deterministic for a fixed seed.
SupSearchResult xi_sup_search(const Barrier& F, int n_starts, std::uint64_t seed, int budget);

// Same search with s fixed and x confined to the slice <s, x> = mu theta.
SupSearchResult xi_slice_sup_search(const Barrier& F, const Vector& s, double mu, int n_starts,
                                    std::uint64_t seed, int budget);

}  // namespace conik
