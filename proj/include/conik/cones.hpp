#pragma once

#include "conik/denselin.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace conik {

enum class ConeKind { orthant, weighted_orthant, psd, soc, exp, lmi_slice, product };

const char* kind_name(ConeKind k);

enum class Verdict { interior, boundary, outside };

struct Membership {
  Verdict verdict;
  double margin;  // signed: > 0 interior, ~0 boundary, < 0 outside
};

class Cone;
using ConePtr = std::shared_ptr<const Cone>;

// A regular cone together with its canonical theta-LHSCB.  Immutable and
// shareable across threads; all members are pure.
class Cone {
 public:
  virtual ~Cone() = default;

  virtual ConeKind kind() const = 0;
  virtual int dim() const = 0;       // ambient dimension n
  virtual double theta() const = 0;  // barrier parameter
  virtual std::string spec_string() const = 0;

  virtual Membership contains(const Vector& x, double tol) const = 0;
  virtual Membership dual_contains(const Vector& s, double tol) const = 0;

  // Barrier data at an interior point (interiority is the caller's job).
  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;
  virtual SymMatrix hessian(const Vector& x) const = 0;

  virtual Vector canonical_point() const = 0;

  virtual bool self_dual() const = 0;
  virtual bool symmetric_kind() const = 0;      // NT scaling point exists
  virtual bool negative_curvature() const = 0;  // the barrier is known to have it
  virtual bool optimal_self_scaled() const = 0;

  virtual std::optional<double> gauge_closed_form(const Vector& x, const Vector& h) const;
  virtual std::optional<Vector> shadow_primal_closed_form(const Vector& s) const;
  virtual std::optional<Vector> nt_scaling_point(const Vector& x, const Vector& s) const;

  // Introspection used by serialization and the CLI; empty by default.
  virtual const Vector* weight_vector() const { return nullptr; }
  virtual const std::vector<int>* soc_widths() const { return nullptr; }
  virtual int psd_side() const { return 0; }
  virtual int exp_copies() const { return 0; }
  virtual const std::vector<SymMatrix>* lmi_mats() const { return nullptr; }
  virtual const SymMatrix* lmi_a0() const { return nullptr; }
  virtual const std::vector<ConePtr>* parts() const { return nullptr; }

  void require_dim(const Vector& v, const char* who) const;
};

ConePtr make_orthant(int n);
ConePtr make_weighted_orthant(Vector weights);  // weights c_i >= 1
ConePtr make_psd(int m);
ConePtr make_soc(std::vector<int> block_widths);  // block i has dimension p_i + 1
ConePtr make_exp(int copies);
ConePtr make_lmi_slice(SymMatrix a0, std::vector<SymMatrix> mats);
ConePtr make_toeplitz_tridiag(int m);  // banded Toeplitz slice on bands 0,1,2
ConePtr make_product(std::vector<ConePtr> parts);

// Mini-grammar "kind:params" with '⊕' joining product factors,
// e.g. "orthant:4", "soc:3,5", "exp:1⊕soc:3", "toeplitz-tridiag:5".
ConePtr parse_cone_spec(const std::string& spec);

struct GaugeResult {
  double sigma = 0.0;
  Vector boundary_point;  // sigma*x - h, populated when sigma > 0
};

// Minkowski gauge sigma_x(h) = inf{beta >= 0 : beta*x - h in K}.
GaugeResult gauge(const Cone& K, const Vector& x, const Vector& h);
double gauge_sigma(const Cone& K, const Vector& x, const Vector& h);
// Generic bisection route, exposed so tests can cross-check closed forms.
double gauge_bisect(const Cone& K, const Vector& x, const Vector& h);
// Gauge of the dual cone at s in direction h (bisection on dual membership).
double dual_gauge_sigma(const Cone& K, const Vector& s, const Vector& h);

// |h|_x = max(sigma_x(h), sigma_x(-h))
double minkowski_norm(const Cone& K, const Vector& x, const Vector& h);

// Scaled symmetric vectorization: Euclidean inner products of coordinates
// equal trace inner products of the matrices.
int svec_dim(int m);
int svec_side(int n);  // inverse of svec_dim
Vector mat_to_svec(const Eigen::MatrixXd& M);
Eigen::MatrixXd svec_to_mat(const Vector& v);

}  // namespace conik
