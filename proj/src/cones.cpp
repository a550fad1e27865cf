#include "conik/cones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace conik {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

Verdict classify(double margin, double scale, double tol) {
  const double t = tol * rel_scale(scale);
  if (margin > t) return Verdict::interior;
  if (margin < -t) return Verdict::outside;
  return Verdict::boundary;
}

Membership member(double margin, double scale, double tol) {
  return Membership{classify(margin, scale, tol), margin};
}

Membership combine(const Membership& a, const Membership& b) {
  Verdict v;
  if (a.verdict == Verdict::outside || b.verdict == Verdict::outside) {
    v = Verdict::outside;
  } else if (a.verdict == Verdict::boundary || b.verdict == Verdict::boundary) {
    v = Verdict::boundary;
  } else {
    v = Verdict::interior;
  }
  return Membership{v, std::min(a.margin, b.margin)};
}

std::string fmt_num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

const char* kind_name(ConeKind k) {
  switch (k) {
    case ConeKind::orthant: return "orthant";
    case ConeKind::weighted_orthant: return "weighted_orthant";
    case ConeKind::psd: return "psd";
    case ConeKind::soc: return "soc";
    case ConeKind::exp: return "exp";
    case ConeKind::lmi_slice: return "lmi_slice";
    case ConeKind::product: return "product";
  }
  return "?";
}

void Cone::require_dim(const Vector& v, const char* who) const {
  if (static_cast<int>(v.size()) != dim()) {
    throw DimensionError(std::string(who) + ": expected dimension " + std::to_string(dim()) +
                         ", got " + std::to_string(v.size()));
  }
}

std::optional<double> Cone::gauge_closed_form(const Vector&, const Vector&) const {
  return std::nullopt;
}
std::optional<Vector> Cone::shadow_primal_closed_form(const Vector&) const { return std::nullopt; }
std::optional<Vector> Cone::nt_scaling_point(const Vector&, const Vector&) const {
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// svec: scaled symmetric vectorization (off-diagonals carry sqrt(2))
// ---------------------------------------------------------------------------

int svec_dim(int m) { return m * (m + 1) / 2; }

int svec_side(int n) {
  const int m = static_cast<int>(std::round((std::sqrt(8.0 * n + 1.0) - 1.0) / 2.0));
  if (svec_dim(m) != n) throw DimensionError("svec_side: not a triangular number");
  return m;
}

Vector mat_to_svec(const Eigen::MatrixXd& M) {
  require_symmetric(M, "mat_to_svec");
  const int m = static_cast<int>(M.rows());
  Vector v(svec_dim(m));
  int k = 0;
  for (int j = 0; j < m; ++j) {
    for (int i = j; i < m; ++i) {
      if (i == j) {
        v(k++) = M(i, j);
      } else {
        // Prefer the representable value whose descaled image is exactly
        // M(i,j), nearest to the exact product.  This makes mat_to_svec an
        // exact right-inverse of svec_to_mat on its image; matrices outside
        // the image round-trip within one ulp (the scaling is not a power
        // of two, so no conversion can be lossless everywhere).
        const double c0 = M(i, j) * kSqrt2;
        const long double exact = static_cast<long double>(M(i, j)) * 1.41421356237309504880L;
        const double dn = std::nextafter(c0, -INFINITY), up = std::nextafter(c0, INFINITY);
        double best = c0;
        long double best_err = -1.0L;
        for (double c : {c0, dn, up, std::nextafter(dn, -INFINITY), std::nextafter(up, INFINITY)}) {
          if (c / kSqrt2 == M(i, j)) {
            const long double err = std::abs(static_cast<long double>(c) - exact);
            if (best_err < 0.0L || err < best_err) {
              best = c;
              best_err = err;
            }
          }
        }
        v(k++) = best;
      }
    }
  }
  return v;
}

Eigen::MatrixXd svec_to_mat(const Vector& v) {
  const int m = svec_side(static_cast<int>(v.size()));
  Eigen::MatrixXd M(m, m);
  int k = 0;
  for (int j = 0; j < m; ++j) {
    for (int i = j; i < m; ++i) {
      const double val = (i == j) ? v(k) : v(k) / kSqrt2;
      M(i, j) = val;
      M(j, i) = val;
      ++k;
    }
  }
  return M;
}

// ---------------------------------------------------------------------------
// Orthant and weighted orthant
// ---------------------------------------------------------------------------

class WeightedOrthantCone final : public Cone {
 public:
  explicit WeightedOrthantCone(Vector weights) : c_(std::move(weights)) {
    if (c_.size() < 1) throw DomainError("orthant: dimension must be positive");
    for (int i = 0; i < c_.size(); ++i) {
      if (!(c_(i) >= 1.0)) throw DomainError("weighted_orthant: weights must be >= 1");
    }
    plain_ = (c_.array() == 1.0).all();
  }

  ConeKind kind() const override {
    return plain_ ? ConeKind::orthant : ConeKind::weighted_orthant;
  }
  int dim() const override { return static_cast<int>(c_.size()); }
  double theta() const override { return c_.sum(); }

  std::string spec_string() const override {
    if (plain_) return "orthant:" + std::to_string(dim());
    std::string s = "weighted:";
    for (int i = 0; i < c_.size(); ++i) s += (i ? "," : "") + fmt_num(c_(i));
    return s;
  }

  Membership contains(const Vector& x, double tol) const override {
    require_dim(x, "contains");
    return member(x.minCoeff(), x.cwiseAbs().maxCoeff(), tol);
  }
  Membership dual_contains(const Vector& s, double tol) const override {
    return contains(s, tol);
  }

  double value(const Vector& x) const override {
    return -(c_.array() * x.array().log()).sum();
  }
  Vector gradient(const Vector& x) const override { return -(c_.array() / x.array()); }
  SymMatrix hessian(const Vector& x) const override {
    return (c_.array() / x.array().square()).matrix().asDiagonal();
  }

  Vector canonical_point() const override { return Vector::Ones(dim()); }

  bool self_dual() const override { return true; }
  bool symmetric_kind() const override { return true; }
  bool negative_curvature() const override { return true; }
  bool optimal_self_scaled() const override { return plain_; }

  std::optional<double> gauge_closed_form(const Vector& x, const Vector& h) const override {
    return std::max(0.0, (h.array() / x.array()).maxCoeff());
  }
  std::optional<Vector> shadow_primal_closed_form(const Vector& s) const override {
    return Vector(c_.array() / s.array());
  }
  std::optional<Vector> nt_scaling_point(const Vector& x, const Vector& s) const override {
    return Vector((c_.array() * x.array() / s.array()).sqrt());
  }

  const Vector* weight_vector() const override { return plain_ ? nullptr : &c_; }

 private:
  Vector c_;
  bool plain_;
};

// ---------------------------------------------------------------------------
// Second-order cone blocks, layout (y, t) with t last in each block
// ---------------------------------------------------------------------------

class SocCone final : public Cone {
 public:
  explicit SocCone(std::vector<int> widths) : p_(std::move(widths)) {
    if (p_.empty()) throw DomainError("soc: need at least one block");
    offsets_.push_back(0);
    for (int w : p_) {
      if (w < 1) throw DomainError("soc: block width must be >= 1");
      offsets_.push_back(offsets_.back() + w + 1);
    }
  }

  ConeKind kind() const override { return ConeKind::soc; }
  int dim() const override { return offsets_.back(); }
  double theta() const override { return 2.0 * static_cast<double>(p_.size()); }

  std::string spec_string() const override {
    std::string s = "soc:";
    for (size_t i = 0; i < p_.size(); ++i) s += (i ? "," : "") + std::to_string(p_[i]);
    return s;
  }

  Membership contains(const Vector& x, double tol) const override {
    require_dim(x, "contains");
    Membership acc{Verdict::interior, std::numeric_limits<double>::infinity()};
    for (size_t b = 0; b < p_.size(); ++b) {
      const auto y = x.segment(offsets_[b], p_[b]);
      const double t = x(offsets_[b + 1] - 1);
      acc = combine(acc, member(t - y.norm(), std::max(std::abs(t), y.cwiseAbs().maxCoeff()), tol));
    }
    return acc;
  }
  Membership dual_contains(const Vector& s, double tol) const override {
    return contains(s, tol);
  }

  double value(const Vector& x) const override {
    double v = 0.0;
    for (size_t b = 0; b < p_.size(); ++b) v -= std::log(block_q(x, b));
    return v;
  }

  Vector gradient(const Vector& x) const override {
    Vector g(dim());
    for (size_t b = 0; b < p_.size(); ++b) {
      const double q = block_q(x, b);
      g.segment(offsets_[b], p_[b]) = 2.0 * x.segment(offsets_[b], p_[b]) / q;
      g(offsets_[b + 1] - 1) = -2.0 * x(offsets_[b + 1] - 1) / q;
    }
    return g;
  }

  SymMatrix hessian(const Vector& x) const override {
    SymMatrix H = SymMatrix::Zero(dim(), dim());
    for (size_t b = 0; b < p_.size(); ++b) {
      const int o = offsets_[b], w = p_[b] + 1;
      const double q = block_q(x, b);
      Vector jx(w);
      jx.head(p_[b]) = -x.segment(o, p_[b]);
      jx(w - 1) = x(o + w - 1);
      SymMatrix Hb = (4.0 / (q * q)) * jx * jx.transpose();
      for (int i = 0; i < p_[b]; ++i) Hb(i, i) += 2.0 / q;
      Hb(w - 1, w - 1) -= 2.0 / q;
      H.block(o, o, w, w) = Hb;
    }
    return H;
  }

  Vector canonical_point() const override {
    Vector x = Vector::Zero(dim());
    for (size_t b = 0; b < p_.size(); ++b) x(offsets_[b + 1] - 1) = 1.0;
    return x;
  }

  bool self_dual() const override { return true; }
  bool symmetric_kind() const override { return true; }
  bool negative_curvature() const override { return true; }
  bool optimal_self_scaled() const override { return true; }

  std::optional<double> gauge_closed_form(const Vector& x, const Vector& h) const override {
    double sigma = 0.0;
    for (size_t b = 0; b < p_.size(); ++b) {
      const int o = offsets_[b], w = p_[b] + 1;
      sigma = std::max(sigma, block_sigma(x.segment(o, w), h.segment(o, w), p_[b]));
    }
    return sigma;
  }

  std::optional<Vector> shadow_primal_closed_form(const Vector& s) const override {
    Vector xt(dim());
    for (size_t b = 0; b < p_.size(); ++b) {
      const double q = block_q(s, b);
      xt.segment(offsets_[b], p_[b]) = -2.0 * s.segment(offsets_[b], p_[b]) / q;
      xt(offsets_[b + 1] - 1) = 2.0 * s(offsets_[b + 1] - 1) / q;
    }
    return xt;
  }

  std::optional<Vector> nt_scaling_point(const Vector& x, const Vector& s) const override {
    Vector wpt(dim());
    for (size_t b = 0; b < p_.size(); ++b) {
      const int o = offsets_[b], w = p_[b] + 1;
      const auto xb = x.segment(o, w);
      const auto sb = s.segment(o, w);
      const double qx = block_q(x, b), qs = block_q(s, b);
      const double dot = xb.dot(sb);
      const double omega = std::sqrt(qx * qs);
      Vector js(w);
      js.head(p_[b]) = -sb.head(p_[b]);
      js(w - 1) = sb(w - 1);
      wpt.segment(o, w) = (std::sqrt(qx / qs) * js + xb) / std::sqrt(dot + omega);
    }
    return wpt;
  }

  const std::vector<int>* soc_widths() const override { return &p_; }

 private:
  double block_q(const Vector& x, size_t b) const {
    const double t = x(offsets_[b + 1] - 1);
    return t * t - x.segment(offsets_[b], p_[b]).squaredNorm();
  }

  static double block_sigma(const Vector& x, const Vector& h, int p) {
    const double qh = h(p) * h(p) - h.head(p).squaredNorm();
    if (qh >= 0.0 && -h(p) >= 0.0) return 0.0;  // -h in the block cone
    const double qx = x(p) * x(p) - x.head(p).squaredNorm();
    const double b = x(p) * h(p) - x.head(p).dot(h.head(p));
    // Split h = lambda x + w with x^T J w = 0; then the boundary equation is
    // (beta - lambda)^2 qx = -Q(w), which avoids cancellation in the
    // discriminant when h is nearly parallel to x.
    const double lambda = b / qx;
    Vector w = h - lambda * x;
    const double qw = w(p) * w(p) - w.head(p).squaredNorm();
    return std::max(0.0, lambda + std::sqrt(std::max(-qw, 0.0) / qx));
  }

  std::vector<int> p_;
  std::vector<int> offsets_;
};

// ---------------------------------------------------------------------------
// PSD cone in svec coordinates
// ---------------------------------------------------------------------------

class PsdCone final : public Cone {
 public:
  explicit PsdCone(int m) : m_(m) {
    if (m < 1) throw DomainError("psd: side must be positive");
  }

  ConeKind kind() const override { return ConeKind::psd; }
  int dim() const override { return svec_dim(m_); }
  double theta() const override { return m_; }
  std::string spec_string() const override { return "psd:" + std::to_string(m_); }

  Membership contains(const Vector& x, double tol) const override {
    require_dim(x, "contains");
    const Eigen::MatrixXd X = svec_to_mat(x);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X, Eigen::EigenvaluesOnly);
    return member(es.eigenvalues()(0), X.cwiseAbs().maxCoeff(), tol);
  }
  Membership dual_contains(const Vector& s, double tol) const override {
    return contains(s, tol);
  }

  double value(const Vector& x) const override {
    CholFactor F = chol_factor(svec_to_mat(x));
    if (!F.ok) throw DomainError("psd barrier: point not positive definite");
    return -chol_log_det(F);
  }

  Vector gradient(const Vector& x) const override {
    CholFactor F = chol_factor(svec_to_mat(x));
    if (!F.ok) throw DomainError("psd barrier: point not positive definite");
    return -mat_to_svec(chol_inverse(F));
  }

  SymMatrix hessian(const Vector& x) const override {
    CholFactor F = chol_factor(svec_to_mat(x));
    if (!F.ok) throw DomainError("psd barrier: point not positive definite");
    const Eigen::MatrixXd Xinv = chol_inverse(F);
    const int n = dim();
    SymMatrix H(n, n);
    int k = 0;
    for (int j = 0; j < m_; ++j) {
      for (int i = j; i < m_; ++i) {
        Eigen::MatrixXd E = Eigen::MatrixXd::Zero(m_, m_);
        const double val = (i == j) ? 1.0 : 1.0 / kSqrt2;
        E(i, j) = val;
        E(j, i) = val;
        H.col(k++) = mat_to_svec((Xinv * E * Xinv).eval());
      }
    }
    return 0.5 * (H + H.transpose());
  }

  Vector canonical_point() const override {
    return mat_to_svec(Eigen::MatrixXd::Identity(m_, m_));
  }

  bool self_dual() const override { return true; }
  bool symmetric_kind() const override { return true; }
  bool negative_curvature() const override { return true; }
  bool optimal_self_scaled() const override { return true; }

  std::optional<double> gauge_closed_form(const Vector& x, const Vector& h) const override {
    return std::max(0.0, geneig_max(svec_to_mat(h), svec_to_mat(x)).lambda_max);
  }

  std::optional<Vector> shadow_primal_closed_form(const Vector& s) const override {
    CholFactor F = chol_factor(svec_to_mat(s));
    if (!F.ok) throw DomainError("psd shadow: point not positive definite");
    return mat_to_svec(chol_inverse(F));
  }

  std::optional<Vector> nt_scaling_point(const Vector& x, const Vector& s) const override {
    const Eigen::MatrixXd X = svec_to_mat(x), S = svec_to_mat(s);
    const Eigen::MatrixXd Xh = matrix_sqrt(X);
    const Eigen::MatrixXd inner = matrix_inv_sqrt((Xh * S * Xh).eval());
    Eigen::MatrixXd W = Xh * inner * Xh;
    return mat_to_svec((0.5 * (W + W.transpose())).eval());
  }

  int psd_side() const override { return m_; }

 private:
  static Eigen::MatrixXd matrix_sqrt(const Eigen::MatrixXd& M) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (M + M.transpose()));
    return es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
           es.eigenvectors().transpose();
  }
  static Eigen::MatrixXd matrix_inv_sqrt(const Eigen::MatrixXd& M) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (M + M.transpose()));
    if (es.eigenvalues()(0) <= 0.0) throw DomainError("psd nt: matrix not positive definite");
    return es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
           es.eigenvectors().transpose();
  }

  int m_;
};

// ---------------------------------------------------------------------------
// Exponential cone copies: cl{ x : x1 >= x2 exp(x3/x2), x2 > 0 }
// Barrier per copy: -ln(x1) - ln(x2) - ln(x2 ln(x1/x2) - x3), theta = 3.
// ---------------------------------------------------------------------------

class ExpCone final : public Cone {
 public:
  explicit ExpCone(int copies) : k_(copies) {
    if (copies < 1) throw DomainError("exp: need at least one copy");
  }

  ConeKind kind() const override { return ConeKind::exp; }
  int dim() const override { return 3 * k_; }
  double theta() const override { return 3.0 * k_; }
  std::string spec_string() const override { return "exp:" + std::to_string(k_); }

  Membership contains(const Vector& x, double tol) const override {
    require_dim(x, "contains");
    Membership acc{Verdict::interior, std::numeric_limits<double>::infinity()};
    for (int b = 0; b < k_; ++b) {
      acc = combine(acc, copy_contains(x.segment(3 * b, 3), tol));
    }
    return acc;
  }

  Membership dual_contains(const Vector& s, double tol) const override {
    require_dim(s, "dual_contains");
    Membership acc{Verdict::interior, std::numeric_limits<double>::infinity()};
    for (int b = 0; b < k_; ++b) {
      acc = combine(acc, copy_dual_contains(s.segment(3 * b, 3), tol));
    }
    return acc;
  }

  double value(const Vector& x) const override {
    double v = 0.0;
    for (int b = 0; b < k_; ++b) {
      const auto xb = x.segment(3 * b, 3);
      v -= std::log(xb(0)) + std::log(xb(1)) + std::log(core(xb));
    }
    return v;
  }

  Vector gradient(const Vector& x) const override {
    Vector grad(dim());
    for (int b = 0; b < k_; ++b) {
      const auto xb = x.segment(3 * b, 3);
      const double g = core(xb);
      grad(3 * b + 0) = -1.0 / xb(0) - xb(1) / (xb(0) * g);
      grad(3 * b + 1) = -1.0 / xb(1) - (std::log(xb(0) / xb(1)) - 1.0) / g;
      grad(3 * b + 2) = 1.0 / g;
    }
    return grad;
  }

  SymMatrix hessian(const Vector& x) const override {
    SymMatrix H = SymMatrix::Zero(dim(), dim());
    for (int b = 0; b < k_; ++b) {
      const auto xb = x.segment(3 * b, 3);
      const double g = core(xb);
      const double L = std::log(xb(0) / xb(1));
      Eigen::Vector3d dg(xb(1) / xb(0), L - 1.0, -1.0);
      Eigen::Matrix3d Hb = dg * dg.transpose() / (g * g);
      // -(1/g) * Hessian of the core
      Hb(0, 0) += xb(1) / (xb(0) * xb(0) * g);
      Hb(0, 1) += -1.0 / (xb(0) * g);
      Hb(1, 0) += -1.0 / (xb(0) * g);
      Hb(1, 1) += 1.0 / (xb(1) * g);
      Hb(0, 0) += 1.0 / (xb(0) * xb(0));
      Hb(1, 1) += 1.0 / (xb(1) * xb(1));
      H.block(3 * b, 3 * b, 3, 3) = Hb;
    }
    return H;
  }

  Vector canonical_point() const override {
    Vector x(dim());
    for (int b = 0; b < k_; ++b) x.segment(3 * b, 3) = Eigen::Vector3d(2.7, 1.0, 0.5);
    return x;
  }

  bool self_dual() const override { return false; }
  bool symmetric_kind() const override { return false; }
  bool negative_curvature() const override { return false; }  // not claimed
  bool optimal_self_scaled() const override { return false; }

  int exp_copies() const override { return k_; }

 private:
  // x2 ln(x1/x2) - x3; positive exactly on the interior (given x1, x2 > 0)
  static double core(const Eigen::Ref<const Eigen::Vector3d>& x) {
    return x(1) * std::log(x(0) / x(1)) - x(2);
  }

  static Membership copy_contains(const Eigen::Ref<const Eigen::Vector3d>& x, double tol) {
    const double scale = x.cwiseAbs().maxCoeff();
    if (x(0) > 0.0 && x(1) > 0.0) {
      return member(std::min({x(0), x(1), core(x)}), scale, tol);
    }
    // Closure ray x2 = 0, x1 >= 0, x3 <= 0.
    return member(std::min({x(0), -x(2), -std::abs(x(1))}), scale, tol);
  }

  // K* = cl{ z : e z1 >= -z3 exp(z2/z3), z1 > 0, z3 < 0 }
  static Membership copy_dual_contains(const Eigen::Ref<const Eigen::Vector3d>& z, double tol) {
    const double scale = z.cwiseAbs().maxCoeff();
    if (z(0) > 0.0 && z(2) < 0.0) {
      // log form of the defining inequality, rescaled to stay degree one
      const double m = (1.0 + std::log(z(0)) - std::log(-z(2)) - z(1) / z(2)) *
                       std::min(z(0), -z(2));
      return member(std::min({z(0), -z(2), m}), scale, tol);
    }
    // Closure face z3 = 0, z1 >= 0, z2 >= 0 (the constraint vanishes in the
    // limit z3 -> 0- whenever z2 >= 0).
    return member(std::min({z(0), z(1), -std::abs(z(2))}), scale, tol);
  }

  int k_;
};

// ---------------------------------------------------------------------------
// LMI slice: K = { x : x1 A1 + ... + xn An >= 0 } with log-det barrier
// ---------------------------------------------------------------------------

class LmiSliceCone final : public Cone {
 public:
  LmiSliceCone(SymMatrix a0, std::vector<SymMatrix> mats) : a0_(std::move(a0)), a_(std::move(mats)) {
    if (a_.empty()) throw DomainError("lmi_slice: need at least one matrix");
    m_ = static_cast<int>(a_[0].rows());
    for (const auto& A : a_) {
      require_symmetric(A, "lmi_slice");
      if (A.rows() != m_) throw DimensionError("lmi_slice: matrix sizes differ");
    }
    if (a0_.size() == 0) a0_ = SymMatrix::Zero(m_, m_);
    require_symmetric(a0_, "lmi_slice");
    if (a0_.cwiseAbs().maxCoeff() != 0.0) {
      throw DomainError("lmi_slice: A0 must be zero for a conic slice");
    }
    // Gram matrix; positive definiteness certifies linear independence.
    const int n = static_cast<int>(a_.size());
    SymMatrix G(n, n);
    Vector rhs(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j <= i; ++j) {
        G(i, j) = G(j, i) = (a_[i].cwiseProduct(a_[j])).sum();
      }
      rhs(i) = a_[i].trace();
    }
    CholFactor F = chol_factor(G);
    if (!F.ok) throw DomainError("lmi_slice: matrices are linearly dependent");
    trace_vec_ = rhs;
    canonical_ = find_canonical(F, rhs);
  }

  ConeKind kind() const override { return ConeKind::lmi_slice; }
  int dim() const override { return static_cast<int>(a_.size()); }
  double theta() const override { return m_; }

  std::string spec_string() const override {
    if (!toeplitz_name_.empty()) return toeplitz_name_;
    return "lmi_slice:" + std::to_string(m_) + "x" + std::to_string(dim());
  }
  void set_spec_name(std::string name) { toeplitz_name_ = std::move(name); }

  SymMatrix combine_mats(const Vector& x) const {
    SymMatrix M = SymMatrix::Zero(m_, m_);
    for (int i = 0; i < dim(); ++i) M += x(i) * a_[i];
    return M;
  }

  Membership contains(const Vector& x, double tol) const override {
    require_dim(x, "contains");
    const SymMatrix M = combine_mats(x);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    return member(es.eigenvalues()(0), M.cwiseAbs().maxCoeff(), tol);
  }

  Membership dual_contains(const Vector& s, double tol) const override;

  double value(const Vector& x) const override {
    CholFactor F = chol_factor(combine_mats(x));
    if (!F.ok) throw DomainError("lmi barrier: point not in the interior");
    return -chol_log_det(F);
  }

  Vector gradient(const Vector& x) const override {
    CholFactor F = chol_factor(combine_mats(x));
    if (!F.ok) throw DomainError("lmi barrier: point not in the interior");
    const Eigen::MatrixXd W = chol_inverse(F);
    Vector g(dim());
    for (int i = 0; i < dim(); ++i) g(i) = -(W.cwiseProduct(a_[i])).sum();
    return g;
  }

  SymMatrix hessian(const Vector& x) const override {
    CholFactor F = chol_factor(combine_mats(x));
    if (!F.ok) throw DomainError("lmi barrier: point not in the interior");
    const Eigen::MatrixXd W = chol_inverse(F);
    std::vector<Eigen::MatrixXd> B(dim());
    for (int i = 0; i < dim(); ++i) B[i] = W * a_[i];
    SymMatrix H(dim(), dim());
    for (int i = 0; i < dim(); ++i) {
      for (int j = 0; j <= i; ++j) {
        H(i, j) = H(j, i) = (B[i].cwiseProduct(B[j].transpose())).sum();
      }
    }
    return H;
  }

  Vector canonical_point() const override { return canonical_; }

  bool self_dual() const override { return false; }
  bool symmetric_kind() const override { return false; }
  bool negative_curvature() const override { return true; }
  bool optimal_self_scaled() const override { return false; }

  std::optional<double> gauge_closed_form(const Vector& x, const Vector& h) const override {
    return std::max(0.0, geneig_max(combine_mats(h), combine_mats(x)).lambda_max);
  }

  const std::vector<SymMatrix>* lmi_mats() const override { return &a_; }
  const SymMatrix* lmi_a0() const override { return &a0_; }
  const Vector& trace_functional() const { return trace_vec_; }  // A*(I)

 private:
  Vector find_canonical(const CholFactor& gram, const Vector& rhs) const {
    Vector x = chol_solve(gram, rhs);  // least-squares match to the identity
    if (contains_strict(x)) return x;
    for (int i = 0; i < dim(); ++i) {
      for (double sgn : {1.0, -1.0}) {
        Vector e = Vector::Zero(dim());
        e(i) = sgn;
        if (contains_strict(e)) return e;
      }
    }
    throw DomainError("lmi_slice: could not locate an interior point");
  }
  bool contains_strict(const Vector& x) const {
    const SymMatrix M = combine_mats(x);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0) > 1e-8 * rel_scale(M.cwiseAbs().maxCoeff());
  }

  SymMatrix a0_;
  std::vector<SymMatrix> a_;
  Vector trace_vec_;
  Vector canonical_;
  int m_;
  std::string toeplitz_name_;
};

// Decide s in K* by minimizing <s, x> over the section { x in K, <q, x> = 1 }
// with a short-step path-following loop on the log-det barrier.
Membership LmiSliceCone::dual_contains(const Vector& s, double tol) const {
  require_dim(s, "dual_contains");
  const double scale = rel_scale(s.cwiseAbs().maxCoeff());
  const Vector& q = trace_vec_;

  // Null-space parameterization of the section.
  Eigen::FullPivLU<Eigen::MatrixXd> lu(q.transpose());
  const Eigen::MatrixXd N = lu.kernel();  // dim x (dim-1)
  Vector x = canonical_ / q.dot(canonical_);

  if (dim() == 1) {
    // K is the ray through the canonical point.
    const double sign = canonical_(0) > 0.0 ? 1.0 : -1.0;
    return member(sign * s(0), scale, tol);
  }

  const double theta_v = theta();
  double t = 1.0 / scale;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  const double band = tol * scale;
  for (int outer = 0; outer < 120; ++outer) {
    // Newton steps on t<s,x> + F(x) restricted to the section.
    for (int it = 0; it < 60; ++it) {
      Vector g = N.transpose() * (t * s + gradient(x));
      SymMatrix H = N.transpose() * hessian(x) * N;
      CholFactor F = chol_factor(0.5 * (H + H.transpose()));
      if (!F.ok) break;
      Vector dz = -chol_solve(F, g);
      const double lambda = std::sqrt(std::max(0.0, -g.dot(dz)));
      double alpha = lambda > 0.45 ? 0.9 / (1.0 + lambda) : 1.0;
      Vector step = N * dz;
      // keep strictly inside
      const double sig = gauge_sigma(*this, x, -step);
      if (sig > 0.0) alpha = std::min(alpha, 0.99 / sig);
      x += alpha * step;
      if (lambda < 1e-9) break;
    }
    const double val = s.dot(x);
    hi = val;
    lo = val - theta_v / t;
    if (lo > band || hi < -band) break;
    if (theta_v / t < 0.02 * band) break;
    t *= 3.0;
  }
  return member(0.5 * (lo + hi), scale, tol);
}

// ---------------------------------------------------------------------------
// Product cone
// ---------------------------------------------------------------------------

class ProductCone final : public Cone {
 public:
  explicit ProductCone(std::vector<ConePtr> parts) : parts_(std::move(parts)) {
    if (parts_.size() < 2) throw DomainError("product: need at least two parts");
    offsets_.push_back(0);
    for (const auto& p : parts_) offsets_.push_back(offsets_.back() + p->dim());
  }

  ConeKind kind() const override { return ConeKind::product; }
  int dim() const override { return offsets_.back(); }
  double theta() const override {
    double t = 0.0;
    for (const auto& p : parts_) t += p->theta();
    return t;
  }

  std::string spec_string() const override {
    std::string s;
    for (size_t i = 0; i < parts_.size(); ++i) {
      if (i) s += "\xE2\x8A\x95";  // ⊕
      s += parts_[i]->spec_string();
    }
    return s;
  }

  Membership contains(const Vector& x, double tol) const override {
    require_dim(x, "contains");
    Membership acc{Verdict::interior, std::numeric_limits<double>::infinity()};
    for (size_t i = 0; i < parts_.size(); ++i) {
      acc = combine(acc, parts_[i]->contains(seg(x, i), tol));
    }
    return acc;
  }

  Membership dual_contains(const Vector& s, double tol) const override {
    require_dim(s, "dual_contains");
    Membership acc{Verdict::interior, std::numeric_limits<double>::infinity()};
    for (size_t i = 0; i < parts_.size(); ++i) {
      acc = combine(acc, parts_[i]->dual_contains(seg(s, i), tol));
    }
    return acc;
  }

  double value(const Vector& x) const override {
    double v = 0.0;
    for (size_t i = 0; i < parts_.size(); ++i) v += parts_[i]->value(seg(x, i));
    return v;
  }

  Vector gradient(const Vector& x) const override {
    Vector g(dim());
    for (size_t i = 0; i < parts_.size(); ++i) {
      g.segment(offsets_[i], parts_[i]->dim()) = parts_[i]->gradient(seg(x, i));
    }
    return g;
  }

  SymMatrix hessian(const Vector& x) const override {
    SymMatrix H = SymMatrix::Zero(dim(), dim());
    for (size_t i = 0; i < parts_.size(); ++i) {
      const int o = offsets_[i], w = parts_[i]->dim();
      H.block(o, o, w, w) = parts_[i]->hessian(seg(x, i));
    }
    return H;
  }

  Vector canonical_point() const override {
    Vector x(dim());
    for (size_t i = 0; i < parts_.size(); ++i) {
      x.segment(offsets_[i], parts_[i]->dim()) = parts_[i]->canonical_point();
    }
    return x;
  }

  bool self_dual() const override { return all_of([](const Cone& c) { return c.self_dual(); }); }
  bool symmetric_kind() const override {
    return all_of([](const Cone& c) { return c.symmetric_kind(); });
  }
  bool negative_curvature() const override {
    return all_of([](const Cone& c) { return c.negative_curvature(); });
  }
  bool optimal_self_scaled() const override {
    return all_of([](const Cone& c) { return c.optimal_self_scaled(); });
  }

  std::optional<double> gauge_closed_form(const Vector& x, const Vector& h) const override {
    double sigma = 0.0;
    for (size_t i = 0; i < parts_.size(); ++i) {
      sigma = std::max(sigma, gauge_sigma(*parts_[i], seg(x, i), seg(h, i)));
    }
    return sigma;
  }

  std::optional<Vector> shadow_primal_closed_form(const Vector& s) const override {
    Vector xt(dim());
    for (size_t i = 0; i < parts_.size(); ++i) {
      auto part = parts_[i]->shadow_primal_closed_form(seg(s, i));
      if (!part) return std::nullopt;
      xt.segment(offsets_[i], parts_[i]->dim()) = *part;
    }
    return xt;
  }

  std::optional<Vector> nt_scaling_point(const Vector& x, const Vector& s) const override {
    Vector w(dim());
    for (size_t i = 0; i < parts_.size(); ++i) {
      auto part = parts_[i]->nt_scaling_point(seg(x, i), seg(s, i));
      if (!part) return std::nullopt;
      w.segment(offsets_[i], parts_[i]->dim()) = *part;
    }
    return w;
  }

  const std::vector<ConePtr>* parts() const override { return &parts_; }

 private:
  template <class Fn>
  bool all_of(Fn&& fn) const {
    for (const auto& p : parts_) {
      if (!fn(*p)) return false;
    }
    return true;
  }
  Eigen::VectorXd seg(const Vector& x, size_t i) const {
    return x.segment(offsets_[i], parts_[i]->dim());
  }

  std::vector<ConePtr> parts_;
  std::vector<int> offsets_;
};

// ---------------------------------------------------------------------------
// Factories and the spec grammar
// ---------------------------------------------------------------------------

ConePtr make_orthant(int n) { return std::make_shared<WeightedOrthantCone>(Vector::Ones(n)); }

ConePtr make_weighted_orthant(Vector weights) {
  return std::make_shared<WeightedOrthantCone>(std::move(weights));
}

ConePtr make_psd(int m) { return std::make_shared<PsdCone>(m); }

ConePtr make_soc(std::vector<int> widths) { return std::make_shared<SocCone>(std::move(widths)); }

ConePtr make_exp(int copies) { return std::make_shared<ExpCone>(copies); }

ConePtr make_lmi_slice(SymMatrix a0, std::vector<SymMatrix> mats) {
  return std::make_shared<LmiSliceCone>(std::move(a0), std::move(mats));
}

ConePtr make_toeplitz_tridiag(int m) {
  if (m < 3) throw DomainError("toeplitz-tridiag: need m >= 3");
  std::vector<SymMatrix> mats;
  for (int band = 0; band < 3; ++band) {
    SymMatrix A = SymMatrix::Zero(m, m);
    for (int i = 0; i + band < m; ++i) {
      A(i + band, i) = 1.0;
      A(i, i + band) = 1.0;
    }
    mats.push_back(A);
  }
  auto cone = std::make_shared<LmiSliceCone>(SymMatrix(), std::move(mats));
  cone->set_spec_name("toeplitz-tridiag:" + std::to_string(m));
  return cone;
}

namespace {

std::vector<std::string> split(const std::string& s, const std::string& sep) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (true) {
    const size_t next = s.find(sep, pos);
    if (next == std::string::npos) {
      out.push_back(s.substr(pos));
      return out;
    }
    out.push_back(s.substr(pos, next - pos));
    pos = next + sep.size();
  }
}

int parse_int(const std::string& tok) {
  try {
    size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw DomainError("cone spec: bad integer '" + tok + "'");
  }
}

double parse_real(const std::string& tok) {
  try {
    size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw DomainError("cone spec: bad number '" + tok + "'");
  }
}

ConePtr parse_factor(const std::string& factor) {
  const size_t colon = factor.find(':');
  if (colon == std::string::npos) {
    throw DomainError("cone spec: expected kind:params in '" + factor + "'");
  }
  const std::string kind = factor.substr(0, colon);
  const std::string params = factor.substr(colon + 1);
  if (kind == "orthant") return make_orthant(parse_int(params));
  if (kind == "psd") return make_psd(parse_int(params));
  if (kind == "exp") return make_exp(parse_int(params));
  if (kind == "toeplitz-tridiag") return make_toeplitz_tridiag(parse_int(params));
  if (kind == "soc") {
    std::vector<int> widths;
    for (const auto& t : split(params, ",")) widths.push_back(parse_int(t));
    return make_soc(std::move(widths));
  }
  if (kind == "weighted") {
    const auto toks = split(params, ",");
    Vector w(static_cast<int>(toks.size()));
    for (size_t i = 0; i < toks.size(); ++i) w(static_cast<int>(i)) = parse_real(toks[i]);
    return make_weighted_orthant(std::move(w));
  }
  throw DomainError("cone spec: unknown kind '" + kind + "'");
}

}  // namespace

ConePtr parse_cone_spec(const std::string& spec) {
  const auto factors = split(spec, "\xE2\x8A\x95");
  if (factors.size() == 1) return parse_factor(factors[0]);
  std::vector<ConePtr> parts;
  for (const auto& f : factors) parts.push_back(parse_factor(f));
  return make_product(std::move(parts));
}

ConePtr make_product(std::vector<ConePtr> parts) {
  if (parts.size() == 1) return parts[0];
  return std::make_shared<ProductCone>(std::move(parts));
}

// ---------------------------------------------------------------------------
// Minkowski gauge
// ---------------------------------------------------------------------------

double gauge_bisect(const Cone& K, const Vector& x, const Vector& h) {
  const auto inside = [&](double beta) {
    return K.contains(beta * x - h, 1e-13).verdict != Verdict::outside;
  };
  if (inside(0.0)) return 0.0;
  const double margin = std::max(K.contains(x, 1e-13).margin, 1e-300);
  double hi = std::max(1e-8, h.norm() / margin);
  double lo = 0.0;
  int guard = 0;
  while (!inside(hi)) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 200) throw InternalConsistencyError("gauge_bisect: no upper bracket");
  }
  while (hi - lo > 1e-12 * (1.0 + hi)) {
    const double mid = 0.5 * (lo + hi);
    (inside(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double gauge_sigma(const Cone& K, const Vector& x, const Vector& h) {
  if (auto cf = K.gauge_closed_form(x, h)) return *cf;
  return gauge_bisect(K, x, h);
}

GaugeResult gauge(const Cone& K, const Vector& x, const Vector& h) {
  GaugeResult out;
  out.sigma = gauge_sigma(K, x, h);
  if (out.sigma > 0.0) out.boundary_point = out.sigma * x - h;
  return out;
}

double minkowski_norm(const Cone& K, const Vector& x, const Vector& h) {
  return std::max(gauge_sigma(K, x, h), gauge_sigma(K, x, -h));
}

double dual_gauge_sigma(const Cone& K, const Vector& s, const Vector& h) {
  if (K.self_dual()) {
    if (auto cf = K.gauge_closed_form(s, h)) return *cf;
  }
  const auto inside = [&](double beta) {
    return K.dual_contains(beta * s - h, 1e-13).verdict != Verdict::outside;
  };
  if (inside(0.0)) return 0.0;
  const double margin = std::max(K.dual_contains(s, 1e-13).margin, 1e-300);
  double hi = std::max(1e-8, h.norm() / margin);
  double lo = 0.0;
  int guard = 0;
  while (!inside(hi)) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 200) throw InternalConsistencyError("dual_gauge: no upper bracket");
  }
  while (hi - lo > 1e-12 * (1.0 + hi)) {
    const double mid = 0.5 * (lo + hi);
    (inside(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace conik
