// Dense complex tensors and the small linear-algebra kernels used by every
// higher layer: pairwise contraction, economical SVD, Hermitian eigensolvers
// and Hermitian linear solves.
//
// Storage convention (fixed project-wide): a tensor of shape (n0, n1, ..., nk)
// is linearized column-major, i.e. the FIRST index varies fastest:
//     lin(i0, i1, ..., ik) = i0 + n0*(i1 + n1*(i2 + ...)).
// Rank-2 tensors therefore map directly onto Eigen's default column-major
// matrices with (rows, cols) = (n0, n1).

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tn {

using cx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// -------------------------------------------------------------------------
// Errors

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConditioningError : std::runtime_error {
  double smallest_eigenvalue;
  ConditioningError(const std::string& what, double smallest)
      : std::runtime_error(what), smallest_eigenvalue(smallest) {}
};

struct SingularSystemError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// -------------------------------------------------------------------------
// Tensor

class Tensor {
 public:
  Tensor() : shape_{}, data_(1, cx(0, 0)) {}  // rank-0 scalar

  explicit Tensor(std::vector<std::size_t> shape)
      : shape_(std::move(shape)), data_(checked_size(shape_), cx(0, 0)) {}

  Tensor(std::vector<std::size_t> shape, std::vector<cx> data)
      : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != checked_size(shape_))
      throw DimensionError("tensor data length does not match shape product");
  }

  static Tensor scalar(cx v) {
    Tensor t;
    t.data_[0] = v;
    return t;
  }

  static Tensor identity(std::size_t n) {
    Tensor t({n, n});
    for (std::size_t i = 0; i < n; ++i) t.data_[i + n * i] = 1.0;
    return t;
  }

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t extent(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const { return data_.size(); }

  std::vector<cx>& data() { return data_; }
  const std::vector<cx>& data() const { return data_; }

  cx& operator[](std::size_t lin) { return data_[lin]; }
  const cx& operator[](std::size_t lin) const { return data_[lin]; }

  template <typename... I>
  cx& at(I... idx) {
    return data_[linear(idx...)];
  }
  template <typename... I>
  const cx& at(I... idx) const {
    return data_[linear(idx...)];
  }

  template <typename... I>
  std::size_t linear(I... idx) const {
    const std::size_t ind[] = {static_cast<std::size_t>(idx)...};
    if (sizeof...(idx) != shape_.size())
      throw DimensionError("index count does not match tensor rank");
    std::size_t lin = 0, stride = 1;
    for (std::size_t k = 0; k < shape_.size(); ++k) {
      if (ind[k] >= shape_[k]) throw DimensionError("tensor index out of range");
      lin += ind[k] * stride;
      stride *= shape_[k];
    }
    return lin;
  }

  cx to_scalar() const {
    if (size() != 1) throw DimensionError("tensor is not a scalar");
    return data_[0];
  }

  bool finite() const {
    for (const cx& v : data_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }

  double norm() const {
    double s = 0;
    for (const cx& v : data_) s += std::norm(v);
    return std::sqrt(s);
  }

  Tensor& operator*=(cx a) {
    for (cx& v : data_) v *= a;
    return *this;
  }
  Tensor& operator+=(const Tensor& o) {
    if (shape_ != o.shape_) throw DimensionError("tensor shape mismatch in +=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Tensor& operator-=(const Tensor& o) {
    if (shape_ != o.shape_) throw DimensionError("tensor shape mismatch in -=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }

 private:
  static std::size_t checked_size(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t e : shape) {
      if (e == 0) throw DimensionError("tensor extents must be positive");
      n *= e;
    }
    return n;
  }

  std::vector<std::size_t> shape_;
  std::vector<cx> data_;
};

inline Tensor operator*(cx a, Tensor t) {
  t *= a;
  return t;
}
inline Tensor operator*(Tensor t, cx a) {
  t *= a;
  return t;
}
inline Tensor operator+(Tensor a, const Tensor& b) {
  a += b;
  return a;
}
inline Tensor operator-(Tensor a, const Tensor& b) {
  a -= b;
  return a;
}

inline Tensor conj(Tensor t) {
  for (cx& v : t.data()) v = std::conj(v);
  return t;
}

// Reinterpret with a new shape of equal total size; data untouched.
inline Tensor reshape(Tensor t, std::vector<std::size_t> shape) {
  std::size_t n = 1;
  for (std::size_t e : shape) n *= e;
  if (n != t.size()) throw DimensionError("reshape changes total size");
  return Tensor(std::move(shape), std::move(t.data()));
}

// perm[k] = axis of the input that becomes axis k of the output.
inline Tensor permute(const Tensor& t, const std::vector<std::size_t>& perm) {
  const std::size_t r = t.rank();
  if (perm.size() != r) throw DimensionError("permutation length mismatch");
  bool trivial = true;
  for (std::size_t k = 0; k < r; ++k) trivial = trivial && perm[k] == k;
  if (trivial) return t;

  std::vector<std::size_t> new_shape(r);
  for (std::size_t k = 0; k < r; ++k) new_shape[k] = t.shape()[perm[k]];

  std::vector<std::size_t> in_stride(r, 1);
  for (std::size_t k = 1; k < r; ++k)
    in_stride[k] = in_stride[k - 1] * t.shape()[k - 1];

  // stride in the input of output axis k
  std::vector<std::size_t> map_stride(r);
  for (std::size_t k = 0; k < r; ++k) map_stride[k] = in_stride[perm[k]];

  Tensor out(new_shape);
  const std::size_t n = out.size();
  std::vector<std::size_t> idx(r, 0);
  std::size_t src = 0;
  for (std::size_t lin = 0; lin < n; ++lin) {
    out[lin] = t[src];
    for (std::size_t k = 0; k < r; ++k) {
      src += map_stride[k];
      if (++idx[k] < new_shape[k]) break;
      src -= map_stride[k] * new_shape[k];
      idx[k] = 0;
    }
  }
  return out;
}

// Rank-2 views into Eigen.
inline Eigen::Map<const Matrix> as_matrix(const Tensor& t) {
  if (t.rank() != 2) throw DimensionError("as_matrix requires a rank-2 tensor");
  return Eigen::Map<const Matrix>(t.data().data(),
                                  static_cast<Eigen::Index>(t.extent(0)),
                                  static_cast<Eigen::Index>(t.extent(1)));
}

inline Tensor from_matrix(const Matrix& m) {
  Tensor t({static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())});
  Eigen::Map<Matrix>(t.data().data(), m.rows(), m.cols()) = m;
  return t;
}

inline Tensor from_vector(const Vector& v) {
  Tensor t({static_cast<std::size_t>(v.size())});
  Eigen::Map<Vector>(t.data().data(), v.size()) = v;
  return t;
}

inline Vector as_vector(const Tensor& t) {
  return Eigen::Map<const Vector>(t.data().data(), static_cast<Eigen::Index>(t.size()));
}

// -------------------------------------------------------------------------
// contract: sum over the paired axes of x and y.
//
// Semantics follow the usual reference routine for tensor contraction:
// the result carries the uncontracted axes of x first (in their original
// order) followed by the uncontracted axes of y.

inline Tensor contract(const Tensor& x, std::vector<std::size_t> xi,
                       const Tensor& y, std::vector<std::size_t> yi) {
  if (xi.size() != yi.size())
    throw DimensionError("contract: index lists differ in length");
  auto check_unique = [](const std::vector<std::size_t>& v, std::size_t rank) {
    for (std::size_t a = 0; a < v.size(); ++a) {
      if (v[a] >= rank) throw DimensionError("contract: axis out of range");
      for (std::size_t b = a + 1; b < v.size(); ++b)
        if (v[a] == v[b]) throw DimensionError("contract: duplicate axis");
    }
  };
  check_unique(xi, x.rank());
  check_unique(yi, y.rank());
  for (std::size_t a = 0; a < xi.size(); ++a)
    if (x.extent(xi[a]) != y.extent(yi[a]))
      throw DimensionError("contract: extent mismatch at pair (" +
                           std::to_string(xi[a]) + "," + std::to_string(yi[a]) +
                           "): " + std::to_string(x.extent(xi[a])) + " vs " +
                           std::to_string(y.extent(yi[a])));

  std::vector<std::size_t> xk, yk;  // kept axes
  for (std::size_t k = 0; k < x.rank(); ++k)
    if (std::find(xi.begin(), xi.end(), k) == xi.end()) xk.push_back(k);
  for (std::size_t k = 0; k < y.rank(); ++k)
    if (std::find(yi.begin(), yi.end(), k) == yi.end()) yk.push_back(k);

  std::vector<std::size_t> xperm = xk, yperm = yi;
  xperm.insert(xperm.end(), xi.begin(), xi.end());
  yperm.insert(yperm.end(), yk.begin(), yk.end());

  Tensor xp = permute(x, xperm);
  Tensor yp = permute(y, yperm);

  std::size_t nk = 1, nc = 1, nm = 1;
  std::vector<std::size_t> out_shape;
  for (std::size_t k : xk) {
    nk *= x.extent(k);
    out_shape.push_back(x.extent(k));
  }
  for (std::size_t k : xi) nc *= x.extent(k);
  for (std::size_t k : yk) {
    nm *= y.extent(k);
    out_shape.push_back(y.extent(k));
  }

  Eigen::Map<const Matrix> mx(xp.data().data(), nk, nc);
  Eigen::Map<const Matrix> my(yp.data().data(), nc, nm);
  Tensor out(out_shape.empty() ? Tensor() : Tensor(out_shape));
  Eigen::Map<Matrix>(out.data().data(), nk, nm) = mx * my;
  return out;
}

// -------------------------------------------------------------------------
// SVD

struct SvdResult {
  Tensor u;               // (m, k) isometry, columns orthonormal
  std::vector<double> s;  // non-increasing, >= 0
  Tensor v;               // (k, n) with orthonormal rows; input = u*diag(s)*v
};

inline SvdResult svd_econ(const Tensor& m) {
  if (m.rank() != 2) throw DimensionError("svd_econ requires a rank-2 tensor");
  if (!m.finite()) throw NumericError("svd_econ: non-finite entries");
  Eigen::JacobiSVD<Matrix> svd;
  Eigen::BDCSVD<Matrix> bdc;
  const auto mat = as_matrix(m);
  SvdResult r;
  if (std::min(mat.rows(), mat.cols()) <= 16) {
    svd.compute(mat, Eigen::ComputeThinU | Eigen::ComputeThinV);
    r.u = from_matrix(svd.matrixU());
    r.v = from_matrix(svd.matrixV().adjoint());
    const auto& sv = svd.singularValues();
    r.s.assign(sv.data(), sv.data() + sv.size());
  } else {
    bdc.compute(mat, Eigen::ComputeThinU | Eigen::ComputeThinV);
    r.u = from_matrix(bdc.matrixU());
    r.v = from_matrix(bdc.matrixV().adjoint());
    const auto& sv = bdc.singularValues();
    r.s.assign(sv.data(), sv.data() + sv.size());
  }
  return r;
}

// Singular values below this fraction of s[0] count as exact zeros for rank
// decisions.
inline constexpr double kSingularZeroTol = 1e-14;

inline std::size_t svd_rank(const std::vector<double>& s) {
  if (s.empty()) return 0;
  const double tol = kSingularZeroTol * s.front();
  std::size_t r = 0;
  while (r < s.size() && s[r] > tol) ++r;
  return r;
}

// -------------------------------------------------------------------------
// Hermitian eigensolvers
//
// All arithmetic is complex double precision. Below `dense_threshold` a full
// dense solve is used; above it a Lanczos iteration with full
// reorthogonalization finds the algebraically smallest eigenpair.

struct EigOptions {
  std::size_t dense_threshold = 512;
  double cond_limit = 1e12;        // generalized problem: reject worse metrics
  std::size_t lanczos_max_iter = 400;
  double lanczos_tol = 1e-12;
  std::uint64_t lanczos_seed = 12345;
};

struct EigResult {
  double value;
  Tensor vector;
};

namespace detail {

inline void require_hermitian(const Matrix& h, const char* who) {
  const double scale = std::max(1.0, h.norm());
  if ((h - h.adjoint()).norm() > 1e-10 * scale)
    throw NumericError(std::string(who) + ": matrix is not Hermitian");
}

inline EigResult lanczos_smallest(const Matrix& h, const EigOptions& opts) {
  const Eigen::Index n = h.rows();
  std::mt19937_64 rng(opts.lanczos_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector q(n);
  for (Eigen::Index i = 0; i < n; ++i) q(i) = cx(gauss(rng), gauss(rng));
  q.normalize();

  std::vector<Vector> basis;
  std::vector<double> alpha, beta;
  double eval = 0;
  Eigen::VectorXd ritz_in_krylov;

  for (std::size_t it = 0; it < opts.lanczos_max_iter && static_cast<Eigen::Index>(it) < n; ++it) {
    basis.push_back(q);
    Vector w = h * q;
    double a = std::real(q.dot(w));
    alpha.push_back(a);
    w -= a * q;
    if (!beta.empty()) w -= beta.back() * basis[basis.size() - 2];
    // full reorthogonalization, twice for stability
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& b : basis) w -= b.dot(w) * b;
    const double bnorm = w.norm();

    const std::size_t m = alpha.size();
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t i = 0; i < m; ++i) {
      tri(i, i) = alpha[i];
      if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    eval = es.eigenvalues()(0);
    ritz_in_krylov = es.eigenvectors().col(0);

    // Ritz residual |h x - eval x| = bnorm * |last component|.
    const double residual = bnorm * std::abs(ritz_in_krylov(static_cast<Eigen::Index>(m) - 1));
    if (residual <= opts.lanczos_tol * std::max(1.0, std::abs(eval)) ||
        bnorm < opts.lanczos_tol) {
      break;
    }
    beta.push_back(bnorm);
    q = w / bnorm;
  }

  Vector x = Vector::Zero(n);
  for (std::size_t i = 0; i < basis.size(); ++i) x += ritz_in_krylov(static_cast<Eigen::Index>(i)) * basis[i];
  x.normalize();
  return {eval, from_vector(x)};
}

}  // namespace detail

// Smallest eigenpair of h (optionally generalized, h x = lambda n x; optionally
// restricted to the column space of an isometry `projector`, solved as P'HP).
// The eigenvector is normalized so x'Nx = 1 when a metric is given, else
// |x| = 1.
inline EigResult eig_smallest(const Tensor& h, const Tensor* metric = nullptr,
                              const Tensor* projector = nullptr,
                              const EigOptions& opts = {}) {
  Matrix hm = as_matrix(h);
  if (hm.rows() != hm.cols()) throw DimensionError("eig_smallest: matrix not square");
  if (!h.finite()) throw NumericError("eig_smallest: non-finite entries");
  detail::require_hermitian(hm, "eig_smallest");
  hm = 0.5 * (hm + hm.adjoint()).eval();

  Matrix nm;
  if (metric) {
    nm = as_matrix(*metric);
    detail::require_hermitian(nm, "eig_smallest(metric)");
    nm = 0.5 * (nm + nm.adjoint()).eval();
  }

  Matrix p;
  if (projector) {
    p = as_matrix(*projector);
    if (p.rows() != hm.rows())
      throw DimensionError("eig_smallest: projector row count mismatch");
    hm = (p.adjoint() * hm * p).eval();
    if (metric) nm = (p.adjoint() * nm * p).eval();
  }

  const Eigen::Index dim = hm.rows();
  EigResult res;

  if (metric) {
    Eigen::SelfAdjointEigenSolver<Matrix> ns(nm);
    const double nmin = ns.eigenvalues()(0);
    const double nmax = ns.eigenvalues()(dim - 1);
    if (nmin <= 0 || nmax / nmin > opts.cond_limit)
      throw ConditioningError("eig_smallest: metric indefinite or ill-conditioned", nmin);
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(hm, nm);
    res.value = ges.eigenvalues()(0);
    Vector x = ges.eigenvectors().col(0);
    const double xn = std::sqrt(std::abs(std::real(x.dot(nm * x))));
    x /= xn;
    res.vector = from_vector(x);
  } else if (static_cast<std::size_t>(dim) < opts.dense_threshold) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hm);
    res.value = es.eigenvalues()(0);
    res.vector = from_vector(es.eigenvectors().col(0));
  } else {
    res = detail::lanczos_smallest(hm, opts);
  }

  if (projector) {
    Vector x = p * as_vector(res.vector);
    res.vector = from_vector(x);
  }
  return res;
}

// -------------------------------------------------------------------------
// Hermitian PSD solve with ridge fallback.
//
// Compression systems get singular as the fit converges, so when the plain
// factorization fails we retry with a ridge eps*tr(a)/dim added on the
// diagonal.

inline Tensor solve_hermitian(const Tensor& a, const Tensor& b,
                              double ridge_eps = 1e-12) {
  Matrix am = as_matrix(a);
  if (am.rows() != am.cols()) throw DimensionError("solve_hermitian: matrix not square");
  if (b.rank() != 1 || static_cast<Eigen::Index>(b.extent(0)) != am.rows())
    throw DimensionError("solve_hermitian: rhs size mismatch");
  detail::require_hermitian(am, "solve_hermitian");
  am = 0.5 * (am + am.adjoint()).eval();
  Vector bv = as_vector(b);

  const double bnorm = bv.norm();
  // The residual is always measured against the original matrix, also when a
  // ridge was used to make the factorization go through.
  auto try_solve = [&](const Matrix& m, Vector& out) {
    Eigen::LDLT<Matrix> ldlt(m);
    if (ldlt.info() != Eigen::Success) return false;
    out = ldlt.solve(bv);
    const double r = (am * out - bv).norm();
    return std::isfinite(r) && r <= 1e-8 * std::max(bnorm, 1e-300);
  };

  Vector x;
  if (try_solve(am, x)) return from_vector(x);

  const double ridge = ridge_eps * std::abs(am.trace().real()) /
                       static_cast<double>(am.rows());
  Matrix reg = am + ridge * Matrix::Identity(am.rows(), am.cols());
  if (try_solve(reg, x)) return from_vector(x);

  // Last resort before declaring the system singular.
  x = am.completeOrthogonalDecomposition().solve(bv);
  if ((am * x - bv).norm() <= 1e-8 * std::max(bnorm, 1e-300)) return from_vector(x);
  throw SingularSystemError("solve_hermitian: system is effectively singular");
}

// Hermitian matrix function helpers used by the gauge/conditioning code.

inline Matrix hermitian_pow(const Matrix& h, double expo, double rel_floor = 1e-14) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
  Eigen::VectorXd ev = es.eigenvalues();
  const double emax = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  Eigen::VectorXd f(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    double v = std::max(ev(i), 0.0);
    if (v < rel_floor * emax) v = 0.0;
    f(i) = (v == 0.0 && expo < 0) ? 0.0 : std::pow(v, expo);
  }
  return es.eigenvectors() * f.asDiagonal() * es.eigenvectors().adjoint();
}

inline Matrix hermitian_sqrt(const Matrix& h) { return hermitian_pow(h, 0.5); }
inline Matrix hermitian_invsqrt(const Matrix& h) { return hermitian_pow(h, -0.5); }

// Clip negative eigenvalues to zero.
inline Matrix hermitian_psd_part(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

// -------------------------------------------------------------------------
// Deterministic RNG fan-out: one master seed splits into independent
// sub-streams keyed by (master, label) via splitmix64.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(splitmix64(master) ^ splitmix64(stream * 0x9e3779b97f4a7c15ULL + 1));
}

}  // namespace tn
