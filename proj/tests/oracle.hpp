// Independent reference implementations used as test oracles. Everything in
// here deliberately avoids the library's contraction/decomposition paths:
// contractions are explicit nested loops, operators are built with Kronecker
// products, eigenproblems go straight to Eigen's dense solvers.

#pragma once

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "tn/tensor.hpp"

namespace oracle {

using tn::cx;
using tn::Matrix;
using tn::Tensor;
using tn::Vector;

// --- brute-force contraction ---------------------------------------------

inline std::vector<std::size_t> strides_of(const std::vector<std::size_t>& shape) {
  std::vector<std::size_t> s(shape.size(), 1);
  for (std::size_t k = 1; k < shape.size(); ++k) s[k] = s[k - 1] * shape[k - 1];
  return s;
}

// Same contract semantics as tn::contract, evaluated by explicit summation.
inline Tensor naive_contract(const Tensor& x, const std::vector<std::size_t>& xi,
                             const Tensor& y, const std::vector<std::size_t>& yi) {
  std::vector<std::size_t> xk, yk;
  for (std::size_t k = 0; k < x.rank(); ++k)
    if (std::find(xi.begin(), xi.end(), k) == xi.end()) xk.push_back(k);
  for (std::size_t k = 0; k < y.rank(); ++k)
    if (std::find(yi.begin(), yi.end(), k) == yi.end()) yk.push_back(k);

  std::vector<std::size_t> out_shape;
  for (auto k : xk) out_shape.push_back(x.extent(k));
  for (auto k : yk) out_shape.push_back(y.extent(k));
  std::vector<std::size_t> csh;
  for (auto k : xi) csh.push_back(x.extent(k));

  const auto xs = strides_of(x.shape());
  const auto ys = strides_of(y.shape());

  Tensor out = out_shape.empty() ? Tensor() : Tensor(out_shape);
  const std::size_t nout = out.size();
  std::size_t ncon = 1;
  for (auto e : csh) ncon *= e;

  std::vector<std::size_t> oidx(out_shape.size(), 0);
  for (std::size_t lo = 0; lo < nout; ++lo) {
    // decompose lo into the output multi-index (column-major)
    {
      std::size_t rem = lo;
      for (std::size_t k = 0; k < out_shape.size(); ++k) {
        oidx[k] = rem % out_shape[k];
        rem /= out_shape[k];
      }
    }
    cx acc = 0;
    std::vector<std::size_t> cidx(csh.size(), 0);
    for (std::size_t lc = 0; lc < ncon; ++lc) {
      {
        std::size_t rem = lc;
        for (std::size_t k = 0; k < csh.size(); ++k) {
          cidx[k] = rem % csh[k];
          rem /= csh[k];
        }
      }
      std::size_t px = 0, py = 0;
      for (std::size_t k = 0; k < xk.size(); ++k) px += oidx[k] * xs[xk[k]];
      for (std::size_t k = 0; k < yk.size(); ++k) py += oidx[xk.size() + k] * ys[yk[k]];
      for (std::size_t k = 0; k < csh.size(); ++k) {
        px += cidx[k] * xs[xi[k]];
        py += cidx[k] * ys[yi[k]];
      }
      acc += x[px] * y[py];
    }
    out[lo] = acc;
  }
  return out;
}

// --- random data ----------------------------------------------------------

inline Tensor random_tensor(std::vector<std::size_t> shape, std::uint64_t seed,
                            bool complex_entries = true) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Tensor t(std::move(shape));
  for (auto& v : t.data()) v = complex_entries ? cx(g(rng), g(rng)) : cx(g(rng), 0.0);
  return t;
}

inline Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(r, c);
  for (std::size_t j = 0; j < c; ++j)
    for (std::size_t i = 0; i < r; ++i) m(i, j) = cx(g(rng), g(rng));
  return m;
}

inline Matrix random_hermitian(std::size_t n, std::uint64_t seed) {
  Matrix m = random_matrix(n, n, seed);
  return 0.5 * (m + m.adjoint());
}

inline Matrix random_spd(std::size_t n, std::uint64_t seed) {
  Matrix m = random_matrix(n, n, seed);
  return m * m.adjoint() + Matrix::Identity(n, n);
}

// --- spin operators and Kronecker builders --------------------------------

inline Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline Matrix pauli_y() {
  Matrix m(2, 2);
  m << cx(0, 0), cx(0, -1), cx(0, 1), cx(0, 0);
  return m;
}
inline Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Matrix spin1_z() {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 1;
  m(2, 2) = -1;
  return m;
}
inline Matrix spin1_x() {
  Matrix m = Matrix::Zero(3, 3);
  const double r = 1.0 / std::sqrt(2.0);
  m(0, 1) = m(1, 0) = m(1, 2) = m(2, 1) = r;
  return m;
}
inline Matrix spin1_y() {
  Matrix m = Matrix::Zero(3, 3);
  const cx r(0, 1.0 / std::sqrt(2.0));
  m(0, 1) = -r;
  m(1, 0) = r;
  m(1, 2) = -r;
  m(2, 1) = r;
  return m;
}

inline Matrix identity(std::size_t n) { return Matrix::Identity(n, n); }

// Kronecker product over the whole chain with the given per-site factors and
// identities elsewhere. Site 0 is the MOST significant factor.
inline Matrix embed_factors(const std::vector<std::pair<std::size_t, Matrix>>& factors,
                            std::size_t n, std::size_t d) {
  Matrix out = Matrix::Identity(1, 1);
  for (std::size_t j = 0; j < n; ++j) {
    const Matrix* f = nullptr;
    for (const auto& [site, m] : factors)
      if (site == j) f = &m;
    out = kron(out, f ? *f : identity(d));
  }
  return out;
}

// Dense operator on sites (k, k+1) embedded in the chain.
inline Matrix embed_two_site(const Matrix& op, std::size_t k, std::size_t n,
                             std::size_t d) {
  std::size_t dl = 1, dr = 1;
  for (std::size_t j = 0; j < k; ++j) dl *= d;
  for (std::size_t j = k + 2; j < n; ++j) dr *= d;
  return kron(kron(identity(dl), op), identity(dr));
}

// --- dense MPS amplitudes by explicit matrix products ----------------------
// Site 0 is the most significant digit of the returned vector's index.

template <typename MpsLike>
inline Vector dense_mps(const MpsLike& psi) {
  const std::size_t n = psi.n();
  std::size_t dim = 1;
  for (std::size_t k = 0; k < n; ++k) dim *= psi.phys_dim(k);
  Vector out(dim);
  std::vector<std::size_t> cfg(n, 0);
  for (std::size_t lin = 0; lin < dim; ++lin) {
    // decode with site 0 most significant
    std::size_t rem = lin;
    for (std::size_t k = n; k-- > 0;) {
      cfg[k] = rem % psi.phys_dim(k);
      rem /= psi.phys_dim(k);
    }
    Matrix m = Matrix::Identity(psi.site(0).extent(0), psi.site(0).extent(0));
    for (std::size_t k = 0; k < n; ++k) {
      const auto& a = psi.site(k);
      Matrix ak(a.extent(0), a.extent(1));
      for (std::size_t i = 0; i < a.extent(0); ++i)
        for (std::size_t j = 0; j < a.extent(1); ++j) ak(i, j) = a.at(i, j, cfg[k]);
      m = m * ak;
    }
    out(lin) = m.trace();  // 1x1 for open boundaries
  }
  return out;
}

}  // namespace oracle
