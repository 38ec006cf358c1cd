// Matrix product operators and Hamiltonian specifications.
//
// MPO site tensors have shape (D_left, D_right, d_out, d_in); applying an MPO
// contracts d_in against the state's physical index. Hamiltonians are
// ingested as term lists and compiled to MPOs via the standard
// first-order construction whose bond dimension is 2 + (coupling channels
// crossing the bond).

#pragma once

#include "tn/mps.hpp"

namespace tn {

// -------------------------------------------------------------------------
// Elementary operators

namespace ops {

inline Tensor identity(std::size_t d) { return Tensor::identity(d); }

inline Tensor pauli_x() {
  Tensor t({2, 2});
  t.at(0, 1) = 1;
  t.at(1, 0) = 1;
  return t;
}
inline Tensor pauli_y() {
  Tensor t({2, 2});
  t.at(0, 1) = cx(0, -1);
  t.at(1, 0) = cx(0, 1);
  return t;
}
inline Tensor pauli_z() {
  Tensor t({2, 2});
  t.at(0, 0) = 1;
  t.at(1, 1) = -1;
  return t;
}
inline Tensor sigma_plus() {
  Tensor t({2, 2});
  t.at(0, 1) = 1;
  return t;
}

// Spin-1 operators in the basis (m=+1, 0, -1).
inline Tensor spin1_x() {
  Tensor t({3, 3});
  const double r = 1.0 / std::sqrt(2.0);
  t.at(0, 1) = t.at(1, 0) = t.at(1, 2) = t.at(2, 1) = r;
  return t;
}
inline Tensor spin1_y() {
  Tensor t({3, 3});
  const cx r(0, 1.0 / std::sqrt(2.0));
  t.at(0, 1) = -r;
  t.at(1, 0) = r;
  t.at(1, 2) = -r;
  t.at(2, 1) = r;
  return t;
}
inline Tensor spin1_z() {
  Tensor t({3, 3});
  t.at(0, 0) = 1;
  t.at(2, 2) = -1;
  return t;
}

}  // namespace ops

// Rank-4 two-site operator (out_k, out_k1, in_k, in_k1) from a product A x B.
inline Tensor two_site_op(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2) throw DimensionError("two_site_op: rank-2 factors required");
  // a(s,s') b(t,t') -> (s,s',t,t') -> permute (s,t,s',t')
  return permute(contract(a, {}, b, {}), {0, 2, 1, 3});
}

// Rank-4 two-site operator from a dense (d^2 x d^2) matrix whose pair index
// is site-major: row = s*d + t.
inline Tensor two_site_from_matrix(const Matrix& m, std::size_t d) {
  if (static_cast<std::size_t>(m.rows()) != d * d || static_cast<std::size_t>(m.cols()) != d * d)
    throw DimensionError("two_site_from_matrix: size mismatch");
  Tensor t({d, d, d, d});
  for (std::size_t s = 0; s < d; ++s)
    for (std::size_t u = 0; u < d; ++u)
      for (std::size_t s2 = 0; s2 < d; ++s2)
        for (std::size_t u2 = 0; u2 < d; ++u2)
          t.at(s, u, s2, u2) = m(s * d + u, s2 * d + u2);
  return t;
}

inline Matrix two_site_to_matrix(const Tensor& t) {
  const std::size_t d = t.extent(0);
  Matrix m(d * d, d * d);
  for (std::size_t s = 0; s < d; ++s)
    for (std::size_t u = 0; u < d; ++u)
      for (std::size_t s2 = 0; s2 < d; ++s2)
        for (std::size_t u2 = 0; u2 < d; ++u2)
          m(s * d + u, s2 * d + u2) = t.at(s, u, s2, u2);
  return m;
}

// -------------------------------------------------------------------------
// Hamiltonian term lists

struct Term {
  cx coefficient = 1.0;
  std::size_t site = 0;  // first site; a two-site term acts on (site, site+1)
                         // or the wrap pair (n-1, 0) on a ring
  Tensor op;             // rank-2 single-site or rank-4 two-site

  bool two_site() const { return op.rank() == 4; }
};

struct HamiltonianSpec {
  std::size_t n = 0;
  std::size_t d = 2;
  Boundary boundary = Boundary::open;
  std::vector<Term> terms;

  void validate() const {
    for (const auto& t : terms) {
      if (t.op.rank() != 2 && t.op.rank() != 4)
        throw DimensionError("hamiltonian term must be rank 2 or 4");
      for (std::size_t k = 0; k < t.op.rank(); ++k)
        if (t.op.extent(k) != d) throw DimensionError("hamiltonian term dimension mismatch");
      if (t.site >= n) throw DimensionError("hamiltonian term site out of range");
      if (t.two_site() && boundary == Boundary::open && t.site + 1 >= n)
        throw DimensionError("two-site term exceeds open chain");
    }
  }
};

// --- named presets ---------------------------------------------------------

// Heisenberg chain in Pauli convention: sum_k J (XX + YY + ZZ) + h sum_k Z.
inline HamiltonianSpec heisenberg_chain(std::size_t n, double j = 1.0, double h = 0.0,
                                        Boundary boundary = Boundary::open) {
  HamiltonianSpec spec{n, 2, boundary, {}};
  Tensor bond = two_site_op(ops::pauli_x(), ops::pauli_x()) +
                two_site_op(ops::pauli_y(), ops::pauli_y()) +
                two_site_op(ops::pauli_z(), ops::pauli_z());
  const std::size_t nb = boundary == Boundary::open ? n - 1 : n;
  for (std::size_t k = 0; k < nb; ++k) spec.terms.push_back({cx(j, 0), k, bond});
  if (h != 0)
    for (std::size_t k = 0; k < n; ++k) spec.terms.push_back({cx(h, 0), k, ops::pauli_z()});
  return spec;
}

inline HamiltonianSpec xxz_chain(std::size_t n, double delta,
                                 Boundary boundary = Boundary::open) {
  HamiltonianSpec spec{n, 2, boundary, {}};
  Tensor bond = two_site_op(ops::pauli_x(), ops::pauli_x()) +
                two_site_op(ops::pauli_y(), ops::pauli_y()) +
                cx(delta, 0) * two_site_op(ops::pauli_z(), ops::pauli_z());
  const std::size_t nb = boundary == Boundary::open ? n - 1 : n;
  for (std::size_t k = 0; k < nb; ++k) spec.terms.push_back({1.0, k, bond});
  return spec;
}

// Transverse-field Ising, sum_k ZZ + h sum_k X (no overall sign).
inline HamiltonianSpec ising_transverse_chain(std::size_t n, double h,
                                              Boundary boundary = Boundary::open) {
  HamiltonianSpec spec{n, 2, boundary, {}};
  Tensor bond = two_site_op(ops::pauli_z(), ops::pauli_z());
  const std::size_t nb = boundary == Boundary::open ? n - 1 : n;
  for (std::size_t k = 0; k < nb; ++k) spec.terms.push_back({1.0, k, bond});
  for (std::size_t k = 0; k < n; ++k) spec.terms.push_back({cx(h, 0), k, ops::pauli_x()});
  return spec;
}

// XX chain with a per-site z field: sum XX + YY + sum_k b_k Z.
inline HamiltonianSpec xx_field_chain(std::size_t n, const std::vector<double>& field,
                                      Boundary boundary = Boundary::open) {
  if (!field.empty() && field.size() != n)
    throw DimensionError("xx_field_chain: field length must be 0 or n");
  HamiltonianSpec spec{n, 2, boundary, {}};
  Tensor bond = two_site_op(ops::pauli_x(), ops::pauli_x()) +
                two_site_op(ops::pauli_y(), ops::pauli_y());
  const std::size_t nb = boundary == Boundary::open ? n - 1 : n;
  for (std::size_t k = 0; k < nb; ++k) spec.terms.push_back({1.0, k, bond});
  for (std::size_t k = 0; k < field.size(); ++k)
    if (field[k] != 0) spec.terms.push_back({cx(field[k], 0), k, ops::pauli_z()});
  return spec;
}

// Spin-1 AKLT chain: sum_k [ S.S + (S.S)^2/3 + 2/3 ], a sum of operators
// that each annihilate the AKLT state, so the exact ground energy is 0.
inline HamiltonianSpec aklt_chain(std::size_t n, Boundary boundary = Boundary::open) {
  HamiltonianSpec spec{n, 3, boundary, {}};
  Matrix sx = as_matrix(ops::spin1_x());
  Matrix sy = as_matrix(ops::spin1_y());
  Matrix sz = as_matrix(ops::spin1_z());
  auto kron = [](const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j)
        out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
  };
  Matrix sdots = kron(sx, sx) + kron(sy, sy) + kron(sz, sz);
  Matrix proj = sdots + sdots * sdots / 3.0 + (2.0 / 3.0) * Matrix::Identity(9, 9);
  Tensor bond = two_site_from_matrix(proj, 3);
  const std::size_t nb = boundary == Boundary::open ? n - 1 : n;
  for (std::size_t k = 0; k < nb; ++k) spec.terms.push_back({1.0, k, bond});
  return spec;
}

// -------------------------------------------------------------------------
// MatrixProductOperator

class MatrixProductOperator {
 public:
  MatrixProductOperator() = default;
  MatrixProductOperator(std::vector<Tensor> sites, Boundary boundary)
      : sites_(std::move(sites)), boundary_(boundary) {
    validate();
  }

  std::size_t n() const { return sites_.size(); }
  std::size_t dim_out(std::size_t k) const { return sites_[k].extent(2); }
  std::size_t dim_in(std::size_t k) const { return sites_[k].extent(3); }
  Boundary boundary() const { return boundary_; }
  const Tensor& site(std::size_t k) const { return sites_[k]; }
  Tensor& site(std::size_t k) { return sites_[k]; }
  const std::vector<Tensor>& sites() const { return sites_; }

  void validate() const {
    if (sites_.size() < 2) throw DimensionError("mpo: need at least 2 sites");
    for (std::size_t k = 0; k < sites_.size(); ++k) {
      if (sites_[k].rank() != 4) throw DimensionError("mpo: site tensors must be rank 4");
      if (k + 1 < sites_.size() && sites_[k].extent(1) != sites_[k + 1].extent(0))
        throw DimensionError("mpo: bond extents not chain-consistent");
    }
    if (boundary_ == Boundary::open) {
      if (sites_.front().extent(0) != 1 || sites_.back().extent(1) != 1)
        throw DimensionError("mpo: open boundary requires extent-1 edge bonds");
    } else if (sites_.back().extent(1) != sites_.front().extent(0)) {
      throw DimensionError("mpo: periodic boundary requires matching wrap bond");
    }
  }

 private:
  std::vector<Tensor> sites_;
  Boundary boundary_ = Boundary::open;
};

inline MatrixProductOperator mpo_identity(std::size_t n, std::size_t d) {
  Tensor w({1, 1, d, d});
  for (std::size_t i = 0; i < d; ++i) w.at(0, 0, i, i) = 1;
  return MatrixProductOperator(std::vector<Tensor>(n, w), Boundary::open);
}

// -------------------------------------------------------------------------
// Hamiltonian -> MPO compilation

namespace detail {

struct BondChannels {
  std::vector<Tensor> left;   // operators at site k
  std::vector<Tensor> right;  // operators at site k+1
};

// Operator Schmidt split of a rank-4 bond term, dropping channels with
// singular value below 1e-12.
inline BondChannels split_bond_term(const Tensor& h, std::size_t d) {
  Tensor m = reshape(permute(h, {0, 2, 1, 3}), {d * d, d * d});
  SvdResult svd = svd_econ(m);
  BondChannels out;
  for (std::size_t g = 0; g < svd.s.size(); ++g) {
    if (svd.s[g] < 1e-12) continue;
    const double w = std::sqrt(svd.s[g]);
    Tensor l({d, d}), r({d, d});
    for (std::size_t s = 0; s < d; ++s)
      for (std::size_t s2 = 0; s2 < d; ++s2) {
        l.at(s, s2) = svd.u.at(s + d * s2, g) * w;
        r.at(s, s2) = svd.v.at(g, s + d * s2) * w;
      }
    out.left.push_back(std::move(l));
    out.right.push_back(std::move(r));
  }
  return out;
}

}  // namespace detail

// First-order MPO for a nearest-neighbour Hamiltonian; bond dimension is
// 2 + (coupling channels crossing the bond). Multiple single-site terms on
// one site are summed into a single operator there.
inline MatrixProductOperator nn_hamiltonian_mpo(const HamiltonianSpec& spec) {
  spec.validate();
  if (spec.boundary != Boundary::open)
    throw UnsupportedError(
        "nn_hamiltonian_mpo: ring Hamiltonians are handled as term lists, not MPOs");
  const std::size_t n = spec.n, d = spec.d;

  // gather per-bond two-site sums and per-site single sums
  std::vector<Tensor> bond_sum(n - 1, Tensor({d, d, d, d}));
  std::vector<bool> bond_used(n - 1, false);
  std::vector<Tensor> site_sum(n, Tensor({d, d}));
  std::vector<bool> site_used(n, false);
  for (const auto& t : spec.terms) {
    if (t.two_site()) {
      bond_sum[t.site] += t.coefficient * t.op;
      bond_used[t.site] = true;
    } else {
      site_sum[t.site] += t.coefficient * t.op;
      site_used[t.site] = true;
    }
  }

  std::vector<detail::BondChannels> channels(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k)
    if (bond_used[k]) channels[k] = detail::split_bond_term(bond_sum[k], d);

  std::vector<Tensor> w(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t cl = k == 0 ? 0 : channels[k - 1].left.size();
    const std::size_t cr = k + 1 == n ? 0 : channels[k].left.size();
    const std::size_t dl = k == 0 ? 1 : 2 + cl;
    const std::size_t dr = k + 1 == n ? 1 : 2 + cr;
    Tensor wk({dl, dr, d, d});
    auto put = [&](std::size_t a, std::size_t b, const Tensor& op) {
      for (std::size_t s = 0; s < d; ++s)
        for (std::size_t t = 0; t < d; ++t) wk.at(a, b, s, t) += op.at(s, t);
    };
    const std::size_t row_ident = 0;
    const std::size_t row_done = dl - 1;   // meaningful when k > 0
    const std::size_t col_ident = 0;       // meaningful when k + 1 < n
    const std::size_t col_done = dr - 1;
    const Tensor id = ops::identity(d);

    if (k == 0) {
      if (k + 1 < n) {
        put(0, col_ident, id);
        for (std::size_t g = 0; g < cr; ++g) put(0, 1 + g, channels[k].left[g]);
      }
      if (site_used[k]) put(0, col_done, site_sum[k]);
    } else if (k + 1 == n) {
      if (site_used[k]) put(row_ident, 0, site_sum[k]);
      for (std::size_t g = 0; g < cl; ++g) put(1 + g, 0, channels[k - 1].right[g]);
      put(row_done, 0, id);
    } else {
      put(row_ident, col_ident, id);
      for (std::size_t g = 0; g < cr; ++g) put(row_ident, 1 + g, channels[k].left[g]);
      if (site_used[k]) put(row_ident, col_done, site_sum[k]);
      for (std::size_t g = 0; g < cl; ++g) put(1 + g, col_done, channels[k - 1].right[g]);
      put(row_done, col_done, id);
    }
    w[k] = std::move(wk);
  }
  return MatrixProductOperator(std::move(w), Boundary::open);
}

// -------------------------------------------------------------------------
// MPO application and dense realization

// Exact product: the result's bond dimension is D_op * D_psi; no truncation.
inline MatrixProductState apply_mpo(const MatrixProductOperator& op,
                                    const MatrixProductState& psi) {
  if (op.n() != psi.n()) throw DimensionError("apply_mpo: site count mismatch");
  std::vector<Tensor> sites(psi.n());
  for (std::size_t k = 0; k < psi.n(); ++k) {
    if (op.dim_in(k) != psi.phys_dim(k))
      throw DimensionError("apply_mpo: physical dimension mismatch");
    // W(a,b,s,t) A(al,ar,t) -> (a,b,s,al,ar) -> ((a,al),(b,ar),s)
    Tensor t = contract(op.site(k), {3}, psi.site(k), {2});
    t = permute(t, {0, 3, 1, 4, 2});
    sites[k] = reshape(t, {op.site(k).extent(0) * psi.bond_left(k),
                           op.site(k).extent(1) * psi.bond_right(k), op.dim_out(k)});
  }
  Boundary b = (op.boundary() == Boundary::periodic || psi.boundary() == Boundary::periodic)
                   ? psi.boundary()
                   : Boundary::open;
  return MatrixProductState(std::move(sites), b, Canonical::None());
}

// Full matrix (site 0 most significant); oracle support for small chains.
inline Tensor to_dense(const MatrixProductOperator& op) {
  std::size_t dim = 1;
  for (std::size_t k = 0; k < op.n(); ++k) {
    dim *= op.dim_out(k);
    if (dim > (1u << 14)) throw CapacityError("to_dense: operator dimension exceeds 2^14");
  }
  const std::size_t n = op.n();
  // T carries (a0, b_k, s0..sk, t0..tk)
  Tensor t = permute(op.site(0), {0, 1, 2, 3});
  for (std::size_t k = 1; k < n; ++k) {
    Tensor c = contract(t, {1}, op.site(k), {0});
    // c: (a0, s0..s_{k-1}, t0..t_{k-1}, b, s_k, t_k)
    const std::size_t r = c.rank();
    std::vector<std::size_t> perm;
    perm.push_back(0);
    perm.push_back(r - 3);
    for (std::size_t j = 0; j < k; ++j) perm.push_back(1 + j);
    perm.push_back(r - 2);
    for (std::size_t j = 0; j < k; ++j) perm.push_back(1 + k + j);
    perm.push_back(r - 1);
    t = permute(c, perm);
  }
  // close boundary
  Tensor amps;
  const std::size_t dw = t.extent(0);
  std::vector<std::size_t> shape(t.shape().begin() + 2, t.shape().end());
  if (op.boundary() == Boundary::open) {
    amps = reshape(t, shape);
  } else {
    amps = Tensor(shape);
    std::size_t block = amps.size();
    for (std::size_t lin = 0; lin < block; ++lin) {
      cx acc = 0;
      for (std::size_t a = 0; a < dw; ++a) acc += t[a + dw * (a + dw * lin)];
      amps[lin] = acc;
    }
  }
  // axes currently (s0..s_{n-1}, t0..t_{n-1}); reverse each group so site 0
  // is the most significant digit, then flatten to a matrix
  std::vector<std::size_t> perm(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    perm[k] = n - 1 - k;
    perm[n + k] = 2 * n - 1 - k;
  }
  Tensor m = permute(amps, perm);
  return reshape(m, {dim, dim});
}

// Dense Hamiltonian straight from the term list (small n).
inline Tensor to_dense(const HamiltonianSpec& spec) {
  std::size_t dim = 1;
  for (std::size_t k = 0; k < spec.n; ++k) {
    dim *= spec.d;
    if (dim > (1u << 14)) throw CapacityError("to_dense: dimension exceeds 2^14");
  }
  Matrix h = Matrix::Zero(dim, dim);
  auto kron = [](const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j)
        out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
  };
  for (const auto& t : spec.terms) {
    Matrix term = Matrix::Identity(1, 1);
    if (!t.two_site()) {
      for (std::size_t k = 0; k < spec.n; ++k)
        term = kron(term, k == t.site ? as_matrix(t.op).eval()
                                      : Matrix::Identity(spec.d, spec.d).eval());
    } else if (t.site + 1 < spec.n) {
      Matrix pair = two_site_to_matrix(t.op);
      for (std::size_t k = 0; k < spec.n; ++k) {
        if (k == t.site) {
          term = kron(term, pair);
          ++k;  // consumed two sites
        } else {
          term = kron(term, Matrix::Identity(spec.d, spec.d));
        }
      }
    } else {
      // wrap term on the ring: factorize into channels acting on n-1 and 0
      Tensor hterm = t.op;
      auto ch = detail::split_bond_term(hterm, spec.d);
      Matrix sum = Matrix::Zero(dim, dim);
      for (std::size_t g = 0; g < ch.left.size(); ++g) {
        Matrix factor = Matrix::Identity(1, 1);
        for (std::size_t k = 0; k < spec.n; ++k) {
          if (k == 0)
            factor = kron(factor, as_matrix(ch.right[g]).eval());
          else if (k == spec.n - 1)
            factor = kron(factor, as_matrix(ch.left[g]).eval());
          else
            factor = kron(factor, Matrix::Identity(spec.d, spec.d).eval());
        }
        sum += factor;
      }
      h += t.coefficient * sum;
      continue;
    }
    h += t.coefficient * term;
  }
  return from_matrix(h);
}

// -------------------------------------------------------------------------
// Sandwiches and Hamiltonian moments

// <psi| W |psi> without normalization (open boundary fast path).
inline cx expect_mpo_raw(const MatrixProductState& psi, const MatrixProductOperator& op) {
  if (psi.boundary() != Boundary::open || op.boundary() != Boundary::open)
    return overlap(psi, apply_mpo(op, psi));
  const std::size_t n = psi.n();
  // E(a_bra, w, a_ket)
  Tensor e({1, 1, 1});
  e.at(0, 0, 0) = 1;
  for (std::size_t k = 0; k < n; ++k) {
    Tensor t = contract(e, {2}, psi.site(k), {0});        // (a,w,b',t)
    t = contract(t, {1, 3}, op.site(k), {0, 3});          // (a,b',w',s)
    e = permute(contract(conj(psi.site(k)), {0, 2}, t, {0, 3}), {0, 2, 1});
  }
  return e.to_scalar();
}

inline cx expect_mpo(const MatrixProductState& psi, const MatrixProductOperator& op) {
  return expect_mpo_raw(psi, op) / overlap(psi, psi);
}

struct Moments {
  double e1;  // <H>
  double e2;  // <H^2>
};

// First two Hamiltonian moments of a normalized-or-not state.
inline Moments h_moments(const MatrixProductState& psi, const HamiltonianSpec& spec) {
  if (psi.boundary() != Boundary::open)
    throw UnsupportedError("h_moments: open-boundary states only");
  MatrixProductOperator w = nn_hamiltonian_mpo(spec);
  const double nrm = std::real(overlap(psi, psi));
  const double e1 = std::real(expect_mpo_raw(psi, w)) / nrm;
  MatrixProductState hpsi = apply_mpo(w, psi);
  const double e2 = std::real(overlap(hpsi, hpsi)) / nrm;
  return {e1, e2};
}

// -------------------------------------------------------------------------
// Purification

// Pure state on (system x ancilla) pairs; the pair index is system-major:
// p = i * d_anc + j.
struct PurifiedState {
  MatrixProductState state;
  std::size_t d_sys = 2;
  std::size_t d_anc = 2;
};

// Normalized product of maximally entangled pairs; tracing the ancilla gives
// the maximally mixed state I / d^n.
inline PurifiedState purified_identity(std::size_t n, std::size_t d) {
  Tensor site({1, 1, d * d});
  const double w = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t i = 0; i < d; ++i) site.at(std::size_t(0), std::size_t(0), i * d + i) = w;
  return {MatrixProductState(std::vector<Tensor>(n, site), Boundary::open, Canonical::Left()),
          d, d};
}

// System operator extended to the pair index (op x I_anc).
inline Tensor pair_op(const Tensor& sys_op, std::size_t d_anc) {
  const std::size_t d = sys_op.extent(0);
  Tensor out({d * d_anc, d * d_anc});
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t i2 = 0; i2 < d; ++i2)
      for (std::size_t j = 0; j < d_anc; ++j) out.at(i * d_anc + j, i2 * d_anc + j) = sys_op.at(i, i2);
  return out;
}

// Two-site gate on the system, extended by identity ancillas.
inline Tensor pair_two_site(const Tensor& gate, std::size_t d, std::size_t d_anc) {
  const std::size_t dp = d * d_anc;
  Tensor out({dp, dp, dp, dp});
  for (std::size_t s = 0; s < d; ++s)
    for (std::size_t t = 0; t < d; ++t)
      for (std::size_t s2 = 0; s2 < d; ++s2)
        for (std::size_t t2 = 0; t2 < d; ++t2) {
          const cx v = gate.at(s, t, s2, t2);
          if (v == cx(0, 0)) continue;
          for (std::size_t a = 0; a < d_anc; ++a)
            for (std::size_t b = 0; b < d_anc; ++b)
              out.at(s * d_anc + a, t * d_anc + b, s2 * d_anc + a, t2 * d_anc + b) = v;
        }
  return out;
}

// MPO on the system extended to pair sites.
inline MatrixProductOperator pair_mpo(const MatrixProductOperator& op, std::size_t d_anc) {
  std::vector<Tensor> sites(op.n());
  for (std::size_t k = 0; k < op.n(); ++k) {
    const Tensor& w = op.site(k);
    const std::size_t dl = w.extent(0), dr = w.extent(1), d = w.extent(2);
    Tensor out({dl, dr, d * d_anc, d * d_anc});
    for (std::size_t a = 0; a < dl; ++a)
      for (std::size_t b = 0; b < dr; ++b)
        for (std::size_t s = 0; s < d; ++s)
          for (std::size_t t = 0; t < d; ++t) {
            const cx v = w.at(a, b, s, t);
            if (v == cx(0, 0)) continue;
            for (std::size_t j = 0; j < d_anc; ++j)
              out.at(a, b, s * d_anc + j, t * d_anc + j) = v;
          }
    sites[k] = std::move(out);
  }
  return MatrixProductOperator(std::move(sites), op.boundary());
}

// Extend a system Hamiltonian spec to the purified chain (ancilla identities).
inline HamiltonianSpec pair_spec(const HamiltonianSpec& spec, std::size_t d_anc) {
  HamiltonianSpec out{spec.n, spec.d * d_anc, spec.boundary, {}};
  for (const auto& t : spec.terms) {
    if (t.two_site()) {
      const std::size_t d = spec.d, dp = d * d_anc;
      Tensor ext({dp, dp, dp, dp});
      for (std::size_t s = 0; s < d; ++s)
        for (std::size_t u = 0; u < d; ++u)
          for (std::size_t s2 = 0; s2 < d; ++s2)
            for (std::size_t u2 = 0; u2 < d; ++u2) {
              const cx v = t.op.at(s, u, s2, u2);
              if (v == cx(0, 0)) continue;
              for (std::size_t a = 0; a < d_anc; ++a)
                for (std::size_t b = 0; b < d_anc; ++b)
                  ext.at(s * d_anc + a, u * d_anc + b, s2 * d_anc + a, u2 * d_anc + b) = v;
            }
      out.terms.push_back({t.coefficient, t.site, std::move(ext)});
    } else {
      out.terms.push_back({t.coefficient, t.site, pair_op(t.op, d_anc)});
    }
  }
  return out;
}

}  // namespace tn
