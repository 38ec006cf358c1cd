// Matrix product states: construction, gauge/canonical forms, overlaps,
// product-operator expectation values, Schmidt spectra, truncation and the
// tail bounds that control truncation quality.
//
// Site tensors have shape (D_left, D_right, d). Open-boundary chains have
// extent-1 bonds at both ends; periodic chains close the ring with
// D_right(N-1) == D_left(0).
//
// Dense amplitude vectors (used by oracles and small-system helpers) order
// the basis with SITE 0 AS THE MOST SIGNIFICANT digit, matching a Kronecker
// product taken in site order.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <utility>

#include "tn/tensor.hpp"

namespace tn {

enum class Boundary { open, periodic };

struct Canonical {
  enum Kind { none, left, right, mixed } kind = none;
  std::size_t center = 0;  // meaningful for mixed only

  static Canonical Left() { return {left, 0}; }
  static Canonical Right() { return {right, 0}; }
  static Canonical Mixed(std::size_t c) { return {mixed, c}; }
  static Canonical None() { return {none, 0}; }
};

class MatrixProductState {
 public:
  MatrixProductState() = default;
  MatrixProductState(std::vector<Tensor> sites, Boundary boundary,
                     Canonical canonical = Canonical::None())
      : sites_(std::move(sites)), boundary_(boundary), canonical_(canonical) {
    validate();
  }

  std::size_t n() const { return sites_.size(); }
  std::size_t phys_dim(std::size_t k) const { return sites_[k].extent(2); }
  std::size_t bond_left(std::size_t k) const { return sites_[k].extent(0); }
  std::size_t bond_right(std::size_t k) const { return sites_[k].extent(1); }
  std::size_t max_bond() const {
    std::size_t m = 0;
    for (const auto& s : sites_) m = std::max(m, s.extent(1));
    return m;
  }

  Boundary boundary() const { return boundary_; }
  Canonical canonical() const { return canonical_; }
  void set_canonical(Canonical c) { canonical_ = c; }

  const Tensor& site(std::size_t k) const { return sites_[k]; }
  Tensor& site(std::size_t k) {
    canonical_ = Canonical::None();
    return sites_[k];
  }
  const std::vector<Tensor>& sites() const { return sites_; }

  void validate() const {
    if (sites_.size() < 2) throw DimensionError("mps: need at least 2 sites");
    for (std::size_t k = 0; k < sites_.size(); ++k) {
      if (sites_[k].rank() != 3) throw DimensionError("mps: site tensors must be rank 3");
      if (k + 1 < sites_.size() && sites_[k].extent(1) != sites_[k + 1].extent(0))
        throw DimensionError("mps: bond extents not chain-consistent");
    }
    if (boundary_ == Boundary::open) {
      if (sites_.front().extent(0) != 1 || sites_.back().extent(1) != 1)
        throw DimensionError("mps: open boundary requires extent-1 edge bonds");
    } else {
      if (sites_.back().extent(1) != sites_.front().extent(0))
        throw DimensionError("mps: periodic boundary requires matching wrap bond");
    }
  }

 private:
  std::vector<Tensor> sites_;
  Boundary boundary_ = Boundary::open;
  Canonical canonical_ = Canonical::None();
};

// -------------------------------------------------------------------------
// Construction

// Entries i.i.d. standard normal scaled by 1/sqrt(D); reproducible per seed.
inline MatrixProductState random_mps(std::size_t n, std::size_t d, std::size_t bond,
                                     Boundary boundary, std::uint64_t seed = 0) {
  if (n < 2 || d < 2 || bond < 1)
    throw DimensionError("random_mps: need n >= 2, d >= 2, D >= 1");
  std::mt19937_64 rng(splitmix64(seed));
  std::normal_distribution<double> g(0.0, 1.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(bond));
  std::vector<Tensor> sites;
  sites.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t dl = (boundary == Boundary::open && k == 0) ? 1 : bond;
    const std::size_t dr = (boundary == Boundary::open && k + 1 == n) ? 1 : bond;
    Tensor a({dl, dr, d});
    for (auto& v : a.data()) v = cx(g(rng) * scale, 0.0);
    sites.push_back(std::move(a));
  }
  return MatrixProductState(std::move(sites), boundary);
}

inline MatrixProductState product_mps(const std::vector<Tensor>& site_vectors,
                                      Boundary boundary = Boundary::open) {
  std::vector<Tensor> sites;
  for (const auto& v : site_vectors) {
    if (v.rank() != 1) throw DimensionError("product_mps: site vectors must be rank 1");
    sites.push_back(reshape(v, {1, 1, v.extent(0)}));
  }
  return MatrixProductState(std::move(sites), boundary,
                            boundary == Boundary::open ? Canonical::Left() : Canonical::None());
}

// -------------------------------------------------------------------------
// Local gauge moves

namespace detail {

// Split a site tensor into an isometry plus a carry matrix.
// 'lr': A = Q * C with Q left-isometric; carry C attaches to the right bond.
// 'rl': A = C * Q with Q right-isometric; carry C attaches to the left bond.
struct SplitResult {
  Tensor q;      // isometric site tensor, same layout (Dl, Dr, d)
  Tensor carry;  // rank-2
  std::vector<double> s;  // singular values of the split
};

inline SplitResult split_site(const Tensor& a, bool left_to_right,
                              std::size_t keep = SIZE_MAX) {
  const std::size_t dl = a.extent(0), dr = a.extent(1), d = a.extent(2);
  SplitResult out;
  if (left_to_right) {
    Tensor m = reshape(permute(a, {0, 2, 1}), {dl * d, dr});
    SvdResult svd = svd_econ(m);
    const std::size_t r = std::min(keep, svd.s.size());
    Matrix u = as_matrix(svd.u).leftCols(static_cast<Eigen::Index>(r));
    Matrix v = as_matrix(svd.v).topRows(static_cast<Eigen::Index>(r));
    Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(svd.s.data(), r);
    out.q = permute(reshape(from_matrix(u), {dl, d, r}), {0, 2, 1});
    out.carry = from_matrix(s.asDiagonal() * v);
    out.s.assign(svd.s.begin(), svd.s.end());
  } else {
    Tensor m = reshape(a, {dl, dr * d});
    SvdResult svd = svd_econ(m);
    const std::size_t r = std::min(keep, svd.s.size());
    Matrix u = as_matrix(svd.u).leftCols(static_cast<Eigen::Index>(r));
    Matrix v = as_matrix(svd.v).topRows(static_cast<Eigen::Index>(r));
    Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(svd.s.data(), r);
    out.q = reshape(from_matrix(v), {r, dr, d});
    out.carry = from_matrix(u * s.asDiagonal());
    out.s.assign(svd.s.begin(), svd.s.end());
  }
  return out;
}

// Attach a rank-2 carry to the left / right bond of a site tensor.
inline Tensor absorb_left(const Tensor& carry, const Tensor& a) {
  // carry (x, Dl) . A (Dl, Dr, d) -> (x, Dr, d)
  return contract(carry, {1}, a, {0});
}
inline Tensor absorb_right(const Tensor& a, const Tensor& carry) {
  // A (Dl, Dr, d) . carry (Dr, x) -> (Dl, x, d)
  return permute(contract(a, {1}, carry, {0}), {0, 2, 1});
}

// QR-based variant of split_site. The triangular factor's diagonal is made
// real non-negative, which makes the decomposition (and hence canonical
// forms) unique and idempotent.
inline SplitResult qr_split(const Tensor& a, bool left_to_right) {
  const std::size_t dl = a.extent(0), dr = a.extent(1), d = a.extent(2);
  SplitResult out;
  if (left_to_right) {
    Tensor m = reshape(permute(a, {0, 2, 1}), {dl * d, dr});
    const Eigen::Index rows = static_cast<Eigen::Index>(dl * d);
    const Eigen::Index cols = static_cast<Eigen::Index>(dr);
    const Eigen::Index k = std::min(rows, cols);
    Eigen::HouseholderQR<Matrix> qr(as_matrix(m));
    Matrix q = qr.householderQ() * Matrix::Identity(rows, k);
    Matrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < k; ++i) {
      const double mag = std::abs(r(i, i));
      const cx ph = mag > 0 ? r(i, i) / mag : cx(1, 0);
      q.col(i) *= ph;
      r.row(i) *= std::conj(ph);
    }
    out.q = permute(reshape(from_matrix(q), {dl, d, static_cast<std::size_t>(k)}), {0, 2, 1});
    out.carry = from_matrix(r);
  } else {
    Tensor m = reshape(a, {dl, dr * d});
    Matrix mh = as_matrix(m).adjoint();  // (dr*d, dl)
    const Eigen::Index rows = mh.rows(), cols = mh.cols();
    const Eigen::Index k = std::min(rows, cols);
    Eigen::HouseholderQR<Matrix> qr(mh);
    Matrix q = qr.householderQ() * Matrix::Identity(rows, k);
    Matrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < k; ++i) {
      const double mag = std::abs(r(i, i));
      const cx ph = mag > 0 ? r(i, i) / mag : cx(1, 0);
      q.col(i) *= ph;
      r.row(i) *= std::conj(ph);
    }
    out.q = reshape(from_matrix(q.adjoint()), {static_cast<std::size_t>(k), dr, d});
    out.carry = from_matrix(r.adjoint());  // (dl, k)
  }
  return out;
}

}  // namespace detail

// -------------------------------------------------------------------------
// Canonical forms (open boundary only; the periodic case has no such normal
// form).

struct CanonicalizeResult {
  MatrixProductState state;  // normalized
  double norm;               // norm of the input state
};

inline CanonicalizeResult canonicalize(const MatrixProductState& psi, Canonical form) {
  if (psi.boundary() != Boundary::open)
    throw UnsupportedError("canonicalize: periodic boundary has no canonical gauge");
  const std::size_t n = psi.n();
  std::vector<Tensor> a(psi.sites().begin(), psi.sites().end());
  double nrm = 1.0;

  auto right_pass = [&](std::size_t down_to) {
    for (std::size_t k = n; k-- > down_to + 1;) {
      auto sp = detail::qr_split(a[k], false);
      a[k] = std::move(sp.q);
      a[k - 1] = detail::absorb_right(a[k - 1], sp.carry);
    }
  };
  auto left_pass = [&](std::size_t up_to) {
    for (std::size_t k = 0; k + 1 <= up_to && k + 1 < n; ++k) {
      auto sp = detail::qr_split(a[k], true);
      a[k] = std::move(sp.q);
      a[k + 1] = detail::absorb_left(sp.carry, a[k + 1]);
    }
  };
  auto normalize_center = [&](std::size_t c) {
    double f = a[c].norm();
    if (f == 0) throw NumericError("canonicalize: zero-norm state");
    a[c] *= cx(1.0 / f, 0);
    nrm = f;
  };

  switch (form.kind) {
    case Canonical::right: {
      right_pass(0);
      // orthonormalize the first site as well; the 1x1 carry (made real
      // non-negative by the phase fix) is the global norm
      auto sp = detail::qr_split(a[0], false);
      nrm = std::real(as_matrix(sp.carry)(0, 0));
      if (nrm <= 0) throw NumericError("canonicalize: zero-norm state");
      a[0] = sp.q;
      break;
    }
    case Canonical::left: {
      left_pass(n - 1);
      auto sp = detail::qr_split(a[n - 1], true);
      nrm = std::real(as_matrix(sp.carry)(0, 0));
      if (nrm <= 0) throw NumericError("canonicalize: zero-norm state");
      a[n - 1] = sp.q;
      break;
    }
    case Canonical::mixed: {
      if (form.center >= n) throw DimensionError("canonicalize: center out of range");
      right_pass(form.center);
      left_pass(form.center);
      normalize_center(form.center);
      break;
    }
    case Canonical::none:
      throw DimensionError("canonicalize: requested form must be left/right/mixed");
  }
  return {MatrixProductState(std::move(a), Boundary::open, form), nrm};
}

// -------------------------------------------------------------------------
// Overlaps and product expectation values

namespace detail {

// E'(a', b') = sum_{i,a,b} conj(A(a,a',i)) E(a,b) [O B](b,b',i)
inline Tensor transfer_step(const Tensor& e, const Tensor& abra, const Tensor& bket,
                            const Tensor* op) {
  Tensor ket = bket;
  if (op) ket = permute(contract(*op, {1}, bket, {2}), {1, 2, 0});
  Tensor t = contract(e, {1}, ket, {0});      // (a, b', i)
  return contract(conj(abra), {0, 2}, t, {0, 2});  // (a', b')
}

}  // namespace detail

// <a|b> (a is conjugated). Periodic pairs use the ring contraction.
inline cx overlap(const MatrixProductState& a, const MatrixProductState& b,
                  const std::map<std::size_t, Tensor>* ops = nullptr,
                  bool right_to_left = false) {
  if (a.n() != b.n()) throw DimensionError("overlap: site count mismatch");
  for (std::size_t k = 0; k < a.n(); ++k)
    if (a.phys_dim(k) != b.phys_dim(k))
      throw DimensionError("overlap: physical dimension mismatch");
  if (a.boundary() != b.boundary())
    throw DimensionError("overlap: boundary kinds differ");
  const std::size_t n = a.n();

  auto op_at = [&](std::size_t k) -> const Tensor* {
    if (!ops) return nullptr;
    auto it = ops->find(k);
    return it == ops->end() ? nullptr : &it->second;
  };

  if (a.boundary() == Boundary::open) {
    if (!right_to_left) {
      Tensor e({a.bond_left(0), b.bond_left(0)});
      e.at(0, 0) = 1.0;
      for (std::size_t k = 0; k < n; ++k)
        e = detail::transfer_step(e, a.site(k), b.site(k), op_at(k));
      return e.to_scalar();
    }
    // mirrored sweep: E'(a, b) = sum conj(A(a,a',i)) E(a',b') [OB](b,b',i)
    Tensor e({a.bond_right(n - 1), b.bond_right(n - 1)});
    e.at(0, 0) = 1.0;
    for (std::size_t k = n; k-- > 0;) {
      Tensor ket = b.site(k);
      const Tensor* op = op_at(k);
      if (op) ket = permute(contract(*op, {1}, ket, {2}), {1, 2, 0});
      Tensor t = contract(ket, {1}, e, {1});            // (b, i, a')
      e = contract(conj(a.site(k)), {1, 2}, t, {2, 1});  // (a, b)
    }
    return e.to_scalar();
  }

  // periodic: running tensor T(a0, b0, ak, bk)
  Tensor t;
  for (std::size_t k = 0; k < n; ++k) {
    Tensor ket = b.site(k);
    const Tensor* op = op_at(k);
    if (op) ket = permute(contract(*op, {1}, ket, {2}), {1, 2, 0});
    if (k == 0) {
      // T(a0, a1, b0, b1) from the first transfer
      Tensor s = contract(conj(a.site(0)), {2}, ket, {2});  // (a0, a1, b0, b1)
      t = permute(s, {0, 2, 1, 3});                         // (a0, b0, a1, b1)
    } else {
      Tensor s = contract(t, {2}, conj(a.site(k)), {0});  // (a0,b0,bk, ak+1, i)
      t = contract(s, {2, 4}, ket, {0, 2});               // (a0,b0,ak+1,bk+1)
    }
  }
  cx tr = 0;
  for (std::size_t aa = 0; aa < t.extent(0); ++aa)
    for (std::size_t bb = 0; bb < t.extent(1); ++bb) tr += t.at(aa, bb, aa, bb);
  return tr;
}

inline double norm_of(const MatrixProductState& psi) {
  return std::sqrt(std::abs(std::real(overlap(psi, psi))));
}

// <psi| O_1 x ... x O_N |psi> without normalization; identity where a site
// carries no operator.
inline cx expect_product_raw(const MatrixProductState& psi,
                             const std::map<std::size_t, Tensor>& ops,
                             bool right_to_left = false) {
  for (const auto& [k, op] : ops) {
    if (k >= psi.n()) throw DimensionError("expect_product: site out of range");
    if (op.rank() != 2 || op.extent(0) != psi.phys_dim(k) || op.extent(1) != psi.phys_dim(k))
      throw DimensionError("expect_product: operator shape mismatch");
  }
  return overlap(psi, psi, &ops, right_to_left);
}

// Normalized convention: divides by <psi|psi>.
inline cx expect_product(const MatrixProductState& psi,
                         const std::map<std::size_t, Tensor>& ops,
                         bool right_to_left = false) {
  const cx raw = expect_product_raw(psi, ops, right_to_left);
  const cx nrm = overlap(psi, psi, nullptr, right_to_left);
  return raw / nrm;
}

// -------------------------------------------------------------------------
// Schmidt spectra / entropies

struct SchmidtSpectrum {
  std::size_t bond = 0;               // cut between sites bond-1 and bond
  std::vector<double> coefficients;   // non-increasing, >= 0, sum of squares 1

  std::vector<double> probabilities() const {
    std::vector<double> p(coefficients.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = coefficients[i] * coefficients[i];
    return p;
  }

  double entropy() const {  // von Neumann, natural log
    double s = 0;
    for (double c : coefficients) {
      const double p = c * c;
      if (p > 0) s -= p * std::log(p);
    }
    return s;
  }

  double renyi(double alpha) const {
    if (alpha <= 0) throw std::domain_error("renyi: alpha must be positive");
    if (std::abs(alpha - 1.0) < 1e-12) return entropy();
    double z = 0;
    for (double c : coefficients) {
      const double p = c * c;
      if (p > 0) z += std::pow(p, alpha);
    }
    return std::log(z) / (1.0 - alpha);
  }
};

namespace detail {

// Left-canonical tensors plus the Schmidt values at every bond of a
// normalized open chain.
struct SchmidtSweep {
  std::vector<Tensor> left_tensors;
  std::vector<std::vector<double>> lambdas;  // n-1 bonds
  double norm;
};

inline SchmidtSweep schmidt_sweep(const MatrixProductState& psi) {
  if (psi.boundary() != Boundary::open)
    throw UnsupportedError("schmidt decomposition requires open boundary");
  auto rc = canonicalize(psi, Canonical::Right());
  const std::size_t n = rc.state.n();
  std::vector<Tensor> a(rc.state.sites().begin(), rc.state.sites().end());
  SchmidtSweep out;
  out.norm = rc.norm;
  out.lambdas.resize(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    auto sp = detail::split_site(a[k], true);
    a[k] = std::move(sp.q);
    a[k + 1] = detail::absorb_left(sp.carry, a[k + 1]);
    out.lambdas[k] = std::move(sp.s);
  }
  out.left_tensors = std::move(a);
  return out;
}

}  // namespace detail

// Schmidt coefficients of the bipartition sites [0, bond) | [bond, n).
inline SchmidtSpectrum schmidt_spectrum(const MatrixProductState& psi, std::size_t bond) {
  if (psi.boundary() != Boundary::open)
    throw UnsupportedError("schmidt_spectrum: periodic boundary unsupported");
  if (bond == 0 || bond >= psi.n())
    throw DimensionError("schmidt_spectrum: bond must satisfy 1 <= k < n");
  auto sweep = detail::schmidt_sweep(psi);
  SchmidtSpectrum s;
  s.bond = bond;
  s.coefficients = sweep.lambdas[bond - 1];
  return s;
}

// -------------------------------------------------------------------------
// Gamma-Lambda (Schmidt-explicit) parametrization

struct VidalMps {
  std::vector<Tensor> gammas;          // (Dl, Dr, d)
  std::vector<SchmidtSpectrum> lambdas;  // n-1 bonds
  std::size_t n() const { return gammas.size(); }
};

inline VidalMps vidal_gauge(const MatrixProductState& psi) {
  if (psi.boundary() != Boundary::open)
    throw UnsupportedError("vidal_gauge: open boundary required");
  if (norm_of(psi) < 1e-300) throw NumericError("vidal_gauge: degenerate zero-norm state");
  auto sweep = detail::schmidt_sweep(psi);
  const std::size_t n = sweep.left_tensors.size();
  VidalMps out;
  out.gammas.resize(n);
  out.lambdas.resize(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k)
    out.lambdas[k] = SchmidtSpectrum{k + 1, sweep.lambdas[k]};
  for (std::size_t k = 0; k < n; ++k) {
    Tensor g = sweep.left_tensors[k];
    if (k > 0) {
      // Gamma_k = Lambda_{k-1}^{-1} L_k (rows scaled; pseudo-inverse on
      // numerically zero Schmidt values)
      const auto& lam = sweep.lambdas[k - 1];
      const double floor = lam.empty() ? 0.0 : lam.front() * kSingularZeroTol;
      const std::size_t dl = g.extent(0), dr = g.extent(1), d = g.extent(2);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t r = 0; r < dr; ++r)
          for (std::size_t l = 0; l < dl; ++l)
            g.at(l, r, i) = (lam[l] > floor) ? g.at(l, r, i) / lam[l] : cx(0, 0);
    }
    out.gammas[k] = std::move(g);
  }
  return out;
}

inline MatrixProductState mps_from_vidal(const VidalMps& v) {
  const std::size_t n = v.n();
  std::vector<Tensor> sites(n);
  for (std::size_t k = 0; k < n; ++k) {
    Tensor a = v.gammas[k];
    if (k + 1 < n) {
      const auto& lam = v.lambdas[k].coefficients;
      const std::size_t dl = a.extent(0), dr = a.extent(1), d = a.extent(2);
      if (lam.size() != dr) throw DimensionError("mps_from_vidal: bond size mismatch");
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t r = 0; r < dr; ++r)
          for (std::size_t l = 0; l < dl; ++l) a.at(l, r, i) *= lam[r];
    }
    sites[k] = std::move(a);
  }
  return MatrixProductState(std::move(sites), Boundary::open, Canonical::Left());
}

// -------------------------------------------------------------------------
// Truncation (one canonical pass: right-canonicalize, then sweep left to
// right cutting every bond to the D' largest Schmidt values). The returned
// state keeps the input's norm; the discarded weight refers to the
// normalized state.

struct TruncateResult {
  MatrixProductState state;
  double discarded_weight;
};

inline TruncateResult truncate(const MatrixProductState& psi, std::size_t new_bond) {
  if (psi.boundary() != Boundary::open)
    throw UnsupportedError("truncate: open boundary required");
  if (new_bond < 1) throw DimensionError("truncate: D' >= 1 required");
  // The reported weight sums the tails of the INPUT state's bond spectra,
  // i.e. the eps_bond(D') entering the tail bound || psi - psi_D ||^2 <=
  // 2 * sum eps_bond. The cut itself is the standard single canonical pass.
  auto sweep = detail::schmidt_sweep(psi);
  double weight = 0;
  for (const auto& lam : sweep.lambdas)
    for (std::size_t i = new_bond; i < lam.size(); ++i) weight += lam[i] * lam[i];

  auto rc = canonicalize(psi, Canonical::Right());
  const std::size_t n = rc.state.n();
  std::vector<Tensor> a(rc.state.sites().begin(), rc.state.sites().end());
  for (std::size_t k = 0; k + 1 < n; ++k) {
    auto sp = detail::split_site(a[k], true, new_bond);
    a[k] = std::move(sp.q);
    a[k + 1] = detail::absorb_left(sp.carry, a[k + 1]);
  }
  MatrixProductState out(std::move(a), Boundary::open, Canonical::None());
  // restore the original norm
  out.site(n - 1) *= cx(rc.norm, 0);
  return {std::move(out), weight};
}

// -------------------------------------------------------------------------
// Tail bounds for truncated spectra.
//
// lemma1_bound: || psi - psi_D ||^2 <= 2 * eps(D) per cut, with eps(D) the
// tail sum of the density spectrum at the cut.
// lemma2_tail_bound: eps(D) <= exp( (1-alpha)/alpha * (S_alpha - log(D/(1-alpha))) ).

struct ApproximationBounds {
  double lemma1_bound;
  double lemma2_tail_bound;
};

inline ApproximationBounds approximation_bounds(const std::vector<double>& probabilities,
                                                std::size_t bond, double alpha) {
  if (!(alpha > 0 && alpha < 1))
    throw std::domain_error("approximation_bounds: alpha must lie in (0,1)");
  double tail = 0, z = 0, total = 0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    total += probabilities[i];
    if (i >= bond) tail += probabilities[i];
    if (probabilities[i] > 0) z += std::pow(probabilities[i], alpha);
  }
  if (std::abs(total - 1.0) > 1e-8)
    throw std::domain_error("approximation_bounds: spectrum not normalized");
  const double s_alpha = std::log(z) / (1.0 - alpha);
  const double lemma2 =
      std::exp((1.0 - alpha) / alpha *
               (s_alpha - std::log(static_cast<double>(bond) / (1.0 - alpha))));
  return {2.0 * tail, lemma2};
}

inline ApproximationBounds approximation_bounds(const SchmidtSpectrum& s, std::size_t bond,
                                                double alpha) {
  return approximation_bounds(s.probabilities(), bond, alpha);
}

// -------------------------------------------------------------------------
// Dense conversions (desk-scale helpers; oracles keep their own independent
// versions).

inline std::vector<cx> dense_state(const MatrixProductState& psi) {
  const std::size_t n = psi.n();
  std::size_t dim = 1;
  for (std::size_t k = 0; k < n; ++k) {
    dim *= psi.phys_dim(k);
    if (dim > (1u << 24)) throw CapacityError("dense_state: Hilbert space too large");
  }
  // accumulate T(l0, rk, i0..ik), contracting bonds left to right
  Tensor t = psi.site(0);  // (l0, r0, i0)
  for (std::size_t k = 1; k < n; ++k) {
    // T(l0, r, i...)  x  A(r, r', i_k)
    t = contract(t, {1}, psi.site(k), {0});
    // result: (l0, i..., r', i_k) -> move r' behind l0
    std::vector<std::size_t> perm(t.rank());
    perm[0] = 0;
    perm[1] = t.rank() - 2;
    for (std::size_t j = 2; j < t.rank(); ++j) perm[j] = (j - 2 < k) ? j - 1 : t.rank() - 1;
    t = permute(t, perm);
  }
  // close boundary: T(l0, r, i0..i_{n-1})
  Tensor amps;
  if (psi.boundary() == Boundary::open) {
    amps = reshape(t, std::vector<std::size_t>(t.shape().begin() + 2, t.shape().end()));
  } else {
    const std::size_t D = t.extent(0);
    std::vector<std::size_t> shape(t.shape().begin() + 2, t.shape().end());
    amps = Tensor(shape);
    const std::size_t block = dim;  // physical block count equals dim
    for (std::size_t lin = 0; lin < block; ++lin) {
      cx acc = 0;
      for (std::size_t a = 0; a < D; ++a) acc += t[a + D * (a + D * lin)];
      amps[lin] = acc;
    }
  }
  // reverse axes so site 0 becomes the most significant digit
  std::vector<std::size_t> rev(n);
  for (std::size_t k = 0; k < n; ++k) rev[k] = n - 1 - k;
  Tensor out = permute(amps, rev);
  return out.data();
}

// Exact MPS from a dense amplitude vector (site 0 most significant digit).
inline MatrixProductState mps_from_dense(const std::vector<cx>& amplitudes,
                                         std::size_t n, std::size_t d) {
  std::size_t dim = 1;
  for (std::size_t k = 0; k < n; ++k) dim *= d;
  if (dim != amplitudes.size())
    throw DimensionError("mps_from_dense: amplitude count mismatch");
  // tensor with axes (i_{n-1}, ..., i_0), then reverse to site order
  Tensor t(std::vector<std::size_t>(n, d), amplitudes);
  std::vector<std::size_t> rev(n);
  for (std::size_t k = 0; k < n; ++k) rev[k] = n - 1 - k;
  t = permute(t, rev);  // axes (i_0, ..., i_{n-1})

  std::vector<Tensor> sites;
  std::size_t dl = 1;
  std::size_t rest = dim;
  Tensor cur = reshape(t, {1, dim});  // (dl, rest)
  for (std::size_t k = 0; k + 1 < n; ++k) {
    rest /= d;
    // (dl, d, rest) -> matrix (dl*d, rest)
    Tensor m = reshape(cur, {dl * d, rest});
    SvdResult svd = svd_econ(m);
    const std::size_t r = std::max<std::size_t>(1, svd_rank(svd.s));
    Matrix u = as_matrix(svd.u).leftCols(static_cast<Eigen::Index>(r));
    Matrix v = as_matrix(svd.v).topRows(static_cast<Eigen::Index>(r));
    Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(svd.s.data(), r);
    sites.push_back(permute(reshape(from_matrix(u), {dl, d, r}), {0, 2, 1}));
    Matrix carry = s.asDiagonal() * v;  // (r, rest)
    cur = from_matrix(carry);
    dl = r;
  }
  sites.push_back(permute(reshape(cur, {dl, d, 1}), {0, 2, 1}));
  return MatrixProductState(std::move(sites), Boundary::open, Canonical::None());
}

// Apply a single-site operator in place of site k.
inline MatrixProductState apply_site_op(const MatrixProductState& psi, std::size_t k,
                                        const Tensor& op) {
  if (op.rank() != 2 || op.extent(0) != psi.phys_dim(k) || op.extent(1) != psi.phys_dim(k))
    throw DimensionError("apply_site_op: operator shape mismatch");
  std::vector<Tensor> sites(psi.sites().begin(), psi.sites().end());
  sites[k] = permute(contract(op, {1}, sites[k], {2}), {1, 2, 0});
  return MatrixProductState(std::move(sites), psi.boundary(), Canonical::None());
}

}  // namespace tn
