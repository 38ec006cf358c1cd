#include "tn/tensor.hpp"

#include <gtest/gtest.h>

#include "oracle.hpp"

using namespace tn;

namespace {

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

TEST(Contract, IdentityActsTrivially) {
  Tensor id = Tensor::identity(3);
  Tensor t = oracle::random_tensor({3, 4}, 7);
  Tensor r = contract(id, {1}, t, {0});
  ASSERT_EQ(r.shape(), t.shape());
  for (std::size_t i = 0; i < t.size(); ++i) EXPECT_NEAR(std::abs(r[i] - t[i]), 0.0, 1e-14);
}

TEST(Contract, MatchesNestedLoopOracle) {
  Tensor x = oracle::random_tensor({2, 3, 2}, 11);
  Tensor y = oracle::random_tensor({3, 2}, 13);
  Tensor r = contract(x, {1, 2}, y, {0, 1});
  Tensor ref = oracle::naive_contract(x, {1, 2}, y, {0, 1});
  ASSERT_EQ(r.shape(), ref.shape());
  for (std::size_t i = 0; i < r.size(); ++i) EXPECT_NEAR(std::abs(r[i] - ref[i]), 0.0, 1e-13);
}

TEST(Contract, FullContractionIsSquaredNorm) {
  Tensor v = oracle::random_tensor({17}, 3);
  Tensor r = contract(conj(v), {0}, v, {0});
  double n2 = 0;
  for (auto& c : v.data()) n2 += std::norm(c);
  EXPECT_NEAR(std::abs(r.to_scalar() - cx(n2, 0)), 0.0, 1e-12);
}

TEST(Contract, FreeIndexOrderingXThenY) {
  Tensor x = oracle::random_tensor({2, 5, 3}, 21);
  Tensor y = oracle::random_tensor({3, 4, 2}, 22);
  Tensor r = contract(x, {2}, y, {0});
  ASSERT_EQ(r.rank(), 4u);
  EXPECT_EQ(r.extent(0), 2u);
  EXPECT_EQ(r.extent(1), 5u);
  EXPECT_EQ(r.extent(2), 4u);
  EXPECT_EQ(r.extent(3), 2u);
  Tensor ref = oracle::naive_contract(x, {2}, y, {0});
  for (std::size_t i = 0; i < r.size(); ++i) EXPECT_NEAR(std::abs(r[i] - ref[i]), 0.0, 1e-13);
}

TEST(Contract, ExtentMismatchNamesOffendingPair) {
  Tensor x = oracle::random_tensor({2, 3}, 1);
  Tensor y = oracle::random_tensor({4, 2}, 2);
  try {
    contract(x, {1}, y, {0});
    FAIL() << "expected DimensionError";
  } catch (const DimensionError& e) {
    EXPECT_NE(std::string(e.what()).find("(1,0)"), std::string::npos);
  }
}

TEST(Contract, DuplicateAxisRejected) {
  Tensor x = oracle::random_tensor({2, 2}, 1);
  EXPECT_THROW(contract(x, {0, 0}, x, {0, 1}), DimensionError);
}

// Property: contraction equals the nested-loop evaluation on random instances
// of assorted ranks (total size up to 1e4).
TEST(Contract, RandomInstancesAgreeWithBruteForce) {
  struct Case {
    std::vector<std::size_t> xs, ys, xi, yi;
  };
  const std::vector<Case> cases = {
      {{4, 5, 6}, {6, 5, 3}, {2, 1}, {0, 1}},
      {{7, 2}, {2, 7}, {0, 1}, {1, 0}},
      {{3, 3, 3, 3}, {3, 3}, {0, 3}, {1, 0}},
      {{10, 10, 10}, {10, 10, 10}, {0, 1, 2}, {2, 0, 1}},
      {{2, 3, 4, 5}, {5, 4}, {3}, {0}},
  };
  std::uint64_t seed = 100;
  for (const auto& c : cases) {
    Tensor x = oracle::random_tensor(c.xs, seed++);
    Tensor y = oracle::random_tensor(c.ys, seed++);
    Tensor r = contract(x, c.xi, y, c.yi);
    Tensor ref = oracle::naive_contract(x, c.xi, y, c.yi);
    ASSERT_EQ(r.shape(), ref.shape());
    double scale = std::max(1.0, ref.norm());
    double err = 0;
    for (std::size_t i = 0; i < r.size(); ++i) err = std::max(err, std::abs(r[i] - ref[i]));
    EXPECT_LE(err / scale, 1e-12);
  }
}

TEST(Permute, RoundTrip) {
  Tensor x = oracle::random_tensor({2, 3, 4}, 5);
  Tensor p = permute(x, {2, 0, 1});
  EXPECT_EQ(p.extent(0), 4u);
  EXPECT_EQ(p.extent(1), 2u);
  EXPECT_EQ(p.extent(2), 3u);
  EXPECT_NEAR(std::abs(p.at(3, 1, 2) - x.at(1, 2, 3)), 0.0, 0.0);
  Tensor back = permute(p, {1, 2, 0});
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(back[i], x[i]);
}

TEST(Svd, DiagonalValues) {
  Tensor m({2, 2});
  m.at(0, 0) = 3.0;
  m.at(1, 1) = 1.0;
  auto r = svd_econ(m);
  ASSERT_EQ(r.s.size(), 2u);
  EXPECT_NEAR(r.s[0], 3.0, 1e-14);
  EXPECT_NEAR(r.s[1], 1.0, 1e-14);
}

TEST(Svd, RankOneOuterProduct) {
  Vector u = oracle::random_matrix(5, 1, 31).col(0).normalized();
  Vector v = oracle::random_matrix(4, 1, 32).col(0).normalized();
  Tensor m = from_matrix(u * v.transpose());
  auto r = svd_econ(m);
  EXPECT_NEAR(r.s[0], 1.0, 1e-12);
  for (std::size_t i = 1; i < r.s.size(); ++i) EXPECT_NEAR(r.s[i], 0.0, 1e-12);
  EXPECT_EQ(svd_rank(r.s), 1u);
}

TEST(Svd, ReconstructionAndIsometry) {
  Tensor m = from_matrix(oracle::random_matrix(4, 6, 33));
  auto r = svd_econ(m);
  Matrix u = as_matrix(r.u);
  Matrix v = as_matrix(r.v);
  Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(r.s.data(), r.s.size());
  Matrix rec = u * s.asDiagonal() * v;
  EXPECT_LE((rec - as_matrix(m)).norm(), 1e-12 * as_matrix(m).norm());
  EXPECT_LE((u.adjoint() * u - Matrix::Identity(4, 4)).norm(), 1e-10);
  EXPECT_LE((v * v.adjoint() - Matrix::Identity(4, 4)).norm(), 1e-10);
  for (std::size_t i = 1; i < r.s.size(); ++i) EXPECT_GE(r.s[i - 1], r.s[i]);
}

TEST(Svd, NonFiniteRejected) {
  Tensor m({2, 2});
  m.at(0, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(svd_econ(m), NumericError);
}

TEST(EigSmallest, DiagonalCase) {
  Tensor h({3, 3});
  h.at(0, 0) = 2.0;
  h.at(1, 1) = -1.0;
  h.at(2, 2) = 5.0;
  auto r = eig_smallest(h);
  EXPECT_NEAR(r.value, -1.0, 1e-12);
  EXPECT_NEAR(std::abs(r.vector[1]), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(r.vector[0]), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(r.vector[2]), 0.0, 1e-12);
}

TEST(EigSmallest, IdentityMetricMatchesStandard) {
  Matrix h = oracle::random_hermitian(12, 41);
  Tensor ht = from_matrix(h);
  Tensor id = Tensor::identity(12);
  auto a = eig_smallest(ht);
  auto b = eig_smallest(ht, &id);
  EXPECT_NEAR(a.value, b.value, 1e-10);
}

TEST(EigSmallest, GeneralizedPairMatchesDenseOracle) {
  Matrix h = oracle::random_hermitian(20, 51);
  Matrix n = oracle::random_spd(20, 52);
  Tensor nt = from_matrix(n);
  auto r = eig_smallest(from_matrix(h), &nt);
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(h, n);
  EXPECT_NEAR(r.value, ges.eigenvalues()(0), 1e-10);
  Vector x = as_vector(r.vector);
  EXPECT_NEAR(std::real(x.dot(n * x)), 1.0, 1e-10);
  // residual invariant
  EXPECT_LE((h * x - r.value * (n * x)).norm(), 1e-8 * x.norm());
}

TEST(EigSmallest, ProjectorRestrictsSubspace) {
  // h with global minimum along e0; restrict to the subspace orthogonal to e0.
  Tensor h({3, 3});
  h.at(0, 0) = -5.0;
  h.at(1, 1) = 1.0;
  h.at(2, 2) = 2.0;
  Matrix p(3, 2);
  p.setZero();
  p(1, 0) = 1;
  p(2, 1) = 1;
  Tensor pt = from_matrix(p);
  auto r = eig_smallest(h, nullptr, &pt);
  EXPECT_NEAR(r.value, 1.0, 1e-12);
  EXPECT_NEAR(std::abs(r.vector[0]), 0.0, 1e-12);
}

TEST(EigSmallest, LanczosAgreesWithDense) {
  Matrix h = oracle::random_hermitian(80, 61);
  EigOptions opts;
  opts.dense_threshold = 4;  // force the iterative path
  auto it = eig_smallest(from_matrix(h), nullptr, nullptr, opts);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  EXPECT_NEAR(it.value, es.eigenvalues()(0), 1e-9);
  Vector x = as_vector(it.vector);
  EXPECT_LE((h * x - it.value * x).norm(), 1e-8 * x.norm());
}

TEST(EigSmallest, IndefiniteMetricRejected) {
  Matrix n = Matrix::Identity(4, 4);
  n(3, 3) = -1;
  Tensor nt = from_matrix(n);
  Tensor h = from_matrix(oracle::random_hermitian(4, 71));
  EXPECT_THROW(eig_smallest(h, &nt), ConditioningError);
}

TEST(SolveHermitian, IdentityAndScaling) {
  Tensor id = Tensor::identity(6);
  Tensor b = oracle::random_tensor({6}, 81);
  Tensor x = solve_hermitian(id, b);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(std::abs(x[i] - b[i]), 0.0, 1e-12);
  Tensor two = from_matrix(2.0 * Matrix::Identity(6, 6));
  Tensor y = solve_hermitian(two, b);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(std::abs(y[i] - 0.5 * b[i]), 0.0, 1e-12);
}

TEST(SolveHermitian, RandomSpdMatchesDirectFactorization) {
  Matrix a = oracle::random_spd(16, 91);
  Vector b = oracle::random_matrix(16, 1, 92).col(0);
  Tensor x = solve_hermitian(from_matrix(a), from_vector(b));
  Vector ref = Eigen::LLT<Matrix>(a).solve(b);
  EXPECT_LE((as_vector(x) - ref).norm(), 1e-10 * ref.norm());
}

TEST(SolveHermitian, SingularSystemThrows) {
  Matrix a = Matrix::Zero(4, 4);
  a(0, 0) = 1;
  Vector b = Vector::Zero(4);
  b(3) = 1;  // unreachable by the range of a
  EXPECT_THROW(solve_hermitian(from_matrix(a), from_vector(b)), SingularSystemError);
}

TEST(SeedFanOut, Deterministic) {
  EXPECT_EQ(derive_seed(42, 1), derive_seed(42, 1));
  EXPECT_NE(derive_seed(42, 1), derive_seed(42, 2));
  EXPECT_NE(derive_seed(42, 1), derive_seed(43, 1));
}

}  // namespace
