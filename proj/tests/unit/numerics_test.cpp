#include <cmath>

#include <gtest/gtest.h>

#include "mvge/errors.hpp"
#include "mvge/numerics.hpp"
#include "test_util.hpp"

namespace mvge {
namespace {

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(rows.size(), rows.begin()->size());
  Eigen::Index i = 0;
  for (auto r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

// Central difference of f at x, entry by entry.
template <class F>
Matrix numeric_grad(F f, Matrix x, double eps = 1e-6) {
  Matrix g(x.rows(), x.cols());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double o = x.data()[k];
    x.data()[k] = o + eps;
    const double fp = f(x);
    x.data()[k] = o - eps;
    const double fm = f(x);
    x.data()[k] = o;
    g.data()[k] = (fp - fm) / (2 * eps);
  }
  return g;
}

void expect_close(const Matrix& a, const Matrix& b, double tol) {
  ASSERT_EQ(a.rows(), b.rows());
  ASSERT_EQ(a.cols(), b.cols());
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const double x = a.data()[k], y = b.data()[k];
    EXPECT_LE(std::abs(x - y) / std::max(1e-8, std::abs(x) + std::abs(y)), tol) << x << " vs " << y;
  }
}

TEST(Matmul, Examples) {
  const Matrix a = mat({{1, 2}, {3, 4}});
  EXPECT_EQ(matmul(a, Matrix::Identity(2, 2)), a);
  EXPECT_EQ(matmul(a, mat({{1}, {1}})), mat({{3}, {7}}));
  EXPECT_THROW(matmul(a, Matrix::Ones(3, 1)), ValidationError);
}

TEST(Matmul, GradientOfSumIsOnesTimesBTransposed) {
  const Matrix a = Matrix::Random(3, 4), b = Matrix::Random(4, 2);
  const auto g = matmul_backward(a, b, Matrix::Ones(3, 2));
  EXPECT_TRUE(g.d_a.isApprox(Matrix::Ones(3, 2) * b.transpose()));
  const auto num = numeric_grad([&](const Matrix& x) { return matmul(x, b).sum(); }, a);
  expect_close(g.d_a, num, 1e-7);
  const Matrix w = Matrix::Random(3, 2);
  const auto nb = numeric_grad([&](const Matrix& x) { return matmul(a, x).cwiseProduct(w).sum(); }, b);
  expect_close(matmul_backward(a, b, w).d_b, nb, 1e-7);
}

TEST(Spmm, Examples) {
  const auto s = normalized_adjacency(testing::path_graph(2));
  EXPECT_EQ(spmm(s, mat({{1}, {3}})), mat({{2}, {2}}));
  const auto iso = normalized_adjacency(Graph(3));
  const Matrix x = Matrix::Random(3, 2);
  EXPECT_EQ(spmm(iso, x), x);
  EXPECT_THROW(spmm(s, Matrix::Ones(3, 1)), ValidationError);
}

TEST(Spmm, BackwardMatchesFiniteDifference) {
  Rng rng(1);
  const auto s = normalized_adjacency(testing::random_graph(12, 0.3, rng));
  const Matrix w = Matrix::Random(12, 3);
  const auto num = numeric_grad([&](const Matrix& x) { return spmm(s, x).cwiseProduct(w).sum(); },
                                Matrix::Random(12, 3));
  expect_close(spmm_backward(s, w), num, 1e-7);
}

TEST(Activations, Examples) {
  EXPECT_EQ(softmax_rows(mat({{0, 0}})), mat({{0.5, 0.5}}));
  EXPECT_EQ(sigmoid(mat({{0}}))(0, 0), 0.5);
  const Matrix p = softmax_rows(mat({{1, 2, 3}}));
  EXPECT_NEAR(p(0, 0), 0.0900, 1e-4);
  EXPECT_NEAR(p(0, 1), 0.2447, 1e-4);
  EXPECT_NEAR(p(0, 2), 0.6652, 1e-4);
  EXPECT_EQ(relu(mat({{-1, 0, 2}})), mat({{0, 0, 2}}));
  EXPECT_NEAR(softplus(800.0), 800.0, 1e-12);
  EXPECT_NEAR(softplus(-800.0), 0.0, 1e-300);
  EXPECT_TRUE(std::isfinite(sigmoid(mat({{-1000, 1000}})).sum()));
}

TEST(Activations, SoftmaxRowsAreDistributions) {
  const Matrix x = Matrix::Random(20, 7) * 50.0;
  const Matrix p = softmax_rows(x);
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    EXPECT_NEAR(p.row(i).sum(), 1.0, 1e-12);
    EXPECT_GT(p.row(i).minCoeff(), 0.0);
  }
  EXPECT_TRUE(log_softmax_rows(x).array().exp().matrix().isApprox(p, 1e-12));
}

TEST(Activations, BackwardRulesMatchFiniteDifference) {
  Matrix x = Matrix::Random(5, 4);
  x = (x.array().abs() < 0.05).select(0.3, x);  // keep away from the relu kink
  const Matrix w = Matrix::Random(5, 4);
  auto dot = [&](const Matrix& m) { return m.cwiseProduct(w).sum(); };
  expect_close(relu_backward(x, w), numeric_grad([&](const Matrix& z) { return dot(relu(z)); }, x), 1e-7);
  expect_close(sigmoid_backward(sigmoid(x), w),
               numeric_grad([&](const Matrix& z) { return dot(sigmoid(z)); }, x), 1e-7);
  expect_close(softmax_rows_backward(softmax_rows(x), w),
               numeric_grad([&](const Matrix& z) { return dot(softmax_rows(z)); }, x), 1e-6);
  const Matrix b = Matrix::Random(5, 3);
  const Matrix wc = Matrix::Random(5, 7);
  const Matrix c = concat_cols(x, b);
  EXPECT_EQ(c.leftCols(4), x);
  EXPECT_EQ(c.rightCols(3), b);
  const auto [dl, dr] = split_cols(wc, 4);
  EXPECT_EQ(dl, wc.leftCols(4));
  EXPECT_EQ(dr, wc.rightCols(3));
  EXPECT_THROW(concat_cols(x, Matrix::Ones(2, 2)), ValidationError);
  EXPECT_EQ(column_sums(mat({{1, 2}, {3, 4}})), mat({{4, 6}}));
  EXPECT_EQ(add_row_bias(mat({{1, 2}, {3, 4}}), mat({{10, 20}})), mat({{11, 22}, {13, 24}}));
}

TEST(Glorot, BoundsAndDeterminism) {
  Param a("w", 30, 20), b("w", 30, 20);
  Rng r1(9), r2(9);
  glorot_uniform(a, r1);
  glorot_uniform(b, r2);
  EXPECT_EQ(a.value, b.value);
  const double bound = std::sqrt(6.0 / 50.0);
  EXPECT_LE(a.value.cwiseAbs().maxCoeff(), bound);
  EXPECT_GT(a.value.cwiseAbs().maxCoeff(), 0.8 * bound);
}

TEST(Adam, ZeroGradientLeavesParamsUnchanged) {
  Param p("w", 2, 3);
  p.value = Matrix::Random(2, 3);
  const Matrix before = p.value;
  Adam opt;
  Param* ps[] = {&p};
  opt.step(ps);
  EXPECT_EQ(p.value, before);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  // One step with bias correction: m_hat = g, v_hat = g^2, update = lr*g/(|g|+eps).
  Param p("w", 1, 3);
  p.grad = mat({{0.5, -2.0, 1e-3}});
  Adam opt(AdamOptions{0.01});
  Param* ps[] = {&p};
  opt.step(ps);
  EXPECT_NEAR(p.value(0, 0), -0.01 * 0.5 / (0.5 + 1e-8), 1e-15);
  EXPECT_NEAR(p.value(0, 1), 0.01 * 2.0 / (2.0 + 1e-8), 1e-15);
  EXPECT_NEAR(p.value(0, 2), -0.01 * 1e-3 / (1e-3 + 1e-8), 1e-15);
  EXPECT_EQ(p.grad, Matrix::Zero(1, 3));
  EXPECT_EQ(opt.steps(), 1);
}

TEST(Adam, MatchesReferenceRecurrence) {
  // Scalar reference Adam on f(w) = (w - 3)^2.
  double w_ref = 0.0, m = 0.0, v = 0.0;
  Param p("w", 1, 1);
  Adam opt(AdamOptions{0.1});
  Param* ps[] = {&p};
  for (int t = 1; t <= 50; ++t) {
    const double g = 2 * (w_ref - 3);
    m = 0.9 * m + 0.1 * g;
    v = 0.999 * v + 0.001 * g * g;
    w_ref -= 0.1 * (m / (1 - std::pow(0.9, t))) / (std::sqrt(v / (1 - std::pow(0.999, t))) + 1e-8);
    p.grad(0, 0) = 2 * (p.value(0, 0) - 3);
    opt.step(ps);
    EXPECT_NEAR(p.value(0, 0), w_ref, 1e-12);
  }
}

TEST(GradCheck, QuadraticLoss) {
  Param p("w", 4, 5);
  Rng rng(2);
  glorot_uniform(p, rng);
  p.grad = p.value;  // d/dW of 0.5 * ||W||^2
  Param* ps[] = {&p};
  const auto res = grad_check([&] { return 0.5 * p.value.squaredNorm(); }, ps);
  EXPECT_LT(res.max_relative_error, 1e-7);
  EXPECT_EQ(res.checked, 20u);
  EXPECT_TRUE(res.passed);
}

TEST(GradCheck, DetectsWrongGradient) {
  Param p("w", 2, 2);
  p.value = mat({{1, 2}, {3, 4}});
  p.grad = 1.1 * p.value;
  Param* ps[] = {&p};
  const auto res = grad_check([&] { return 0.5 * p.value.squaredNorm(); }, ps);
  EXPECT_FALSE(res.passed);
  EXPECT_EQ(res.worst_param, "w");
}

TEST(GradCheck, SkipsReluKinks) {
  Param p("w", 1, 2);
  p.value = mat({{0.0, 1.0}});
  p.grad = mat({{0.0, 1.0}});  // subgradient 0 at the kink
  Param* ps[] = {&p};
  const auto res = grad_check([&] { return relu(p.value).sum(); }, ps);
  EXPECT_EQ(res.skipped_kinks, 1u);
  EXPECT_EQ(res.checked, 1u);
  EXPECT_TRUE(res.passed);
}

TEST(GradCheck, NonFiniteLossThrows) {
  Param p("w", 1, 1);
  Param* ps[] = {&p};
  EXPECT_THROW(grad_check([] { return std::nan(""); }, ps), NumericalError);
}

TEST(GradCheck, SamplesAtMostRequestedEntries) {
  Param p("w", 20, 20);
  p.value = Matrix::Random(20, 20);
  p.grad = p.value;
  Param* ps[] = {&p};
  GradCheckOptions o;
  o.max_entries_per_param = 10;
  EXPECT_EQ(grad_check([&] { return 0.5 * p.value.squaredNorm(); }, ps, o).checked, 10u);
}

}  // namespace
}  // namespace mvge
