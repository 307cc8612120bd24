#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mvge/graph.hpp"
#include "mvge/matrix.hpp"
#include "mvge/rng.hpp"

namespace mvge {

// Layer primitives. Every forward op has a matching *_backward that maps the
// upstream gradient to the gradient of its inputs.

Matrix matmul(const Matrix& a, const Matrix& b);
struct MatmulGrad {
  Matrix d_a;
  Matrix d_b;
};
// dA = dC * B^T, dB = A^T * dC
MatmulGrad matmul_backward(const Matrix& a, const Matrix& b, const Matrix& d_c);

// Y[v] = sum_u w(v,u) X[u]
Matrix spmm(const NormalizedAdjacency& s, const Matrix& x);
// S is symmetric, so dX = S^T dY = S dY.
Matrix spmm_backward(const NormalizedAdjacency& s, const Matrix& d_y);

Matrix relu(const Matrix& x);
Matrix relu_backward(const Matrix& x, const Matrix& d_y);

Matrix sigmoid(const Matrix& x);
Matrix sigmoid_backward(const Matrix& y, const Matrix& d_y);

Matrix softmax_rows(const Matrix& x);
Matrix log_softmax_rows(const Matrix& x);
Matrix softmax_rows_backward(const Matrix& y, const Matrix& d_y);

Matrix concat_cols(const Matrix& a, const Matrix& b);
std::pair<Matrix, Matrix> split_cols(const Matrix& d, Eigen::Index left_cols);

Matrix add_row_bias(Matrix x, const Matrix& bias);  // bias is 1 x cols
Matrix column_sums(const Matrix& x);                // 1 x cols

// log(1 + exp(x)) without overflow.
double softplus(double x);

struct Param {
  std::string name;
  Matrix value;
  Matrix grad;

  Param() = default;
  Param(std::string n, Eigen::Index rows, Eigen::Index cols)
      : name(std::move(n)), value(Matrix::Zero(rows, cols)), grad(Matrix::Zero(rows, cols)) {}
  void zero_grad() { grad.setZero(); }
};

// Uniform in +-sqrt(6 / (fan_in + fan_out)).
void glorot_uniform(Param& p, Rng& rng);

struct AdamOptions {
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam with bias correction. Moment buffers are bound to the parameter order
/// of the first step() call. Gradients are zeroed after each update.
class Adam {
 public:
  explicit Adam(AdamOptions opts = {}) : opts_(opts) {}

  void step(std::span<Param* const> params);
  std::int64_t steps() const { return t_; }
  const AdamOptions& options() const { return opts_; }

 private:
  AdamOptions opts_;
  std::int64_t t_ = 0;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
};

struct GradCheckOptions {
  double epsilon = 1e-5;
  double tolerance = 1e-4;
  std::size_t max_entries_per_param = 64;  // sampled without replacement
  std::uint64_t seed = 0;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_param;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t checked = 0;
  std::size_t skipped_kinks = 0;
  bool passed = false;
};

/// Compares the gradients already stored in `params` against central
/// differences of `loss`. Entries where the one-sided slopes disagree (a relu
/// kink inside the stencil) are skipped. Throws NumericalError if `loss`
/// returns a non-finite value.
GradCheckResult grad_check(const std::function<double()>& loss,
                           std::span<Param* const> params, const GradCheckOptions& opts = {});

}  // namespace mvge
