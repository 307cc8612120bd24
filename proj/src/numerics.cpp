#include "mvge/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mvge/errors.hpp"

namespace mvge {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), "matmul: dimension mismatch " + shape(a) + " * " + shape(b));
  return a * b;
}

MatmulGrad matmul_backward(const Matrix& a, const Matrix& b, const Matrix& d_c) {
  require(d_c.rows() == a.rows() && d_c.cols() == b.cols(), "matmul_backward: bad upstream shape");
  return {d_c * b.transpose(), a.transpose() * d_c};
}

Matrix spmm(const NormalizedAdjacency& s, const Matrix& x) {
  require(static_cast<Eigen::Index>(s.n) == x.rows(),
          "spmm: operator has " + std::to_string(s.n) + " columns, input " + shape(x));
  Matrix y = Matrix::Zero(x.rows(), x.cols());
  for (std::size_t v = 0; v < s.n; ++v) {
    auto row = y.row(static_cast<Eigen::Index>(v));
    for (std::size_t k = s.offsets[v]; k < s.offsets[v + 1]; ++k) {
      row.noalias() += s.weights[k] * x.row(static_cast<Eigen::Index>(s.cols[k]));
    }
  }
  return y;
}

Matrix spmm_backward(const NormalizedAdjacency& s, const Matrix& d_y) { return spmm(s, d_y); }

Matrix relu(const Matrix& x) { return x.cwiseMax(0.0); }

Matrix relu_backward(const Matrix& x, const Matrix& d_y) {
  return (x.array() > 0.0).select(d_y, Matrix::Zero(d_y.rows(), d_y.cols()));
}

Matrix sigmoid(const Matrix& x) {
  return x.unaryExpr([](double v) {
    if (v >= 0) return 1.0 / (1.0 + std::exp(-v));
    const double e = std::exp(v);
    return e / (1.0 + e);
  });
}

Matrix sigmoid_backward(const Matrix& y, const Matrix& d_y) {
  return (d_y.array() * y.array() * (1.0 - y.array())).matrix();
}

Matrix log_softmax_rows(const Matrix& x) {
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double mx = x.row(i).maxCoeff();
    const double lse = mx + std::log((x.row(i).array() - mx).exp().sum());
    out.row(i) = x.row(i).array() - lse;
  }
  return out;
}

Matrix softmax_rows(const Matrix& x) {
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double mx = x.row(i).maxCoeff();
    out.row(i) = (x.row(i).array() - mx).exp();
    out.row(i) /= out.row(i).sum();
  }
  return out;
}

Matrix softmax_rows_backward(const Matrix& y, const Matrix& d_y) {
  Matrix out(y.rows(), y.cols());
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    const double dot = y.row(i).dot(d_y.row(i));
    out.row(i) = y.row(i).array() * (d_y.row(i).array() - dot);
  }
  return out;
}

Matrix concat_cols(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows(), "concat_cols: row mismatch " + shape(a) + " | " + shape(b));
  Matrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

std::pair<Matrix, Matrix> split_cols(const Matrix& d, Eigen::Index left_cols) {
  require(left_cols >= 0 && left_cols <= d.cols(), "split_cols: bad split");
  return {d.leftCols(left_cols), d.rightCols(d.cols() - left_cols)};
}

Matrix add_row_bias(Matrix x, const Matrix& bias) {
  require(bias.rows() == 1 && bias.cols() == x.cols(), "add_row_bias: shape mismatch");
  x.rowwise() += bias.row(0);
  return x;
}

Matrix column_sums(const Matrix& x) { return x.colwise().sum(); }

double softplus(double x) {
  if (x > 0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

void glorot_uniform(Param& p, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(p.value.rows() + p.value.cols()));
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (Eigen::Index i = 0; i < p.value.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.value.cols(); ++j) p.value(i, j) = dist(rng);
  }
}

void Adam::step(std::span<Param* const> params) {
  if (m_.empty()) {
    for (const Param* p : params) {
      m_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
      v_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
    }
  }
  require(m_.size() == params.size(), "adam: parameter set changed between steps");
  ++t_;
  const double bc1 = 1.0 - std::pow(opts_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(opts_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Param& p = *params[i];
    m_[i] = opts_.beta1 * m_[i] + (1.0 - opts_.beta1) * p.grad;
    v_[i] = opts_.beta2 * v_[i] + (1.0 - opts_.beta2) * p.grad.cwiseProduct(p.grad);
    p.value.array() -= opts_.lr * (m_[i].array() / bc1) /
                       ((v_[i].array() / bc2).sqrt() + opts_.epsilon);
    p.zero_grad();
  }
}

GradCheckResult grad_check(const std::function<double()>& loss, std::span<Param* const> params,
                           const GradCheckOptions& opts) {
  auto eval = [&] {
    const double f = loss();
    if (!std::isfinite(f)) throw NumericalError("grad_check: non-finite loss");
    return f;
  };
  Rng rng = make_rng(opts.seed, Stream::kGradCheck);
  GradCheckResult res;
  const double f0 = eval();
  for (Param* p : params) {
    const auto total = static_cast<std::size_t>(p->value.size());
    std::vector<std::size_t> idx(total);
    std::iota(idx.begin(), idx.end(), 0);
    if (total > opts.max_entries_per_param) {
      std::shuffle(idx.begin(), idx.end(), rng);
      idx.resize(opts.max_entries_per_param);
      std::sort(idx.begin(), idx.end());
    }
    for (std::size_t k : idx) {
      double& w = p->value.data()[k];
      const double orig = w;
      w = orig + opts.epsilon;
      const double fp = eval();
      w = orig - opts.epsilon;
      const double fm = eval();
      w = orig;
      const double fwd = (fp - f0) / opts.epsilon;
      const double bwd = (f0 - fm) / opts.epsilon;
      if (std::abs(fwd - bwd) > 1e-2 * std::max({1e-3, std::abs(fwd), std::abs(bwd)})) {
        ++res.skipped_kinks;
        continue;
      }
      const double numeric = (fp - fm) / (2.0 * opts.epsilon);
      const double analytic = p->grad.data()[k];
      const double rel = std::abs(analytic - numeric) /
                         std::max(1e-8, std::abs(analytic) + std::abs(numeric));
      ++res.checked;
      if (rel > res.max_relative_error) {
        res.max_relative_error = rel;
        res.worst_param = p->name;
        res.worst_analytic = analytic;
        res.worst_numeric = numeric;
      }
    }
  }
  res.passed = res.max_relative_error < opts.tolerance;
  return res;
}

}  // namespace mvge
