#pragma once

#include <cstddef>
#include <span>

namespace xsl {

enum class ExecPolicy { serial, parallel };

namespace kernels {

/// Row-major design matrix with integer class labels.
struct SoftmaxProblem {
  std::span<const double> features;  // n * dim
  std::span<const std::size_t> labels;
  std::size_t n = 0;
  std::size_t dim = 0;
  std::size_t classes = 0;
};

/// Mean softmax cross-entropy of a linear model (weights: classes * dim,
/// row-major; bias: classes) and its gradient, written into grad_w / grad_b.
///
/// The reference walks instances in order and accumulates into the gradient.
/// The OpenMP version computes per-instance residuals in parallel and then
/// reduces each gradient entry over instances in the same order, so both
/// return bit-identical results.
double softmax_loss_grad_serial(const SoftmaxProblem& p, std::span<const double> weights,
                                std::span<const double> bias, std::span<double> grad_w,
                                std::span<double> grad_b);
double softmax_loss_grad_omp(const SoftmaxProblem& p, std::span<const double> weights,
                             std::span<const double> bias, std::span<double> grad_w,
                             std::span<double> grad_b);

inline double softmax_loss_grad(ExecPolicy policy, const SoftmaxProblem& p, std::span<const double> weights,
                                std::span<const double> bias, std::span<double> grad_w, std::span<double> grad_b) {
  return policy == ExecPolicy::parallel ? softmax_loss_grad_omp(p, weights, bias, grad_w, grad_b)
                                        : softmax_loss_grad_serial(p, weights, bias, grad_w, grad_b);
}

/// argmax of bias + weights * x for each row, lowest class on ties.
void predict_argmax_serial(std::span<const double> features, std::size_t n, std::size_t dim, std::size_t classes,
                           std::span<const double> weights, std::span<const double> bias, std::span<std::size_t> out);
void predict_argmax_omp(std::span<const double> features, std::size_t n, std::size_t dim, std::size_t classes,
                        std::span<const double> weights, std::span<const double> bias, std::span<std::size_t> out);

inline void predict_argmax(ExecPolicy policy, std::span<const double> features, std::size_t n, std::size_t dim,
                           std::size_t classes, std::span<const double> weights, std::span<const double> bias,
                           std::span<std::size_t> out) {
  if (policy == ExecPolicy::parallel) predict_argmax_omp(features, n, dim, classes, weights, bias, out);
  else predict_argmax_serial(features, n, dim, classes, weights, bias, out);
}

}  // namespace kernels
}  // namespace xsl
