#include <algorithm>
#include <cmath>
#include <vector>

#include "xsl/kernels.hpp"

namespace xsl::kernels {

double softmax_loss_grad_serial(const SoftmaxProblem& p, std::span<const double> weights,
                                std::span<const double> bias, std::span<double> grad_w,
                                std::span<double> grad_b) {
  std::fill(grad_w.begin(), grad_w.end(), 0.0);
  std::fill(grad_b.begin(), grad_b.end(), 0.0);
  std::vector<double> logits(p.classes);
  double loss = 0.0;

  for (std::size_t i = 0; i < p.n; ++i) {
    const double* x = p.features.data() + i * p.dim;
    for (std::size_t k = 0; k < p.classes; ++k) {
      double z = bias[k];
      const double* w = weights.data() + k * p.dim;
      for (std::size_t d = 0; d < p.dim; ++d) z += w[d] * x[d];
      logits[k] = z;
    }
    const double zmax = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (std::size_t k = 0; k < p.classes; ++k) sum += std::exp(logits[k] - zmax);
    const double lse = zmax + std::log(sum);
    loss += lse - logits[p.labels[i]];

    for (std::size_t k = 0; k < p.classes; ++k) {
      const double r = std::exp(logits[k] - lse) - (k == p.labels[i] ? 1.0 : 0.0);
      double* g = grad_w.data() + k * p.dim;
      for (std::size_t d = 0; d < p.dim; ++d) g[d] += r * x[d];
      grad_b[k] += r;
    }
  }

  const double inv_n = p.n == 0 ? 0.0 : 1.0 / static_cast<double>(p.n);
  for (auto& g : grad_w) g *= inv_n;
  for (auto& g : grad_b) g *= inv_n;
  return loss * inv_n;
}

void predict_argmax_serial(std::span<const double> features, std::size_t n, std::size_t dim, std::size_t classes,
                           std::span<const double> weights, std::span<const double> bias, std::span<std::size_t> out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* x = features.data() + i * dim;
    std::size_t best = 0;
    double best_z = 0.0;
    for (std::size_t k = 0; k < classes; ++k) {
      double z = bias[k];
      const double* w = weights.data() + k * dim;
      for (std::size_t d = 0; d < dim; ++d) z += w[d] * x[d];
      if (k == 0 || z > best_z) {
        best = k;
        best_z = z;
      }
    }
    out[i] = best;
  }
}

}  // namespace xsl::kernels
