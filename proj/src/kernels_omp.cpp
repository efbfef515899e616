#include <omp.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "xsl/kernels.hpp"

namespace xsl::kernels {

double softmax_loss_grad_omp(const SoftmaxProblem& p, std::span<const double> weights,
                             std::span<const double> bias, std::span<double> grad_w,
                             std::span<double> grad_b) {
  const auto n = static_cast<std::ptrdiff_t>(p.n);
  const auto classes = p.classes;
  const auto dim = p.dim;
  std::vector<double> residual(p.n * classes);
  std::vector<double> inst_loss(p.n);

#pragma omp parallel
  {
    std::vector<double> logits(classes);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const double* x = p.features.data() + i * dim;
      for (std::size_t k = 0; k < classes; ++k) {
        double z = bias[k];
        const double* w = weights.data() + k * dim;
        for (std::size_t d = 0; d < dim; ++d) z += w[d] * x[d];
        logits[k] = z;
      }
      const double zmax = *std::max_element(logits.begin(), logits.end());
      double sum = 0.0;
      for (std::size_t k = 0; k < classes; ++k) sum += std::exp(logits[k] - zmax);
      const double lse = zmax + std::log(sum);
      inst_loss[i] = lse - logits[p.labels[i]];
      double* r = residual.data() + i * classes;
      for (std::size_t k = 0; k < classes; ++k) {
        r[k] = std::exp(logits[k] - lse) - (k == p.labels[i] ? 1.0 : 0.0);
      }
    }
  }

  // Reduce each entry over instances in index order to match the reference.
  const double inv_n = p.n == 0 ? 0.0 : 1.0 / static_cast<double>(p.n);
  const auto entries = static_cast<std::ptrdiff_t>(classes * (dim + 1));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t e = 0; e < entries; ++e) {
    const auto k = static_cast<std::size_t>(e) / (dim + 1);
    const auto d = static_cast<std::size_t>(e) % (dim + 1);
    double acc = 0.0;
    if (d == dim) {
      for (std::size_t i = 0; i < p.n; ++i) acc += residual[i * classes + k];
      grad_b[k] = acc * inv_n;
    } else {
      for (std::size_t i = 0; i < p.n; ++i) acc += residual[i * classes + k] * p.features[i * dim + d];
      grad_w[k * dim + d] = acc * inv_n;
    }
  }

  double loss = 0.0;
  for (double l : inst_loss) loss += l;
  return loss * inv_n;
}

void predict_argmax_omp(std::span<const double> features, std::size_t n, std::size_t dim, std::size_t classes,
                        std::span<const double> weights, std::span<const double> bias, std::span<std::size_t> out) {
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
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
