#pragma once

#include <cstdint>
#include <vector>

#include "xsl/features.hpp"
#include "xsl/inventory.hpp"
#include "xsl/kernels.hpp"
#include "xsl/learner.hpp"

namespace xsl {

/// Desk-scale stand-in for video clips.
///
/// Feature of an instance with action a and object o:
///   one-hot(o)  ++  e_a + appearance_shift * s(o, a) + noise_sigma * n
/// where e_a is the a-th basis vector of the action block, s(o, a) is a fixed
/// standard-normal vector per (object, action) pair (how the action looks when
/// done to that object), and n is fresh standard-normal noise per instance.
struct SynthWorldConfig {
  std::size_t num_actions = 5;
  std::size_t num_objects = 30;
  std::size_t instances_per_cell = 100;
  double noise_sigma = 0.5;
  double appearance_shift = 0.5;
  std::uint64_t seed = 0;

  void validate() const;
  std::size_t object_dim() const noexcept { return num_objects; }
  std::size_t action_dim() const noexcept { return num_actions; }
};

struct SynthWorld {
  Inventory inventory;
  FeatureTable features;
};

/// Actions are labelled a0.., objects o00.., ids a<k>-o<jj>-<nnn>. Every
/// (action, object) cell gets instances_per_cell instances.
SynthWorld generate_world(const SynthWorldConfig& cfg);

/// Object -> majority training action (ties to the lower design index);
/// objects never seen in training get the first design action.
class MemorizerLearner final : public Learner {
 public:
  std::string name() const override { return "memorizer"; }
  Predictions predict(const SplitManifest& manifest, const FeatureTable& features,
                      const Inventory& truth) const override;
};

struct LinearHyper {
  double lr = 0.1;
  std::size_t epochs = 200;
};

struct LinearModel {
  std::size_t dim = 0;
  std::size_t classes = 0;
  std::vector<double> weights;  // classes * dim
  std::vector<double> bias;
  std::vector<double> loss_history;  // loss before each update
};

/// Full-batch gradient descent on mean softmax cross-entropy from zero
/// initialization. Throws Error(learner) if the loss becomes non-finite.
LinearModel train_linear(const kernels::SoftmaxProblem& problem, const LinearHyper& hyper,
                         ExecPolicy policy = ExecPolicy::serial);

/// Multinomial linear classifier over the feature table.
class LinearLearner final : public Learner {
 public:
  explicit LinearLearner(LinearHyper hyper = {}, ExecPolicy policy = ExecPolicy::serial)
      : hyper_(hyper), policy_(policy) {}

  std::string name() const override { return "linear"; }
  Predictions predict(const SplitManifest& manifest, const FeatureTable& features,
                      const Inventory& truth) const override;

 private:
  LinearHyper hyper_;
  ExecPolicy policy_;
};

}  // namespace xsl
