#pragma once

#include <map>
#include <string>

#include "xsl/features.hpp"
#include "xsl/inventory.hpp"
#include "xsl/splits.hpp"

namespace xsl {

/// Test id -> predicted action label.
using Predictions = std::map<std::string, std::string>;

/// A learner trains on the manifest's train ids (labels in train_labels) and
/// predicts an action for every test id. `truth` is there for object labels
/// of test items; learners must not read test actions from it.
class Learner {
 public:
  virtual ~Learner() = default;

  virtual std::string name() const = 0;
  virtual Predictions predict(const SplitManifest& manifest, const FeatureTable& features,
                              const Inventory& truth) const = 0;
  /// False for learners that must not run in concurrent trials.
  virtual bool concurrent_safe() const { return true; }
};

}  // namespace xsl
