#include "xsl/simlearner.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <unordered_map>

#include "xsl/error.hpp"
#include "xsl/rng.hpp"

namespace xsl {
namespace {

std::string padded(std::size_t value, std::size_t width) {
  auto s = std::to_string(value);
  if (s.size() < width) s.insert(0, width - s.size(), '0');
  return s;
}

std::size_t digits(std::size_t n) { return n <= 1 ? 1 : std::to_string(n - 1).size(); }

using InstanceIndex = std::unordered_map<std::string_view, const Instance*>;

InstanceIndex index_instances(const Inventory& inv) {
  InstanceIndex idx;
  idx.reserve(inv.size());
  for (const auto& i : inv.instances) idx.emplace(i.id, &i);
  return idx;
}

const Instance& lookup(const InstanceIndex& idx, const std::string& id) {
  const auto it = idx.find(id);
  if (it == idx.end()) throw Error(ErrorKind::learner, "instance '" + id + "' is not in the inventory");
  return *it->second;
}

std::size_t class_of(const std::vector<std::string>& actions, const std::string& action) {
  for (std::size_t k = 0; k < actions.size(); ++k) {
    if (actions[k] == action) return k;
  }
  throw Error(ErrorKind::learner, "training label '" + action + "' is not a design action");
}

const std::string& train_label(const SplitManifest& m, const InstanceIndex& idx, const std::string& id) {
  const auto it = m.train_labels.find(id);
  return it != m.train_labels.end() ? it->second : lookup(idx, id).action;
}

}  // namespace

void SynthWorldConfig::validate() const {
  if (num_actions == 0 || num_objects == 0) throw Error(ErrorKind::config, "synthetic world needs dims >= 1");
  if (!(noise_sigma >= 0.0) || !(appearance_shift >= 0.0)) {
    throw Error(ErrorKind::config, "noise_sigma and appearance_shift must be >= 0");
  }
}

SynthWorld generate_world(const SynthWorldConfig& cfg) {
  cfg.validate();
  auto rng = make_rng(cfg.seed, Stream::world);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto na = cfg.num_actions;
  const auto no = cfg.num_objects;

  // Pair appearance vectors are drawn before any instance noise.
  std::vector<double> shift(no * na * na);
  for (auto& s : shift) s = normal(rng);

  std::vector<std::string> actions, objects;
  for (std::size_t a = 0; a < na; ++a) actions.push_back("a" + padded(a, digits(na)));
  for (std::size_t o = 0; o < no; ++o) objects.push_back("o" + padded(o, std::max<std::size_t>(2, digits(no))));

  SynthWorld world{{}, FeatureTable(cfg.object_dim() + cfg.action_dim())};
  std::vector<Instance> instances;
  instances.reserve(na * no * cfg.instances_per_cell);
  std::vector<double> feat(world.features.dim());
  const auto id_width = digits(cfg.instances_per_cell);

  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t o = 0; o < no; ++o) {
      const double* s = shift.data() + (o * na + a) * na;
      for (std::size_t k = 0; k < cfg.instances_per_cell; ++k) {
        std::fill(feat.begin(), feat.end(), 0.0);
        feat[o] = 1.0;
        for (std::size_t d = 0; d < na; ++d) {
          double v = (d == a ? 1.0 : 0.0) + cfg.appearance_shift * s[d];
          if (cfg.noise_sigma > 0.0) v += cfg.noise_sigma * normal(rng);
          feat[no + d] = v;
        }
        auto id = actions[a] + "-" + objects[o] + "-" + padded(k, std::max<std::size_t>(3, id_width));
        world.features.add(id, feat);
        instances.push_back(Instance{std::move(id), actions[a], objects[o], std::nullopt});
      }
    }
  }
  world.inventory = make_inventory(std::move(instances));
  return world;
}

Predictions MemorizerLearner::predict(const SplitManifest& manifest, const FeatureTable&,
                                      const Inventory& truth) const {
  const auto& actions = manifest.design.roles.actions;
  if (actions.empty()) throw Error(ErrorKind::learner, "manifest has no design actions");
  const auto idx = index_instances(truth);

  std::unordered_map<std::string, std::vector<std::size_t>> votes;  // object -> per-action counts
  for (const auto& id : manifest.train) {
    auto& v = votes[lookup(idx, id).object];
    v.resize(actions.size(), 0);
    ++v[class_of(actions, train_label(manifest, idx, id))];
  }
  std::unordered_map<std::string, std::size_t> table;
  for (const auto& [object, v] : votes) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < v.size(); ++k) {
      if (v[k] > v[best]) best = k;
    }
    table.emplace(object, best);
  }

  Predictions out;
  for (const auto& item : manifest.test) {
    const auto it = table.find(lookup(idx, item.id).object);
    out.emplace(item.id, actions[it == table.end() ? 0 : it->second]);
  }
  return out;
}

LinearModel train_linear(const kernels::SoftmaxProblem& problem, const LinearHyper& hyper, ExecPolicy policy) {
  if (problem.n == 0) throw Error(ErrorKind::learner, "linear learner needs a nonempty training set");
  LinearModel model;
  model.dim = problem.dim;
  model.classes = problem.classes;
  model.weights.assign(problem.classes * problem.dim, 0.0);
  model.bias.assign(problem.classes, 0.0);
  std::vector<double> grad_w(model.weights.size()), grad_b(model.bias.size());

  for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    const double loss = kernels::softmax_loss_grad(policy, problem, model.weights, model.bias, grad_w, grad_b);
    if (!std::isfinite(loss)) {
      throw Error(ErrorKind::learner, "linear learner loss became non-finite at epoch " + std::to_string(epoch) +
                                          " (learning rate too large?)");
    }
    model.loss_history.push_back(loss);
    for (std::size_t k = 0; k < model.weights.size(); ++k) model.weights[k] -= hyper.lr * grad_w[k];
    for (std::size_t k = 0; k < model.bias.size(); ++k) model.bias[k] -= hyper.lr * grad_b[k];
  }
  return model;
}

Predictions LinearLearner::predict(const SplitManifest& manifest, const FeatureTable& features,
                                   const Inventory& truth) const {
  const auto& actions = manifest.design.roles.actions;
  if (actions.empty()) throw Error(ErrorKind::learner, "manifest has no design actions");
  const auto idx = index_instances(truth);
  const auto dim = features.dim();

  std::vector<double> x;
  std::vector<std::size_t> y;
  x.reserve(manifest.train.size() * dim);
  for (const auto& id : manifest.train) {
    const auto row = features.row(id);
    x.insert(x.end(), row.begin(), row.end());
    y.push_back(class_of(actions, train_label(manifest, idx, id)));
  }
  const kernels::SoftmaxProblem problem{x, y, y.size(), dim, actions.size()};
  const auto model = train_linear(problem, hyper_, policy_);

  std::vector<double> tx;
  tx.reserve(manifest.test.size() * dim);
  for (const auto& item : manifest.test) {
    const auto row = features.row(item.id);
    tx.insert(tx.end(), row.begin(), row.end());
  }
  std::vector<std::size_t> cls(manifest.test.size());
  kernels::predict_argmax(policy_, tx, cls.size(), dim, actions.size(), model.weights, model.bias, cls);

  Predictions out;
  for (std::size_t i = 0; i < cls.size(); ++i) out.emplace(manifest.test[i].id, actions[cls[i]]);
  return out;
}

}  // namespace xsl
