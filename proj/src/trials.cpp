#include "xsl/trials.hpp"

#include <omp.h>

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <cstdio>
#include <exception>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "xsl/error.hpp"
#include "xsl/inventory.hpp"

namespace xsl {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// Sum of values in ascending order, carried in extended precision so that a
// run of identical accuracies averages back to exactly that accuracy.
long double sorted_sum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  long double s = 0.0L;
  for (double v : values) s += v;
  return s;
}

}  // namespace

TrialResult score_predictions(const SplitManifest& manifest, const Predictions& predictions,
                              const Inventory& truth) {
  std::unordered_map<std::string_view, const Instance*> idx;
  idx.reserve(truth.size());
  for (const auto& i : truth.instances) idx.emplace(i.id, &i);
  const std::unordered_set<std::string> actions(manifest.design.roles.actions.begin(),
                                                manifest.design.roles.actions.end());

  TrialResult out;
  out.trial_seed = manifest.design.seed;
  for (const auto& item : manifest.test) {
    const auto p = predictions.find(item.id);
    if (p == predictions.end()) throw Error(ErrorKind::learner, "missing prediction for test id '" + item.id + "'");
    if (!actions.count(p->second)) {
      throw Error(ErrorKind::learner, "prediction for '" + item.id + "' has unknown action '" + p->second + "'");
    }
    const auto t = idx.find(item.id);
    if (t == idx.end()) throw Error(ErrorKind::format, "test id '" + item.id + "' is not in the inventory");
    auto& tally = out.per_type[item.type];
    ++tally.total;
    if (t->second->action == p->second) ++tally.correct;
  }
  return out;
}

double t_quantile_975(std::size_t df) {
  if (df == 0) throw Error(ErrorKind::design, "t quantile needs df >= 1");
  const boost::math::students_t dist(static_cast<double>(df));
  return boost::math::quantile(dist, 0.975);
}

AggregateReport aggregate(std::span<const TrialResult> results) {
  if (results.empty()) throw Error(ErrorKind::design, "cannot aggregate zero trials");
  std::vector<TestType> types;
  for (const auto& [t, _] : results.front().per_type) types.push_back(t);
  for (const auto& r : results) {
    std::vector<TestType> mine;
    for (const auto& [t, _] : r.per_type) mine.push_back(t);
    if (mine != types) {
      throw Error(ErrorKind::design, "trial " + std::to_string(r.trial_seed) + " reports a different set of test types");
    }
  }

  AggregateReport out;
  const auto n = results.size();
  for (auto t : types) {
    std::vector<double> acc;
    for (const auto& r : results) acc.push_back(r.per_type.at(t).accuracy());
    TypeSummary s;
    s.n_trials = n;
    const long double mean = sorted_sum(acc) / static_cast<long double>(n);
    s.mean = static_cast<double>(mean);
    if (n >= 2) {
      std::vector<double> sq;
      for (double a : acc) sq.push_back(static_cast<double>((a - mean) * (a - mean)));
      const double var = static_cast<double>(sorted_sum(std::move(sq)) / static_cast<long double>(n - 1));
      s.half_width_95 = var == 0.0 ? 0.0 : t_quantile_975(n - 1) * std::sqrt(var) / std::sqrt(static_cast<double>(n));
    }
    out.per_type.emplace(t, s);
  }
  return out;
}

RunOutcome run_trials(const Inventory& inv, const CoocMatrix& m, const DesignSpec& spec, const Learner& learner,
                      const FeatureTable& features, std::size_t num_trials, ExecPolicy policy) {
  if (num_trials == 0) throw Error(ErrorKind::config, "need at least one trial");
  const auto digest = inventory_digest(inv);

  std::vector<TrialResult> results(num_trials);
  std::vector<std::exception_ptr> errors(num_trials);
  auto one_trial = [&](std::size_t i) {
    try {
      DesignSpec trial = spec;
      trial.seed = spec.seed + i;
      const auto roles = assign_roles(m, trial);
      const auto sample = sample_training_set(m, roles, trial);
      const auto manifest = generate_splits(m, roles, sample, trial, digest);
      const auto predictions = learner.predict(manifest, features, inv);
      results[i] = score_predictions(manifest, predictions, inv);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  const auto n = static_cast<std::ptrdiff_t>(num_trials);
  if (policy == ExecPolicy::parallel && learner.concurrent_safe()) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) one_trial(static_cast<std::size_t>(i));
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) one_trial(static_cast<std::size_t>(i));
  }

  for (std::size_t i = 0; i < num_trials; ++i) {
    if (!errors[i]) continue;
    const auto prefix = "trial " + std::to_string(i) + " (seed " + std::to_string(spec.seed + i) + "): ";
    try {
      std::rethrow_exception(errors[i]);
    } catch (const Error& e) {
      throw Error(e.kind(), prefix + e.what());
    } catch (const std::exception& e) {
      throw Error(ErrorKind::learner, prefix + e.what());
    }
  }

  RunOutcome out;
  out.report = aggregate(results);
  out.report.num_common = spec.num_common;
  out.report.num_unique_per_action = spec.num_unique_per_action;
  out.report.total_train = spec.total_train;
  out.report.num_actions = resolve_actions(m, spec).size();
  out.trials = std::move(results);
  return out;
}

std::vector<GridCell> run_grid(const Inventory& inv, const CoocMatrix& m, const DesignSpec& base,
                               const GridAxes& axes, const Learner& learner, const FeatureTable& features,
                               std::size_t num_trials, ExecPolicy policy) {
  std::vector<GridCell> out;
  for (auto c : axes.c_values) {
    for (auto u : axes.u_values) {
      for (auto n : axes.n_values) {
        GridCell cell{c, u, n, std::nullopt, {}};
        DesignSpec spec = base;
        spec.num_common = c;
        spec.num_unique_per_action = u;
        spec.total_train = n;
        try {
          cell.report = run_trials(inv, m, spec, learner, features, num_trials, policy).report;
        } catch (const Error& e) {
          cell.error = e.what();
        }
        out.push_back(std::move(cell));
      }
    }
  }
  return out;
}

std::string plot_csv_header() { return "c,u,N,test_type,mean,ci_half_width,n_trials\n"; }

std::string plot_csv_rows(const AggregateReport& r) {
  std::string out;
  const auto prefix = std::to_string(r.num_common) + "," + std::to_string(r.num_unique_per_action) + "," +
                      std::to_string(r.total_train) + ",";
  for (const auto& [type, s] : r.per_type) {
    out += prefix + to_string(type) + "," + fixed6(s.mean) + "," +
           (s.half_width_95 ? fixed6(*s.half_width_95) : std::string("NA")) + "," + std::to_string(s.n_trials) + "\n";
  }
  return out;
}

std::string grid_csv(const std::vector<GridCell>& grid) {
  std::string out = plot_csv_header();
  for (const auto& cell : grid) {
    if (cell.report) {
      out += plot_csv_rows(*cell.report);
    } else {
      out += std::to_string(cell.num_common) + "," + std::to_string(cell.num_unique_per_action) + "," +
             std::to_string(cell.total_train) + ",failed,NA,NA,0\n";
    }
  }
  return out;
}

std::string write_report(const RunOutcome& outcome, const std::string& learner_name) {
  const auto& r = outcome.report;
  ordered_json doc;
  doc["config"] = {{"c", r.num_common},
                   {"u", r.num_unique_per_action},
                   {"N", r.total_train},
                   {"num_actions", r.num_actions},
                   {"trials", outcome.trials.size()},
                   {"learner", learner_name}};
  ordered_json per_type = ordered_json::object();
  for (const auto& [type, s] : r.per_type) {
    ordered_json e;
    e["mean"] = s.mean;
    e["ci_half_width"] = s.half_width_95 ? ordered_json(*s.half_width_95) : ordered_json(nullptr);
    e["n_trials"] = s.n_trials;
    per_type[to_string(type)] = e;
  }
  doc["per_type"] = per_type;
  ordered_json trials = ordered_json::array();
  for (const auto& t : outcome.trials) {
    ordered_json tt = ordered_json::object();
    for (const auto& [type, tally] : t.per_type) {
      tt[to_string(type)] = {{"correct", tally.correct}, {"total", tally.total}, {"accuracy", tally.accuracy()}};
    }
    trials.push_back({{"trial_seed", t.trial_seed}, {"per_type", tt}});
  }
  doc["trials"] = trials;
  return doc.dump(2) + "\n";
}

std::string write_learner_results(const LearnerResults& results) {
  ordered_json preds = ordered_json::array();
  for (const auto& [id, action] : results.predictions) preds.push_back({{"id", id}, {"action", action}});
  ordered_json doc;
  doc["trial_seed"] = results.trial_seed;
  doc["predictions"] = preds;
  return doc.dump(1) + "\n";
}

LearnerResults read_learner_results(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::learner, std::string("results file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::learner, "results file is not an object");
  if (!doc.contains("trial_seed") || !doc["trial_seed"].is_number_unsigned()) {
    throw Error(ErrorKind::learner, "results file needs an unsigned 'trial_seed'");
  }
  if (!doc.contains("predictions") || !doc["predictions"].is_array()) {
    throw Error(ErrorKind::learner, "results file needs a 'predictions' array");
  }
  LearnerResults out;
  out.trial_seed = doc["trial_seed"].get<std::uint64_t>();
  for (const auto& p : doc["predictions"]) {
    if (!p.is_object() || !p.contains("id") || !p.contains("action") || !p["id"].is_string() ||
        !p["action"].is_string()) {
      throw Error(ErrorKind::learner, "each prediction needs string 'id' and 'action'");
    }
    if (!out.predictions.emplace(p["id"].get<std::string>(), p["action"].get<std::string>()).second) {
      throw Error(ErrorKind::learner, "duplicate prediction for '" + p["id"].get<std::string>() + "'");
    }
  }
  return out;
}

}  // namespace xsl
