#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xsl/cooc.hpp"
#include "xsl/design.hpp"
#include "xsl/kernels.hpp"
#include "xsl/learner.hpp"
#include "xsl/splits.hpp"

namespace xsl {

struct TypeTally {
  std::uint64_t correct = 0;
  std::uint64_t total = 0;

  double accuracy() const noexcept {
    return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
  }
  bool operator==(const TypeTally&) const = default;
};

/// Only test types present in the manifest appear in per_type.
struct TrialResult {
  std::uint64_t trial_seed = 0;
  std::map<TestType, TypeTally> per_type;

  bool operator==(const TrialResult&) const = default;
};

/// Throws Error(learner) on a missing prediction or an action outside the
/// design, Error(format) if a test id is not in `truth`.
TrialResult score_predictions(const SplitManifest& manifest, const Predictions& predictions, const Inventory& truth);

struct TypeSummary {
  double mean = 0.0;
  std::optional<double> half_width_95;  // empty with a single trial
  std::size_t n_trials = 0;

  bool operator==(const TypeSummary&) const = default;
};

struct AggregateReport {
  std::map<TestType, TypeSummary> per_type;
  std::size_t num_common = 0;
  std::size_t num_unique_per_action = 0;
  std::uint64_t total_train = 0;
  std::size_t num_actions = 0;

  bool operator==(const AggregateReport&) const = default;
};

/// Two-sided 95% Student-t quantile, t(0.975, df).
double t_quantile_975(std::size_t df);

/// Per type: mean of trial accuracies and t(0.975, n-1) * s / sqrt(n) with the
/// sample standard deviation s. Sums run over sorted values, so trial order
/// never changes a bit of the result. Throws Error(design) on empty input or
/// when trials disagree on which types are present.
AggregateReport aggregate(std::span<const TrialResult> results);

struct RunOutcome {
  AggregateReport report;
  std::vector<TrialResult> trials;  // trial order
};

/// Trial i uses seed spec.seed + i for roles, sampling and splits. Trials run
/// concurrently under ExecPolicy::parallel when the learner allows it; the
/// outcome is identical either way. A failing trial aborts the run with an
/// error naming its index.
RunOutcome run_trials(const Inventory& inv, const CoocMatrix& m, const DesignSpec& spec, const Learner& learner,
                      const FeatureTable& features, std::size_t num_trials,
                      ExecPolicy policy = ExecPolicy::parallel);

struct GridAxes {
  std::vector<std::size_t> c_values;
  std::vector<std::size_t> u_values;
  std::vector<std::uint64_t> n_values;
};

struct GridCell {
  std::size_t num_common = 0;
  std::size_t num_unique_per_action = 0;
  std::uint64_t total_train = 0;
  std::optional<AggregateReport> report;  // empty when the cell failed
  std::string error;
};

/// One run_trials per (c, u, N), c outermost. Failed cells are kept.
std::vector<GridCell> run_grid(const Inventory& inv, const CoocMatrix& m, const DesignSpec& base,
                               const GridAxes& axes, const Learner& learner, const FeatureTable& features,
                               std::size_t num_trials, ExecPolicy policy = ExecPolicy::parallel);

/// Plot-data CSV: c,u,N,test_type,mean,ci_half_width,n_trials. A missing
/// half-width prints as NA; a failed cell is one row with test_type "failed".
std::string plot_csv_header();
std::string plot_csv_rows(const AggregateReport& report);
std::string grid_csv(const std::vector<GridCell>& grid);

/// JSON report with the config echo, per-type summary and per-trial tallies.
std::string write_report(const RunOutcome& outcome, const std::string& learner_name);

/// Results file written by an external learner:
/// {"trial_seed": u64, "predictions": [{"id": ..., "action": ...}]}.
struct LearnerResults {
  std::uint64_t trial_seed = 0;
  Predictions predictions;

  bool operator==(const LearnerResults&) const = default;
};
std::string write_learner_results(const LearnerResults& results);
LearnerResults read_learner_results(std::string_view text);

/// Runs `<command> <manifest> <features> <results>` through the shell, one
/// process per trial, with files under `work_dir/trial_<seed>/`.
class ExternalLearner final : public Learner {
 public:
  ExternalLearner(std::string command, std::string work_dir)
      : command_(std::move(command)), work_dir_(std::move(work_dir)) {}

  std::string name() const override { return "external:" + command_; }
  Predictions predict(const SplitManifest& manifest, const FeatureTable& features,
                      const Inventory& truth) const override;
  bool concurrent_safe() const override { return false; }

 private:
  std::string command_;
  std::string work_dir_;
};

}  // namespace xsl
