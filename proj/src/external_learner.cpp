#include <cstdlib>
#include <filesystem>

#include "xsl/error.hpp"
#include "xsl/fileio.hpp"
#include "xsl/trials.hpp"

namespace xsl {

Predictions ExternalLearner::predict(const SplitManifest& manifest, const FeatureTable& features,
                                     const Inventory& truth) const {
  namespace fs = std::filesystem;
  const fs::path dir = fs::path(work_dir_) / ("trial_" + std::to_string(manifest.design.seed));
  const auto manifest_path = dir / "manifest.json";
  const auto features_path = dir / "features.csv";
  const auto results_path = dir / "results.json";

  // Learners without in-process features still get an id-only table.
  std::string table;
  if (features.size() > 0) {
    table = write_feature_table(features);
  } else {
    FeatureTable ids_only(0);
    for (const auto& inst : truth.instances) ids_only.add(inst.id, {});
    table = write_feature_table(ids_only);
  }
  write_file_atomic(manifest_path, write_manifest(manifest));
  write_file_atomic(features_path, table);
  std::error_code ec;
  fs::remove(results_path, ec);

  const auto cmd = command_ + " " + shell_quote(manifest_path.string()) + " " + shell_quote(features_path.string()) +
                   " " + shell_quote(results_path.string());
  const int status = std::system(cmd.c_str());
  if (status != 0) {
    throw Error(ErrorKind::learner, "external learner exited with status " + std::to_string(status) + ": " + command_);
  }
  const auto results = read_learner_results(read_file(results_path));
  if (results.trial_seed != manifest.design.seed) {
    throw Error(ErrorKind::learner, "results file is for trial seed " + std::to_string(results.trial_seed) +
                                        ", expected " + std::to_string(manifest.design.seed));
  }
  return results.predictions;
}

}  // namespace xsl
