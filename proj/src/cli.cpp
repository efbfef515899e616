#include "xsl/cli.hpp"

#include <cctype>
#include <filesystem>
#include <iostream>
#include <memory>
#include <type_traits>

#include "CLI11.hpp"
#include "json.hpp"
#include "xsl/error.hpp"
#include "xsl/fileio.hpp"
#include "xsl/splits.hpp"

namespace xsl {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::config, msg); }

void only_keys(const json& obj, std::initializer_list<std::string_view> keys, const std::string& where) {
  if (!obj.is_object()) config_error("'" + where + "' must be an object");
  for (const auto& [k, _] : obj.items()) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) config_error("unknown config key '" + where + k + "'");
  }
}

template <class T>
T get_as(const json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
    if (!v.is_number_unsigned()) config_error("config key '" + where + key + "' must be a non-negative integer");
  } else if constexpr (requires { typename T::value_type; } && !std::is_same_v<T, std::string>) {
    if constexpr (std::is_unsigned_v<typename T::value_type>) {
      if (!v.is_array()) config_error("config key '" + where + key + "' must be a list");
      for (const auto& e : v)
        if (!e.is_number_unsigned()) config_error("config key '" + where + key + "' must hold non-negative integers");
    }
  }
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    config_error("config key '" + where + key + "' has the wrong type");
  }
}

template <class T>
void maybe(const json& obj, const char* key, T& dst, const std::string& where = "") {
  if (obj.contains(key)) dst = get_as<T>(obj, key, where);
}

std::vector<std::size_t> parse_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      if (item.empty() || !std::isdigit(static_cast<unsigned char>(item[0]))) throw std::invalid_argument(item);
      out.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      config_error("bad list entry '" + item + "'");
    }
  }
  return out;
}

struct Inputs {
  Inventory inventory;
  FeatureTable features;
};

Inputs load_inputs(const RunConfig& cfg) {
  if (cfg.synth) {
    auto world_cfg = *cfg.synth;
    world_cfg.seed = cfg.design.seed;
    auto world = generate_world(world_cfg);
    return {std::move(world.inventory), std::move(world.features)};
  }
  if (!cfg.inventory) config_error("no inventory given (use --inventory or the config 'inventory' key)");
  Inputs in{parse_inventory(read_file(*cfg.inventory), cfg.inventory_format), FeatureTable(0)};
  if (cfg.features) in.features = read_feature_table(read_file(*cfg.features));
  return in;
}

CoocMatrix design_matrix(const RunConfig& cfg, const Inventory& inv) {
  auto m = build_cooc(inv);
  if (cfg.densify_enabled) m = densify(m, cfg.densify).matrix;
  return m;
}

std::unique_ptr<Learner> make_learner(const RunConfig& cfg, const FeatureTable& features) {
  if (cfg.learner == "memorizer") return std::make_unique<MemorizerLearner>();
  if (cfg.learner == "linear") {
    if (features.dim() == 0) config_error("the linear learner needs a feature table (--features or synth)");
    return std::make_unique<LinearLearner>(cfg.linear);
  }
  constexpr std::string_view prefix = "external:";
  if (cfg.learner.rfind(prefix, 0) == 0 && cfg.learner.size() > prefix.size()) {
    return std::make_unique<ExternalLearner>(cfg.learner.substr(prefix.size()),
                                             (fs::path(cfg.output) / "external").string());
  }
  config_error("unknown learner '" + cfg.learner + "'");
}

std::string file_ext(InventoryFormat f) { return f == InventoryFormat::delimited ? ".csv" : ".jsonl"; }

int cmd_ingest(const RunConfig& cfg, std::ostream& out) {
  const auto in = load_inputs(cfg);
  const auto violations = validate_inventory(in.inventory);
  out << in.inventory.size() << " instances, " << in.inventory.action_vocab.size() << " actions, "
      << in.inventory.object_vocab.size() << " objects, " << violations.size() << " violations\n";
  for (const auto& v : violations) out << "  " << v.id << ": " << v.message << "\n";
  if (!violations.empty()) throw Error(ErrorKind::format, "inventory failed validation");
  const auto path = fs::path(cfg.output) / ("inventory" + file_ext(cfg.inventory_format));
  write_file_atomic(path, serialize_inventory(in.inventory, cfg.inventory_format));
  out << "wrote " << path.string() << "\n";
  return 0;
}

int cmd_cooc(const RunConfig& cfg, std::ostream& out) {
  const auto in = load_inputs(cfg);
  const auto m = build_cooc(in.inventory);
  std::string cells;
  for (std::size_t i = 0; i < m.num_actions(); ++i) {
    for (std::size_t j = 0; j < m.num_objects(); ++j) {
      if (m.count(i, j) == 0) continue;
      nlohmann::ordered_json row{{"action", m.actions()[i]}, {"object", m.objects()[j]}, {"ids", m.members(i, j)}};
      cells += row.dump() + "\n";
    }
  }
  const auto mg = marginals(m);
  write_files_atomic({{fs::path(cfg.output) / "cooc.csv", render_report(m)},
                      {fs::path(cfg.output) / "cooc_cells.jsonl", cells}});
  out << m.num_actions() << "x" << m.num_objects() << " matrix, " << m.total() << " instances, density "
      << mg.density << "\n";
  return 0;
}

int cmd_densify(const RunConfig& cfg, const std::optional<std::string>& matrix_path, std::ostream& out) {
  const CoocMatrix m = matrix_path ? parse_report(read_file(*matrix_path)) : build_cooc(load_inputs(cfg).inventory);
  const auto result = densify(m, cfg.densify);
  const auto summary = densify_summary(result.log);
  write_files_atomic({{fs::path(cfg.output) / "densified.csv", render_report(result.matrix)},
                      {fs::path(cfg.output) / "densify_log.txt", summary}});
  out << summary << result.matrix.num_actions() << "x" << result.matrix.num_objects() << " dense submatrix\n";
  return 0;
}

int cmd_design(const RunConfig& cfg, std::ostream& out) {
  const auto in = load_inputs(cfg);
  const auto m = design_matrix(cfg, in.inventory);
  const auto roles = assign_roles(m, cfg.design);
  const auto sample = sample_training_set(m, roles, cfg.design);
  const auto manifest = generate_splits(m, roles, sample, cfg.design, inventory_digest(in.inventory));
  const auto path = fs::path(cfg.output) / "manifest.json";
  write_file_atomic(path, write_manifest(manifest));
  out << "train " << manifest.train.size() << ", val " << manifest.val.size() << ", test " << manifest.test.size()
      << "\n";
  for (const auto& w : manifest.warnings) out << "warning: " << w << "\n";
  return 0;
}

int cmd_run(const RunConfig& cfg, std::ostream& out) {
  const auto in = load_inputs(cfg);
  const auto m = design_matrix(cfg, in.inventory);
  const auto learner = make_learner(cfg, in.features);
  const auto outcome = run_trials(in.inventory, m, cfg.design, *learner, in.features, cfg.trials);
  const auto plot = plot_csv_header() + plot_csv_rows(outcome.report);
  write_files_atomic({{fs::path(cfg.output) / "report.json", write_report(outcome, learner->name())},
                      {fs::path(cfg.output) / "plot.csv", plot}});
  out << plot;
  return 0;
}

int cmd_grid(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.grid.c_values.empty() || cfg.grid.u_values.empty() || cfg.grid.n_values.empty()) {
    config_error("grid needs c_values, u_values and N_values");
  }
  const auto in = load_inputs(cfg);
  const auto m = design_matrix(cfg, in.inventory);
  const auto learner = make_learner(cfg, in.features);
  const auto grid = run_grid(in.inventory, m, cfg.design, cfg.grid, *learner, in.features, cfg.trials);
  for (const auto& cell : grid) {
    if (!cell.report) {
      err << "grid cell c=" << cell.num_common << " u=" << cell.num_unique_per_action << " N=" << cell.total_train
          << " failed: " << cell.error << "\n";
    }
  }
  const auto csv = grid_csv(grid);
  write_file_atomic(fs::path(cfg.output) / "grid.csv", csv);
  out << csv;
  return 0;
}

int cmd_synth(const RunConfig& cfg, std::ostream& out) {
  RunConfig c = cfg;
  if (!c.synth) c.synth = SynthWorldConfig{};
  const auto in = load_inputs(c);
  write_files_atomic({{fs::path(cfg.output) / "inventory.csv", serialize_inventory(in.inventory, InventoryFormat::delimited)},
                      {fs::path(cfg.output) / "features.csv", write_feature_table(in.features)}});
  out << in.inventory.size() << " instances, feature dim " << in.features.dim() << "\n";
  return 0;
}

}  // namespace

RunConfig parse_run_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    config_error(std::string("config is not valid JSON: ") + e.what());
  }
  only_keys(doc,
            {"inventory", "inventory_format", "features", "synth", "densify", "design", "trials", "learner", "linear",
             "grid", "output"},
            "");

  RunConfig cfg;
  if (doc.contains("inventory")) cfg.inventory = get_as<std::string>(doc, "inventory", "");
  if (doc.contains("inventory_format")) {
    cfg.inventory_format = parse_inventory_format(get_as<std::string>(doc, "inventory_format", ""));
  }
  if (doc.contains("features")) cfg.features = get_as<std::string>(doc, "features", "");
  maybe(doc, "trials", cfg.trials);
  maybe(doc, "learner", cfg.learner);
  maybe(doc, "output", cfg.output);

  if (doc.contains("synth")) {
    const auto& s = doc["synth"];
    only_keys(s, {"num_actions", "num_objects", "instances_per_cell", "noise_sigma", "appearance_shift"}, "synth.");
    SynthWorldConfig w;
    maybe(s, "num_actions", w.num_actions, "synth.");
    maybe(s, "num_objects", w.num_objects, "synth.");
    maybe(s, "instances_per_cell", w.instances_per_cell, "synth.");
    maybe(s, "noise_sigma", w.noise_sigma, "synth.");
    maybe(s, "appearance_shift", w.appearance_shift, "synth.");
    w.validate();
    cfg.synth = w;
  }
  if (cfg.synth && cfg.inventory) config_error("config sets both 'inventory' and 'synth'");

  if (doc.contains("densify")) {
    const auto& d = doc["densify"];
    only_keys(d,
              {"enabled", "min_object_total", "cell_floor", "action_nonfloor_frac", "object_nonfloor_frac", "min_cell"},
              "densify.");
    maybe(d, "enabled", cfg.densify_enabled, "densify.");
    maybe(d, "min_object_total", cfg.densify.min_object_total, "densify.");
    maybe(d, "cell_floor", cfg.densify.cell_floor, "densify.");
    maybe(d, "min_cell", cfg.densify.min_cell, "densify.");
    if (d.contains("action_nonfloor_frac")) {
      cfg.densify.action_nonfloor_frac = Fraction::from_decimal(get_as<double>(d, "action_nonfloor_frac", "densify."));
    }
    if (d.contains("object_nonfloor_frac")) {
      cfg.densify.object_nonfloor_frac = Fraction::from_decimal(get_as<double>(d, "object_nonfloor_frac", "densify."));
    }
    cfg.densify.validate();
  }

  if (doc.contains("design")) {
    const auto& d = doc["design"];
    only_keys(d,
              {"num_common", "num_unique_per_action", "total_train", "actions", "unseen_reserve", "seed", "shortfall"},
              "design.");
    maybe(d, "num_common", cfg.design.num_common, "design.");
    maybe(d, "num_unique_per_action", cfg.design.num_unique_per_action, "design.");
    maybe(d, "total_train", cfg.design.total_train, "design.");
    maybe(d, "actions", cfg.design.actions, "design.");
    if (d.contains("unseen_reserve")) {
      cfg.design.unseen_reserve = get_as<std::vector<std::string>>(d, "unseen_reserve", "design.");
    }
    maybe(d, "seed", cfg.design.seed, "design.");
    if (d.contains("shortfall")) {
      const auto s = get_as<std::string>(d, "shortfall", "design.");
      if (s == "error") cfg.design.shortfall = ShortfallPolicy::error;
      else if (s == "spill") cfg.design.shortfall = ShortfallPolicy::spill;
      else config_error("design.shortfall must be 'error' or 'spill'");
    }
  }

  if (doc.contains("linear")) {
    const auto& l = doc["linear"];
    only_keys(l, {"lr", "epochs"}, "linear.");
    maybe(l, "lr", cfg.linear.lr, "linear.");
    maybe(l, "epochs", cfg.linear.epochs, "linear.");
  }

  if (doc.contains("grid")) {
    const auto& g = doc["grid"];
    only_keys(g, {"c_values", "u_values", "N_values"}, "grid.");
    maybe(g, "c_values", cfg.grid.c_values, "grid.");
    maybe(g, "u_values", cfg.grid.u_values, "grid.");
    maybe(g, "N_values", cfg.grid.n_values, "grid.");
  }
  return cfg;
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::config: return 3;
    case ErrorKind::io: return 4;
    case ErrorKind::format: return 5;
    case ErrorKind::design: return 6;
    case ErrorKind::learner: return 7;
  }
  return 1;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Controlled action-object training designs and generalization trials", "xsl"};
  app.require_subcommand(1);

  std::optional<std::string> config_path, out_dir, inventory, format, features, matrix, learner, c_list, u_list,
      n_list;
  std::optional<std::uint64_t> seed, total_train;
  std::optional<std::size_t> num_common, num_unique, trials;
  bool densify_flag = false;

  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--seed", seed, "seed (overrides design.seed)");
  app.add_option("--out", out_dir, "output directory");

  auto add_inputs = [&](CLI::App* sub) {
    sub->add_option("--inventory", inventory, "inventory file");
    sub->add_option("--format", format, "inventory format: delimited | record-lines");
    sub->add_option("--features", features, "feature table file");
  };
  auto add_design = [&](CLI::App* sub) {
    add_inputs(sub);
    sub->add_flag("--densify", densify_flag, "densify the matrix before designing");
    sub->add_option("-c,--num-common", num_common, "common objects");
    sub->add_option("-u,--num-unique", num_unique, "unique objects per action");
    sub->add_option("-N,--total-train", total_train, "training instances in total");
  };
  auto add_trials = [&](CLI::App* sub) {
    add_design(sub);
    sub->add_option("--learner", learner, "memorizer | linear | external:<command>");
    sub->add_option("--trials", trials, "number of trials");
  };

  auto* ingest = app.add_subcommand("ingest", "validate an inventory and echo it");
  add_inputs(ingest);
  auto* cooc = app.add_subcommand("cooc", "write the co-occurrence matrix report");
  add_inputs(cooc);
  auto* dens = app.add_subcommand("densify", "select a dense submatrix");
  add_inputs(dens);
  dens->add_option("--matrix", matrix, "matrix report CSV to densify instead of an inventory");
  auto* design = app.add_subcommand("design", "write one split manifest");
  add_design(design);
  auto* run = app.add_subcommand("run", "run repeated trials and aggregate");
  add_trials(run);
  auto* grid = app.add_subcommand("grid", "run a (c, u, N) sweep");
  add_trials(grid);
  grid->add_option("--c-values", c_list, "comma-separated c values");
  grid->add_option("--u-values", u_list, "comma-separated u values");
  grid->add_option("--n-values", n_list, "comma-separated N values");
  auto* synth = app.add_subcommand("synth", "write a synthetic inventory and feature table");
  for (auto* sub : {ingest, cooc, dens, design, run, grid, synth}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    RunConfig cfg = config_path ? parse_run_config(read_file(*config_path)) : RunConfig{};
    if (out_dir) cfg.output = *out_dir;
    if (seed) cfg.design.seed = *seed;
    if (inventory) {
      cfg.inventory = *inventory;
      cfg.synth.reset();
    }
    if (format) cfg.inventory_format = parse_inventory_format(*format);
    if (features) cfg.features = *features;
    if (densify_flag) cfg.densify_enabled = true;
    if (num_common) cfg.design.num_common = *num_common;
    if (num_unique) cfg.design.num_unique_per_action = *num_unique;
    if (total_train) cfg.design.total_train = *total_train;
    if (learner) cfg.learner = *learner;
    if (trials) cfg.trials = *trials;
    if (c_list) cfg.grid.c_values = parse_list(*c_list);
    if (u_list) cfg.grid.u_values = parse_list(*u_list);
    if (n_list) {
      cfg.grid.n_values.clear();
      for (auto v : parse_list(*n_list)) cfg.grid.n_values.push_back(v);
    }
    if (cfg.trials == 0) config_error("trials must be >= 1");

    if (ingest->parsed()) return cmd_ingest(cfg, out);
    if (cooc->parsed()) return cmd_cooc(cfg, out);
    if (dens->parsed()) return cmd_densify(cfg, matrix, out);
    if (design->parsed()) return cmd_design(cfg, out);
    if (run->parsed()) return cmd_run(cfg, out);
    if (grid->parsed()) return cmd_grid(cfg, out, err);
    if (synth->parsed()) return cmd_synth(cfg, out);
  } catch (const Error& e) {
    err << "error[" << to_string(e.kind()) << "]: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error[internal]: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}

}  // namespace xsl
