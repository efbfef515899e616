#include "xsl/splits.hpp"

#include <algorithm>
#include <unordered_set>

#include "json.hpp"
#include "xsl/apportion.hpp"
#include "xsl/error.hpp"
#include "xsl/rng.hpp"

namespace xsl {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::uint64_t kTestShare = 80;
constexpr std::uint64_t kValShare = 20;

bool contains(const std::vector<std::string>& v, std::string_view s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

[[noreturn]] void schema_error(const std::string& where) {
  throw Error(ErrorKind::format, "manifest schema: " + where);
}

const ordered_json& field(const ordered_json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) schema_error(where + " is not an object");
  const auto it = obj.find(key);
  if (it == obj.end()) schema_error("missing field '" + where + (where.empty() ? "" : ".") + key + "'");
  return *it;
}

std::vector<std::string> string_list(const ordered_json& j, const std::string& where) {
  if (!j.is_array()) schema_error("field '" + where + "' is not an array");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) schema_error("field '" + where + "' has a non-string entry");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::uint64_t unsigned_field(const ordered_json& obj, const char* key, const std::string& where) {
  const auto& v = field(obj, key, where);
  if (!v.is_number_unsigned()) schema_error("field '" + where + "." + key + "' is not an unsigned integer");
  return v.get<std::uint64_t>();
}

}  // namespace

const char* to_string(TestType t) noexcept {
  switch (t) {
    case TestType::common: return "common";
    case TestType::unique_self: return "unique_self";
    case TestType::unique_other: return "unique_other";
    case TestType::unseen: return "unseen";
  }
  return "unknown";
}

TestType parse_test_type(std::string_view name) {
  for (auto t : kAllTestTypes) {
    if (name == to_string(t)) return t;
  }
  throw Error(ErrorKind::format, "unknown test type '" + std::string(name) + "'");
}

TestType classify_test_type(std::string_view action, std::string_view object, const RoleAssignment& roles) {
  if (!contains(roles.actions, action)) {
    throw Error(ErrorKind::design, "action '" + std::string(action) + "' is not in the design");
  }
  if (contains(roles.common_objects, object)) return TestType::common;
  for (const auto& [owner, objects] : roles.unique_objects) {
    if (contains(objects, object)) return owner == action ? TestType::unique_self : TestType::unique_other;
  }
  if (contains(roles.unseen_objects, object)) return TestType::unseen;
  throw Error(ErrorKind::design, "object '" + std::string(object) + "' has no role in the design");
}

SplitManifest generate_splits(const CoocMatrix& m, const RoleAssignment& roles, const TrainingSample& train,
                              const DesignSpec& spec, std::string inventory_digest) {
  if (!m.has_members()) throw Error(ErrorKind::design, "splits need a matrix built from an inventory");

  SplitManifest out;
  out.design = DesignEcho{spec.seed, spec.num_common, spec.num_unique_per_action, spec.total_train, roles,
                          std::move(inventory_digest)};

  std::unordered_set<std::string> train_ids;
  for (const auto& cell : train.cells) {
    const auto i = m.action_index(cell.action);
    const auto j = m.object_index(cell.object);
    if (i == CoocMatrix::npos || j == CoocMatrix::npos) {
      throw Error(ErrorKind::design, "training cell (" + cell.action + ", " + cell.object + ") is not in the matrix");
    }
    const auto& members = m.members(i, j);
    for (const auto& id : cell.ids) {
      if (!contains(members, id)) {
        throw Error(ErrorKind::design, "training id '" + id + "' is not a member of its cell");
      }
      if (!train_ids.insert(id).second) throw Error(ErrorKind::design, "training id '" + id + "' drawn twice");
      out.train.push_back(id);
      out.train_labels.emplace(id, cell.action);
    }
  }

  auto rng = make_rng(spec.seed, Stream::split);
  std::array<std::size_t, 4> per_type{};

  for (const auto& action : roles.actions) {
    const auto i = m.action_index(action);
    if (i == CoocMatrix::npos) throw Error(ErrorKind::design, "action '" + action + "' is not in the matrix");
    for (std::size_t j = 0; j < m.num_objects(); ++j) {
      const auto& object = m.objects()[j];
      TestType type;
      try {
        type = classify_test_type(action, object, roles);
      } catch (const Error&) {
        continue;  // unassigned object: out of scope
      }
      std::vector<std::string> pool;
      for (const auto& id : m.members(i, j)) {
        if (!train_ids.count(id)) pool.push_back(id);
      }
      if (pool.empty()) continue;
      std::shuffle(pool.begin(), pool.end(), rng);

      std::size_t n_test = pool.size();
      if (type != TestType::unseen) {
        const std::array<std::uint64_t, 2> shares{kTestShare, kValShare};
        n_test = apportion(pool.size(), shares)[0];
      }
      for (std::size_t k = 0; k < pool.size(); ++k) {
        if (k < n_test) {
          out.test.push_back(TestItem{pool[k], type});
          ++per_type[static_cast<std::size_t>(type)];
        } else {
          out.val.push_back(pool[k]);
        }
      }
    }
  }

  const bool has_unique = spec.num_unique_per_action > 0 &&
                          std::any_of(roles.unique_objects.begin(), roles.unique_objects.end(),
                                      [](const auto& kv) { return !kv.second.empty(); });
  std::array<bool, 4> expected{!roles.common_objects.empty(), has_unique, has_unique && roles.actions.size() > 1,
                               !roles.unseen_objects.empty()};
  for (auto t : kAllTestTypes) {
    const auto k = static_cast<std::size_t>(t);
    if (expected[k] && per_type[k] == 0) out.warnings.push_back(std::string("no test items of type ") + to_string(t));
  }
  return out;
}

std::string write_manifest(const SplitManifest& manifest) {
  const auto& d = manifest.design;
  ordered_json design;
  design["seed"] = d.seed;
  design["c"] = d.num_common;
  design["u"] = d.num_unique_per_action;
  design["N"] = d.total_train;
  design["actions"] = d.roles.actions;
  design["common_objects"] = d.roles.common_objects;
  ordered_json unique = ordered_json::object();
  for (const auto& [action, objects] : d.roles.unique_objects) unique[action] = objects;
  design["unique_objects"] = unique;
  design["unseen_objects"] = d.roles.unseen_objects;
  design["inventory_digest"] = d.inventory_digest;

  ordered_json test = ordered_json::array();
  for (const auto& t : manifest.test) test.push_back({{"id", t.id}, {"type", to_string(t.type)}});

  ordered_json labels = ordered_json::object();
  for (const auto& [id, action] : manifest.train_labels) labels[id] = action;

  ordered_json doc;
  doc["design"] = design;
  doc["train"] = manifest.train;
  doc["train_labels"] = labels;
  doc["val"] = manifest.val;
  doc["test"] = test;
  doc["warnings"] = manifest.warnings;
  return doc.dump(1) + "\n";
}

SplitManifest read_manifest(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::format, std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) schema_error("document is not an object");

  SplitManifest out;
  const auto& d = field(doc, "design", "");
  out.design.seed = unsigned_field(d, "seed", "design");
  out.design.num_common = unsigned_field(d, "c", "design");
  out.design.num_unique_per_action = unsigned_field(d, "u", "design");
  out.design.total_train = unsigned_field(d, "N", "design");
  out.design.roles.actions = string_list(field(d, "actions", "design"), "design.actions");
  out.design.roles.common_objects = string_list(field(d, "common_objects", "design"), "design.common_objects");
  const auto& unique = field(d, "unique_objects", "design");
  if (!unique.is_object()) schema_error("field 'design.unique_objects' is not an object");
  for (const auto& [action, objects] : unique.items()) {
    out.design.roles.unique_objects[action] = string_list(objects, "design.unique_objects." + action);
  }
  out.design.roles.unseen_objects = string_list(field(d, "unseen_objects", "design"), "design.unseen_objects");
  const auto& digest = field(d, "inventory_digest", "design");
  if (!digest.is_string()) schema_error("field 'design.inventory_digest' is not a string");
  out.design.inventory_digest = digest.get<std::string>();

  out.train = string_list(field(doc, "train", ""), "train");
  if (doc.contains("train_labels")) {
    const auto& labels = doc["train_labels"];
    if (!labels.is_object()) schema_error("field 'train_labels' is not an object");
    for (const auto& [id, action] : labels.items()) {
      if (!action.is_string()) schema_error("field 'train_labels." + id + "' is not a string");
      out.train_labels[id] = action.get<std::string>();
    }
  }
  out.val = string_list(field(doc, "val", ""), "val");
  const auto& test = field(doc, "test", "");
  if (!test.is_array()) schema_error("field 'test' is not an array");
  for (const auto& item : test) {
    const auto& id = field(item, "id", "test[]");
    const auto& type = field(item, "type", "test[]");
    if (!id.is_string() || !type.is_string()) schema_error("test entries need string 'id' and 'type'");
    out.test.push_back(TestItem{id.get<std::string>(), parse_test_type(type.get<std::string>())});
  }
  if (doc.contains("warnings")) out.warnings = string_list(doc["warnings"], "warnings");
  return out;
}

}  // namespace xsl
