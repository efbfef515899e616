#include "xsl/design.hpp"

#include <algorithm>
#include <unordered_set>

#include "xsl/apportion.hpp"
#include "xsl/error.hpp"
#include "xsl/rng.hpp"

namespace xsl {
namespace {

[[noreturn]] void design_error(const std::string& msg) { throw Error(ErrorKind::design, msg); }

std::string cell_name(const std::string& action, const std::string& object) {
  return "(" + action + ", " + object + ")";
}

std::size_t must_find_action(const CoocMatrix& m, const std::string& a) {
  const auto i = m.action_index(a);
  if (i == CoocMatrix::npos) design_error("action '" + a + "' is not in the matrix");
  return i;
}

std::size_t must_find_object(const CoocMatrix& m, const std::string& o) {
  const auto j = m.object_index(o);
  if (j == CoocMatrix::npos) design_error("object '" + o + "' is not in the matrix");
  return j;
}

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

}  // namespace

std::vector<std::string> resolve_actions(const CoocMatrix& m, const DesignSpec& spec) {
  if (spec.actions.empty()) return m.actions();
  std::unordered_set<std::string> seen;
  for (const auto& a : spec.actions) {
    must_find_action(m, a);
    if (!seen.insert(a).second) design_error("action '" + a + "' listed twice");
  }
  return spec.actions;
}

std::vector<std::string> resolve_reserve(const CoocMatrix& m, const DesignSpec& spec) {
  if (!spec.unseen_reserve) {
    const auto& objs = m.objects();
    const auto k = std::min(kDefaultReserveSize, objs.size());
    return {objs.end() - static_cast<std::ptrdiff_t>(k), objs.end()};
  }
  std::unordered_set<std::string> seen;
  for (const auto& o : *spec.unseen_reserve) {
    must_find_object(m, o);
    if (!seen.insert(o).second) design_error("reserved object '" + o + "' listed twice");
  }
  return *spec.unseen_reserve;
}

std::vector<std::uint64_t> action_budgets(std::uint64_t total, std::size_t num_actions) {
  if (num_actions == 0) design_error("design has no actions");
  std::vector<std::uint64_t> out(num_actions, total / num_actions);
  for (std::size_t k = 0; k < total % num_actions; ++k) ++out[k];
  return out;
}

RoleAssignment assign_roles(const CoocMatrix& m, const DesignSpec& spec) {
  const auto c = spec.num_common;
  const auto u = spec.num_unique_per_action;
  if (c + u == 0) design_error("need at least one common or unique object");
  if (!m.has_members()) design_error("design needs a matrix built from an inventory");

  RoleAssignment roles;
  roles.actions = resolve_actions(m, spec);
  roles.unseen_objects = resolve_reserve(m, spec);

  const auto budgets = action_budgets(spec.total_train, roles.actions.size());
  const auto cells_per_action = c + u;
  if (*std::min_element(budgets.begin(), budgets.end()) < cells_per_action) {
    design_error("total_train " + std::to_string(spec.total_train) + " gives some action fewer instances than its " +
                 std::to_string(cells_per_action) + " training cells");
  }

  std::vector<std::size_t> action_rows;
  std::vector<std::uint64_t> need;  // instances one cell must supply, per action
  for (std::size_t k = 0; k < roles.actions.size(); ++k) {
    action_rows.push_back(must_find_action(m, roles.actions[k]));
    need.push_back(spec.shortfall == ShortfallPolicy::error ? ceil_div(budgets[k], cells_per_action) : 1);
  }

  std::unordered_set<std::string> reserved(roles.unseen_objects.begin(), roles.unseen_objects.end());
  std::vector<std::size_t> pool;
  for (std::size_t j = 0; j < m.num_objects(); ++j) {
    if (!reserved.count(m.objects()[j])) pool.push_back(j);
  }
  const auto required = c + u * roles.actions.size();
  if (pool.size() < required) {
    design_error("insufficient object pool: " + std::to_string(pool.size()) + " assignable objects, design needs " +
                 std::to_string(required));
  }

  auto rng = make_rng(spec.seed, Stream::roles);
  std::shuffle(pool.begin(), pool.end(), rng);

  auto supports = [&](std::size_t k, std::size_t obj) { return m.count(action_rows[k], obj) >= need[k]; };

  std::vector<bool> taken(pool.size(), false);
  for (std::size_t p = 0; p < pool.size() && roles.common_objects.size() < c; ++p) {
    bool ok = true;
    for (std::size_t k = 0; k < roles.actions.size() && ok; ++k) ok = supports(k, pool[p]);
    if (ok) {
      taken[p] = true;
      roles.common_objects.push_back(m.objects()[pool[p]]);
    }
  }
  if (roles.common_objects.size() < c) {
    design_error("only " + std::to_string(roles.common_objects.size()) + " objects can serve as common objects (" +
                 std::to_string(c) + " requested); candidates lack required cell support");
  }

  for (std::size_t k = 0; k < roles.actions.size(); ++k) {
    auto& mine = roles.unique_objects[roles.actions[k]];
    for (std::size_t p = 0; p < pool.size() && mine.size() < u; ++p) {
      if (taken[p] || !supports(k, pool[p])) continue;
      taken[p] = true;
      mine.push_back(m.objects()[pool[p]]);
    }
    if (mine.size() < u) {
      design_error("action '" + roles.actions[k] + "' has only " + std::to_string(mine.size()) +
                   " unique-object candidates with required cell support (" + std::to_string(u) + " requested)");
    }
  }
  return roles;
}

std::vector<std::string> TrainingSample::ids() const {
  std::vector<std::string> out;
  for (const auto& c : cells) out.insert(out.end(), c.ids.begin(), c.ids.end());
  return out;
}

TrainingSample sample_training_set(const CoocMatrix& m, const RoleAssignment& roles, const DesignSpec& spec) {
  if (!m.has_members()) design_error("sampling needs a matrix built from an inventory");
  const auto budgets = action_budgets(spec.total_train, roles.actions.size());
  auto rng = make_rng(spec.seed, Stream::sample);

  TrainingSample out;
  for (std::size_t k = 0; k < roles.actions.size(); ++k) {
    const auto& action = roles.actions[k];
    const auto row = must_find_action(m, action);

    std::vector<std::string> objects = roles.common_objects;
    if (const auto it = roles.unique_objects.find(action); it != roles.unique_objects.end()) {
      objects.insert(objects.end(), it->second.begin(), it->second.end());
    }
    if (objects.empty()) design_error("action '" + action + "' has no training cells");

    std::vector<std::size_t> cols;
    std::vector<std::uint64_t> avail;
    for (const auto& o : objects) {
      cols.push_back(must_find_object(m, o));
      avail.push_back(m.count(row, cols.back()));
    }

    const std::vector<std::uint64_t> ones(objects.size(), 1);
    auto quota = apportion(budgets[k], ones);

    std::uint64_t residual = 0;
    for (std::size_t q = 0; q < quota.size(); ++q) {
      if (avail[q] >= quota[q]) continue;
      if (spec.shortfall == ShortfallPolicy::error) {
        design_error("cell " + cell_name(action, objects[q]) + " has " + std::to_string(avail[q]) +
                     " instances, quota " + std::to_string(quota[q]));
      }
      residual += quota[q] - avail[q];
      quota[q] = avail[q];
    }
    while (residual > 0) {
      std::size_t best = 0;
      for (std::size_t q = 1; q < quota.size(); ++q) {
        if (avail[q] - quota[q] > avail[best] - quota[best]) best = q;
      }
      if (avail[best] == quota[best]) {
        design_error("action '" + action + "' cannot fill its budget of " + std::to_string(budgets[k]) +
                     " from its training cells");
      }
      ++quota[best];
      --residual;
    }

    for (std::size_t q = 0; q < objects.size(); ++q) {
      auto ids = m.members(row, cols[q]);
      std::shuffle(ids.begin(), ids.end(), rng);
      ids.resize(quota[q]);
      out.action_totals[action] += quota[q];
      out.cells.push_back(SampledCell{action, objects[q], quota[q], std::move(ids)});
    }
  }
  return out;
}

}  // namespace xsl
