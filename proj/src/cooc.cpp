#include "xsl/cooc.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_map>
#include <unordered_set>

#include "xsl/error.hpp"

namespace xsl {
namespace {

constexpr std::string_view kCorner = "action\\object";

std::size_t index_of(const std::vector<std::string>& labels, std::string_view label) {
  const auto it = std::find(labels.begin(), labels.end(), label);
  return it == labels.end() ? CoocMatrix::npos : static_cast<std::size_t>(it - labels.begin());
}

void require_distinct(const std::vector<std::string>& labels, const char* what) {
  std::unordered_set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) {
      throw Error(ErrorKind::format, std::string("duplicate ") + what + " label '" + l + "'");
    }
  }
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

CoocMatrix CoocMatrix::from_counts(std::vector<std::string> actions,
                                   std::vector<std::string> objects,
                                   const std::vector<std::vector<Count>>& counts) {
  require_distinct(actions, "action");
  require_distinct(objects, "object");
  if (counts.size() != actions.size()) {
    throw Error(ErrorKind::format, "count rows do not match action labels");
  }
  CoocMatrix m;
  m.counts_.reserve(actions.size() * objects.size());
  for (const auto& row : counts) {
    if (row.size() != objects.size()) {
      throw Error(ErrorKind::format, "count columns do not match object labels");
    }
    m.counts_.insert(m.counts_.end(), row.begin(), row.end());
  }
  m.actions_ = std::move(actions);
  m.objects_ = std::move(objects);
  return m;
}

const std::vector<std::string>& CoocMatrix::members(std::size_t action, std::size_t object) const {
  static const std::vector<std::string> kNone;
  if (members_.empty()) return kNone;
  return members_[action * objects_.size() + object];
}

std::size_t CoocMatrix::action_index(std::string_view label) const {
  return index_of(actions_, label);
}

std::size_t CoocMatrix::object_index(std::string_view label) const {
  return index_of(objects_, label);
}

Count CoocMatrix::total() const {
  Count t = 0;
  for (auto c : counts_) t += c;
  return t;
}

CoocMatrix CoocMatrix::select(const std::vector<std::size_t>& rows,
                              const std::vector<std::size_t>& cols) const {
  CoocMatrix out;
  for (auto r : rows) out.actions_.push_back(actions_.at(r));
  for (auto c : cols) out.objects_.push_back(objects_.at(c));
  out.counts_.reserve(rows.size() * cols.size());
  if (has_members()) out.members_.reserve(rows.size() * cols.size());
  for (auto r : rows) {
    for (auto c : cols) {
      out.counts_.push_back(count(r, c));
      if (has_members()) out.members_.push_back(members(r, c));
    }
  }
  return out;
}

bool CoocMatrix::same_counts(const CoocMatrix& other) const {
  return actions_ == other.actions_ && objects_ == other.objects_ && counts_ == other.counts_;
}

CoocMatrix build_cooc(const Inventory& inv) {
  if (inv.empty()) throw Error(ErrorKind::design, "cannot build a co-occurrence matrix from an empty inventory");
  CoocMatrix m;
  m.actions_ = inv.action_vocab;
  m.objects_ = inv.object_vocab;
  std::unordered_map<std::string_view, std::size_t> a_idx, o_idx;
  for (std::size_t i = 0; i < m.actions_.size(); ++i) a_idx.emplace(m.actions_[i], i);
  for (std::size_t j = 0; j < m.objects_.size(); ++j) o_idx.emplace(m.objects_[j], j);

  const auto n_obj = m.objects_.size();
  m.counts_.assign(m.actions_.size() * n_obj, 0);
  m.members_.assign(m.actions_.size() * n_obj, {});
  for (const auto& inst : inv.instances) {
    const auto a = a_idx.find(inst.action);
    const auto o = o_idx.find(inst.object);
    if (a == a_idx.end() || o == o_idx.end()) {
      throw Error(ErrorKind::format, "instance '" + inst.id + "' uses a label missing from the vocab");
    }
    const auto cell = a->second * n_obj + o->second;
    ++m.counts_[cell];
    m.members_[cell].push_back(inst.id);
  }
  return m;
}

Marginals marginals(const CoocMatrix& m) {
  Marginals out;
  out.row_totals.assign(m.num_actions(), 0);
  out.col_totals.assign(m.num_objects(), 0);
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < m.num_actions(); ++i) {
    for (std::size_t j = 0; j < m.num_objects(); ++j) {
      const auto c = m.count(i, j);
      out.row_totals[i] += c;
      out.col_totals[j] += c;
      if (c > 0) ++nonzero;
    }
  }
  const auto cells = m.num_actions() * m.num_objects();
  out.density = cells == 0 ? 0.0 : static_cast<double>(nonzero) / static_cast<double>(cells);
  return out;
}

std::string render_report(const CoocMatrix& m) {
  std::string out(kCorner);
  for (const auto& o : m.objects()) out += ',' + o;
  out += '\n';
  for (std::size_t i = 0; i < m.num_actions(); ++i) {
    out += m.actions()[i];
    for (std::size_t j = 0; j < m.num_objects(); ++j) {
      out += ',';
      out += std::to_string(m.count(i, j));
    }
    out += '\n';
  }
  return out;
}

CoocMatrix parse_report(std::string_view text) {
  std::vector<std::string_view> lines;
  for (auto line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty()) throw Error(ErrorKind::format, "empty matrix report");
  const auto header = split(lines[0], ',');
  if (header[0] != kCorner) throw Error(ErrorKind::format, "line 1: matrix report must start with 'action\\object'");
  std::vector<std::string> objects(header.begin() + 1, header.end());

  std::vector<std::string> actions;
  std::vector<std::vector<Count>> counts;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto fields = split(lines[k], ',');
    if (fields.size() != objects.size() + 1) {
      throw Error(ErrorKind::format, "line " + std::to_string(k + 1) + ": wrong number of columns");
    }
    actions.emplace_back(fields[0]);
    auto& row = counts.emplace_back();
    for (std::size_t j = 1; j < fields.size(); ++j) {
      Count v = 0;
      const auto f = fields[j];
      const auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || p != f.data() + f.size() || f.empty()) {
        throw Error(ErrorKind::format, "line " + std::to_string(k + 1) + ": bad count '" + std::string(f) + "'");
      }
      row.push_back(v);
    }
  }
  return CoocMatrix::from_counts(std::move(actions), std::move(objects), counts);
}

}  // namespace xsl
