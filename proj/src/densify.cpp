#include "xsl/densify.hpp"

#include <cmath>
#include <numeric>

#include "xsl/error.hpp"

namespace xsl {
namespace {

const char* axis_name(Axis a) { return a == Axis::action ? "action" : "object"; }

class Selection {
 public:
  explicit Selection(const CoocMatrix& m)
      : m_(m), row_on_(m.num_actions(), true), col_on_(m.num_objects(), true) {}

  std::size_t rows() const { return m_.num_actions(); }
  std::size_t cols() const { return m_.num_objects(); }
  bool row_on(std::size_t i) const { return row_on_[i]; }
  bool col_on(std::size_t j) const { return col_on_[j]; }

  std::size_t active_rows() const { return std::count(row_on_.begin(), row_on_.end(), true); }
  std::size_t active_cols() const { return std::count(col_on_.begin(), col_on_.end(), true); }

  Count row_total(std::size_t i) const {
    Count t = 0;
    for (std::size_t j = 0; j < cols(); ++j) if (col_on_[j]) t += m_.count(i, j);
    return t;
  }
  Count col_total(std::size_t j) const {
    Count t = 0;
    for (std::size_t i = 0; i < rows(); ++i) if (row_on_[i]) t += m_.count(i, j);
    return t;
  }
  // Active cells in row i with count >= floor (first) and below (second).
  std::pair<std::size_t, std::size_t> row_split(std::size_t i, Count floor) const {
    std::size_t hi = 0, lo = 0;
    for (std::size_t j = 0; j < cols(); ++j) {
      if (!col_on_[j]) continue;
      (m_.count(i, j) >= floor ? hi : lo)++;
    }
    return {hi, lo};
  }
  std::pair<std::size_t, std::size_t> col_split(std::size_t j, Count floor) const {
    std::size_t hi = 0, lo = 0;
    for (std::size_t i = 0; i < rows(); ++i) {
      if (!row_on_[i]) continue;
      (m_.count(i, j) >= floor ? hi : lo)++;
    }
    return {hi, lo};
  }

  void drop_row(std::size_t i) { row_on_[i] = false; }
  void drop_col(std::size_t j) { col_on_[j] = false; }

  void require_nonempty() const {
    if (active_rows() == 0) throw Error(ErrorKind::design, "densify eliminated every action");
    if (active_cols() == 0) throw Error(ErrorKind::design, "densify eliminated every object");
  }

  std::vector<std::size_t> kept_rows() const { return kept(row_on_); }
  std::vector<std::size_t> kept_cols() const { return kept(col_on_); }

 private:
  static std::vector<std::size_t> kept(const std::vector<bool>& on) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < on.size(); ++k) if (on[k]) out.push_back(k);
    return out;
  }

  const CoocMatrix& m_;
  std::vector<bool> row_on_;
  std::vector<bool> col_on_;
};

std::string pct(const Fraction& f) {
  const double p = f.value() * 100.0;
  auto s = std::to_string(p);
  s.erase(s.find_last_not_of('0') + 1);
  if (s.back() == '.') s.pop_back();
  return s + "%";
}

}  // namespace

Fraction Fraction::from_decimal(double value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw Error(ErrorKind::config, "fraction must be a finite nonnegative number");
  }
  constexpr std::uint64_t scale = 1'000'000;
  auto num = static_cast<std::uint64_t>(std::llround(value * scale));
  const auto g = std::gcd(num, scale);
  return Fraction{num / g, scale / g};
}

bool Fraction::met_by(std::uint64_t k, std::uint64_t n) const noexcept {
  if (n == 0) return true;
  return static_cast<unsigned __int128>(k) * den >= static_cast<unsigned __int128>(num) * n;
}

void DensifyConfig::validate() const {
  for (const auto* f : {&action_nonfloor_frac, &object_nonfloor_frac}) {
    if (f->den == 0) throw Error(ErrorKind::config, "fraction with zero denominator");
    if (f->num > f->den) throw Error(ErrorKind::config, "densify fractions must lie in [0,1]");
  }
}

DensifyResult densify(const CoocMatrix& m, const DensifyConfig& cfg) {
  cfg.validate();
  if (m.empty()) throw Error(ErrorKind::design, "densify needs a nonempty matrix");

  Selection sel(m);
  DensifyResult out;
  int pass = 0;
  std::size_t removed_before = 0;

  auto log = [&](int step, Axis axis, std::size_t idx, std::string reason) {
    const auto& label = axis == Axis::action ? m.actions()[idx] : m.objects()[idx];
    out.log.push_back(Removal{pass, step, axis, label, std::move(reason)});
  };

  do {
    ++pass;
    removed_before = out.log.size();

    // 1. column totals
    for (std::size_t j = 0; j < sel.cols(); ++j) {
      if (!sel.col_on(j)) continue;
      const auto t = sel.col_total(j);
      if (t < cfg.min_object_total) {
        sel.drop_col(j);
        log(1, Axis::object, j,
            "column total " + std::to_string(t) + " < " + std::to_string(cfg.min_object_total));
      }
    }
    sel.require_nonempty();

    // 2. rows, judged simultaneously against the same column set
    std::vector<std::size_t> drop;
    std::vector<std::string> why;
    for (std::size_t i = 0; i < sel.rows(); ++i) {
      if (!sel.row_on(i)) continue;
      const auto [hi, lo] = sel.row_split(i, cfg.cell_floor);
      if (!cfg.action_nonfloor_frac.met_by(hi, hi + lo)) {
        drop.push_back(i);
        why.push_back(std::to_string(hi) + " of " + std::to_string(hi + lo) + " cells >= " +
                      std::to_string(cfg.cell_floor) + ", need " + pct(cfg.action_nonfloor_frac));
      }
    }
    for (std::size_t k = 0; k < drop.size(); ++k) {
      sel.drop_row(drop[k]);
      log(2, Axis::action, drop[k], why[k]);
    }
    sel.require_nonempty();

    // 3. columns, same rule with the object fraction
    drop.clear();
    why.clear();
    for (std::size_t j = 0; j < sel.cols(); ++j) {
      if (!sel.col_on(j)) continue;
      const auto [hi, lo] = sel.col_split(j, cfg.cell_floor);
      if (!cfg.object_nonfloor_frac.met_by(hi, hi + lo)) {
        drop.push_back(j);
        why.push_back(std::to_string(hi) + " of " + std::to_string(hi + lo) + " cells >= " +
                      std::to_string(cfg.cell_floor) + ", need " + pct(cfg.object_nonfloor_frac));
      }
    }
    for (std::size_t k = 0; k < drop.size(); ++k) {
      sel.drop_col(drop[k]);
      log(3, Axis::object, drop[k], why[k]);
    }
    sel.require_nonempty();

    // 4. greedy removal of the line with the most sub-minimum cells
    for (;;) {
      struct Candidate {
        std::size_t violations = 0;
        Count total = 0;
        std::size_t index = 0;
        Axis axis = Axis::action;
      };
      auto better = [](const Candidate& a, const Candidate& b) {
        if (a.violations != b.violations) return a.violations > b.violations;
        if (a.total != b.total) return a.total < b.total;
        if (a.index != b.index) return a.index < b.index;
        return a.axis == Axis::action && b.axis == Axis::object;
      };
      Candidate best;
      for (std::size_t i = 0; i < sel.rows(); ++i) {
        if (!sel.row_on(i)) continue;
        const auto lo = sel.row_split(i, cfg.min_cell).second;
        if (lo == 0) continue;
        Candidate c{lo, sel.row_total(i), i, Axis::action};
        if (best.violations == 0 || better(c, best)) best = c;
      }
      for (std::size_t j = 0; j < sel.cols(); ++j) {
        if (!sel.col_on(j)) continue;
        const auto lo = sel.col_split(j, cfg.min_cell).second;
        if (lo == 0) continue;
        Candidate c{lo, sel.col_total(j), j, Axis::object};
        if (best.violations == 0 || better(c, best)) best = c;
      }
      if (best.violations == 0) break;
      std::string reason = std::to_string(best.violations) + " cell(s) < " +
                           std::to_string(cfg.min_cell) + ", total " + std::to_string(best.total);
      if (best.axis == Axis::action) sel.drop_row(best.index);
      else sel.drop_col(best.index);
      log(4, best.axis, best.index, std::move(reason));
      sel.require_nonempty();
    }
  } while (out.log.size() != removed_before);

  out.kept_actions = sel.kept_rows();
  out.kept_objects = sel.kept_cols();
  out.matrix = m.select(out.kept_actions, out.kept_objects);
  return out;
}

std::string densify_summary(const std::vector<Removal>& log) {
  if (log.empty()) return "no removals\n";
  std::string out;
  for (const auto& r : log) {
    out += "pass " + std::to_string(r.pass) + " step " + std::to_string(r.step) + ": removed " +
           axis_name(r.axis) + " '" + r.label + "' (" + r.reason + ")\n";
  }
  return out;
}

}  // namespace xsl
