#include "xsl/features.hpp"

#include <charconv>
#include <system_error>

#include "xsl/error.hpp"

namespace xsl {
namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

void FeatureTable::add(std::string id, std::span<const double> values) {
  if (values.size() != dim_) {
    throw Error(ErrorKind::format, "feature row '" + id + "' has " + std::to_string(values.size()) +
                                       " values, expected " + std::to_string(dim_));
  }
  if (!index_.emplace(id, ids_.size()).second) throw Error(ErrorKind::format, "duplicate feature row '" + id + "'");
  ids_.push_back(std::move(id));
  data_.insert(data_.end(), values.begin(), values.end());
}

std::span<const double> FeatureTable::row(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) throw Error(ErrorKind::learner, "no features for instance '" + std::string(id) + "'");
  return std::span<const double>(data_).subspan(it->second * dim_, dim_);
}

std::string write_feature_table(const FeatureTable& table) {
  std::string out = "id";
  for (std::size_t d = 0; d < table.dim(); ++d) out += ",f" + std::to_string(d);
  out += '\n';
  char buf[32];
  for (const auto& id : table.ids()) {
    out += id;
    for (double v : table.row(id)) {
      const auto res = std::to_chars(buf, buf + sizeof buf, v);
      out += ',';
      out.append(buf, res.ptr);
    }
    out += '\n';
  }
  return out;
}

FeatureTable read_feature_table(std::string_view text) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  auto next_line = [&](std::string_view& line) {
    while (pos < text.size()) {
      auto end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      line = text.substr(pos, end - pos);
      pos = end + 1;
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (!line.empty()) return true;
    }
    return false;
  };

  std::string_view line;
  if (!next_line(line)) throw Error(ErrorKind::format, "feature table is empty");
  const auto header = split_commas(line);
  if (header[0] != "id") throw Error(ErrorKind::format, "line 1: feature table header must start with 'id'");
  for (std::size_t d = 1; d < header.size(); ++d) {
    if (header[d] != "f" + std::to_string(d - 1)) {
      throw Error(ErrorKind::format, "line 1: expected column 'f" + std::to_string(d - 1) + "'");
    }
  }

  FeatureTable table(header.size() - 1);
  std::vector<double> values(table.dim());
  while (next_line(line)) {
    const auto fields = split_commas(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorKind::format, "line " + std::to_string(line_no) + ": wrong number of columns");
    }
    for (std::size_t d = 1; d < fields.size(); ++d) {
      const auto f = fields[d];
      const auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), values[d - 1]);
      if (ec != std::errc() || p != f.data() + f.size() || f.empty()) {
        throw Error(ErrorKind::format, "line " + std::to_string(line_no) + ": bad number '" + std::string(f) + "'");
      }
    }
    table.add(std::string(fields[0]), values);
  }
  return table;
}

}  // namespace xsl
