#include "xsl/inventory.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "xsl/error.hpp"

namespace xsl {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kHeader3 = "id,action,object";
constexpr std::string_view kHeader4 = "id,action,object,media_ref";

[[noreturn]] void fail_at(std::size_t line, const std::string& msg) {
  throw Error(ErrorKind::format, "line " + std::to_string(line) + ": " + msg);
}

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > s.size()) return false;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // overlong forms, surrogates, out of range
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
        (len == 4 && cp < 0x10000) || cp > 0x10FFFF ||
        (cp >= 0xD800 && cp <= 0xDFFF)) {
      return false;
    }
    i += len;
  }
  return true;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

// Accumulates rows, enforcing per-instance invariants as they arrive.
class Builder {
 public:
  void add(Instance inst, std::size_t line) {
    if (inst.id.empty()) fail_at(line, "empty field 'id'");
    if (inst.action.empty()) fail_at(line, "empty field 'action' for id '" + inst.id + "'");
    if (inst.object.empty()) fail_at(line, "empty field 'object' for id '" + inst.id + "'");
    if (inst.media_ref && inst.media_ref->empty()) {
      fail_at(line, "empty field 'media_ref' for id '" + inst.id + "'");
    }
    if (!ids_.insert(inst.id).second) fail_at(line, "duplicate id '" + inst.id + "'");
    if (actions_seen_.insert(inst.action).second) inv_.action_vocab.push_back(inst.action);
    if (objects_seen_.insert(inst.object).second) inv_.object_vocab.push_back(inst.object);
    inv_.instances.push_back(std::move(inst));
  }

  Inventory finish() && { return std::move(inv_); }

 private:
  Inventory inv_;
  std::unordered_set<std::string> ids_;
  std::unordered_set<std::string> actions_seen_;
  std::unordered_set<std::string> objects_seen_;
};

std::string json_string_field(const ordered_json& row, const char* key, std::size_t line) {
  const auto it = row.find(key);
  if (it == row.end()) fail_at(line, std::string("missing field '") + key + "'");
  if (!it->is_string()) fail_at(line, std::string("field '") + key + "' is not a string");
  return it->get<std::string>();
}

Instance parse_record_line(std::string_view text, std::size_t line) {
  ordered_json row;
  try {
    row = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail_at(line, std::string("malformed record: ") + e.what());
  }
  if (!row.is_object()) fail_at(line, "record is not an object");
  for (const auto& [key, _] : row.items()) {
    if (key != "id" && key != "action" && key != "object" && key != "media_ref") {
      fail_at(line, "unknown field '" + key + "'");
    }
  }
  Instance inst;
  inst.id = json_string_field(row, "id", line);
  inst.action = json_string_field(row, "action", line);
  inst.object = json_string_field(row, "object", line);
  if (row.contains("media_ref")) inst.media_ref = json_string_field(row, "media_ref", line);
  return inst;
}

Instance parse_delimited_line(std::string_view text, std::size_t line) {
  const auto fields = split_commas(text);
  if (fields.size() != 3 && fields.size() != 4) {
    fail_at(line, "expected 3 or 4 comma-separated fields, got " + std::to_string(fields.size()));
  }
  Instance inst{std::string(fields[0]), std::string(fields[1]), std::string(fields[2]), std::nullopt};
  if (fields.size() == 4) inst.media_ref = std::string(fields[3]);
  return inst;
}

void check_delimitable(const std::string& field) {
  if (field.find_first_of(",\r\n") != std::string::npos) {
    throw Error(ErrorKind::format,
                "field '" + field + "' cannot be written in delimited format");
  }
}

}  // namespace

const Instance* Inventory::find(std::string_view id) const {
  const auto it = std::find_if(instances.begin(), instances.end(),
                               [&](const Instance& i) { return i.id == id; });
  return it == instances.end() ? nullptr : &*it;
}

InventoryFormat parse_inventory_format(std::string_view name) {
  if (name == "delimited" || name == "csv") return InventoryFormat::delimited;
  if (name == "record-lines" || name == "jsonl") return InventoryFormat::record_lines;
  throw Error(ErrorKind::config, "unknown inventory format '" + std::string(name) + "'");
}

Inventory make_inventory(std::vector<Instance> instances) {
  Builder b;
  std::size_t line = 0;
  for (auto& inst : instances) b.add(std::move(inst), ++line);
  return std::move(b).finish();
}

Inventory parse_inventory(std::string_view text, InventoryFormat format) {
  Builder b;
  std::size_t line_no = 0;
  bool first_content = true;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!valid_utf8(line)) fail_at(line_no, "invalid UTF-8");

    if (format == InventoryFormat::delimited) {
      if (first_content && (line == kHeader3 || line == kHeader4)) {
        first_content = false;
        continue;
      }
      b.add(parse_delimited_line(line, line_no), line_no);
    } else {
      b.add(parse_record_line(line, line_no), line_no);
    }
    first_content = false;
  }
  return std::move(b).finish();
}

Inventory parse_inventory(std::istream& source, InventoryFormat format) {
  std::ostringstream buf;
  buf << source.rdbuf();
  if (source.bad()) throw Error(ErrorKind::io, "failed reading inventory source");
  return parse_inventory(std::string_view(buf.str()), format);
}

std::string serialize_inventory(const Inventory& inv, InventoryFormat format) {
  std::string out;
  if (format == InventoryFormat::delimited) {
    const bool with_media = std::any_of(inv.instances.begin(), inv.instances.end(),
                                        [](const Instance& i) { return i.media_ref.has_value(); });
    out += with_media ? kHeader4 : kHeader3;
    out += '\n';
    for (const auto& i : inv.instances) {
      check_delimitable(i.id);
      check_delimitable(i.action);
      check_delimitable(i.object);
      out += i.id + ',' + i.action + ',' + i.object;
      if (i.media_ref) {
        check_delimitable(*i.media_ref);
        out += ',' + *i.media_ref;
      }
      out += '\n';
    }
    return out;
  }
  for (const auto& i : inv.instances) {
    ordered_json row;
    row["id"] = i.id;
    row["action"] = i.action;
    row["object"] = i.object;
    if (i.media_ref) row["media_ref"] = *i.media_ref;
    out += row.dump();
    out += '\n';
  }
  return out;
}

std::vector<Violation> validate_inventory(const Inventory& inv) {
  std::vector<Violation> out;
  std::unordered_set<std::string> ids;
  std::vector<std::string> expect_actions, expect_objects;
  std::unordered_set<std::string> seen_a, seen_o;

  for (const auto& i : inv.instances) {
    if (i.id.empty()) out.push_back({i.id, "empty id"});
    else if (!ids.insert(i.id).second) out.push_back({i.id, "duplicate id"});
    if (i.action.empty()) out.push_back({i.id, "empty action label"});
    if (i.object.empty()) out.push_back({i.id, "empty object label"});
    if (!i.action.empty() && seen_a.insert(i.action).second) expect_actions.push_back(i.action);
    if (!i.object.empty() && seen_o.insert(i.object).second) expect_objects.push_back(i.object);
  }

  auto check_vocab = [&out](const std::vector<std::string>& vocab,
                            const std::vector<std::string>& expected, const char* what) {
    std::unordered_set<std::string> in_vocab(vocab.begin(), vocab.end());
    std::unordered_set<std::string> used(expected.begin(), expected.end());
    for (const auto& label : expected) {
      if (!in_vocab.count(label)) out.push_back({label, std::string(what) + " vocab missing used label"});
    }
    std::unordered_set<std::string> dup;
    for (const auto& label : vocab) {
      if (!used.count(label)) out.push_back({label, std::string(what) + " vocab has unused label"});
      if (!dup.insert(label).second) out.push_back({label, std::string(what) + " vocab has duplicate label"});
    }
    // Only meaningful once membership matches.
    if (in_vocab.size() == vocab.size() && in_vocab == used && vocab != expected) {
      out.push_back({"", std::string(what) + " vocab not in first-occurrence order"});
    }
  };
  check_vocab(inv.action_vocab, expect_actions, "action");
  check_vocab(inv.object_vocab, expect_objects, "object");
  return out;
}

std::string inventory_digest(const Inventory& inv) {
  const std::string canonical = serialize_inventory(inv, InventoryFormat::record_lines);
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(canonical.data(), canonical.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::io, "sha256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out = "sha256:";
  for (unsigned int k = 0; k < len; ++k) {
    out += hex[md[k] >> 4];
    out += hex[md[k] & 0xF];
  }
  return out;
}

}  // namespace xsl
