#include "mimic/codec.hpp"

#include <cmath>
#include <regex>
#include <set>

#include <json.hpp>

#include "mimic/errors.hpp"

namespace mimic {

using nlohmann::json;

namespace {

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 0;
    if (len == 0 || i + len > s.size()) return false;
    for (std::size_t k = 1; k < len; ++k) {
      if ((static_cast<unsigned char>(s[i + k]) >> 6) != 0x2) return false;
    }
    i += len;
  }
  return true;
}

void check_text(std::string_view s, const std::string& path) {
  if (!valid_utf8(s)) throw SerializationError(path, "text is not valid UTF-8");
}

json node_to_json(const Snapshot& s, const std::string& path) {
  json j = json::object();
  j["kind"] = std::string(to_string(s.kind()));
  if (s.kind() == NodeKind::ref) {
    j["ref"] = s.ref_target();
    return j;
  }
  if (s.kind() != NodeKind::null) {
    check_text(s.type_name(), path + ".type");
    j["type"] = s.type_name();
  }
  if (auto id = s.node_id()) j["id"] = *id;
  switch (s.kind()) {
    case NodeKind::primitive:
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              if (!std::isfinite(v)) throw SerializationError(path, "non-finite floating point value");
            }
            j["value"] = v;
          },
          s.scalar());
      break;
    case NodeKind::text:
      check_text(s.text_value(), path);
      j["value"] = s.text_value();
      break;
    case NodeKind::sequence: {
      json items = json::array();
      for (std::size_t i = 0; i < s.items().size(); ++i) {
        items.push_back(node_to_json(s.items()[i], path + "[" + std::to_string(i) + "]"));
      }
      j["items"] = std::move(items);
      break;
    }
    case NodeKind::mapping: {
      json entries = json::array();
      for (std::size_t i = 0; i < s.entries().size(); ++i) {
        const auto& e = s.entries()[i];
        auto p = path + "{" + std::to_string(i) + "}";
        entries.push_back(json::array({node_to_json(e.key, p + ".key"), node_to_json(e.value, p)}));
      }
      j["entries"] = std::move(entries);
      break;
    }
    case NodeKind::object: {
      json fields = json::array();
      for (const auto& f : s.fields()) {
        check_text(f.name, path + ".<name>");
        fields.push_back(json::array({f.name, node_to_json(f.value, path + "." + f.name)}));
      }
      j["fields"] = std::move(fields);
      break;
    }
    default:
      break;
  }
  return j;
}

[[noreturn]] void malformed(const std::string& path, const std::string& what) {
  throw ValidationError("malformed snapshot node", path + ": " + what);
}

void expect_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& path) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) {
      if (key == "items" || key == "entries" || key == "fields" || key == "value") {
        malformed(path, "unexpected payload '" + key + "' for this kind");
      }
      malformed(path, "unexpected key '" + key + "'");
    }
  }
}

const json& require(const json& j, const char* key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) malformed(path, std::string("missing '") + key + "'");
  return *it;
}

std::string require_string(const json& j, const char* key, const std::string& path) {
  const auto& v = require(j, key, path);
  if (!v.is_string()) malformed(path, std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

std::int64_t require_int(const json& v, const std::string& path) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  malformed(path, "expected an integer");
}

Snapshot node_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) malformed(path, "node must be an object");
  const std::string kind = require_string(j, "kind", path);
  std::optional<std::int64_t> id;
  if (auto it = j.find("id"); it != j.end()) id = require_int(*it, path + ".id");
  Snapshot s;
  if (kind == "null") {
    expect_keys(j, {"kind"}, path);
    return s;
  }
  if (kind == "ref") {
    expect_keys(j, {"kind", "ref"}, path);
    return Snapshot::ref(require_int(require(j, "ref", path), path));
  }
  std::string type = require_string(j, "type", path);
  if (kind == "primitive") {
    expect_keys(j, {"kind", "type", "id", "value"}, path);
    const auto& v = require(j, "value", path);
    if (v.is_boolean()) {
      s = Snapshot::primitive(type, v.get<bool>());
    } else if (v.is_number_unsigned()) {
      s = Snapshot::primitive(type, v.get<std::uint64_t>());
    } else if (v.is_number_integer()) {
      s = Snapshot::primitive(type, v.get<std::int64_t>());
    } else if (v.is_number_float()) {
      s = Snapshot::primitive(type, v.get<double>());
    } else {
      malformed(path, "primitive value must be a boolean or number");
    }
  } else if (kind == "text") {
    expect_keys(j, {"kind", "type", "id", "value"}, path);
    s = Snapshot::text(type, require_string(j, "value", path));
  } else if (kind == "sequence") {
    expect_keys(j, {"kind", "type", "id", "items"}, path);
    const auto& items = require(j, "items", path);
    if (!items.is_array()) malformed(path, "'items' must be an array");
    std::vector<Snapshot> out;
    for (std::size_t i = 0; i < items.size(); ++i) {
      out.push_back(node_from_json(items[i], path + "[" + std::to_string(i) + "]"));
    }
    s = Snapshot::sequence(type, std::move(out));
  } else if (kind == "mapping") {
    expect_keys(j, {"kind", "type", "id", "entries"}, path);
    const auto& entries = require(j, "entries", path);
    if (!entries.is_array()) malformed(path, "'entries' must be an array");
    std::vector<MapEntry> out;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const auto& e = entries[i];
      auto p = path + "{" + std::to_string(i) + "}";
      if (!e.is_array() || e.size() != 2) malformed(p, "entry must be a [key, value] pair");
      out.push_back({node_from_json(e[0], p + ".key"), node_from_json(e[1], p)});
    }
    s = Snapshot::mapping(type, std::move(out));
  } else if (kind == "object") {
    expect_keys(j, {"kind", "type", "id", "fields"}, path);
    const auto& fields = require(j, "fields", path);
    if (!fields.is_array()) malformed(path, "'fields' must be an array");
    std::vector<FieldEntry> out;
    for (const auto& f : fields) {
      if (!f.is_array() || f.size() != 2 || !f[0].is_string()) malformed(path, "field must be a [name, value] pair");
      auto name = f[0].get<std::string>();
      out.push_back({name, node_from_json(f[1], path + "." + name)});
    }
    s = Snapshot::object(type, std::move(out));
  } else if (kind == "opaque") {
    expect_keys(j, {"kind", "type", "id"}, path);
    s = Snapshot::opaque(type);
  } else {
    malformed(path, "unknown kind '" + kind + "'");
  }
  s.set_node_id(id);
  return s;
}

std::string dump(const json& j) { return j.dump(-1, ' ', false, json::error_handler_t::strict); }

json parse_json(std::string_view text, std::size_t base_offset) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t at = e.byte == 0 ? 0 : e.byte - 1;
    throw ParseError(base_offset + at, e.what());
  }
}

void validate_tree(const Snapshot& s, const std::string& path, std::set<std::int64_t>& ids,
                   std::vector<std::pair<std::int64_t, std::string>>& refs) {
  if (auto id = s.node_id()) {
    if (s.kind() == NodeKind::ref || s.kind() == NodeKind::null) {
      throw ValidationError("node id on a null or ref node", path);
    }
    if (!ids.insert(*id).second) throw ValidationError("duplicate node id", path);
  }
  switch (s.kind()) {
    case NodeKind::null:
    case NodeKind::ref:
      if (!s.type_name().empty() || s.has_children()) throw ValidationError("payload on a null or ref node", path);
      if (s.kind() == NodeKind::ref) refs.emplace_back(s.ref_target(), path);
      return;
    case NodeKind::opaque:
      if (s.has_children()) throw ValidationError("opaque node with children", path);
      break;
    case NodeKind::primitive:
    case NodeKind::text:
      if (s.has_children()) throw ValidationError("scalar node with children", path);
      break;
    case NodeKind::mapping:
      for (std::size_t i = 0; i < s.entries().size(); ++i) {
        const auto& e = s.entries()[i];
        auto p = path + "{" + std::to_string(i) + "}";
        if (!e.key.is_scalar()) throw ValidationError("non-scalar mapping key", p);
        if (e.key.node_id()) throw ValidationError("node id on a mapping key", p);
        if (i > 0 && !scalar_less(s.entries()[i - 1].key, e.key)) {
          throw ValidationError("duplicate mapping key", p);
        }
        validate_tree(e.value, p, ids, refs);
      }
      break;
    case NodeKind::sequence:
      for (std::size_t i = 0; i < s.items().size(); ++i) {
        validate_tree(s.items()[i], path + "[" + std::to_string(i) + "]", ids, refs);
      }
      break;
    case NodeKind::object: {
      std::set<std::string> names;
      for (const auto& f : s.fields()) {
        if (!names.insert(f.name).second) throw ValidationError("duplicate field name", path + "." + f.name);
        validate_tree(f.value, path + "." + f.name, ids, refs);
      }
      break;
    }
  }
  if (s.type_name().empty()) throw ValidationError("missing type name", path);
}

void validate_snapshot_at(const Snapshot& s, const std::string& path, std::optional<std::size_t> depth_limit) {
  std::set<std::int64_t> ids;
  std::vector<std::pair<std::int64_t, std::string>> refs;
  validate_tree(s, path, ids, refs);
  for (const auto& [target, where] : refs) {
    if (!ids.count(target)) throw ValidationError("unresolved ref target", where);
  }
  if (depth_limit && tree_depth(s) > *depth_limit) {
    throw ValidationError("snapshot deeper than depth limit", path);
  }
}

bool valid_uid(const std::string& uid) {
  if (uid.empty()) return false;
  for (char c : uid) {
    if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_')) return false;
  }
  return true;
}

}  // namespace

std::string encode_snapshot(const Snapshot& s) { return dump(node_to_json(s, "$")); }

Snapshot decode_snapshot(std::string_view text) {
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.remove_suffix(1);
  Snapshot s = node_from_json(parse_json(text, 0), "$");
  validate_snapshot(s);
  return s;
}

void validate_snapshot(const Snapshot& s) { validate_snapshot_at(s, "$", std::nullopt); }

void validate_record(const InvocationRecord& r, std::optional<std::size_t> depth_limit) {
  if (r.schema_version != kSchemaVersion) throw VersionError(r.schema_version);
  if (r.mut_id.empty()) throw ValidationError("empty mut_id");
  if (!valid_uid(r.invocation_uid)) throw ValidationError("invalid invocation_uid", r.invocation_uid);
  static const std::regex kTimestamp(R"(\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}\.\d{3}Z)");
  if (!std::regex_match(r.timestamp, kTimestamp)) throw ValidationError("malformed timestamp", r.timestamp);
  validate_snapshot_at(r.receiver, "receiver", depth_limit);
  for (std::size_t i = 0; i < r.args.size(); ++i) {
    validate_snapshot_at(r.args[i], "args[" + std::to_string(i) + "]", depth_limit);
  }
  if (const auto* ret = std::get_if<Returned>(&r.outcome)) {
    validate_snapshot_at(ret->value, "outcome", depth_limit);
  } else if (std::get<Raised>(r.outcome).error_type.empty()) {
    throw ValidationError("raised outcome without error type");
  }
  for (std::size_t i = 0; i < r.calls.size(); ++i) {
    const auto& c = r.calls[i];
    if (i > 0 && c.seq <= r.calls[i - 1].seq) throw ValidationError("calls not sorted by seq");
  }
  for (std::size_t i = 0; i < r.calls.size(); ++i) {
    const auto& c = r.calls[i];
    auto where = "calls[" + std::to_string(i) + "]";
    if (c.seq != static_cast<std::int64_t>(i)) throw ValidationError("non-contiguous seq", where);
    if (c.site_id.empty()) throw ValidationError("empty site_id", where);
    for (std::size_t k = 0; k < c.args.size(); ++k) {
      validate_snapshot_at(c.args[k], where + ".args[" + std::to_string(k) + "]", depth_limit);
    }
    validate_snapshot_at(c.return_value, where + ".return", depth_limit);
  }
}

void validate_record(const InvocationRecord& r, const MutDescriptor& d, std::optional<std::size_t> depth_limit) {
  validate_record(r, depth_limit);
  if (r.mut_id != d.mut_id) throw ValidationError("mut_id does not match descriptor", r.mut_id);
  if (r.args.size() != d.param_count()) {
    throw ValidationError("args length differs from param_count",
                          std::to_string(r.args.size()) + " vs " + std::to_string(d.param_count()));
  }
  for (auto index : d.mockable_params()) {
    if (r.args[index].kind() != NodeKind::opaque) {
      throw ValidationError("mockable parameter not opaque", "args[" + std::to_string(index) + "]");
    }
  }
  for (const auto& c : r.calls) {
    const CallSite* site = d.find_site(c.site_id);
    if (!site) throw ValidationError("unknown site_id", c.site_id);
    if (c.args.size() != site->callee_arity) throw ValidationError("call args length differs from callee arity", c.site_id);
  }
}

std::string encode_record(const InvocationRecord& r) {
  std::string out;
  auto line = [&](std::string_view key, const std::string& payload) {
    out += key;
    out += ' ';
    out += payload;
    out += '\n';
  };
  line("schema_version", std::to_string(r.schema_version));
  check_text(r.mut_id, "mut_id");
  line("mut_id", dump(r.mut_id));
  check_text(r.invocation_uid, "invocation_uid");
  line("invocation_uid", dump(r.invocation_uid));
  line("timestamp", dump(r.timestamp));
  line("receiver", dump(node_to_json(r.receiver, "receiver")));
  json args = json::array();
  for (std::size_t i = 0; i < r.args.size(); ++i) args.push_back(node_to_json(r.args[i], "args[" + std::to_string(i) + "]"));
  line("args", dump(args));
  json outcome = json::object();
  if (const auto* ret = std::get_if<Returned>(&r.outcome)) {
    outcome["returned"] = node_to_json(ret->value, "outcome");
  } else {
    check_text(std::get<Raised>(r.outcome).error_type, "outcome.raised");
    outcome["raised"] = std::get<Raised>(r.outcome).error_type;
  }
  line("outcome", dump(outcome));
  for (std::size_t i = 0; i < r.calls.size(); ++i) {
    const auto& c = r.calls[i];
    auto where = "calls[" + std::to_string(i) + "]";
    json call = json::object();
    call["seq"] = c.seq;
    check_text(c.site_id, where + ".site");
    call["site"] = c.site_id;
    json cargs = json::array();
    for (std::size_t k = 0; k < c.args.size(); ++k) {
      cargs.push_back(node_to_json(c.args[k], where + ".args[" + std::to_string(k) + "]"));
    }
    call["args"] = std::move(cargs);
    call["return"] = node_to_json(c.return_value, where + ".return");
    line("call", dump(call));
  }
  return out;
}

InvocationRecord decode_record(std::string_view data) {
  struct Line {
    std::size_t offset;
    std::string_view key;
    std::string_view payload;
    std::size_t payload_offset;
  };
  std::vector<Line> lines;
  std::size_t pos = 0;
  while (pos < data.size()) {
    auto nl = data.find('\n', pos);
    if (nl == std::string_view::npos) throw ParseError(data.size(), "truncated input: missing final newline");
    auto text = data.substr(pos, nl - pos);
    auto sp = text.find(' ');
    if (sp == std::string_view::npos || sp == 0) throw ParseError(pos, "expected '<key> <value>'");
    lines.push_back({pos, text.substr(0, sp), text.substr(sp + 1), pos + sp + 1});
    pos = nl + 1;
  }

  static constexpr const char* kOrder[] = {"schema_version", "mut_id", "invocation_uid", "timestamp",
                                           "receiver",       "args",   "outcome"};
  constexpr std::size_t kFixed = std::size(kOrder);
  for (std::size_t i = 0; i < kFixed; ++i) {
    if (i >= lines.size()) throw ParseError(data.size(), std::string("unexpected end of input, expected '") + kOrder[i] + "'");
    if (lines[i].key != kOrder[i]) {
      throw ParseError(lines[i].offset, std::string("expected '") + kOrder[i] + "', found '" + std::string(lines[i].key) + "'");
    }
  }

  InvocationRecord r;
  auto payload = [&](std::size_t i) { return parse_json(lines[i].payload, lines[i].payload_offset); };
  json version = payload(0);
  if (!version.is_number_integer()) throw ParseError(lines[0].payload_offset, "schema_version must be an integer");
  if (version.get<long long>() != kSchemaVersion) throw VersionError(version.get<long long>());
  r.schema_version = kSchemaVersion;

  auto string_line = [&](std::size_t i) {
    json j = payload(i);
    if (!j.is_string()) throw ParseError(lines[i].payload_offset, std::string(kOrder[i]) + " must be a string");
    return j.get<std::string>();
  };
  r.mut_id = string_line(1);
  r.invocation_uid = string_line(2);
  r.timestamp = string_line(3);
  r.receiver = node_from_json(payload(4), "receiver");
  json args = payload(5);
  if (!args.is_array()) throw ParseError(lines[5].payload_offset, "args must be an array");
  for (std::size_t i = 0; i < args.size(); ++i) r.args.push_back(node_from_json(args[i], "args[" + std::to_string(i) + "]"));
  json outcome = payload(6);
  if (!outcome.is_object() || outcome.size() != 1) throw ValidationError("malformed outcome");
  if (auto it = outcome.find("returned"); it != outcome.end()) {
    r.outcome = Returned{node_from_json(*it, "outcome")};
  } else if (auto raised = outcome.find("raised"); raised != outcome.end() && raised->is_string()) {
    r.outcome = Raised{raised->get<std::string>()};
  } else {
    throw ValidationError("malformed outcome");
  }

  for (std::size_t i = kFixed; i < lines.size(); ++i) {
    if (lines[i].key != "call") {
      throw ParseError(lines[i].offset, "expected 'call', found '" + std::string(lines[i].key) + "'");
    }
    json c = payload(i);
    auto where = "calls[" + std::to_string(i - kFixed) + "]";
    if (!c.is_object() || c.size() != 4 || !c.contains("seq") || !c.contains("site") || !c.contains("args") ||
        !c.contains("return") || !c["site"].is_string() || !c["args"].is_array()) {
      throw ValidationError("malformed call record", where);
    }
    MockableCallRecord call;
    call.seq = require_int(c["seq"], where + ".seq");
    call.site_id = c["site"].get<std::string>();
    for (std::size_t k = 0; k < c["args"].size(); ++k) {
      call.args.push_back(node_from_json(c["args"][k], where + ".args[" + std::to_string(k) + "]"));
    }
    call.return_value = node_from_json(c["return"], where + ".return");
    r.calls.push_back(std::move(call));
  }
  validate_record(r);
  return r;
}

InvocationRecord decode_record(std::string_view data, const MutDescriptor& descriptor) {
  InvocationRecord r = decode_record(data);
  validate_record(r, descriptor);
  return r;
}

}  // namespace mimic
