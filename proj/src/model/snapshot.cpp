#include "mimic/snapshot.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <set>

namespace mimic {

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::null: return "null";
    case NodeKind::primitive: return "primitive";
    case NodeKind::text: return "text";
    case NodeKind::sequence: return "sequence";
    case NodeKind::mapping: return "mapping";
    case NodeKind::object: return "object";
    case NodeKind::opaque: return "opaque";
    case NodeKind::ref: return "ref";
  }
  return "?";
}

Scalar normalize_scalar(Scalar s) {
  if (const auto* u = std::get_if<std::uint64_t>(&s)) {
    if (*u <= static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      return static_cast<std::int64_t>(*u);
    }
  }
  return s;
}

Snapshot Snapshot::null() { return Snapshot{}; }

Snapshot Snapshot::primitive(std::string type_name, Scalar value) {
  Snapshot s;
  s.kind_ = NodeKind::primitive;
  s.type_name_ = std::move(type_name);
  s.scalar_ = normalize_scalar(value);
  return s;
}

Snapshot Snapshot::text(std::string type_name, std::string value) {
  Snapshot s;
  s.kind_ = NodeKind::text;
  s.type_name_ = std::move(type_name);
  s.text_ = std::move(value);
  return s;
}

Snapshot Snapshot::sequence(std::string type_name, std::vector<Snapshot> items) {
  Snapshot s;
  s.kind_ = NodeKind::sequence;
  s.type_name_ = std::move(type_name);
  s.items_ = std::move(items);
  return s;
}

Snapshot Snapshot::mapping(std::string type_name, std::vector<MapEntry> entries) {
  Snapshot s;
  s.kind_ = NodeKind::mapping;
  s.type_name_ = std::move(type_name);
  std::stable_sort(entries.begin(), entries.end(),
                   [](const MapEntry& a, const MapEntry& b) { return scalar_less(a.key, b.key); });
  s.entries_ = std::move(entries);
  return s;
}

Snapshot Snapshot::object(std::string type_name, std::vector<FieldEntry> fields) {
  Snapshot s;
  s.kind_ = NodeKind::object;
  s.type_name_ = std::move(type_name);
  s.fields_ = std::move(fields);
  return s;
}

Snapshot Snapshot::opaque(std::string type_name) {
  Snapshot s;
  s.kind_ = NodeKind::opaque;
  s.type_name_ = std::move(type_name);
  return s;
}

Snapshot Snapshot::ref(std::int64_t target) {
  Snapshot s;
  s.kind_ = NodeKind::ref;
  s.ref_target_ = target;
  return s;
}

bool Snapshot::has_children() const {
  return !items_.empty() || !entries_.empty() || !fields_.empty();
}

const Snapshot* Snapshot::field(std::string_view name) const {
  for (const auto& f : fields_) {
    if (f.name == name) return &f.value;
  }
  return nullptr;
}

namespace {

bool double_same(double a, double b) {
  if (std::isnan(a) && std::isnan(b)) return true;
  return std::memcmp(&a, &b, sizeof a) == 0;
}

bool scalar_same(const Scalar& a, const Scalar& b) {
  if (a.index() != b.index()) return false;
  if (const auto* da = std::get_if<double>(&a)) return double_same(*da, std::get<double>(b));
  return a == b;
}

int scalar_order(const Scalar& a, const Scalar& b) {
  if (a.index() != b.index()) return a.index() < b.index() ? -1 : 1;
  return std::visit(
      [&](const auto& x) -> int {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b);
        if constexpr (std::is_same_v<T, double>) {
          if (double_same(x, y)) return 0;
          if (std::isnan(x)) return 1;
          if (std::isnan(y)) return -1;
          if (x == y) return std::signbit(x) ? -1 : 1;  // -0.0 before 0.0
        }
        return x < y ? -1 : (y < x ? 1 : 0);
      },
      a);
}

}  // namespace

bool scalar_less(const Snapshot& a, const Snapshot& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  if (a.type_name() != b.type_name()) return a.type_name() < b.type_name();
  if (a.kind() == NodeKind::text) return a.text_value() < b.text_value();
  return scalar_order(a.scalar(), b.scalar()) < 0;
}

namespace {

struct Matcher {
  // id in `a` -> id (if any) of the node at the same position in `b`
  std::map<std::int64_t, std::optional<std::int64_t>> position;
  std::vector<std::pair<std::int64_t, std::int64_t>> refs;

  bool walk(const Snapshot& a, const Snapshot& b) {
    if (a.kind() != b.kind()) return false;
    if (a.kind() == NodeKind::ref) {
      refs.emplace_back(a.ref_target(), b.ref_target());
      return true;
    }
    if (a.type_name() != b.type_name()) return false;
    if (auto id = a.node_id()) {
      if (position.count(*id)) return false;  // duplicate id in a
      position[*id] = b.node_id();
    }
    switch (a.kind()) {
      case NodeKind::null:
      case NodeKind::opaque:
        return true;
      case NodeKind::primitive:
        return scalar_same(a.scalar(), b.scalar());
      case NodeKind::text:
        return a.text_value() == b.text_value();
      case NodeKind::sequence:
        if (a.items().size() != b.items().size()) return false;
        for (std::size_t i = 0; i < a.items().size(); ++i) {
          if (!walk(a.items()[i], b.items()[i])) return false;
        }
        return true;
      case NodeKind::mapping:
        if (a.entries().size() != b.entries().size()) return false;
        for (std::size_t i = 0; i < a.entries().size(); ++i) {
          if (!walk(a.entries()[i].key, b.entries()[i].key)) return false;
          if (!walk(a.entries()[i].value, b.entries()[i].value)) return false;
        }
        return true;
      case NodeKind::object:
        if (a.fields().size() != b.fields().size()) return false;
        for (std::size_t i = 0; i < a.fields().size(); ++i) {
          if (a.fields()[i].name != b.fields()[i].name) return false;
          if (!walk(a.fields()[i].value, b.fields()[i].value)) return false;
        }
        return true;
      case NodeKind::ref:
        break;
    }
    return false;
  }
};

void collect_ids(const Snapshot& s, std::set<std::int64_t>& out) {
  if (auto id = s.node_id()) out.insert(*id);
  for (const auto& c : s.items()) collect_ids(c, out);
  for (const auto& e : s.entries()) {
    collect_ids(e.key, out);
    collect_ids(e.value, out);
  }
  for (const auto& f : s.fields()) collect_ids(f.value, out);
}

}  // namespace

bool structural_equals(const Snapshot& a, const Snapshot& b) {
  Matcher m;
  if (!m.walk(a, b)) return false;
  if (m.refs.empty()) return true;
  std::set<std::int64_t> b_ids;
  collect_ids(b, b_ids);
  for (const auto& [ta, tb] : m.refs) {
    auto it = m.position.find(ta);
    if (it == m.position.end() || !it->second || *it->second != tb) return false;
    if (!b_ids.count(tb)) return false;
  }
  return true;
}

std::size_t tree_depth(const Snapshot& s) {
  std::size_t deepest = 0;
  for (const auto& c : s.items()) deepest = std::max(deepest, tree_depth(c));
  for (const auto& e : s.entries()) {
    deepest = std::max({deepest, tree_depth(e.key), tree_depth(e.value)});
  }
  for (const auto& f : s.fields()) deepest = std::max(deepest, tree_depth(f.value));
  return deepest + 1;
}

namespace {

void opaque_walk(const Snapshot& s, const std::string& path, std::vector<std::string>& out) {
  if (s.kind() == NodeKind::opaque) {
    out.push_back(path);
    return;
  }
  for (std::size_t i = 0; i < s.items().size(); ++i) {
    opaque_walk(s.items()[i], path + "[" + std::to_string(i) + "]", out);
  }
  for (std::size_t i = 0; i < s.entries().size(); ++i) {
    opaque_walk(s.entries()[i].value, path + "{" + std::to_string(i) + "}", out);
  }
  for (const auto& f : s.fields()) opaque_walk(f.value, path + "." + f.name, out);
}

void referenced(const Snapshot& s, std::set<std::int64_t>& out) {
  if (s.kind() == NodeKind::ref) out.insert(s.ref_target());
  for (const auto& c : s.items()) referenced(c, out);
  for (const auto& e : s.entries()) {
    referenced(e.key, out);
    referenced(e.value, out);
  }
  for (const auto& f : s.fields()) referenced(f.value, out);
}

void renumber(Snapshot& s, const std::set<std::int64_t>& used, std::map<std::int64_t, std::int64_t>& ids) {
  if (auto id = s.node_id()) {
    if (used.count(*id)) {
      auto fresh = static_cast<std::int64_t>(ids.size());
      ids.emplace(*id, fresh);
      s.set_node_id(fresh);
    } else {
      s.set_node_id(std::nullopt);
    }
  }
  for (auto& c : s.mutable_items()) renumber(c, used, ids);
  for (auto& e : s.mutable_entries()) renumber(e.value, used, ids);
  for (auto& f : s.mutable_fields()) renumber(f.value, used, ids);
}

Snapshot retarget(const Snapshot& s, const std::map<std::int64_t, std::int64_t>& ids) {
  if (s.kind() == NodeKind::ref) {
    auto it = ids.find(s.ref_target());
    return Snapshot::ref(it == ids.end() ? s.ref_target() : it->second);
  }
  Snapshot out = s;
  for (auto& c : out.mutable_items()) c = retarget(c, ids);
  for (auto& e : out.mutable_entries()) e.value = retarget(e.value, ids);
  for (auto& f : out.mutable_fields()) f.value = retarget(f.value, ids);
  return out;
}

}  // namespace

std::vector<std::string> opaque_paths(const Snapshot& s) {
  std::vector<std::string> out;
  opaque_walk(s, "$", out);
  return out;
}

Snapshot canonicalize_ids(const Snapshot& s) {
  std::set<std::int64_t> used;
  referenced(s, used);
  Snapshot out = s;
  std::map<std::int64_t, std::int64_t> ids;
  renumber(out, used, ids);
  return retarget(out, ids);
}

}  // namespace mimic
