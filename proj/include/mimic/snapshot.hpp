#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace mimic {

enum class NodeKind { null, primitive, text, sequence, mapping, object, opaque, ref };

std::string_view to_string(NodeKind kind);

/// Scalar payload of a primitive node. Unsigned values that fit in int64 are
/// normalized to int64 so equal numbers have one representation; the node's
/// type name keeps the signedness.
using Scalar = std::variant<bool, std::int64_t, std::uint64_t, double>;

Scalar normalize_scalar(Scalar s);

struct MapEntry;
struct FieldEntry;

/// One node of a captured object graph. Shared and cyclic references are
/// expressed by a `node_id` on the target and a `ref` node pointing at it.
class Snapshot {
 public:
  Snapshot() = default;

  static Snapshot null();
  static Snapshot primitive(std::string type_name, Scalar value);
  static Snapshot text(std::string type_name, std::string value);
  static Snapshot sequence(std::string type_name, std::vector<Snapshot> items);
  /// Entries are sorted by key so the encoding is canonical.
  static Snapshot mapping(std::string type_name, std::vector<MapEntry> entries);
  static Snapshot object(std::string type_name, std::vector<FieldEntry> fields);
  static Snapshot opaque(std::string type_name);
  static Snapshot ref(std::int64_t target);

  NodeKind kind() const { return kind_; }
  const std::string& type_name() const { return type_name_; }
  const Scalar& scalar() const { return scalar_; }
  const std::string& text_value() const { return text_; }
  const std::vector<Snapshot>& items() const { return items_; }
  const std::vector<MapEntry>& entries() const { return entries_; }
  const std::vector<FieldEntry>& fields() const { return fields_; }
  std::optional<std::int64_t> node_id() const { return node_id_; }
  std::int64_t ref_target() const { return ref_target_; }

  bool is_scalar() const { return kind_ == NodeKind::primitive || kind_ == NodeKind::text; }
  bool has_children() const;

  /// Field lookup for object nodes; nullptr when absent.
  const Snapshot* field(std::string_view name) const;

  Snapshot& set_node_id(std::optional<std::int64_t> id) {
    node_id_ = id;
    return *this;
  }

  // Mutable access used by capture and decoding while a tree is being built.
  std::vector<Snapshot>& mutable_items() { return items_; }
  std::vector<MapEntry>& mutable_entries() { return entries_; }
  std::vector<FieldEntry>& mutable_fields() { return fields_; }

 private:
  NodeKind kind_ = NodeKind::null;
  std::string type_name_;
  Scalar scalar_ = std::int64_t{0};
  std::string text_;
  std::vector<Snapshot> items_;
  std::vector<MapEntry> entries_;
  std::vector<FieldEntry> fields_;
  std::optional<std::int64_t> node_id_;
  std::int64_t ref_target_ = 0;
};

struct MapEntry {
  Snapshot key;
  Snapshot value;
};

struct FieldEntry {
  std::string name;
  Snapshot value;
};

/// Strict weak order over scalar nodes (kind, then payload); used to sort
/// mapping keys.
bool scalar_less(const Snapshot& a, const Snapshot& b);

/// Tree isomorphism including cycle structure. Opaque nodes compare by type
/// name only.
bool structural_equals(const Snapshot& a, const Snapshot& b);

/// Number of nodes on the longest root-to-leaf path, not following refs.
std::size_t tree_depth(const Snapshot& s);

/// Paths (e.g. `$.fields.extField`) of every opaque node in the tree.
std::vector<std::string> opaque_paths(const Snapshot& s);

/// Renumbers node ids in pre-order and drops ids nobody references.
Snapshot canonicalize_ids(const Snapshot& s);

}  // namespace mimic
