#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <typeindex>
#include <utility>

#include "mimic/reflect.hpp"
#include "mimic/snapshot.hpp"

namespace mimic {

inline constexpr std::size_t kDefaultDepthLimit = 8;

struct CaptureOptions {
  std::size_t depth_limit = kDefaultDepthLimit;
  /// Direct fields of the root object captured as opaque (mockable fields).
  std::set<std::string> opaque_root_fields;
  /// Values whose type name is listed are captured as opaque.
  std::set<std::string> opaque_types;
};

namespace detail {

template <class T>
concept MapLike = requires(const T& m) {
  typename T::key_type;
  typename T::mapped_type;
  m.begin()->first;
  m.begin()->second;
};

template <class T>
concept RangeLike = requires(const T& r) {
  typename T::value_type;
  r.begin();
  r.end();
};

template <class T>
concept ScalarKey = std::is_arithmetic_v<T> || std::is_enum_v<T> || std::is_same_v<T, std::string>;

template <class T>
concept PointerLike = std::is_pointer_v<T> || is_specialization<T, std::shared_ptr>::value ||
                      is_specialization<T, std::unique_ptr>::value || is_specialization<T, std::weak_ptr>::value;

}  // namespace detail

/// Deep, total traversal of a value into a Snapshot tree. Objects reached
/// twice (through pointers, or a pointer to an object seen earlier) become
/// `ref` nodes. Anything the library cannot look into becomes opaque.
class Capturer {
 public:
  explicit Capturer(CaptureOptions options = {}) : options_(std::move(options)) {}

  template <class T>
  Snapshot take(const T& value) {
    next_id_ = 0;
    seen_.clear();
    Snapshot s = node(value, 1, true);
    return canonicalize_ids(s);
  }

 private:
  template <class T>
  Snapshot node(const T& v, std::size_t level, bool root = false) {
    using U = std::remove_cv_t<T>;
    if constexpr (std::is_same_v<U, bool>) {
      return Snapshot::primitive("bool", v);
    } else if constexpr (std::is_integral_v<U>) {
      if constexpr (std::is_signed_v<U>) {
        return Snapshot::primitive(type_name<U>(), static_cast<std::int64_t>(v));
      } else {
        return Snapshot::primitive(type_name<U>(), static_cast<std::uint64_t>(v));
      }
    } else if constexpr (std::is_floating_point_v<U>) {
      return Snapshot::primitive(type_name<U>(), static_cast<double>(v));
    } else if constexpr (std::is_enum_v<U>) {
      return Snapshot::primitive(type_name<U>(), static_cast<std::int64_t>(v));
    } else if constexpr (std::is_same_v<U, std::string> || std::is_same_v<U, std::string_view>) {
      return Snapshot::text(type_name<U>(), std::string(v));
    } else if constexpr (std::is_same_v<U, const char*> || std::is_same_v<U, char*>) {
      if (v == nullptr) return Snapshot::null();
      return Snapshot::text("const char*", std::string(v));
    } else if constexpr (std::is_same_v<U, std::nullptr_t>) {
      return Snapshot::null();
    } else if constexpr (detail::is_specialization<U, std::optional>::value) {
      if (!v) return Snapshot::null();
      return node(*v, level);
    } else if constexpr (detail::is_specialization<U, std::weak_ptr>::value) {
      return node(v.lock(), level);
    } else if constexpr (detail::PointerLike<U>) {
      if (!v) return Snapshot::null();
      return pointee(*v, level);
    } else {
      if (forced_opaque(type_name<U>())) return Snapshot::opaque(type_name<U>());
      if constexpr (Reflected<U>) {
        // Value-held objects are registered as ref targets but never become refs.
        return object(v, level, root, /*identity=*/false);
      } else if constexpr (detail::MapLike<U>) {
        return mapping(v, level);
      } else if constexpr (detail::RangeLike<U>) {
        return sequence(v, level);
      } else {
        return Snapshot::opaque(type_name<U>());
      }
    }
  }

  template <class T>
  Snapshot pointee(const T& v, std::size_t level) {
    using U = std::remove_cv_t<T>;
    if constexpr (std::is_void_v<U> || std::is_abstract_v<U> || std::is_function_v<U>) {
      return Snapshot::opaque(type_name<U>());
    } else if constexpr (Reflected<U>) {
      if (forced_opaque(type_name<U>())) return Snapshot::opaque(type_name<U>());
      return object(v, level, false, true);
    } else {
      return node(v, level);
    }
  }

  template <class T>
  Snapshot object(const T& v, std::size_t level, bool root, bool identity) {
    (void)detail::TypeRegistration<T>::value;
    const auto key = std::make_pair(static_cast<const void*>(&v), std::type_index(typeid(T)));
    if (identity) {
      if (auto it = seen_.find(key); it != seen_.end()) return Snapshot::ref(it->second);
    }
    std::vector<FieldEntry> fields;
    bool truncated = false;
    std::int64_t id = next_id_++;
    const bool inserted = seen_.emplace(key, id).second;
    FieldVisitor visitor{*this, fields, level, root, truncated};
    Access::visit(const_cast<T&>(v), visitor);
    if (truncated) {
      if (inserted) seen_.erase(key);
      return Snapshot::opaque(type_name<T>());
    }
    Snapshot s = Snapshot::object(type_name<T>(), std::move(fields));
    s.set_node_id(id);
    return s;
  }

  struct FieldVisitor {
    Capturer& self;
    std::vector<FieldEntry>& fields;
    std::size_t level;
    bool root;
    bool& truncated;

    template <class F>
    void operator()(std::string_view name, F& field) {
      if (level >= self.options_.depth_limit) {
        truncated = true;
        return;
      }
      std::string key(name);
      if (root && self.options_.opaque_root_fields.count(key)) {
        fields.push_back({key, Snapshot::opaque(opaque_name<F>())});
        return;
      }
      fields.push_back({key, self.node(field, level + 1)});
    }
  };

  template <class F>
  static std::string opaque_name() {
    if constexpr (!std::is_void_v<detail::pointee_t<F>>) {
      return type_name<detail::pointee_t<F>>();
    } else {
      return type_name<F>();
    }
  }

  template <class M>
  Snapshot mapping(const M& m, std::size_t level) {
    using K = typename M::key_type;
    if constexpr (!detail::ScalarKey<std::remove_cv_t<K>>) {
      return Snapshot::opaque(type_name<M>());
    } else {
      if (!m.empty() && level >= options_.depth_limit) return Snapshot::opaque(type_name<M>());
      // Expand values in key order so identity (which occurrence becomes the
      // ref) does not depend on hash iteration order.
      std::vector<std::pair<Snapshot, const typename M::mapped_type*>> keyed;
      for (const auto& [k, val] : m) keyed.emplace_back(node(k, level + 1), &val);
      std::sort(keyed.begin(), keyed.end(),
                [](const auto& a, const auto& b) { return scalar_less(a.first, b.first); });
      std::vector<MapEntry> entries;
      for (auto& [k, val] : keyed) entries.push_back({std::move(k), node(*val, level + 1)});
      return Snapshot::mapping(type_name<M>(), std::move(entries));
    }
  }

  template <class R>
  Snapshot sequence(const R& r, std::size_t level) {
    if (r.begin() != r.end() && level >= options_.depth_limit) return Snapshot::opaque(type_name<R>());
    std::vector<Snapshot> items;
    for (const auto& item : r) {
      items.push_back(node(static_cast<const typename R::value_type&>(item), level + 1));
    }
    if constexpr (detail::is_specialization<R, std::unordered_set>::value) {
      std::sort(items.begin(), items.end(), scalar_less);
    }
    return Snapshot::sequence(type_name<R>(), std::move(items));
  }

  bool forced_opaque(const std::string& name) const { return options_.opaque_types.count(name) > 0; }

  CaptureOptions options_;
  std::int64_t next_id_ = 0;
  std::map<std::pair<const void*, std::type_index>, std::int64_t> seen_;
};

/// Snapshot of `value` with the given options.
template <class T>
Snapshot snapshot_object(const T& value, const CaptureOptions& options = {}) {
  return Capturer(options).take(value);
}

}  // namespace mimic
