#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <typeindex>

#include "mimic/capture.hpp"
#include "mimic/errors.hpp"
#include "mimic/reflect.hpp"
#include "mimic/snapshot.hpp"

namespace mimic {

struct RestoreOptions {
  /// Direct fields of the root object that may hold opaque nodes; they are
  /// left default-initialized so a mock can be injected afterwards.
  std::set<std::string> unset_root_fields;
};

namespace detail {

/// Keeps objects reachable only through restored raw pointers alive for the
/// rest of the process.
void retain(std::shared_ptr<void> owner);

std::string restore_type_error(const std::string& expected, const std::string& found, const std::string& path);

}  // namespace detail

/// Rebuilds values from snapshots. Objects are created through
/// `mimic::Access::make` and populated field by field; shared and cyclic
/// structure is rebuilt from node ids. Refs must point at nodes that precede
/// them in pre-order, which is what capture produces.
class Restorer {
 public:
  explicit Restorer(RestoreOptions options = {}) : options_(std::move(options)) {}

  template <class T>
  void into(T& out, const Snapshot& s, const std::string& path = "$", bool root = true) {
    using U = std::remove_cv_t<T>;
    if (s.kind() == NodeKind::ref) {
      if constexpr (detail::PointerLike<U>) {
        out = resolve_ref<U>(s.ref_target(), path);
        return;
      } else {
        throw RestoreError("ref node in a value position at " + path);
      }
    }
    if (s.kind() == NodeKind::opaque) {
      throw RestoreError("opaque node of type '" + s.type_name() + "' on a restored path at " + path);
    }
    if constexpr (std::is_same_v<U, bool>) {
      expect(s, NodeKind::primitive, path);
      out = std::visit([](auto v) { return static_cast<bool>(v); }, s.scalar());
    } else if constexpr (std::is_arithmetic_v<U>) {
      expect(s, NodeKind::primitive, path);
      out = std::visit([](auto v) { return static_cast<U>(v); }, s.scalar());
    } else if constexpr (std::is_enum_v<U>) {
      expect(s, NodeKind::primitive, path);
      out = static_cast<U>(std::visit([](auto v) { return static_cast<std::int64_t>(v); }, s.scalar()));
    } else if constexpr (std::is_same_v<U, std::string>) {
      expect(s, NodeKind::text, path);
      out = s.text_value();
    } else if constexpr (detail::is_specialization<U, std::optional>::value) {
      if (s.kind() == NodeKind::null) {
        out.reset();
      } else {
        out.emplace();
        into(*out, s, path, false);
      }
    } else if constexpr (detail::PointerLike<U>) {
      if (s.kind() == NodeKind::null) {
        out = U{};
        return;
      }
      out = make_pointer<U>(s, path);
    } else if constexpr (Reflected<U>) {
      expect(s, NodeKind::object, path);
      check_type<U>(s, path);
      if (auto id = s.node_id()) register_node(*id, &out, {});
      populate(out, s, path, root);
    } else if constexpr (detail::MapLike<U>) {
      expect(s, NodeKind::mapping, path);
      out.clear();
      for (std::size_t i = 0; i < s.entries().size(); ++i) {
        const auto& e = s.entries()[i];
        typename U::key_type key{};
        auto p = path + "{" + std::to_string(i) + "}";
        into(key, e.key, p + ".key", false);
        into(out[key], e.value, p, false);
      }
    } else if constexpr (detail::is_std_array<U>::value) {
      expect(s, NodeKind::sequence, path);
      if (s.items().size() != out.size()) throw RestoreError("array length mismatch at " + path);
      for (std::size_t i = 0; i < out.size(); ++i) into(out[i], s.items()[i], index(path, i), false);
    } else if constexpr (detail::is_specialization<U, std::set>::value ||
                         detail::is_specialization<U, std::unordered_set>::value) {
      expect(s, NodeKind::sequence, path);
      out.clear();
      for (std::size_t i = 0; i < s.items().size(); ++i) {
        typename U::value_type v{};
        into(v, s.items()[i], index(path, i), false);
        out.insert(std::move(v));
      }
    } else if constexpr (detail::RangeLike<U> && requires(U u) { u.resize(std::size_t{}); }) {
      expect(s, NodeKind::sequence, path);
      out.clear();
      out.resize(s.items().size());
      std::size_t i = 0;
      for (auto& item : out) {
        if constexpr (std::is_same_v<typename U::value_type, bool>) {
          bool b = false;
          into(b, s.items()[i], index(path, i), false);
          item = b;
        } else {
          into(item, s.items()[i], index(path, i), false);
        }
        ++i;
      }
    } else {
      throw RestoreError("cannot restore values of type '" + type_name<U>() + "' at " + path);
    }
  }

 private:
  struct Registered {
    void* address;
    std::type_index type;
    std::shared_ptr<void> owner;
    std::shared_ptr<bool> release;  // set when a unique_ptr may adopt the object
  };

  static std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

  static void expect(const Snapshot& s, NodeKind kind, const std::string& path) {
    if (s.kind() != kind) {
      throw RestoreError("expected a " + std::string(to_string(kind)) + " node at " + path + ", found " +
                         std::string(to_string(s.kind())));
    }
  }

  template <class T>
  static void check_type(const Snapshot& s, const std::string& path) {
    (void)detail::TypeRegistration<T>::value;
    if (s.type_name() != type_name<T>()) throw RestoreError(detail::restore_type_error(type_name<T>(), s.type_name(), path));
  }

  template <class T>
  void register_node(std::int64_t id, T* address, std::shared_ptr<void> owner,
                     std::shared_ptr<bool> release = nullptr) {
    if (!ids_.emplace(id, Registered{address, std::type_index(typeid(T)), std::move(owner), std::move(release)})
             .second) {
      throw RestoreError("duplicate node id " + std::to_string(id));
    }
  }

  template <class P>
  P resolve_ref(std::int64_t id, const std::string& path) {
    auto it = ids_.find(id);
    if (it == ids_.end()) throw RestoreError("ref to unknown or later node " + std::to_string(id) + " at " + path);
    using E = std::remove_cv_t<typename std::pointer_traits<P>::element_type>;
    if (it->second.type != std::type_index(typeid(E))) {
      throw RestoreError("ref at " + path + " targets a node of a different type");
    }
    auto* raw = static_cast<E*>(it->second.address);
    if constexpr (std::is_pointer_v<P>) {
      return raw;
    } else if constexpr (detail::is_specialization<P, std::shared_ptr>::value) {
      return std::shared_ptr<E>(it->second.owner, raw);
    } else {
      if (!it->second.release || *it->second.release) {
        throw RestoreError("unique_ptr cannot share node " + std::to_string(id) + " at " + path);
      }
      *it->second.release = true;
      return P(raw);
    }
  }

  template <class P>
  P make_pointer(const Snapshot& s, const std::string& path) {
    using E = std::remove_cv_t<typename std::pointer_traits<P>::element_type>;
    if constexpr (std::is_abstract_v<E> || !Reflected<E>) {
      if constexpr (std::is_abstract_v<E>) {
        throw RestoreError("cannot restore abstract type '" + type_name<E>() + "' at " + path);
      } else {
        // Pointers to plain values (int*, std::vector<int>*) have no identity.
        auto owned = std::make_shared<E>();
        into(*owned, s, path, false);
        return adopt<P>(std::move(owned));
      }
    } else {
      expect(s, NodeKind::object, path);
      check_type<E>(s, path);
      if constexpr (detail::is_specialization<P, std::unique_ptr>::value) {
        // Built in place: refs to this node must see the final address.
        P out(Access::make<E>());
        if (auto id = s.node_id()) register_node(*id, out.get(), {});
        populate(*out, s, path, false);
        return out;
      } else if constexpr (std::is_pointer_v<P>) {
        // A raw pointer may be seen before the unique_ptr that owns the
        // object; the release flag lets that owner adopt it later.
        auto released = std::make_shared<bool>(false);
        E* raw = Access::make<E>();
        std::shared_ptr<E> owned(raw, [released](E* p) {
          if (!*released) delete p;
        });
        if (auto id = s.node_id()) register_node(*id, raw, owned, released);
        populate(*raw, s, path, false);
        detail::retain(std::move(owned));
        return raw;
      }
      std::shared_ptr<E> owned(Access::make<E>());
      if (auto id = s.node_id()) register_node(*id, owned.get(), owned);
      populate(*owned, s, path, false);
      return adopt<P>(std::move(owned));
    }
  }

  template <class P, class E>
  static P adopt(std::shared_ptr<E> owned) {
    if constexpr (std::is_pointer_v<P>) {
      E* raw = owned.get();
      detail::retain(std::move(owned));
      return raw;
    } else if constexpr (detail::is_specialization<P, std::shared_ptr>::value) {
      return owned;
    } else {
      // unique_ptr: move the value into a fresh allocation it can own.
      return P(new E(std::move(*owned)));
    }
  }

  struct FieldSetter {
    Restorer& self;
    const Snapshot& snapshot;
    const std::string& path;
    bool root;
    std::size_t next = 0;

    template <class F>
    void operator()(std::string_view name, F& field) {
      const auto& fields = snapshot.fields();
      if (next >= fields.size() || fields[next].name != name) {
        throw RestoreError("field '" + std::string(name) + "' missing from snapshot of '" + snapshot.type_name() +
                           "' at " + path);
      }
      const Snapshot& value = fields[next++].value;
      std::string p = path + "." + std::string(name);
      if (value.kind() == NodeKind::opaque && root && self.options_.unset_root_fields.count(std::string(name))) {
        return;
      }
      self.into(field, value, p, false);
    }
  };

  template <class T>
  void populate(T& out, const Snapshot& s, const std::string& path, bool root) {
    FieldSetter setter{*this, s, path, root};
    Access::visit(out, setter);
    if (setter.next != s.fields().size()) {
      throw RestoreError("snapshot of '" + s.type_name() + "' has unknown field '" + s.fields()[setter.next].name +
                         "' at " + path);
    }
  }

  RestoreOptions options_;
  std::map<std::int64_t, Registered> ids_;
};

/// Restores a value of type T. Use restore_shared when pointers inside the
/// value may refer back to the root object itself.
template <class T>
T restore(const Snapshot& s, const RestoreOptions& options = {}) {
  T out{};
  Restorer(options).into(out, s);
  return out;
}

/// Restores an object on the heap so that self-references and identity of
/// the root survive.
template <class T>
std::shared_ptr<T> restore_shared(const Snapshot& s, const RestoreOptions& options = {}) {
  if constexpr (Reflected<T>) {
    std::shared_ptr<T> out(Access::make<T>());
    Restorer(options).into(*out, s);
    return out;
  } else {
    auto out = std::make_shared<T>();
    Restorer(options).into(*out, s);
    return out;
  }
}

/// Restores the receiving object of a generated test; `mockable_fields` may
/// be opaque in the snapshot and are left unset for injection.
template <class T>
std::shared_ptr<T> restore_receiver(const Snapshot& s, std::set<std::string> mockable_fields = {}) {
  return restore_shared<T>(s, RestoreOptions{std::move(mockable_fields)});
}

}  // namespace mimic
