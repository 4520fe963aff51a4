#pragma once

#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "mimic/capture.hpp"
#include "mimic/codec.hpp"
#include "mimic/restore.hpp"

namespace corpus {

enum class Color { red, green, blue };

struct Leaf {
  int id = 0;
  std::string name;
  double weight = 0;
  Color color = Color::red;

  template <class V>
  void mimic_fields(V& v) {
    v("id", id);
    v("name", name);
    v("weight", weight);
    v("color", color);
  }
};

class Node {
 public:
  std::int64_t value = 0;
  std::string label;
  std::optional<int> maybe;
  std::vector<std::shared_ptr<Node>> children;
  Node* parent = nullptr;
  std::shared_ptr<Node> next;
  std::map<std::string, Leaf> leaves;
  std::vector<std::vector<int>> matrix;
  std::set<std::string> tags;
  std::unordered_map<int, bool> flags;
  Leaf inline_leaf;
  std::unique_ptr<Leaf> owned;
  Leaf* leaf_alias = nullptr;

 private:
  friend struct mimic::Access;
  Node() = default;

  template <class V>
  void mimic_fields(V& v) {
    v("value", value);
    v("label", label);
    v("maybe", maybe);
    v("children", children);
    v("parent", parent);
    v("next", next);
    v("leaves", leaves);
    v("matrix", matrix);
    v("tags", tags);
    v("flags", flags);
    v("inline_leaf", inline_leaf);
    v("owned", owned);
    v("leaf_alias", leaf_alias);
  }

 public:
  static std::shared_ptr<Node> create() { return std::shared_ptr<Node>(new Node()); }
};

struct Wrapper : Leaf {
  std::vector<std::shared_ptr<Node>> roots;
  std::map<int, std::vector<std::string>> index;

  template <class V>
  void mimic_fields(V& v) {
    Leaf::mimic_fields(v);
    v("roots", roots);
    v("index", index);
  }
};

struct Stats {
  int cases = 0;
  int rejected = 0;
  int with_refs = 0;
  int with_cycles = 0;
  int failures = 0;
  std::string first_failure;
};

class Generator {
 public:
  explicit Generator(std::uint32_t seed) : rng_(seed) {}

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Leaf leaf() {
    Leaf l;
    l.id = pick(-50, 50);
    l.name = std::string(static_cast<std::size_t>(pick(0, 4)), static_cast<char>('a' + pick(0, 25)));
    l.weight = pick(0, 1000) / 8.0;
    l.color = static_cast<Color>(pick(0, 2));
    return l;
  }

  // Builds a graph below `root`; sharing and back edges point into `pool_`.
  std::shared_ptr<Node> graph() {
    pool_.clear();
    auto root = node(nullptr, 0);
    // Sharing and cycles are wired after the tree exists.
    for (auto& n : pool_) {
      if (pick(0, 3) == 0) n->next = pool_[pick(0, static_cast<int>(pool_.size()) - 1)];
      if (pick(0, 4) == 0) {
        auto& other = pool_[pick(0, static_cast<int>(pool_.size()) - 1)];
        if (!other->leaves.empty()) n->leaf_alias = &other->leaves.begin()->second;
        else if (other->owned) n->leaf_alias = other->owned.get();
      }
    }
    return root;
  }

  std::vector<std::shared_ptr<Node>>& pool() { return pool_; }

 private:
  std::shared_ptr<Node> node(Node* parent, int level) {
    auto n = Node::create();
    pool_.push_back(n);
    n->value = pick(-1000000, 1000000);
    n->label = pick(0, 1) ? "n" + std::to_string(pool_.size()) : "";
    if (pick(0, 1)) n->maybe = pick(0, 9);
    n->parent = parent;
    for (int i = pick(0, 2); i > 0; --i) n->leaves["k" + std::to_string(pick(0, 9))] = leaf();
    for (int i = pick(0, 2); i > 0; --i) {
      std::vector<int> row;
      for (int k = pick(0, 3); k > 0; --k) row.push_back(pick(-9, 9));
      n->matrix.push_back(row);
    }
    for (int i = pick(0, 2); i > 0; --i) n->tags.insert("t" + std::to_string(pick(0, 5)));
    for (int i = pick(0, 2); i > 0; --i) n->flags[pick(0, 20)] = pick(0, 1) == 1;
    n->inline_leaf = leaf();
    if (pick(0, 1)) n->owned = std::make_unique<Leaf>(leaf());
    if (level < 2) {
      for (int i = pick(0, 2); i > 0; --i) {
        if (pick(0, 4) == 0 && pool_.size() > 1) {
          n->children.push_back(pool_[pick(0, static_cast<int>(pool_.size()) - 1)]);
        } else {
          n->children.push_back(node(n.get(), level + 1));
        }
      }
    }
    return n;
  }

  std::mt19937 rng_;
  std::vector<std::shared_ptr<Node>> pool_;
};

inline bool has_ref(const mimic::Snapshot& s) {
  if (s.kind() == mimic::NodeKind::ref) return true;
  for (const auto& c : s.items()) {
    if (has_ref(c)) return true;
  }
  for (const auto& e : s.entries()) {
    if (has_ref(e.value)) return true;
  }
  for (const auto& f : s.fields()) {
    if (has_ref(f.value)) return true;
  }
  return false;
}

// True if some ref points at an ancestor of itself.
inline bool has_cycle(const mimic::Snapshot& s, std::vector<std::int64_t>& open) {
  if (s.kind() == mimic::NodeKind::ref) {
    return std::find(open.begin(), open.end(), s.ref_target()) != open.end();
  }
  if (s.node_id()) open.push_back(*s.node_id());
  bool found = false;
  for (const auto& c : s.items()) found = found || has_cycle(c, open);
  for (const auto& e : s.entries()) found = found || has_cycle(e.value, open);
  for (const auto& f : s.fields()) found = found || has_cycle(f.value, open);
  if (s.node_id()) open.pop_back();
  return found;
}

template <class T, class Restore>
void check_case(Stats& stats, const T& value, Restore restore_fn) {
  const mimic::Snapshot s = mimic::snapshot_object(value);
  if (mimic::tree_depth(s) > mimic::kDefaultDepthLimit || !mimic::opaque_paths(s).empty()) {
    ++stats.rejected;  // outside the restorable domain (truncated by the depth limit)
    return;
  }
  ++stats.cases;
  if (has_ref(s)) ++stats.with_refs;
  std::vector<std::int64_t> open;
  if (has_cycle(s, open)) ++stats.with_cycles;
  std::string failure;
  try {
    // Through the text encoding as well, as generated tests load resources.
    const mimic::Snapshot again = restore_fn(mimic::decode_snapshot(mimic::encode_snapshot(s)));
    if (!mimic::structural_equals(again, s)) {
      failure = "re-snapshot differs: " + mimic::encode_snapshot(s) + " vs " + mimic::encode_snapshot(again);
    }
  } catch (const std::exception& e) {
    failure = std::string("restore failed: ") + e.what();
  }
  if (!failure.empty()) {
    if (stats.failures++ == 0) stats.first_failure = failure;
  }
}

/// snapshot -> restore -> snapshot over `count` generated values.
inline Stats run_roundtrip_property(int count, std::uint32_t seed) {
  Stats stats;
  Generator gen(seed);
  for (int i = 0; stats.cases < count && i < count * 4; ++i) {
    switch (i % 5) {
      case 0:
      case 1:
      case 2: {
        auto root = gen.graph();
        check_case(stats, root, [](const mimic::Snapshot& s) {
          return mimic::snapshot_object(mimic::restore<std::shared_ptr<Node>>(s));
        });
        break;
      }
      case 3: {
        Wrapper w;
        static_cast<Leaf&>(w) = gen.leaf();
        w.roots.push_back(gen.graph());
        if (gen.pick(0, 1)) w.roots.push_back(w.roots.front());
        if (gen.pick(0, 1)) w.roots.push_back(gen.pool().back());
        for (int k = gen.pick(0, 3); k > 0; --k) w.index[gen.pick(0, 5)].push_back("v" + std::to_string(k));
        check_case(stats, w, [](const mimic::Snapshot& s) {
          return mimic::snapshot_object(*mimic::restore_shared<Wrapper>(s));
        });
        break;
      }
      default: {
        std::vector<std::map<std::string, std::vector<double>>> plain(static_cast<std::size_t>(gen.pick(0, 3)));
        for (auto& m : plain) {
          m["x" + std::to_string(gen.pick(0, 3))] = {gen.pick(0, 100) / 4.0, -1.5};
        }
        check_case(stats, plain, [](const mimic::Snapshot& s) {
          return mimic::snapshot_object(mimic::restore<std::vector<std::map<std::string, std::vector<double>>>>(s));
        });
        break;
      }
    }
  }
  return stats;
}

}  // namespace corpus
