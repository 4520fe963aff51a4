#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "mimic/snapshot.hpp"

using namespace mimic;

namespace {

Snapshot int_node(std::int64_t v) { return Snapshot::primitive("int", v); }

Snapshot obj(std::string type, std::vector<FieldEntry> fields, std::optional<std::int64_t> id = {}) {
  auto s = Snapshot::object(std::move(type), std::move(fields));
  s.set_node_id(id);
  return s;
}

// A rooted graph of at most four labelled objects with ordered out-edges.
struct Graph {
  std::vector<int> label;
  std::vector<std::vector<int>> out;
};

Snapshot graph_node(const Graph& g, int n, std::vector<int>& ids, int& next) {
  if (ids[n] >= 0) return Snapshot::ref(ids[n]);
  ids[n] = next++;
  std::vector<FieldEntry> fields;
  fields.push_back({"v", int_node(g.label[n] % 2)});
  for (std::size_t i = 0; i < g.out[n].size(); ++i) {
    fields.push_back({"c" + std::to_string(i), graph_node(g, g.out[n][i], ids, next)});
  }
  return obj(g.label[n] < 2 ? "A" : "B", std::move(fields), ids[n]);
}

Snapshot to_snapshot(const Graph& g) {
  std::vector<int> ids(g.label.size(), -1);
  int next = 0;
  return graph_node(g, 0, ids, next);
}

// Nodes reachable from the root; to_snapshot only sees those.
Graph reachable(const Graph& g) {
  std::vector<int> order, index(g.label.size(), -1);
  index[0] = 0;
  order.push_back(0);
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (int c : g.out[order[k]]) {
      if (index[c] < 0) {
        index[c] = static_cast<int>(order.size());
        order.push_back(c);
      }
    }
  }
  Graph r;
  for (int n : order) {
    r.label.push_back(g.label[n]);
    std::vector<int> o;
    for (int c : g.out[n]) o.push_back(index[c]);
    r.out.push_back(o);
  }
  return r;
}

// Brute force: is there a root-preserving bijection that preserves labels and
// ordered edges?
bool isomorphic(const Graph& a, const Graph& b) {
  if (a.label.size() != b.label.size()) return false;
  std::vector<int> perm(a.label.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (perm[0] != 0) continue;
    bool ok = true;
    for (std::size_t n = 0; n < perm.size() && ok; ++n) {
      const int m = perm[n];
      if (a.label[n] != b.label[m] || a.out[n].size() != b.out[m].size()) {
        ok = false;
        break;
      }
      for (std::size_t i = 0; i < a.out[n].size(); ++i) {
        if (perm[a.out[n][i]] != b.out[m][i]) ok = false;
      }
    }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

Graph random_graph(std::mt19937& rng) {
  Graph g;
  const int n = std::uniform_int_distribution<int>(1, 4)(rng);
  for (int i = 0; i < n; ++i) {
    g.label.push_back(std::uniform_int_distribution<int>(0, 3)(rng) / 3);  // skewed so labels often coincide
    std::vector<int> o;
    const int deg = std::uniform_int_distribution<int>(0, 2)(rng);
    for (int k = 0; k < deg; ++k) o.push_back(std::uniform_int_distribution<int>(0, n - 1)(rng));
    g.out.push_back(o);
  }
  return reachable(g);
}

Graph relabel(const Graph& g, std::mt19937& rng) {
  std::vector<int> perm(g.label.size());
  std::iota(perm.begin(), perm.end(), 0);
  if (perm.size() > 1) std::shuffle(perm.begin() + 1, perm.end(), rng);
  Graph r;
  r.label.resize(g.label.size());
  r.out.resize(g.label.size());
  for (std::size_t n = 0; n < perm.size(); ++n) {
    r.label[perm[n]] = g.label[n];
    for (int c : g.out[n]) r.out[perm[n]].push_back(perm[c]);
  }
  return r;
}

}  // namespace

TEST(StructuralEquals, PrimitiveReflexive) { EXPECT_TRUE(structural_equals(int_node(42), int_node(42))); }

TEST(StructuralEquals, PrimitiveDiffers) { EXPECT_FALSE(structural_equals(int_node(42), int_node(99))); }

TEST(StructuralEquals, ScalarTypeNameMatters) {
  EXPECT_FALSE(structural_equals(int_node(1), Snapshot::primitive("long", std::int64_t{1})));
  EXPECT_FALSE(structural_equals(int_node(1), Snapshot::text("std::string", "1")));
}

TEST(StructuralEquals, UnsignedNormalization) {
  EXPECT_TRUE(structural_equals(Snapshot::primitive("unsigned", std::uint64_t{7}),
                                Snapshot::primitive("unsigned", std::int64_t{7})));
}

TEST(StructuralEquals, NaNEqualsItself) {
  auto nan = Snapshot::primitive("double", std::numeric_limits<double>::quiet_NaN());
  EXPECT_TRUE(structural_equals(nan, nan));
}

TEST(StructuralEquals, OpaqueByTypeName) {
  EXPECT_TRUE(structural_equals(Snapshot::opaque("ext::A"), Snapshot::opaque("ext::A")));
  EXPECT_FALSE(structural_equals(Snapshot::opaque("ext::A"), Snapshot::opaque("ext::B")));
}

TEST(StructuralEquals, MappingIsKeyMatched) {
  auto m1 = Snapshot::mapping("m", {{int_node(2), int_node(20)}, {int_node(1), int_node(10)}});
  auto m2 = Snapshot::mapping("m", {{int_node(1), int_node(10)}, {int_node(2), int_node(20)}});
  auto m3 = Snapshot::mapping("m", {{int_node(1), int_node(20)}, {int_node(2), int_node(10)}});
  EXPECT_TRUE(structural_equals(m1, m2));
  EXPECT_FALSE(structural_equals(m1, m3));
}

TEST(StructuralEquals, SequenceIsOrdered) {
  auto s1 = Snapshot::sequence("v", {int_node(1), int_node(2)});
  auto s2 = Snapshot::sequence("v", {int_node(2), int_node(1)});
  EXPECT_FALSE(structural_equals(s1, s2));
}

TEST(StructuralEquals, TwoNodeCycleVersusChain) {
  // a -> b -> a
  auto cycle = [](std::int64_t ida, std::int64_t idb) {
    auto b = obj("N", {{"v", int_node(2)}, {"next", Snapshot::ref(ida)}}, idb);
    return obj("N", {{"v", int_node(1)}, {"next", b}}, ida);
  };
  // a -> b -> a' (a copy, not the same node)
  auto a_copy = obj("N", {{"v", int_node(1)}, {"next", Snapshot::null()}});
  auto chain = obj("N", {{"v", int_node(1)}, {"next", obj("N", {{"v", int_node(2)}, {"next", a_copy}})}});
  EXPECT_TRUE(structural_equals(cycle(0, 1), cycle(0, 1)));
  EXPECT_TRUE(structural_equals(cycle(0, 1), cycle(5, 9)));  // ids are only names
  EXPECT_FALSE(structural_equals(cycle(0, 1), chain));
}

TEST(StructuralEquals, RefTargetMustCorrespond) {
  // root{x: A#0, y: A#1, z: ref 0} vs root{x: A#0, y: A#1, z: ref 1}
  auto make = [](std::int64_t target) {
    return obj("R", {{"x", obj("A", {}, 0)}, {"y", obj("A", {}, 1)}, {"z", Snapshot::ref(target)}});
  };
  EXPECT_TRUE(structural_equals(make(0), make(0)));
  EXPECT_FALSE(structural_equals(make(0), make(1)));
}

TEST(StructuralEquals, MatchesBruteForceIsomorphism) {
  std::mt19937 rng(1234);
  int positives = 0, negatives = 0;
  for (int i = 0; i < 4000; ++i) {
    Graph a = random_graph(rng);
    Graph b = (i % 2 == 0) ? relabel(a, rng) : random_graph(rng);
    const bool expected = isomorphic(a, b);
    (expected ? positives : negatives)++;
    ASSERT_EQ(structural_equals(to_snapshot(a), to_snapshot(b)), expected) << "case " << i;
  }
  EXPECT_GT(positives, 1000);
  EXPECT_GT(negatives, 500);
}

TEST(StructuralEquals, EquivalenceRelationOnRandomCorpus) {
  std::mt19937 rng(99);
  std::vector<Snapshot> corpus;
  for (int i = 0; i < 60; ++i) corpus.push_back(to_snapshot(random_graph(rng)));
  for (const auto& a : corpus) {
    EXPECT_TRUE(structural_equals(a, a));
    for (const auto& b : corpus) {
      EXPECT_EQ(structural_equals(a, b), structural_equals(b, a));
      if (!structural_equals(a, b)) continue;
      for (const auto& c : corpus) {
        if (structural_equals(b, c)) {
          EXPECT_TRUE(structural_equals(a, c));
        }
      }
    }
  }
}

TEST(Snapshot, TreeDepthIgnoresRefs) {
  auto s = obj("N", {{"next", obj("N", {{"next", Snapshot::ref(0)}}, 1)}}, 0);
  EXPECT_EQ(tree_depth(int_node(1)), 1u);
  EXPECT_EQ(tree_depth(s), 3u);
}

TEST(Snapshot, OpaquePaths) {
  auto s = obj("C", {{"ext", Snapshot::opaque("E")}, {"xs", Snapshot::sequence("v", {Snapshot::opaque("E")})}});
  EXPECT_EQ(opaque_paths(s), (std::vector<std::string>{"$.ext", "$.xs[0]"}));
}

TEST(Snapshot, CanonicalizeIdsRenumbersAndDrops) {
  auto s = obj("R", {{"a", obj("A", {}, 7)}, {"b", obj("A", {}, 3)}, {"c", Snapshot::ref(3)}}, 11);
  auto c = canonicalize_ids(s);
  EXPECT_FALSE(c.node_id().has_value());
  EXPECT_FALSE(c.field("a")->node_id().has_value());
  EXPECT_EQ(c.field("b")->node_id(), std::optional<std::int64_t>(0));
  EXPECT_EQ(c.field("c")->ref_target(), 0);
  EXPECT_TRUE(structural_equals(s, c));
}

TEST(Snapshot, MappingFactorySortsKeys) {
  auto m = Snapshot::mapping("m", {{Snapshot::text("s", "b"), int_node(1)}, {Snapshot::text("s", "a"), int_node(2)}});
  EXPECT_EQ(m.entries()[0].key.text_value(), "a");
}
