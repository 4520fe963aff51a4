#pragma once

#include <random>
#include <string>

#include "mimic/descriptor.hpp"
#include "mimic/record.hpp"
#include "mimic/snapshot.hpp"

namespace testsupport {

inline mimic::MutDescriptor demo_descriptor() {
  mimic::MutDescriptor d;
  d.header = "ClassUnderTest.hpp";
  d.declaring_type = "demo::ClassUnderTest";
  d.namespace_name = "demo";
  d.method = "methodUnderTest";
  d.params = {{"a", "int"}, {"extParam", "ext::ExtTypeTwo*"}};
  d.return_kind = mimic::ReturnKind::value;
  d.return_type = "int";
  d.mut_id = mimic::make_mut_id(d.header, d.declaring_type, d.method, 2);
  d.call_sites = {
      {"s1", mimic::FieldBinding{"extField"}, "ext::ExtTypeOne", "mockableMethodOne", 1, {"ClassUnderTest.hpp", 16}},
      {"s2", mimic::ParameterBinding{1}, "ext::ExtTypeTwo", "mockableMethodTwo", 1, {"ClassUnderTest.hpp", 17}},
  };
  return d;
}

inline mimic::Snapshot int_snap(std::int64_t v) { return mimic::Snapshot::primitive("int", v); }

inline mimic::InvocationRecord demo_record() {
  using mimic::Snapshot;
  mimic::InvocationRecord r;
  r.mut_id = demo_descriptor().mut_id;
  r.invocation_uid = "0a1b2c3d_000000";
  r.timestamp = "2026-01-02T03:04:05.678Z";
  r.receiver = Snapshot::object("demo::ClassUnderTest",
                                {{"extField", Snapshot::opaque("ext::ExtTypeOne")}, {"offset_", int_snap(22)}});
  r.args = {int_snap(64), Snapshot::opaque("ext::ExtTypeTwo")};
  r.outcome = mimic::Returned{int_snap(42)};
  r.calls = {{"s1", 0, {int_snap(42)}, int_snap(99)}, {"s2", 1, {int_snap(27)}, int_snap(17)}};
  return r;
}

/// Random valid snapshot trees: every kind, shared nodes and back-references.
class RandomSnapshots {
 public:
  explicit RandomSnapshots(std::uint32_t seed) : rng_(seed) {}

  mimic::Snapshot tree(std::size_t max_depth) {
    next_id_ = 0;
    ids_.clear();
    return node(max_depth);
  }

  std::mt19937& rng() { return rng_; }

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  mimic::Snapshot scalar() {
    using mimic::Snapshot;
    switch (pick(0, 5)) {
      case 0: return Snapshot::primitive("bool", pick(0, 1) == 1);
      case 1: return Snapshot::primitive("int", static_cast<std::int64_t>(pick(-1000, 1000)));
      case 2: return Snapshot::primitive("unsigned long", std::uint64_t{18446744073709551615ull} - pick(0, 3));
      case 3: return Snapshot::primitive("double", std::uniform_real_distribution<double>(-1e6, 1e6)(rng_));
      case 4: return Snapshot::text("std::string", random_text());
      default: return Snapshot::primitive("long", std::int64_t{-9223372036854775807ll} + pick(0, 5));
    }
  }

 private:
  std::string random_text() {
    static const char* pieces[] = {"", "a", "hello", "x y", "\"q\"", "tab\t", "nl\n", "\xc3\xa9t\xc3\xa9", "\\"};
    std::string out;
    for (int i = pick(0, 3); i > 0; --i) out += pieces[pick(0, 8)];
    return out;
  }

  mimic::Snapshot node(std::size_t depth) {
    using mimic::Snapshot;
    if (!ids_.empty() && pick(0, 9) == 0) return Snapshot::ref(ids_[pick(0, static_cast<int>(ids_.size()) - 1)]);
    const int kind = depth <= 1 ? pick(0, 2) : pick(0, 6);
    switch (kind) {
      case 0: return Snapshot::null();
      case 1: return scalar();
      case 2: return Snapshot::opaque("ext::Thing");
      case 3: {
        std::vector<Snapshot> items;
        for (int i = pick(0, 3); i > 0; --i) items.push_back(node(depth - 1));
        return Snapshot::sequence("std::vector<node>", std::move(items));
      }
      case 4: {
        std::vector<mimic::MapEntry> entries;
        std::vector<Snapshot> keys;
        for (int i = pick(0, 3); i > 0; --i) {
          Snapshot k = scalar();
          bool dup = false;
          for (const auto& e : keys) dup = dup || (!mimic::scalar_less(e, k) && !mimic::scalar_less(k, e));
          if (dup) continue;
          keys.push_back(k);
          entries.push_back({k, node(depth - 1)});
        }
        return Snapshot::mapping("std::map<key, node>", std::move(entries));
      }
      default: {
        const std::int64_t id = next_id_++;
        ids_.push_back(id);
        std::vector<mimic::FieldEntry> fields;
        const int n = pick(0, 3);
        for (int i = 0; i < n; ++i) fields.push_back({"f" + std::to_string(i), node(depth - 1)});
        auto s = Snapshot::object(pick(0, 1) ? "app::A" : "app::B", std::move(fields));
        s.set_node_id(id);
        return s;
      }
    }
  }

  std::mt19937 rng_;
  std::int64_t next_id_ = 0;
  std::vector<std::int64_t> ids_;
};

inline mimic::InvocationRecord random_record(RandomSnapshots& gen, int index) {
  mimic::InvocationRecord r;
  r.mut_id = "app/X.hpp::app::X::m" + std::to_string(gen.pick(0, 4)) + "/2";
  r.invocation_uid = "cafe0001_" + std::to_string(100000 + index);
  r.timestamp = "2026-03-0" + std::to_string(gen.pick(1, 9)) + "T12:00:00.00" + std::to_string(gen.pick(0, 9)) + "Z";
  r.receiver = gen.tree(6);
  r.args = {gen.tree(4), mimic::Snapshot::opaque("ext::Thing")};
  if (gen.pick(0, 4) == 0) {
    r.outcome = mimic::Raised{"std::runtime_error"};
  } else {
    r.outcome = mimic::Returned{gen.tree(5)};
  }
  const int calls = gen.pick(0, 5);
  for (int i = 0; i < calls; ++i) {
    mimic::MockableCallRecord c;
    c.site_id = "s" + std::to_string(gen.pick(1, 3));
    c.seq = i;
    for (int k = gen.pick(0, 2); k > 0; --k) c.args.push_back(gen.tree(3));
    c.return_value = gen.tree(3);
    r.calls.push_back(std::move(c));
  }
  return r;
}

}  // namespace testsupport
