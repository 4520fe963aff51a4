#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "../support/records.hpp"
#include "mimic/codec.hpp"
#include "mimic/errors.hpp"

using namespace mimic;
using testsupport::int_snap;
using testsupport::demo_descriptor;
using testsupport::demo_record;

namespace {

std::string replace_once(std::string s, const std::string& from, const std::string& to) {
  auto at = s.find(from);
  EXPECT_NE(at, std::string::npos) << "fixture text not found: " << from;
  if (at != std::string::npos) s.replace(at, from.size(), to);
  return s;
}

template <class E>
std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const E& e) {
    if constexpr (std::is_same_v<E, ValidationError>) {
      return e.invariant();
    } else {
      return e.what();
    }
  } catch (const std::exception& e) {
    return std::string("wrong exception: ") + e.what();
  }
  return "no exception";
}

std::string invariant_of(const std::string& text) {
  return error_of<ValidationError>([&] { decode_record(text); });
}

std::string invariant_of(const InvocationRecord& r) { return invariant_of(encode_record(r)); }

std::string invariant_against_descriptor(const InvocationRecord& r) {
  return error_of<ValidationError>([&] { decode_record(encode_record(r), demo_descriptor()); });
}

}  // namespace

TEST(Codec, EmptyRecordRoundTrips) {
  InvocationRecord r;
  r.mut_id = "a.hpp::A::f/0";
  r.invocation_uid = "u_1";
  r.timestamp = "2026-01-01T00:00:00.000Z";
  r.receiver = Snapshot::object("A", {});
  r.outcome = Returned{Snapshot::null()};
  EXPECT_TRUE(structural_equals(decode_record(encode_record(r)), r));
}

TEST(Codec, DemoRecordRoundTrips) {
  auto r = demo_record();
  auto decoded = decode_record(encode_record(r), demo_descriptor());
  EXPECT_TRUE(structural_equals(decoded, r));
  ASSERT_EQ(decoded.calls.size(), 2u);
  EXPECT_EQ(decoded.calls[0].site_id, "s1");
  EXPECT_TRUE(structural_equals(decoded.calls[0].args[0], int_snap(42)));
  EXPECT_TRUE(structural_equals(decoded.calls[0].return_value, int_snap(99)));
}

TEST(Codec, EncodingIsLineDelimitedAndOrdered) {
  auto text = encode_record(demo_record());
  std::vector<std::string> keys;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    ASSERT_NE(nl, std::string::npos);
    keys.push_back(text.substr(pos, text.find(' ', pos) - pos));
    pos = nl + 1;
  }
  EXPECT_EQ(keys, (std::vector<std::string>{"schema_version", "mut_id", "invocation_uid", "timestamp", "receiver",
                                            "args", "outcome", "call", "call"}));
  EXPECT_EQ(text.substr(0, 17), "schema_version 1\n");
}

TEST(Codec, RandomRecordsRoundTripAndEncodeDeterministically) {
  testsupport::RandomSnapshots gen(2024);
  for (int i = 0; i < 200; ++i) {
    auto r = testsupport::random_record(gen, i);
    auto text = encode_record(r);
    auto decoded = decode_record(text);
    ASSERT_TRUE(structural_equals(decoded, r)) << text;
    ASSERT_EQ(encode_record(decoded), text);
    ASSERT_EQ(encode_record(r), text);
  }
}

TEST(Codec, SnapshotRoundTrip) {
  testsupport::RandomSnapshots gen(7);
  for (int i = 0; i < 300; ++i) {
    auto s = gen.tree(6);
    ASSERT_TRUE(structural_equals(decode_snapshot(encode_snapshot(s)), s));
  }
}

TEST(Codec, NonContiguousSeq) {
  auto r = demo_record();
  r.calls[1].seq = 2;
  EXPECT_EQ(invariant_of(r), "non-contiguous seq");
}

TEST(Codec, UnsortedSeq) {
  auto r = demo_record();
  r.calls[0].seq = 1;
  r.calls[1].seq = 0;
  EXPECT_EQ(invariant_of(r), "calls not sorted by seq");
}

TEST(Codec, UnresolvedRef) {
  auto r = demo_record();
  r.outcome = Returned{Snapshot::ref(5)};
  EXPECT_EQ(invariant_of(r), "unresolved ref target");
}

TEST(Codec, RefAcrossSnapshotsIsUnresolved) {
  auto r = demo_record();
  auto target = Snapshot::object("app::A", {});
  target.set_node_id(0);
  r.receiver = Snapshot::object("demo::ClassUnderTest", {{"a", target}});
  r.outcome = Returned{Snapshot::ref(0)};
  EXPECT_EQ(invariant_of(r), "unresolved ref target");
}

TEST(Codec, DuplicateNodeId) {
  auto r = demo_record();
  auto a = Snapshot::object("app::A", {});
  a.set_node_id(3);
  r.receiver = Snapshot::object("demo::ClassUnderTest", {{"x", a}, {"y", a}});
  EXPECT_EQ(invariant_of(r), "duplicate node id");
}

TEST(Codec, OpaqueWithPayload) {
  auto text = encode_record(demo_record());
  auto bad = replace_once(text, R"({"kind":"opaque","type":"ext::ExtTypeTwo"})",
                          R"({"kind":"opaque","type":"ext::ExtTypeTwo","items":[]})");
  EXPECT_EQ(invariant_of(bad), "malformed snapshot node");
  auto bad_value = replace_once(text, R"({"kind":"opaque","type":"ext::ExtTypeTwo"})",
                                R"({"kind":"opaque","type":"ext::ExtTypeTwo","value":1})");
  EXPECT_EQ(invariant_of(bad_value), "malformed snapshot node");
}

TEST(Codec, NonScalarMappingKey) {
  auto r = demo_record();
  r.outcome = Returned{Snapshot::mapping("m", {{Snapshot::object("app::A", {}), int_snap(1)}})};
  EXPECT_EQ(invariant_of(r), "non-scalar mapping key");
}

TEST(Codec, DuplicateMappingKey) {
  auto text = encode_record(demo_record());
  auto key = R"([{"kind":"primitive","type":"int","value":1},{"kind":"null"}])";
  auto bad = replace_once(text, R"(outcome {"returned":{"kind":"primitive","type":"int","value":42}})",
                          std::string(R"(outcome {"returned":{"kind":"mapping","type":"m","entries":[)") + key + "," +
                              key + "]}}");
  EXPECT_EQ(invariant_of(bad), "duplicate mapping key");
}

TEST(Codec, MalformedTimestampAndUid) {
  auto r = demo_record();
  r.timestamp = "yesterday";
  EXPECT_EQ(invariant_of(r), "malformed timestamp");
  r = demo_record();
  r.invocation_uid = "../escape";
  EXPECT_EQ(invariant_of(r), "invalid invocation_uid");
}

TEST(Codec, DescriptorRelativeInvariants) {
  auto r = demo_record();
  r.calls[0].site_id = "s9";
  EXPECT_EQ(invariant_against_descriptor(r), "unknown site_id");

  r = demo_record();
  r.args.pop_back();
  EXPECT_EQ(invariant_against_descriptor(r), "args length differs from param_count");

  r = demo_record();
  r.calls[1].args.push_back(int_snap(1));
  EXPECT_EQ(invariant_against_descriptor(r), "call args length differs from callee arity");

  r = demo_record();
  r.args[1] = int_snap(3);
  EXPECT_EQ(invariant_against_descriptor(r), "mockable parameter not opaque");

  r = demo_record();
  r.mut_id = "other.hpp::X::y/2";
  EXPECT_EQ(invariant_against_descriptor(r), "mut_id does not match descriptor");
}

TEST(Codec, DepthLimit) {
  auto r = demo_record();
  Snapshot deep = int_snap(0);
  for (int i = 0; i < 9; ++i) deep = Snapshot::sequence("v", {deep});
  r.outcome = Returned{deep};
  EXPECT_NO_THROW(validate_record(r));
  EXPECT_EQ(error_of<ValidationError>([&] { validate_record(r, 8); }), "snapshot deeper than depth limit");
}

TEST(Codec, UnknownSchemaVersion) {
  auto text = replace_once(encode_record(demo_record()), "schema_version 1\n", "schema_version 2\n");
  EXPECT_THROW(decode_record(text), VersionError);
}

TEST(Codec, TruncatedInputIsParseError) {
  auto text = encode_record(demo_record());
  const auto first_call = text.find("\ncall ") + 1;
  for (std::size_t cut = 0; cut < text.size(); ++cut) {
    std::string prefix = text.substr(0, cut);
    // Cutting exactly after a complete call line leaves a valid shorter record.
    if (cut >= first_call && text[cut - 1] == '\n') continue;
    if (cut == 0) continue;
    EXPECT_THROW(decode_record(prefix), ParseError) << "cut at " << cut;
  }
  EXPECT_THROW(decode_record(""), ParseError);
}

TEST(Codec, ParseErrorCarriesByteOffset) {
  auto text = encode_record(demo_record());
  auto at = text.find("args ") + 5;
  text[at] = '?';
  try {
    decode_record(text);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), at);
  }
}

TEST(Codec, NonFiniteScalarNamesPath) {
  auto r = demo_record();
  r.receiver = Snapshot::object("demo::ClassUnderTest",
                                {{"ratio", Snapshot::primitive("double", std::nan(""))}});
  try {
    encode_record(r);
    FAIL() << "expected a serialization error";
  } catch (const SerializationError& e) {
    EXPECT_EQ(e.path(), "receiver.ratio");
  }
}

TEST(Codec, InvalidUtf8NamesPath) {
  auto r = demo_record();
  r.calls[0].args[0] = Snapshot::text("std::string", "\xff\xfe");
  try {
    encode_record(r);
    FAIL() << "expected a serialization error";
  } catch (const SerializationError& e) {
    EXPECT_EQ(e.path(), "calls[0].args[0]");
  }
}
