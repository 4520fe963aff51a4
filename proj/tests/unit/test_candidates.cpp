#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "../support/records.hpp"
#include "mimic/candidates.hpp"
#include "mimic/errors.hpp"

using namespace mimic;

namespace {

MutDescriptor second_descriptor() {
  MutDescriptor d;
  d.header = "shop/Orders.hpp";
  d.declaring_type = "shop::Orders";
  d.namespace_name = "shop";
  d.method = "place";
  d.params = {{"items", "const std::vector<int>&"}, {"ledger", "std::shared_ptr<ext::Ledger>"}};
  d.return_kind = ReturnKind::none;
  d.return_type = "void";
  d.mut_id = make_mut_id(d.header, d.declaring_type, d.method, 2);
  d.call_sites = {{"s1", ParameterBinding{1}, "ext::Ledger", "post", 2, {"shop/Orders.hpp", 40}}};
  return d;
}

std::string line_error(const std::string& text) {
  try {
    parse_candidates(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "no error";
}

}  // namespace

TEST(Candidates, EmptyListIsHeaderOnly) {
  auto text = format_candidates({});
  for (std::size_t pos = 0; pos < text.size();) {
    EXPECT_EQ(text[pos], '#');
    pos = text.find('\n', pos) + 1;
  }
  EXPECT_TRUE(parse_candidates(text).empty());
}

TEST(Candidates, DemoRoundTrips) {
  std::vector<MutDescriptor> in{testsupport::demo_descriptor()};
  auto out = parse_candidates(format_candidates(in));
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], in[0]);
  EXPECT_EQ(describe(out[0].call_sites[0].receiver), "field(extField)");
  EXPECT_EQ(describe(out[0].call_sites[1].receiver), "parameter(1)");
}

TEST(Candidates, FileRoundTripsWithVoidAndSpacedTypes) {
  auto dir = std::filesystem::temp_directory_path() / "mimic_candidates_test";
  std::filesystem::remove_all(dir);
  std::vector<MutDescriptor> in{testsupport::demo_descriptor(), second_descriptor()};
  write_candidates(in, (dir / "c.txt").string());
  EXPECT_EQ(load_candidates((dir / "c.txt").string()), in);
  std::filesystem::remove_all(dir);
}

TEST(Candidates, ToleratesDeletionAndReordering) {
  std::vector<MutDescriptor> in{testsupport::demo_descriptor(), second_descriptor()};
  auto text = format_candidates(in);
  auto second = text.find("\nmut shop/");
  ASSERT_NE(second, std::string::npos);
  auto header_end = text.find("\nmut ");
  std::string first_block = text.substr(header_end, second - header_end);
  std::string second_block = text.substr(second);

  auto deleted = text.substr(0, second) + "\n";
  auto loaded = parse_candidates(deleted);
  ASSERT_EQ(loaded.size(), 1u);
  EXPECT_EQ(loaded[0], in[0]);

  auto reordered = text.substr(0, header_end) + second_block + first_block + "\n# trailing note\n";
  loaded = parse_candidates(reordered);
  ASSERT_EQ(loaded.size(), 2u);
  EXPECT_EQ(loaded[0], in[1]);
  EXPECT_EQ(loaded[1], in[0]);
}

TEST(Candidates, ErrorsNameTheLine) {
  auto text = format_candidates({testsupport::demo_descriptor()});
  auto bad = text + "  bogus line\n";
  const auto lines = std::count(text.begin(), text.end(), '\n') + 1;
  EXPECT_NE(line_error(bad).find("line " + std::to_string(lines) + ":"), std::string::npos) << line_error(bad);

  auto outside = "type x\n";
  EXPECT_NE(line_error(outside).find("line 1:"), std::string::npos);
}

TEST(Candidates, RejectsInvariantViolations) {
  auto d = testsupport::demo_descriptor();
  auto text = format_candidates({d});
  // Parameter index beyond param_count.
  auto at = text.find("param 1 ");
  ASSERT_NE(at, std::string::npos);
  auto bad = text;
  bad.replace(at, 8, "param 5 ");
  EXPECT_NE(line_error(bad).find("parameter binding out of range"), std::string::npos);

  // Block without sites.
  auto no_sites = "mut a.hpp::A::f/0\n  type A\n  returns none\n";
  EXPECT_NE(line_error(no_sites).find("line 1:"), std::string::npos);
  EXPECT_NE(line_error(no_sites).find("MUT without call sites"), std::string::npos);

  // Duplicate mut ids.
  auto dup = text + text.substr(text.find("\nmut "));
  EXPECT_NE(line_error(dup).find("duplicate mut id"), std::string::npos);

  // Duplicate site ids.
  auto dup_site = text;
  dup_site.replace(dup_site.find("site s2"), 7, "site s1");
  EXPECT_NE(line_error(dup_site).find("duplicate site_id"), std::string::npos);
}
