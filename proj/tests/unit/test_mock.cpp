#include <gtest/gtest.h>

#include "mimic/errors.hpp"
#include "mimic/gtest.hpp"
#include "mimic/mock.hpp"

namespace ext {

struct Pricing {
  virtual ~Pricing() = default;
  virtual int quote(int sku) = 0;
  virtual void touch() = 0;
};

struct Audit {
  virtual ~Audit() = default;
  virtual std::string note(const std::string& what, int n) = 0;
};

}  // namespace ext

class PricingInterceptor : public ext::Pricing, public mimic::Interceptor<ext::Pricing> {
 public:
  using Interceptor::Interceptor;
  int quote(int sku) override {
    return intercept<int>("quote", [&](ext::Pricing& real) { return real.quote(sku); }, sku);
  }
  void touch() override {
    intercept<void>("touch", [&](ext::Pricing& real) { real.touch(); });
  }
};
MIMIC_INTERCEPTOR(ext::Pricing, PricingInterceptor);

class AuditInterceptor : public ext::Audit, public mimic::Interceptor<ext::Audit> {
 public:
  using Interceptor::Interceptor;
  std::string note(const std::string& what, int n) override {
    return intercept<std::string>("note", [&](ext::Audit& real) { return real.note(what, n); }, what, n);
  }
};
MIMIC_INTERCEPTOR(ext::Audit, AuditInterceptor);

namespace app {

class Base {
 protected:
  std::shared_ptr<ext::Audit> audit_;
  template <class V>
  void mimic_fields(V& v) {
    v("audit_", audit_);
  }
  friend struct mimic::Access;
};

class Shop : public Base {
 public:
  int price(int sku) {
    audit_->note("price", sku);
    return pricing_->quote(sku) * 2;
  }
  ext::Pricing* pricing() const { return pricing_; }

 private:
  friend struct mimic::Access;
  ext::Pricing* pricing_ = nullptr;
  int count_ = 0;
  template <class V>
  void mimic_fields(V& v) {
    Base::mimic_fields(v);
    v("pricing_", pricing_);
    v("count_", count_);
  }
};

}  // namespace app

using mimic::args;
using mimic::value;

namespace {

std::vector<mimic::BoundSite> pricing_sites() { return {{"s1", "quote", 1}, {"s2", "touch", 0}}; }

}  // namespace

TEST(Mock, InterceptorsRegister) {
  EXPECT_TRUE(mimic::interceptor_known("ext::Pricing"));
  EXPECT_TRUE(mimic::interceptor_known("ext::Audit"));
  EXPECT_FALSE(mimic::interceptor_known("ext::Nothing"));
}

TEST(Mock, StubbedCallReturnsAndLogs) {
  auto handle = mimic::make_mock({{"s1", args(42), {value(99)}}}, pricing_sites());
  mimic::Mock<ext::Pricing> mock(handle);
  EXPECT_EQ(mock.get()->quote(42), 99);
  ASSERT_EQ(handle->log().size(), 1u);
  EXPECT_EQ(handle->log()[0].site_id, "s1");
  EXPECT_FALSE(handle->log()[0].stub_miss);
}

TEST(Mock, ConsecutiveReturnsRepeatLast) {
  const std::vector<int> returns{5, 7};
  std::vector<mimic::Snapshot> snaps;
  for (int r : returns) snaps.push_back(value(r));
  mimic::Mock<ext::Pricing> mock(mimic::make_mock({{"s1", args(5), snaps}}, pricing_sites()));
  for (std::size_t i = 0; i < 5; ++i) {
    // Oracle: the i-th call gets returns[i], then the last one forever.
    EXPECT_EQ(mock.get()->quote(5), returns[std::min(i, returns.size() - 1)]);
  }
}

TEST(Mock, EmptyStubTableMisses) {
  auto handle = mimic::make_mock({}, pricing_sites());
  mimic::Mock<ext::Pricing> mock(handle);
  EXPECT_EQ(mock.get()->quote(3), 0);
  mock.get()->touch();
  ASSERT_EQ(handle->misses().size(), 2u);
  EXPECT_EQ(handle->misses()[0].site_id, "s1");
}

TEST(Mock, ArgumentMatchingIsExact) {
  auto handle = mimic::make_mock({{"s1", args(42), {value(99)}}}, pricing_sites());
  mimic::Mock<ext::Pricing> mock(handle);
  EXPECT_EQ(mock.get()->quote(43), 0);
  EXPECT_TRUE(handle->log()[0].stub_miss);
}

TEST(Mock, NonScalarReturnsRestore) {
  auto handle = mimic::make_mock({{"s1", args(std::string("x"), 2), {value(std::string("ok"))}}}, {{"s1", "note", 2}});
  mimic::Mock<ext::Audit> mock(handle);
  EXPECT_EQ(mock.get()->note("x", 2), "ok");
  EXPECT_EQ(mock.get()->note("y", 2), "");
}

TEST(Inject, FieldInjectionIncludingInherited) {
  mimic::MockScope mocks;
  auto shop = std::shared_ptr<app::Shop>(mimic::Access::make<app::Shop>());
  auto pricing = mocks.mock<ext::Pricing>("pricing_", pricing_sites());
  auto audit = mocks.mock<ext::Audit>("audit_", {{"s3", "note", 2}});
  pricing.when("s1", args(7)).then_return(value(10));
  mimic::inject_mock_field(*shop, "pricing_", pricing);
  mimic::inject_mock_field(*shop, "audit_", audit);
  EXPECT_EQ(shop->price(7), 20);
  EXPECT_EQ(pricing.handle().log().size(), 1u);
  ASSERT_EQ(audit.handle().log().size(), 1u);
  EXPECT_EQ(audit.handle().log()[0].site_id, "s3");
}

TEST(Inject, SecondInjectionWins) {
  mimic::MockScope mocks;
  auto shop = std::shared_ptr<app::Shop>(mimic::Access::make<app::Shop>());
  auto first = mocks.mock<ext::Pricing>("first", pricing_sites());
  auto second = mocks.mock<ext::Pricing>("second", pricing_sites());
  mimic::inject_mock_field(*shop, "pricing_", first);
  mimic::inject_mock_field(*shop, "pricing_", second);
  EXPECT_EQ(shop->pricing(), second.get());
}

TEST(Inject, MissingOrIncompatibleField) {
  mimic::MockScope mocks;
  auto shop = std::shared_ptr<app::Shop>(mimic::Access::make<app::Shop>());
  auto pricing = mocks.mock<ext::Pricing>("p", pricing_sites());
  EXPECT_THROW(mimic::inject_mock_field(*shop, "nope", pricing), mimic::InjectionError);
  EXPECT_THROW(mimic::inject_mock_field(*shop, "count_", pricing), mimic::InjectionError);
}

TEST(Verify, AtLeastOnce) {
  mimic::MockScope mocks;
  auto one = mocks.mock<ext::Pricing>("mockExtField", pricing_sites());
  one.get()->quote(42);
  EXPECT_TRUE(mocks.verify_at_least_once(one.handle(), "s1", args(42)).ok);
  auto miss = mocks.verify_at_least_once(one.handle(), "s1", args(41));
  EXPECT_FALSE(miss.ok);
  EXPECT_NE(miss.message.find("mockExtField.s1"), std::string::npos) << miss.message;
  EXPECT_NE(miss.message.find("\"value\":41"), std::string::npos) << miss.message;
  EXPECT_NE(miss.message.find("\"value\":42"), std::string::npos) << miss.message;
}

TEST(Verify, EmptyLogFails) {
  mimic::MockScope mocks;
  auto one = mocks.mock<ext::Pricing>("m", pricing_sites());
  EXPECT_FALSE(mocks.verify_at_least_once(one.handle(), "s1", args(1)).ok);
  EXPECT_FALSE(mocks.verify_in_order({{one, "s1", 1}}).ok);
}

TEST(Verify, InOrderAcrossHandles) {
  mimic::MockScope mocks;
  auto field = mocks.mock<ext::Pricing>("mockExtField", {{"s1", "quote", 1}});
  auto param = mocks.mock<ext::Pricing>("mockExtParam", {{"s2", "quote", 1}});
  field.get()->quote(42);
  param.get()->quote(27);
  EXPECT_TRUE(mocks.verify_in_order({{field, "s1", 1}, {param, "s2", 1}}).ok);
  auto swapped = mocks.verify_in_order({{param, "s2", 1}, {field, "s1", 1}});
  EXPECT_FALSE(swapped.ok);
  EXPECT_NE(swapped.message.find("expected mockExtParam.s2 x1"), std::string::npos) << swapped.message;
  EXPECT_NE(swapped.message.find("mockExtField.s1 x1 mockExtParam.s2 x1"), std::string::npos) << swapped.message;
  EXPECT_LT(field.handle().log()[0].global_seq, param.handle().log()[0].global_seq);
}

TEST(Verify, InOrderCountsRunsExactly) {
  mimic::MockScope mocks;
  auto m = mocks.mock<ext::Pricing>("m", pricing_sites());
  m.get()->quote(1);
  m.get()->quote(2);
  m.get()->touch();
  EXPECT_TRUE(mocks.verify_in_order({{m, "s1", 2}, {m, "s2", 1}}).ok);
  EXPECT_FALSE(mocks.verify_in_order({{m, "s1", 1}, {m, "s2", 1}}).ok);
  EXPECT_FALSE(mocks.verify_in_order({{m, "s1", 2}}).ok);
  MIMIC_EXPECT(mocks.verify_in_order({{m, "s1", 2}, {m, "s2", 1}}));
}

TEST(Verify, SnapshotExpectation) {
  EXPECT_TRUE(mimic::expect_snapshot(std::vector<int>{1, 2}, value(std::vector<int>{1, 2})).ok);
  auto bad = mimic::expect_snapshot(std::vector<int>{1, 3}, value(std::vector<int>{1, 2}));
  EXPECT_FALSE(bad.ok);
  EXPECT_NE(bad.message.find("expected"), std::string::npos);
}
