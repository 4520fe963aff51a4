#pragma once

#include <ext/ext_types.hpp>
#include <ext/mimic/ext_types.hpp>
#include <mimic/probe.hpp>

namespace demo {

class ClassUnderTest {
 public:
  explicit ClassUnderTest(ext::ExtTypeOne* one) : extField(one) {}

  int methodUnderTest(int a, ext::ExtTypeTwo* extParam) {
    MIMIC_AROUND(a, extParam) {
      int b = a - 37;
      int x = extField->mockableMethodOne(a - offset_);
      int y = extParam->mockableMethodTwo(b);
      return x - y - 40;
    };
  }

 private:
  friend struct mimic::Access;
  ClassUnderTest() = default;

  ext::ExtTypeOne* extField = nullptr;
  int offset_ = 22;

  template <class V>
  void mimic_fields(V& v) {
    v("extField", extField);
    v("offset_", offset_);
  }
};

}  // namespace demo
