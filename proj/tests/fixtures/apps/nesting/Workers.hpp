#pragma once

#include <ext/mimic/services.hpp>
#include <ext/services.hpp>
#include <mimic/probe.hpp>

namespace nesting {

class Inner {
 public:
  int work(ext::Clock* clock, int x) {
    MIMIC_AROUND(clock, x) {
      long t = clock->now();
      return x * scale_ + static_cast<int>(t % 100);
    };
  }

 private:
  friend struct mimic::Access;

  int scale_ = 3;

  template <class V>
  void mimic_fields(V& v) {
    v("scale_", scale_);
  }
};

class Outer {
 public:
  explicit Outer(ext::Clock* clock) : clock_(clock) {}

  int run(int x) {
    MIMIC_AROUND(x) {
      long t = clock_->now();
      ext::FixedClock fixed(t);
      return inner_.work(&fixed, x) + 1;
    };
  }

 private:
  friend struct mimic::Access;
  Outer() = default;

  ext::Clock* clock_ = nullptr;
  Inner inner_;

  template <class V>
  void mimic_fields(V& v) {
    v("clock_", clock_);
    v("inner_", inner_);
  }
};

}  // namespace nesting
