#pragma once

#include "lib/clock.hpp"

namespace util {

class Kinds {
 public:
  Kinds(lib::Clock* c) : clock_(c) { clock_->now(); }  // @issue ineligible_method
  ~Kinds() { clock_->stop(); }  // @issue ineligible_method

  static int fromStatic(lib::Clock* c) { return c->now(); }  // @issue ineligible_method

  int read(int a) {
    MIMIC_AROUND(a) { return clock_->read(a); };  // @site util/Kinds.hpp::util::Kinds::read/1 field clock_ lib::Clock::read/1
  }

  int read(long a) { return clock_->read(static_cast<int>(a)); }  // @issue ineligible_method

  int read(int a, int b) {
    MIMIC_AROUND(a, b) { return clock_->read(a) + clock_->read(b); };  // @site util/Kinds.hpp::util::Kinds::read/2 field clock_ lib::Clock::read/1 @site util/Kinds.hpp::util::Kinds::read/2 field clock_ lib::Clock::read/1
  }

  int& cached() {  // @issue ineligible_method
    cache_ = clock_->now();
    return cache_;
  }

  int variadic(int n, ...) { return clock_->read(n); }  // @issue ineligible_method

  bool operator==(const Kinds& o) const { return clock_->now() == 0; }  // @issue ineligible_method

  int noSites(int a) const { return a + cache_; }

 protected:
  int guarded() { return clock_->now(); }  // @issue ineligible_method

 private:
  int secret() { return clock_->now(); }  // @issue ineligible_method

  lib::Clock* clock_;
  int cache_ = 0;
};

}  // namespace util
