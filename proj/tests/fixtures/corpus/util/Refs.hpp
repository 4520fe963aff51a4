#pragma once

#include <memory>

#include "lib/clock.hpp"

namespace util {

class Refs {
 public:
  int byRef(lib::Clock& clock) {
    return clock.now();  // @issue unsubstitutable_receiver
  }

  int byValueField() {
    return held_.now();  // @issue unsubstitutable_receiver
  }

  int byConst(const lib::Clock* clock) {
    return clock->now();  // @issue unsubstitutable_receiver
  }

  int byUnique() {
    return owned_->now();  // @issue unsubstitutable_receiver
  }

  int bySharedRef(const std::shared_ptr<lib::Clock>& clock) {
    return clock->now();  // @issue unsubstitutable_receiver
  }

  int byShared(std::shared_ptr<lib::Clock> clock, int k) {
    MIMIC_AROUND(clock, k) {
      return clock->now() * k + ptr_->now();  // @site util/Refs.hpp::util::Refs::byShared/2 param 0 lib::Clock::now/0 @site util/Refs.hpp::util::Refs::byShared/2 field ptr_ lib::Clock::now/0
    };
  }

 private:
  lib::Clock held_;
  std::unique_ptr<lib::Clock> owned_;
  lib::Clock* ptr_ = nullptr;
};

}  // namespace util
