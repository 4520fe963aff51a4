#pragma once

#include "shop/Cart.hpp"

namespace core {

namespace detail {
class Pool {
 public:
  void drain(lib::Queue* q) { q->clear(); }  // @site core/Engine.internal.hpp::core::detail::Pool::drain/1 param 0 lib::Queue::clear/0 @issue not_instrumented
};
}  // namespace detail

class Engine {
 public:
  int step(int n) {
    MIMIC_AROUND(n) {
      cart_->total(n);  // project type: a site only under the package policy
      return queue_->push(n);  // @site core/Engine.internal.hpp::core::Engine::step/1 field queue_ lib::Queue::push/1
    };
  }

 private:
  shop::Cart* cart_ = nullptr;
  lib::Queue* queue_ = nullptr;
};

namespace {
class Hidden {
 public:
  int go(lib::Queue* q) { return q->push(1); }  // @issue ineligible_method
};
}  // namespace

}  // namespace core
