#pragma once

#include <memory>
#include <string>

#include "lib/store.hpp"

namespace alias {

using ClockPtr = lib::Clock*;
typedef std::shared_ptr<lib::Store> StorePtr;

class Helper {
 public:
  int run(int x) { return x; }
};

struct Registry {
  using Handle = lib::Store*;

  int lookup(const std::string& key, StorePtr store) {
    MIMIC_AROUND(key, store) {
      int n = store->find(key);  // @site alias/Aliases.hpp::alias::Registry::lookup/2 param 1 lib::Store::find/1
      n += handle->find(key);  // @site alias/Aliases.hpp::alias::Registry::lookup/2 field handle lib::Store::find/1
      n += helper->run(n);
      n += static_cast<int>(name->size());
      return n + clock->now();  // @site alias/Aliases.hpp::alias::Registry::lookup/2 field clock lib::Clock::now/0
    };
  }

  ClockPtr clock = nullptr;
  Handle handle = nullptr;
  Helper* helper = nullptr;
  std::string* name = nullptr;
};

}  // namespace alias
