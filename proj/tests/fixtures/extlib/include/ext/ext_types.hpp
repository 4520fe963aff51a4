#pragma once

namespace ext {

class ExtTypeOne {
 public:
  virtual ~ExtTypeOne() = default;
  virtual int mockableMethodOne(int x) = 0;
};

class ExtTypeTwo {
 public:
  virtual ~ExtTypeTwo() = default;
  virtual int mockableMethodTwo(int x) = 0;
};

/// Production implementations.
class TableOne : public ExtTypeOne {
 public:
  int mockableMethodOne(int x) override { return x * 2 + 15; }
};

class TableTwo : public ExtTypeTwo {
 public:
  int mockableMethodTwo(int x) override { return x - 10; }
};

}  // namespace ext
