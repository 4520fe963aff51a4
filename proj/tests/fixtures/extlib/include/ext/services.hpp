#pragma once

#include <map>
#include <string>
#include <vector>

namespace ext {

class Repository {
 public:
  virtual ~Repository() = default;
  virtual int stock(const std::string& sku) = 0;
  virtual void reserve(const std::string& sku, int qty) = 0;
};

class RateSource {
 public:
  virtual ~RateSource() = default;
  virtual int rate(int day) = 0;
};

class Clock {
 public:
  virtual ~Clock() = default;
  virtual long now() = 0;
};

class Store {
 public:
  virtual ~Store() = default;
  virtual std::vector<std::string> keys(const std::string& prefix) = 0;
  virtual int lookup(const std::string& key) = 0;
  virtual int count(const std::vector<std::string>& batch) = 0;
};

class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::vector<std::string> split(const std::string& text) = 0;
};

/// Production implementations.
class MemoryRepository : public Repository {
 public:
  explicit MemoryRepository(std::map<std::string, int> stock) : stock_(std::move(stock)) {}
  int stock(const std::string& sku) override {
    auto it = stock_.find(sku);
    return it == stock_.end() ? 0 : it->second;
  }
  void reserve(const std::string& sku, int qty) override { stock_[sku] -= qty; }

 private:
  std::map<std::string, int> stock_;
};

/// Rates drift upwards by 2 on every query.
class DriftingRates : public RateSource {
 public:
  int rate(int day) override { return day + 2 * calls_++; }

 private:
  int calls_ = 0;
};

class TickingClock : public Clock {
 public:
  explicit TickingClock(long start) : t_(start) {}
  long now() override { return t_ += 7; }

 private:
  long t_;
};

class FixedClock : public Clock {
 public:
  explicit FixedClock(long t) : t_(t) {}
  long now() override { return t_; }

 private:
  long t_;
};

class MapStore : public Store {
 public:
  explicit MapStore(std::map<std::string, int> data) : data_(std::move(data)) {}
  std::vector<std::string> keys(const std::string& prefix) override {
    std::vector<std::string> out;
    for (const auto& [k, v] : data_) {
      if (k.rfind(prefix, 0) == 0) out.push_back(k);
    }
    return out;
  }
  int lookup(const std::string& key) override { return data_.count(key) ? data_.at(key) : -1; }
  int count(const std::vector<std::string>& batch) override { return static_cast<int>(batch.size()); }

 private:
  std::map<std::string, int> data_;
};

class SpaceTokenizer : public Tokenizer {
 public:
  std::vector<std::string> split(const std::string& text) override {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
      if (c == ' ') {
        if (!cur.empty()) out.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
  }
};

}  // namespace ext
