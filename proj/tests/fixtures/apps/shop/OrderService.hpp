#pragma once

#include <ext/mimic/services.hpp>
#include <ext/services.hpp>
#include <memory>
#include <mimic/probe.hpp>

#include "Order.hpp"

namespace shop {

class ServiceBase {
 public:
  explicit ServiceBase(std::shared_ptr<ext::Repository> repo) : repo_(std::move(repo)) {}

 protected:
  friend struct mimic::Access;
  ServiceBase() = default;

  std::shared_ptr<ext::Repository> repo_;

  template <class V>
  void mimic_fields(V& v) {
    v("repo_", repo_);
  }
};

class OrderService : public ServiceBase {
 public:
  OrderService(std::shared_ptr<ext::Repository> repo, int limit) : ServiceBase(std::move(repo)), limit_(limit) {}

  Receipt checkout(const Order& order) {
    MIMIC_AROUND(order) {
      Receipt r;
      for (const auto& line : order.lines) {
        int available = repo_->stock(line.sku);
        if (available >= line.qty && r.units + line.qty <= limit_) {
          repo_->reserve(line.sku, line.qty);
          r.reserved.push_back(line.sku);
          r.units += line.qty;
        } else {
          r.missing.push_back(line.sku);
        }
      }
      r.complete = r.missing.empty();
      return r;
    };
  }

  void restock(const std::string& sku, int qty) {
    MIMIC_AROUND(sku, qty) {
      if (qty > 0) repo_->reserve(sku, -qty);
    };
  }

 private:
  friend struct mimic::Access;
  OrderService() = default;

  int limit_ = 0;

  template <class V>
  void mimic_fields(V& v) {
    ServiceBase::mimic_fields(v);
    v("limit_", limit_);
  }
};

}  // namespace shop
