#pragma once

#include <ext/mimic/services.hpp>
#include <ext/services.hpp>
#include <mimic/probe.hpp>
#include <vector>

namespace pricing {

class Quoter {
 public:
  explicit Quoter(ext::RateSource* rates) : rates_(rates) {}

  int quote(int day, int units) {
    MIMIC_AROUND(day, units) {
      int total = margin_;
      for (int i = 0; i < units; ++i) total += rates_->rate(day);
      return total;
    };
  }

  double average(const std::vector<int>& days) {
    MIMIC_AROUND(days) {
      if (days.empty()) return 0.0;
      double sum = 0;
      for (int d : days) sum += rates_->rate(d);
      return sum / static_cast<double>(days.size());
    };
  }

 private:
  friend struct mimic::Access;
  Quoter() = default;

  ext::RateSource* rates_ = nullptr;
  int margin_ = 3;

  template <class V>
  void mimic_fields(V& v) {
    v("rates_", rates_);
    v("margin_", margin_);
  }
};

}  // namespace pricing
