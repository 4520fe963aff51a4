#pragma once

#include <ext/services.hpp>
#include <mimic/intercept.hpp>

namespace ext_mimic {

class RepositoryInterceptor : public ext::Repository, public mimic::Interceptor<ext::Repository> {
 public:
  using Interceptor::Interceptor;
  int stock(const std::string& sku) override {
    return intercept<int>("stock", [&](ext::Repository& real) { return real.stock(sku); }, sku);
  }
  void reserve(const std::string& sku, int qty) override {
    intercept<void>("reserve", [&](ext::Repository& real) { real.reserve(sku, qty); }, sku, qty);
  }
};

class RateSourceInterceptor : public ext::RateSource, public mimic::Interceptor<ext::RateSource> {
 public:
  using Interceptor::Interceptor;
  int rate(int day) override {
    return intercept<int>("rate", [&](ext::RateSource& real) { return real.rate(day); }, day);
  }
};

class ClockInterceptor : public ext::Clock, public mimic::Interceptor<ext::Clock> {
 public:
  using Interceptor::Interceptor;
  long now() override {
    return intercept<long>("now", [&](ext::Clock& real) { return real.now(); });
  }
};

class StoreInterceptor : public ext::Store, public mimic::Interceptor<ext::Store> {
 public:
  using Interceptor::Interceptor;
  std::vector<std::string> keys(const std::string& prefix) override {
    return intercept<std::vector<std::string>>("keys", [&](ext::Store& real) { return real.keys(prefix); }, prefix);
  }
  int lookup(const std::string& key) override {
    return intercept<int>("lookup", [&](ext::Store& real) { return real.lookup(key); }, key);
  }
  int count(const std::vector<std::string>& batch) override {
    return intercept<int>("count", [&](ext::Store& real) { return real.count(batch); }, batch);
  }
};

class TokenizerInterceptor : public ext::Tokenizer, public mimic::Interceptor<ext::Tokenizer> {
 public:
  using Interceptor::Interceptor;
  std::vector<std::string> split(const std::string& text) override {
    return intercept<std::vector<std::string>>("split", [&](ext::Tokenizer& real) { return real.split(text); },
                                               text);
  }
};

}  // namespace ext_mimic

MIMIC_INTERCEPTOR(ext::Repository, ext_mimic::RepositoryInterceptor);
MIMIC_INTERCEPTOR(ext::RateSource, ext_mimic::RateSourceInterceptor);
MIMIC_INTERCEPTOR(ext::Clock, ext_mimic::ClockInterceptor);
MIMIC_INTERCEPTOR(ext::Store, ext_mimic::StoreInterceptor);
MIMIC_INTERCEPTOR(ext::Tokenizer, ext_mimic::TokenizerInterceptor);
