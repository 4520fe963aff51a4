#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string_view>
#include <type_traits>
#include <vector>

#include "mimic/capture.hpp"
#include "mimic/errors.hpp"
#include "mimic/restore.hpp"
#include "mimic/snapshot.hpp"

namespace mimic {

/// Receives every call made on an interceptor. In recording mode `forward`
/// runs the real collaborator and returns the snapshot of its result; in mock
/// mode it is empty and the handler answers from its stubs. Returning nullopt
/// means "no answer" (a stub miss).
class CallHandler {
 public:
  virtual ~CallHandler() = default;
  virtual std::optional<Snapshot> on_call(std::string_view method, std::vector<Snapshot> args,
                                          const std::function<Snapshot()>& forward) = 0;
  virtual const CaptureOptions& capture_options() const = 0;
};

/// Mixin for interceptor classes. An interceptor implements one external
/// interface by routing each method through `intercept`:
///
///   class StoreInterceptor : public Store, public mimic::Interceptor<Store> {
///    public:
///     using Interceptor::Interceptor;
///     int get(int key) override {
///       return intercept<int>("get", [&](Store& real) { return real.get(key); }, key);
///     }
///   };
///   MIMIC_INTERCEPTOR(Store, StoreInterceptor);
template <class Iface>
class Interceptor {
 public:
  explicit Interceptor(std::shared_ptr<CallHandler> handler, Iface* target = nullptr)
      : handler_(std::move(handler)), target_(target) {}
  virtual ~Interceptor() = default;

  Iface* target() const { return target_; }
  CallHandler& handler() const { return *handler_; }

 protected:
  template <class R, class Forward, class... A>
  R intercept(std::string_view method, Forward&& forward, const A&... args) {
    static_assert(!std::is_reference_v<R>, "intercepted methods must return by value");
    const CaptureOptions& options = handler_->capture_options();
    std::vector<Snapshot> snaps;
    snaps.reserve(sizeof...(A));
    (snaps.push_back(snapshot_object(args, options)), ...);

    if (target_ != nullptr) {
      if constexpr (std::is_void_v<R>) {
        handler_->on_call(method, std::move(snaps), [&]() {
          forward(*target_);
          return Snapshot::null();
        });
        return;
      } else {
        std::optional<R> result;
        handler_->on_call(method, std::move(snaps), [&]() {
          result.emplace(forward(*target_));
          return snapshot_object(*result, options);
        });
        return std::move(*result);
      }
    }

    std::optional<Snapshot> answer = handler_->on_call(method, std::move(snaps), {});
    if constexpr (!std::is_void_v<R>) {
      if (answer) {
        try {
          return restore<R>(*answer);
        } catch (const RestoreError&) {
          // Unrestorable stub value (e.g. an opaque external); fall through.
        }
      }
      if constexpr (std::is_default_constructible_v<R>) {
        return R{};
      } else {
        throw Error("stub miss for '" + std::string(method) + "' and its return type has no default value");
      }
    }
  }

 private:
  std::shared_ptr<CallHandler> handler_;
  Iface* target_;
};

template <class Iface>
using InterceptorOf = typename InterceptorFor<Iface>::type;

}  // namespace mimic
