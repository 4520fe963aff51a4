#pragma once

#include <cstdint>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <type_traits>
#include <typeinfo>
#include <utility>
#include <vector>

#include "mimic/agent.hpp"
#include "mimic/capture.hpp"
#include "mimic/intercept.hpp"
#include "mimic/reflect.hpp"

namespace mimic::agent {

namespace detail {

/// Set while a recording proxy forwards to a target that is itself a proxy,
/// so the outer proxy passes the call through (innermost attribution).
inline thread_local const void* claimed_target = nullptr;

class RecordingHandler final : public CallHandler {
 public:
  RecordingHandler(std::shared_ptr<InvocationContext> ctx, ReceiverBinding binding)
      : ctx_(std::move(ctx)), binding_(std::move(binding)) {}

  void bind(const void* self, const void* target) {
    self_ = self;
    target_ = target;
  }

  std::optional<Snapshot> on_call(std::string_view method, std::vector<Snapshot> args,
                                  const std::function<Snapshot()>& forward) override {
    struct Claim {
      const void* saved;
      explicit Claim(const void* target) : saved(claimed_target) { claimed_target = target; }
      ~Claim() { claimed_target = saved; }
    };
    if (claimed_target == self_) {
      Claim claim(target_);
      forward();
      return std::nullopt;
    }
    const std::string* site = resolve(method, args.size());
    if (site == nullptr || !ctx_->active || ctx_->thread != std::this_thread::get_id()) {
      Claim claim(nullptr);
      forward();
      return std::nullopt;
    }
    Snapshot result;
    try {
      Claim claim(target_);
      result = forward();
    } catch (...) {
      void_context(*ctx_, "a mockable call threw");
      throw;
    }
    on_mockable_call(*ctx_, *site, std::move(args), result);
    return result;
  }

  const CaptureOptions& capture_options() const override { return ctx_->hook->value_options; }

 private:
  const std::string* resolve(std::string_view method, std::size_t arity) const {
    for (const auto& s : ctx_->hook->descriptor.call_sites) {
      if (s.receiver == binding_ && s.callee_method == method && s.callee_arity == arity) return &s.site_id;
    }
    return nullptr;
  }

  std::shared_ptr<InvocationContext> ctx_;
  ReceiverBinding binding_;
  const void* self_ = nullptr;
  const void* target_ = nullptr;
};

/// Swaps receiver fields and parameters for recording proxies and puts the
/// originals back when the invocation ends, unless the MUT reassigned them.
class ProxyGuard {
 public:
  explicit ProxyGuard(std::shared_ptr<InvocationContext> ctx) : ctx_(std::move(ctx)) {}
  ProxyGuard(const ProxyGuard&) = delete;
  ProxyGuard& operator=(const ProxyGuard&) = delete;
  ~ProxyGuard() {
    for (auto it = restorers_.rbegin(); it != restorers_.rend(); ++it) (*it)();
    for (auto& p : proxies_) ctx_->session->retain(std::move(p));
  }

  template <class F>
  bool swap(F& slot, ReceiverBinding binding) {
    if constexpr (SubstitutableBinding<F>) {
      using I = mimic::detail::pointee_t<F>;
      I* original = raw(slot);
      if (original == nullptr) return true;
      auto handler = std::make_shared<RecordingHandler>(ctx_, std::move(binding));
      auto proxy = std::make_shared<InterceptorOf<I>>(handler, original);
      I* proxy_iface = proxy.get();
      handler->bind(static_cast<const void*>(proxy_iface), static_cast<const void*>(original));
      if constexpr (std::is_pointer_v<F>) {
        slot = proxy_iface;
        restorers_.push_back([&slot, original, proxy_iface]() {
          if (slot == proxy_iface) slot = original;
        });
      } else {
        F saved = slot;
        slot = std::shared_ptr<I>(proxy, proxy_iface);
        restorers_.push_back([&slot, saved, proxy_iface]() {
          if (slot.get() == proxy_iface) slot = saved;
        });
      }
      proxies_.push_back(std::move(proxy));
      return true;
    } else {
      (void)slot;
      (void)binding;
      return false;
    }
  }

 private:
  template <class F>
  static auto* raw(F& slot) {
    if constexpr (std::is_pointer_v<F>) {
      return slot;
    } else {
      return slot.get();
    }
  }

  std::shared_ptr<InvocationContext> ctx_;
  std::vector<std::function<void()>> restorers_;
  std::vector<std::shared_ptr<void>> proxies_;
};

struct FieldSwapper {
  ProxyGuard& guard;
  const std::set<std::string>& wanted;
  std::set<std::string> found;
  std::set<std::string> unsubstitutable;

  template <class F>
  void operator()(std::string_view name, F& field) {
    std::string key(name);
    if (!wanted.count(key) || found.count(key)) return;
    found.insert(key);
    if (!guard.swap(field, FieldBinding{key})) unsubstitutable.insert(key);
  }
};

template <class T>
std::string binding_type_name() {
  using U = std::remove_cvref_t<T>;
  if constexpr (!std::is_void_v<mimic::detail::pointee_t<U>>) {
    return type_name<mimic::detail::pointee_t<U>>();
  } else {
    return type_name<U>();
  }
}

/// Per-call-site cache of the hook matching this MUT in the active session.
struct SiteCache {
  std::mutex mutex;
  std::shared_ptr<const Session> session;
  const Hook* hook = nullptr;
  bool resolved = false;

  const Hook* lookup(const std::shared_ptr<const Session>& current, const std::string& type,
                     std::string_view method, std::size_t arity) {
    std::lock_guard lock(mutex);
    if (!resolved || session != current) {
      session = current;
      hook = current ? current->find(type, method, arity) : nullptr;
      resolved = true;
    }
    return hook;
  }
};

}  // namespace detail

/// Around-advice for one MUT invocation; see MIMIC_AROUND.
template <class Self, class... A>
class Probe {
 public:
  Probe(Self& self, const char* method, std::tuple<A&...> params)
      : self_(const_cast<std::remove_const_t<Self>&>(self)), method_(method), params_(params) {}

  template <class Body>
  decltype(auto) operator->*(Body&& body) {
    using Type = std::remove_const_t<Self>;
    (void)mimic::detail::TypeRegistration<Type>::value;
    static detail::SiteCache cache;
    auto session = active_session();
    if (!session) return body();
    const Hook* hook = cache.lookup(session, type_name<Type>(), method_, sizeof...(A));
    if (hook == nullptr) return body();
    return run(std::move(session), *hook, body);
  }

 private:
  using Type = std::remove_const_t<Self>;

  template <class Body>
  decltype(auto) run(std::shared_ptr<const Session> session, const Hook& hook, Body& body) {
    using R = decltype(body());
    if (!session->reserve(hook)) return body();

    std::shared_ptr<InvocationContext> ctx;
    try {
      std::string timestamp = utc_timestamp_now();
      Snapshot receiver = snapshot_object(self_, hook.receiver_options);
      std::vector<Snapshot> args = snapshot_args(hook, std::index_sequence_for<A...>{});
      ctx = open_context(session, hook, std::move(receiver), std::move(args), std::move(timestamp));
    } catch (const std::exception& e) {
      session->release(hook);
      if (!session->config().fail_open) throw;
      session->warn("capture failed at entry of " + hook.descriptor.mut_id + ": " + e.what());
      return body();
    }

    std::optional<detail::ProxyGuard> guard;
    guard.emplace(ctx);
    install_proxies(*session, hook, *guard, std::index_sequence_for<A...>{});

    try {
      if constexpr (std::is_void_v<R>) {
        body();
        guard.reset();
        on_mut_exit(*ctx, Returned{Snapshot::null()});
        return;
      } else {
        R result = body();
        guard.reset();
        Outcome outcome = Returned{capture_result(*session, *ctx, result)};
        on_mut_exit(*ctx, std::move(outcome));
        return result;
      }
    } catch (const std::exception& e) {
      guard.reset();
      if (ctx->active) on_mut_exit(*ctx, Raised{mimic::demangle(typeid(e).name())});
      throw;
    } catch (...) {
      guard.reset();
      if (ctx->active) on_mut_exit(*ctx, Raised{"unknown"});
      throw;
    }
  }

  template <class R>
  Snapshot capture_result(const Session& session, InvocationContext& ctx, const R& result) {
    try {
      return snapshot_object(result, ctx.hook->value_options);
    } catch (const std::exception& e) {
      if (!session.config().fail_open) throw;
      void_context(ctx, std::string("result capture failed: ") + e.what());
      return Snapshot::null();
    }
  }

  template <std::size_t... I>
  std::vector<Snapshot> snapshot_args(const Hook& hook, std::index_sequence<I...>) {
    std::vector<Snapshot> out;
    out.reserve(sizeof...(I));
    (out.push_back(hook.mockable_params.count(I)
                       ? Snapshot::opaque(detail::binding_type_name<std::tuple_element_t<I, std::tuple<A...>>>())
                       : snapshot_object(std::get<I>(params_), hook.value_options)),
     ...);
    return out;
  }

  template <std::size_t... I>
  void install_proxies(const Session& session, const Hook& hook, detail::ProxyGuard& guard,
                       std::index_sequence<I...>) {
    if (!hook.mockable_fields.empty()) {
      if constexpr (Reflected<Type>) {
        detail::FieldSwapper swapper{guard, hook.mockable_fields, {}, {}};
        Access::visit(self_, swapper);
        for (const auto& f : hook.mockable_fields) {
          if (!swapper.found.count(f)) {
            session.warn_once(hook.descriptor.mut_id + "#" + f,
                              "field '" + f + "' of " + hook.descriptor.mut_id + " is not reflected; its calls are not recorded");
          } else if (swapper.unsubstitutable.count(f)) {
            session.warn_once(hook.descriptor.mut_id + "#" + f,
                              "field '" + f + "' of " + hook.descriptor.mut_id + " cannot hold a recording proxy");
          }
        }
      } else {
        session.warn_once(hook.descriptor.mut_id, type_name<Type>() + " has no mimic_fields; field calls are not recorded");
      }
    }
    (swap_param<I>(session, hook, guard), ...);
  }

  template <std::size_t I>
  void swap_param(const Session& session, const Hook& hook, detail::ProxyGuard& guard) {
    if (!hook.mockable_params.count(I)) return;
    auto& slot = std::get<I>(params_);
    using P = std::remove_reference_t<decltype(slot)>;
    bool ok = false;
    if constexpr (!std::is_const_v<P>) ok = guard.swap(slot, ParameterBinding{I});
    if (!ok) {
      session.warn_once(hook.descriptor.mut_id + "#" + std::to_string(I),
                        "parameter " + std::to_string(I) + " of " + hook.descriptor.mut_id + " cannot hold a recording proxy");
    }
  }

  Type& self_;
  const char* method_;
  std::tuple<A&...> params_;
};

template <class Self, class... A>
Probe(Self&, const char*, std::tuple<A&...>) -> Probe<Self, A...>;

}  // namespace mimic::agent

/// Wraps a method body so invocations can be recorded. List the method's
/// parameters in order, then write the body as a lambda body:
///
///   int Cut::run(int a, ext::Two* two) {
///     MIMIC_AROUND(a, two) {
///       return field_->get(a) + two->put(a);
///     };
///   }
///
/// Without an active recording session the body runs unchanged.
#define MIMIC_AROUND(...) \
  return ::mimic::agent::Probe(*this, __func__, std::tie(__VA_ARGS__))->*[&]()
