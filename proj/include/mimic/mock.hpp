#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mimic/capture.hpp"
#include "mimic/errors.hpp"
#include "mimic/intercept.hpp"
#include "mimic/record.hpp"
#include "mimic/reflect.hpp"

namespace mimic {

/// A mockable call site as seen by a mock: calls to `method` with `arity`
/// arguments are attributed to `site_id`.
struct BoundSite {
  std::string site_id;
  std::string method;
  std::size_t arity = 0;
};

struct LoggedCall {
  std::uint64_t global_seq = 0;
  std::string site_id;
  std::vector<Snapshot> args;
  bool stub_miss = false;
};

/// Call log and stub table behind one mock object.
class MockHandle final : public CallHandler {
 public:
  MockHandle(std::string label, std::vector<BoundSite> sites,
             std::shared_ptr<std::atomic<std::uint64_t>> clock = nullptr, CaptureOptions options = {});

  void add_directive(StubDirective directive);

  std::optional<Snapshot> on_call(std::string_view method, std::vector<Snapshot> args,
                                  const std::function<Snapshot()>& forward) override;
  const CaptureOptions& capture_options() const override { return options_; }

  const std::string& label() const { return label_; }
  const std::vector<BoundSite>& sites() const { return sites_; }
  const std::vector<LoggedCall>& log() const { return log_; }
  std::vector<LoggedCall> misses() const;

 private:
  struct Stub {
    StubDirective directive;
    std::size_t served = 0;
  };

  std::string resolve_site(std::string_view method, std::size_t arity) const;

  std::string label_;
  std::vector<BoundSite> sites_;
  std::shared_ptr<std::atomic<std::uint64_t>> clock_;
  CaptureOptions options_;
  std::vector<Stub> stubs_;
  std::vector<LoggedCall> log_;
};

/// Builds a handle with the given stubs. Exhausted return queues repeat their
/// last value.
std::shared_ptr<MockHandle> make_mock(std::vector<StubDirective> directives, std::vector<BoundSite> sites);

struct VerifyResult {
  bool ok = true;
  std::string message;
  explicit operator bool() const { return ok; }
};

/// Passes iff `handle` logged at least one call to `site_id` whose arguments
/// structurally equal `args`.
VerifyResult verify_at_least_once(const MockHandle& handle, const std::string& site_id,
                                  const std::vector<Snapshot>& args);

struct InOrderStep {
  const MockHandle* handle = nullptr;
  std::string site_id;
  std::size_t times = 1;

  InOrderStep(const MockHandle& h, std::string site, std::size_t n) : handle(&h), site_id(std::move(site)), times(n) {}
  template <class M>
    requires requires(const M& m) { m.handle(); }
  InOrderStep(const M& mock, std::string site, std::size_t n)
      : InOrderStep(mock.handle(), std::move(site), n) {}
};

/// Passes iff the merged logs of the steps' handles, in call order, run-length
/// encode by (handle, site) to exactly `steps`. Arguments are ignored.
VerifyResult verify_in_order(const std::vector<InOrderStep>& steps);

/// Compares the snapshot of `actual` with an expected snapshot.
VerifyResult expect_snapshot_equal(const Snapshot& actual, const Snapshot& expected);

template <class T>
VerifyResult expect_snapshot(const T& actual, const Snapshot& expected) {
  return expect_snapshot_equal(snapshot_object(actual), expected);
}

/// Captures arguments the same way an interceptor does.
template <class... A>
std::vector<Snapshot> args(const A&... a) {
  return {snapshot_object(a)...};
}

template <class T>
Snapshot value(const T& v) {
  return snapshot_object(v);
}

Snapshot parse_snapshot(std::string_view text);
Snapshot load_snapshot(const std::string& path);
/// `relative` resolved against the directory containing `source_file`.
std::string resource_path(const char* source_file, const std::string& relative);

template <class Iface>
class Mock;

template <class Iface>
class StubBuilder {
 public:
  StubBuilder(MockHandle& handle, std::string site, std::vector<Snapshot> args)
      : handle_(handle), site_(std::move(site)), args_(std::move(args)) {}

  void then_return(std::vector<Snapshot> returns) {
    handle_.add_directive(StubDirective{site_, std::move(args_), std::move(returns)});
  }
  void then_return(const Snapshot& single) { then_return(std::vector<Snapshot>{single}); }

 private:
  MockHandle& handle_;
  std::string site_;
  std::vector<Snapshot> args_;
};

/// A mock implementing `Iface` through its registered interceptor class.
/// Converts to `Iface*` and `std::shared_ptr<Iface>` so it can be passed
/// wherever the production code expects the collaborator.
template <class Iface>
class Mock {
 public:
  Mock(std::shared_ptr<MockHandle> handle) : handle_(std::move(handle)) {
    object_ = std::make_shared<InterceptorOf<Iface>>(handle_);
  }

  StubBuilder<Iface> when(std::string site_id, std::vector<Snapshot> matched_args) {
    return StubBuilder<Iface>(*handle_, std::move(site_id), std::move(matched_args));
  }

  const MockHandle& handle() const { return *handle_; }
  Iface* get() const { return object_.get(); }
  std::shared_ptr<Iface> shared() const { return object_; }
  operator Iface*() const { return get(); }
  operator std::shared_ptr<Iface>() const { return shared(); }

 private:
  std::shared_ptr<MockHandle> handle_;
  std::shared_ptr<InterceptorOf<Iface>> object_;
};

/// Owns the mocks of one test and their shared call clock.
class MockScope {
 public:
  /// Captures call arguments the way a recording session with `depth_limit`
  /// does: interfaces with an interceptor are opaque.
  explicit MockScope(std::size_t depth_limit = kDefaultDepthLimit);
  explicit MockScope(CaptureOptions options);

  template <class Iface>
  Mock<Iface> mock(std::string label, std::vector<BoundSite> sites) {
    auto handle = std::make_shared<MockHandle>(std::move(label), std::move(sites), clock_, options_);
    handles_.push_back(handle);
    return Mock<Iface>(handle);
  }

  VerifyResult verify_at_least_once(const MockHandle& handle, const std::string& site_id,
                                    const std::vector<Snapshot>& args) const {
    return mimic::verify_at_least_once(handle, site_id, args);
  }
  VerifyResult verify_in_order(const std::vector<InOrderStep>& steps) const { return mimic::verify_in_order(steps); }

  std::vector<LoggedCall> misses() const;

 private:
  CaptureOptions options_;
  std::shared_ptr<std::atomic<std::uint64_t>> clock_;
  std::vector<std::shared_ptr<MockHandle>> handles_;
};

namespace detail {

template <class Iface>
struct Injector {
  std::string_view name;
  const Mock<Iface>& mock;
  bool found = false;

  template <class F>
  void operator()(std::string_view field_name, F& field) {
    if (found || field_name != name) return;
    found = true;
    if constexpr (std::is_assignable_v<F&, std::shared_ptr<Iface>>) {
      field = mock.shared();
    } else if constexpr (std::is_assignable_v<F&, Iface*>) {
      field = mock.get();
    } else {
      throw InjectionError("field '" + std::string(name) + "' of type '" + type_name<F>() +
                           "' cannot hold a mock of '" + type_name<Iface>() + "'");
    }
  }
};

}  // namespace detail

/// Stores `mock` in the field called `field_name` of `receiver` (inherited
/// fields included).
template <class T, class Iface>
void inject_mock_field(T& receiver, std::string_view field_name, const Mock<Iface>& mock) {
  static_assert(Reflected<T>, "inject_mock_field needs a reflected receiver");
  detail::Injector<Iface> injector{field_name, mock};
  Access::visit(receiver, injector);
  if (!injector.found) {
    throw InjectionError("'" + type_name<T>() + "' has no field named '" + std::string(field_name) + "'");
  }
}

}  // namespace mimic
