#include "mimic/mock.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mimic/codec.hpp"

namespace mimic {

MockHandle::MockHandle(std::string label, std::vector<BoundSite> sites,
                       std::shared_ptr<std::atomic<std::uint64_t>> clock, CaptureOptions options)
    : label_(std::move(label)),
      sites_(std::move(sites)),
      clock_(clock ? std::move(clock) : std::make_shared<std::atomic<std::uint64_t>>(0)),
      options_(std::move(options)) {}

void MockHandle::add_directive(StubDirective directive) {
  if (directive.returns.empty()) throw Error("stub directive for '" + directive.site_id + "' has no return values");
  stubs_.push_back(Stub{std::move(directive)});
}

std::string MockHandle::resolve_site(std::string_view method, std::size_t arity) const {
  for (const auto& s : sites_) {
    if (s.method == method && s.arity == arity) return s.site_id;
  }
  return "<unbound " + std::string(method) + "/" + std::to_string(arity) + ">";
}

std::optional<Snapshot> MockHandle::on_call(std::string_view method, std::vector<Snapshot> args,
                                            const std::function<Snapshot()>&) {
  LoggedCall call;
  call.global_seq = clock_->fetch_add(1);
  call.site_id = resolve_site(method, args.size());
  call.args = std::move(args);
  std::optional<Snapshot> answer;
  for (auto& stub : stubs_) {
    const auto& d = stub.directive;
    if (d.site_id != call.site_id || d.matched_args.size() != call.args.size()) continue;
    bool match = true;
    for (std::size_t i = 0; i < call.args.size() && match; ++i) {
      match = structural_equals(d.matched_args[i], call.args[i]);
    }
    if (!match) continue;
    answer = d.returns[std::min(stub.served, d.returns.size() - 1)];
    ++stub.served;
    break;
  }
  call.stub_miss = !answer.has_value();
  log_.push_back(std::move(call));
  return answer;
}

std::vector<LoggedCall> MockHandle::misses() const {
  std::vector<LoggedCall> out;
  std::copy_if(log_.begin(), log_.end(), std::back_inserter(out), [](const LoggedCall& c) { return c.stub_miss; });
  return out;
}

std::shared_ptr<MockHandle> make_mock(std::vector<StubDirective> directives, std::vector<BoundSite> sites) {
  auto handle = std::make_shared<MockHandle>("mock", std::move(sites));
  for (auto& d : directives) handle->add_directive(std::move(d));
  return handle;
}

namespace {

std::string render_args(const std::vector<Snapshot>& args) {
  std::string out = "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    try {
      out += encode_snapshot(args[i]);
    } catch (const Error&) {
      out += "<unprintable>";
    }
  }
  return out + ")";
}

}  // namespace

VerifyResult verify_at_least_once(const MockHandle& handle, const std::string& site_id,
                                  const std::vector<Snapshot>& args) {
  std::size_t same_site = 0;
  for (const auto& call : handle.log()) {
    if (call.site_id != site_id) continue;
    ++same_site;
    if (call.args.size() != args.size()) continue;
    bool match = true;
    for (std::size_t i = 0; i < args.size() && match; ++i) match = structural_equals(call.args[i], args[i]);
    if (match) return {};
  }
  std::ostringstream msg;
  msg << handle.label() << "." << site_id << render_args(args) << ": expected at least once, ";
  if (same_site == 0) {
    msg << "but the site was never called";
  } else {
    msg << "but " << same_site << " call(s) to the site had other arguments:";
    for (const auto& call : handle.log()) {
      if (call.site_id == site_id) msg << " " << render_args(call.args);
    }
  }
  return {false, msg.str()};
}

VerifyResult verify_in_order(const std::vector<InOrderStep>& steps) {
  std::vector<const MockHandle*> handles;
  for (const auto& s : steps) {
    if (std::find(handles.begin(), handles.end(), s.handle) == handles.end()) handles.push_back(s.handle);
  }
  struct Event {
    std::uint64_t seq;
    const MockHandle* handle;
    const std::string* site;
  };
  std::vector<Event> events;
  for (const auto* h : handles) {
    for (const auto& c : h->log()) events.push_back({c.global_seq, h, &c.site_id});
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.seq < b.seq; });

  struct Run {
    const MockHandle* handle;
    std::string site;
    std::size_t times;
  };
  std::vector<Run> actual;
  for (const auto& e : events) {
    if (!actual.empty() && actual.back().handle == e.handle && actual.back().site == *e.site) {
      ++actual.back().times;
    } else {
      actual.push_back({e.handle, *e.site, 1});
    }
  }

  auto describe_runs = [&]() {
    std::string out;
    for (const auto& r : actual) out += " " + r.handle->label() + "." + r.site + " x" + std::to_string(r.times);
    return out.empty() ? std::string(" <no calls>") : out;
  };
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& s = steps[i];
    if (i >= actual.size() || actual[i].handle != s.handle || actual[i].site != s.site_id ||
        actual[i].times != s.times) {
      std::ostringstream msg;
      msg << "in-order verification failed at step " << i + 1 << ": expected " << s.handle->label() << "."
          << s.site_id << " x" << s.times << "; actual sequence:" << describe_runs();
      return {false, msg.str()};
    }
  }
  if (actual.size() > steps.size()) {
    return {false, "in-order verification failed: unexpected calls after the expected sequence; actual sequence:" +
                       describe_runs()};
  }
  return {};
}

VerifyResult expect_snapshot_equal(const Snapshot& actual, const Snapshot& expected) {
  if (structural_equals(actual, expected)) return {};
  auto show = [](const Snapshot& s) {
    try {
      return encode_snapshot(s);
    } catch (const Error&) {
      return std::string("<unprintable>");
    }
  };
  return {false, "value differs from the recorded one\n  expected: " + show(expected) + "\n  actual:   " + show(actual)};
}

Snapshot parse_snapshot(std::string_view text) { return decode_snapshot(text); }

Snapshot load_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open snapshot resource '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return decode_snapshot(buf.str());
}

std::string resource_path(const char* source_file, const std::string& relative) {
  return (std::filesystem::path(source_file).parent_path() / relative).string();
}

MockScope::MockScope(std::size_t depth_limit) : clock_(std::make_shared<std::atomic<std::uint64_t>>(0)) {
  options_.depth_limit = depth_limit;
  for (auto& name : known_interceptors()) options_.opaque_types.insert(std::move(name));
}

MockScope::MockScope(CaptureOptions options)
    : options_(std::move(options)), clock_(std::make_shared<std::atomic<std::uint64_t>>(0)) {}

std::vector<LoggedCall> MockScope::misses() const {
  std::vector<LoggedCall> out;
  for (const auto& h : handles_) {
    auto m = h->misses();
    out.insert(out.end(), m.begin(), m.end());
  }
  return out;
}

}  // namespace mimic
