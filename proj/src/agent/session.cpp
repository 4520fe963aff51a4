#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "mimic/agent.hpp"
#include "mimic/candidates.hpp"
#include "mimic/codec.hpp"
#include "mimic/errors.hpp"
#include "mimic/reflect.hpp"

namespace fs = std::filesystem;

namespace mimic::agent {

namespace {

bool interface_known(const std::string& callee_type) {
  for (const auto& name : known_interceptors()) {
    if (name == callee_type) return true;
    if (name.size() > callee_type.size() && name.compare(name.size() - callee_type.size(), callee_type.size(), callee_type) == 0 &&
        name.compare(name.size() - callee_type.size() - 2, 2, "::") == 0) {
      return true;
    }
  }
  return false;
}

std::size_t existing_records(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return 0;
  std::size_t n = 0;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".rec") ++n;
  }
  return n;
}

void check_writable(const std::string& trace_dir) {
  if (trace_dir.empty()) throw Error("no trace directory given");
  std::error_code ec;
  fs::create_directories(trace_dir, ec);
  if (!fs::is_directory(trace_dir)) throw Error("trace directory '" + trace_dir + "' cannot be created");
  fs::path probe = fs::path(trace_dir) / (".mimic-write-check-" + std::to_string(::getpid()));
  {
    std::ofstream out(probe);
    if (!out) throw Error("trace directory '" + trace_dir + "' is not writable");
  }
  fs::remove(probe, ec);
}

std::string random_prefix() {
  std::random_device rd;
  std::uint32_t v = rd() ^ static_cast<std::uint32_t>(::getpid() * 2654435761u);
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", v);
  return buf;
}

}  // namespace

Session::Session(RecorderConfig config) : config_(std::move(config)), uid_prefix_(random_prefix()) {}

const Hook* Session::find(std::string_view declaring_type, std::string_view method, std::size_t arity) const {
  for (const auto& h : hooks_) {
    const auto& d = h->descriptor;
    if (d.declaring_type == declaring_type && d.method == method && d.param_count() == arity) return h.get();
  }
  return nullptr;
}

bool Session::reserve(const Hook& hook) const {
  std::size_t current = hook.reserved.load(std::memory_order_relaxed);
  while (current < hook.cap) {
    if (hook.reserved.compare_exchange_weak(current, current + 1, std::memory_order_relaxed)) return true;
  }
  return false;
}

void Session::release(const Hook& hook) const { hook.reserved.fetch_sub(1, std::memory_order_relaxed); }

std::string Session::next_uid() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06llu", static_cast<unsigned long long>(uid_counter_.fetch_add(1)));
  return uid_prefix_ + "_" + buf;
}

void Session::persist(const Hook& hook, const InvocationRecord& record) const {
  validate_record(record, hook.descriptor, config_.snapshot_depth_limit);
  const std::string bytes = encode_record(record);
  std::lock_guard lock(writer_mutex_);
  fs::path dir = fs::path(config_.trace_dir) / sanitize_mut_id(record.mut_id);
  fs::create_directories(dir);
  fs::path tmp = dir / ("." + record.invocation_uid + ".tmp");
  fs::path final_path = dir / (record.invocation_uid + ".rec");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << bytes;
    out.flush();
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
  }
  fs::rename(tmp, final_path);
  written_.fetch_add(1);
}

void Session::retain(std::shared_ptr<void> object) const {
  std::lock_guard lock(misc_mutex_);
  retained_.push_back(std::move(object));
}

void Session::warn(const std::string& message) const {
  std::lock_guard lock(misc_mutex_);
  std::cerr << "mimic: " << message << std::endl;
}

void Session::warn_once(const std::string& key, const std::string& message) const {
  {
    std::lock_guard lock(misc_mutex_);
    if (!warned_.insert(key).second) return;
  }
  warn(message);
}

std::shared_ptr<const Session> install_hooks(RecorderConfig config) {
  check_writable(config.trace_dir);
  if (config.max_records_per_mut == 0) throw Error("max_records_per_mut must be positive");
  if (config.snapshot_depth_limit == 0) throw Error("snapshot depth limit must be positive");
  auto session = std::make_shared<Session>(config);
  std::set<std::string> interfaces;
  for (const auto& name : known_interceptors()) interfaces.insert(name);

  for (const auto& d : session->config_.candidates) {
    if (!type_known(d.declaring_type)) {
      session->warn("candidate " + d.mut_id + " dropped: type '" + d.declaring_type +
                    "' has no instrumented methods in this program");
      continue;
    }
    auto unknown = std::find_if(d.call_sites.begin(), d.call_sites.end(),
                                [](const CallSite& s) { return !interface_known(s.callee_type); });
    if (unknown != d.call_sites.end()) {
      session->warn("candidate " + d.mut_id + " dropped: no interceptor for '" + unknown->callee_type + "'");
      continue;
    }
    auto hook = std::make_unique<Hook>();
    hook->descriptor = d;
    for (const auto& f : d.mockable_fields()) hook->mockable_fields.insert(f);
    for (auto p : d.mockable_params()) hook->mockable_params.insert(p);
    CaptureOptions values;
    values.depth_limit = config.snapshot_depth_limit;
    values.opaque_types = interfaces;
    hook->value_options = values;
    hook->receiver_options = values;
    hook->receiver_options.opaque_root_fields = hook->mockable_fields;
    hook->cap = config.max_records_per_mut;
    hook->reserved = existing_records(fs::path(config.trace_dir) / sanitize_mut_id(d.mut_id));
    session->hooks_.push_back(std::move(hook));
  }
  return session;
}

namespace {

std::shared_ptr<const Session> g_session;
std::once_flag g_env_once;

std::shared_ptr<const Session> session_from_env() {
  const char* candidates = std::getenv(kCandidatesEnv);
  const char* trace_dir = std::getenv(kTraceDirEnv);
  if (candidates == nullptr || trace_dir == nullptr || !*candidates || !*trace_dir) return nullptr;
  try {
    RecorderConfig config;
    config.candidates = load_candidates(candidates);
    config.trace_dir = trace_dir;
    if (const char* v = std::getenv(kMaxRecordsEnv); v && *v) config.max_records_per_mut = std::stoul(v);
    if (const char* v = std::getenv(kDepthEnv); v && *v) config.snapshot_depth_limit = std::stoul(v);
    if (const char* v = std::getenv(kFailOpenEnv); v && *v) {
      std::string s(v);
      config.fail_open = !(s == "0" || s == "false" || s == "no");
    }
    return install_hooks(std::move(config));
  } catch (const std::exception& e) {
    std::cerr << "mimic: recording disabled: " << e.what() << std::endl;
    return nullptr;
  }
}

}  // namespace

void activate(std::shared_ptr<const Session> session) {
  std::call_once(g_env_once, [] {});
  std::atomic_store(&g_session, std::move(session));
}

std::shared_ptr<const Session> active_session() {
  std::call_once(g_env_once, [] { std::atomic_store(&g_session, session_from_env()); });
  return std::atomic_load(&g_session);
}

std::vector<InvocationContext*>& context_stack() {
  thread_local std::vector<InvocationContext*> stack;
  return stack;
}

std::string utc_timestamp_now() {
  auto now = std::chrono::system_clock::now();
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count();
  std::time_t secs = static_cast<std::time_t>(ms / 1000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms % 1000));
  return buf;
}

std::shared_ptr<InvocationContext> open_context(std::shared_ptr<const Session> session, const Hook& hook,
                                                Snapshot receiver, std::vector<Snapshot> args,
                                                std::string timestamp) {
  auto ctx = std::make_shared<InvocationContext>();
  ctx->uid = session->next_uid();
  ctx->session = std::move(session);
  ctx->hook = &hook;
  ctx->timestamp = std::move(timestamp);
  ctx->receiver = std::move(receiver);
  ctx->args = std::move(args);
  ctx->thread = std::this_thread::get_id();
  context_stack().push_back(ctx.get());
  return ctx;
}

void on_mockable_call(InvocationContext& ctx, const std::string& site_id, std::vector<Snapshot> args,
                      Snapshot return_value) {
  std::lock_guard lock(ctx.mutex);
  ctx.calls.push_back(MockableCallRecord{site_id, ctx.next_seq++, std::move(args), std::move(return_value)});
}

void void_context(InvocationContext& ctx, const std::string& reason) {
  std::lock_guard lock(ctx.mutex);
  if (!ctx.voided) ctx.void_reason = reason;
  ctx.voided = true;
}

void on_mut_exit(InvocationContext& ctx, Outcome outcome) {
  auto& stack = context_stack();
  if (!stack.empty() && stack.back() == &ctx) {
    stack.pop_back();
  } else {
    stack.erase(std::remove(stack.begin(), stack.end(), &ctx), stack.end());
  }
  ctx.active = false;
  const Session& session = *ctx.session;
  InvocationRecord record;
  {
    std::lock_guard lock(ctx.mutex);
    if (ctx.voided) {
      session.release(*ctx.hook);
      return;
    }
    record.mut_id = ctx.hook->descriptor.mut_id;
    record.invocation_uid = ctx.uid;
    record.timestamp = ctx.timestamp;
    record.receiver = std::move(ctx.receiver);
    record.args = std::move(ctx.args);
    record.outcome = std::move(outcome);
    record.calls = std::move(ctx.calls);
  }
  try {
    session.persist(*ctx.hook, record);
  } catch (const std::exception& e) {
    session.release(*ctx.hook);
    if (!session.config().fail_open) throw;
    session.warn("record for " + record.mut_id + " dropped: " + e.what());
  }
}

}  // namespace mimic::agent
