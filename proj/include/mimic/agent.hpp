#pragma once

#include <atomic>
#include <cstddef>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "mimic/capture.hpp"
#include "mimic/descriptor.hpp"
#include "mimic/record.hpp"

namespace mimic::agent {

inline constexpr const char* kCandidatesEnv = "MIMIC_CANDIDATES";
inline constexpr const char* kTraceDirEnv = "MIMIC_TRACE_DIR";
inline constexpr const char* kMaxRecordsEnv = "MIMIC_MAX_RECORDS";
inline constexpr const char* kDepthEnv = "MIMIC_DEPTH";
inline constexpr const char* kFailOpenEnv = "MIMIC_FAIL_OPEN";

struct RecorderConfig {
  std::vector<MutDescriptor> candidates;
  std::string trace_dir;
  std::size_t max_records_per_mut = 100;
  std::size_t snapshot_depth_limit = kDefaultDepthLimit;
  bool fail_open = true;
};

/// One installed candidate.
struct Hook {
  MutDescriptor descriptor;
  std::set<std::string> mockable_fields;
  std::set<std::size_t> mockable_params;
  CaptureOptions receiver_options;
  CaptureOptions value_options;
  std::size_t cap = 0;
  mutable std::atomic<std::size_t> reserved{0};
};

/// Installed hooks plus the persistence writer. Immutable after
/// installation apart from its counters and the serialized writer.
class Session {
 public:
  explicit Session(RecorderConfig config);

  const RecorderConfig& config() const { return config_; }
  const std::vector<std::unique_ptr<Hook>>& hooks() const { return hooks_; }
  const Hook* find(std::string_view declaring_type, std::string_view method, std::size_t arity) const;

  /// Claims one record slot for the MUT; false once the cap is reached.
  bool reserve(const Hook& hook) const;
  void release(const Hook& hook) const;

  std::string next_uid() const;
  /// Validates and writes atomically. Throws on failure.
  void persist(const Hook& hook, const InvocationRecord& record) const;
  std::size_t written() const { return written_.load(); }

  /// Keeps proxies alive after their invocation ended.
  void retain(std::shared_ptr<void> object) const;
  void warn(const std::string& message) const;
  /// Warns once per distinct key.
  void warn_once(const std::string& key, const std::string& message) const;

 private:
  RecorderConfig config_;
  std::vector<std::unique_ptr<Hook>> hooks_;
  std::string uid_prefix_;
  mutable std::atomic<std::uint64_t> uid_counter_{0};
  mutable std::atomic<std::size_t> written_{0};
  mutable std::mutex writer_mutex_;
  mutable std::mutex misc_mutex_;
  mutable std::vector<std::shared_ptr<void>> retained_;
  mutable std::set<std::string> warned_;

  friend std::shared_ptr<const Session> install_hooks(RecorderConfig config);
};

/// Builds a session: checks that trace_dir is writable (throws Error
/// otherwise) and drops candidates whose declaring type or callee interfaces
/// are unknown to this program, with a warning.
std::shared_ptr<const Session> install_hooks(RecorderConfig config);

/// Makes `session` the process-wide active session; nullptr disables
/// recording.
void activate(std::shared_ptr<const Session> session);

/// The active session. On first use, one is created from MIMIC_CANDIDATES and
/// MIMIC_TRACE_DIR if both are set; any failure leaves recording disabled.
std::shared_ptr<const Session> active_session();

/// Mutable capture state of one running MUT invocation.
struct InvocationContext {
  std::shared_ptr<const Session> session;
  const Hook* hook = nullptr;
  std::string uid;
  std::string timestamp;
  Snapshot receiver;
  std::vector<Snapshot> args;
  std::thread::id thread;

  std::mutex mutex;
  std::vector<MockableCallRecord> calls;
  std::int64_t next_seq = 0;
  std::atomic<bool> active{true};
  bool voided = false;
  std::string void_reason;
};

/// Opens a context for an invocation whose snapshots were already taken and
/// pushes it on this thread's invocation stack.
std::shared_ptr<InvocationContext> open_context(std::shared_ptr<const Session> session, const Hook& hook,
                                                Snapshot receiver, std::vector<Snapshot> args,
                                                std::string timestamp);

/// Appends a call record at the next seq.
void on_mockable_call(InvocationContext& ctx, const std::string& site_id, std::vector<Snapshot> args,
                      Snapshot return_value);

/// Marks the invocation as unrecordable; it is discarded at exit.
void void_context(InvocationContext& ctx, const std::string& reason);

/// Pops the context and persists its record unless it was voided.
void on_mut_exit(InvocationContext& ctx, Outcome outcome);

std::vector<InvocationContext*>& context_stack();
std::string utc_timestamp_now();

}  // namespace mimic::agent
