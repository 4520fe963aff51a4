#include <algorithm>

#include "mimic/generate.hpp"

namespace mimic {

namespace {

bool same_args(const std::vector<Snapshot>& a, const std::vector<Snapshot>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!structural_equals(a[i], b[i])) return false;
  }
  return true;
}

}  // namespace

std::vector<InvocationRecord> dedupe_records(std::vector<InvocationRecord> records) {
  std::vector<InvocationRecord> kept;
  for (auto& r : records) {
    bool seen = std::any_of(kept.begin(), kept.end(), [&](const InvocationRecord& k) { return same_observation(k, r); });
    if (!seen) kept.push_back(std::move(r));
  }
  return kept;
}

std::vector<StubDirective> build_stub_plan(const InvocationRecord& record) {
  std::vector<const MockableCallRecord*> calls;
  for (const auto& c : record.calls) calls.push_back(&c);
  std::stable_sort(calls.begin(), calls.end(), [](const auto* a, const auto* b) { return a->seq < b->seq; });

  std::vector<StubDirective> plan;
  for (const auto* c : calls) {
    auto it = std::find_if(plan.begin(), plan.end(), [&](const StubDirective& d) {
      return d.site_id == c->site_id && same_args(d.matched_args, c->args);
    });
    if (it == plan.end()) {
      plan.push_back({c->site_id, c->args, {c->return_value}});
    } else {
      it->returns.push_back(c->return_value);
    }
  }
  return plan;
}

StubPlanInterpreter::StubPlanInterpreter(std::vector<StubDirective> plan)
    : plan_(std::move(plan)), served_(plan_.size(), 0) {}

std::optional<Snapshot> StubPlanInterpreter::call(const std::string& site_id, const std::vector<Snapshot>& args) {
  for (std::size_t i = 0; i < plan_.size(); ++i) {
    const auto& d = plan_[i];
    if (d.site_id != site_id || !same_args(d.matched_args, args) || d.returns.empty()) continue;
    std::size_t at = std::min(served_[i], d.returns.size() - 1);
    ++served_[i];
    return d.returns[at];
  }
  return std::nullopt;
}

std::vector<std::optional<Snapshot>> replay_stub_plan(const InvocationRecord& record) {
  StubPlanInterpreter interpreter(build_stub_plan(record));
  std::vector<const MockableCallRecord*> calls;
  for (const auto& c : record.calls) calls.push_back(&c);
  std::stable_sort(calls.begin(), calls.end(), [](const auto* a, const auto* b) { return a->seq < b->seq; });
  std::vector<std::optional<Snapshot>> out;
  for (const auto* c : calls) out.push_back(interpreter.call(c->site_id, c->args));
  return out;
}

}  // namespace mimic
