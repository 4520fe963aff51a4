#include "mimic/descriptor.hpp"

#include <algorithm>
#include <set>

#include "mimic/errors.hpp"

namespace mimic {

std::string describe(const ReceiverBinding& binding) {
  if (const auto* f = std::get_if<FieldBinding>(&binding)) return "field(" + f->name + ")";
  return "parameter(" + std::to_string(std::get<ParameterBinding>(binding).index) + ")";
}

const CallSite* MutDescriptor::find_site(const std::string& site_id) const {
  for (const auto& s : call_sites) {
    if (s.site_id == site_id) return &s;
  }
  return nullptr;
}

std::vector<std::size_t> MutDescriptor::mockable_params() const {
  std::set<std::size_t> out;
  for (const auto& s : call_sites) {
    if (const auto* p = std::get_if<ParameterBinding>(&s.receiver)) out.insert(p->index);
  }
  return {out.begin(), out.end()};
}

std::vector<std::string> MutDescriptor::mockable_fields() const {
  std::vector<std::string> out;
  for (const auto& s : call_sites) {
    if (const auto* f = std::get_if<FieldBinding>(&s.receiver)) {
      if (std::find(out.begin(), out.end(), f->name) == out.end()) out.push_back(f->name);
    }
  }
  return out;
}

std::string make_mut_id(const std::string& header, const std::string& declaring_type,
                        const std::string& method, std::size_t arity) {
  return header + "::" + declaring_type + "::" + method + "/" + std::to_string(arity);
}

void validate_descriptor(const MutDescriptor& d) {
  if (d.mut_id.empty()) throw ValidationError("empty mut_id");
  if (d.declaring_type.empty()) throw ValidationError("empty declaring_type", d.mut_id);
  if (d.call_sites.empty()) throw ValidationError("MUT without call sites", d.mut_id);
  std::set<std::string> ids;
  for (const auto& s : d.call_sites) {
    if (s.site_id.empty()) throw ValidationError("empty site_id", d.mut_id);
    if (!ids.insert(s.site_id).second) throw ValidationError("duplicate site_id", s.site_id);
    if (const auto* p = std::get_if<ParameterBinding>(&s.receiver)) {
      if (p->index >= d.param_count()) {
        throw ValidationError("parameter binding out of range", s.site_id);
      }
    } else if (std::get<FieldBinding>(s.receiver).name.empty()) {
      throw ValidationError("empty field binding", s.site_id);
    }
    if (s.callee_method.empty()) throw ValidationError("empty callee_method", s.site_id);
  }
}

void validate_candidate_set(const std::vector<MutDescriptor>& set) {
  std::set<std::string> ids;
  for (const auto& d : set) {
    validate_descriptor(d);
    if (!ids.insert(d.mut_id).second) throw ValidationError("duplicate mut_id", d.mut_id);
  }
}

std::string sanitize_mut_id(const std::string& mut_id) {
  std::string out;
  for (std::size_t i = 0; i < mut_id.size(); ++i) {
    char c = mut_id[i];
    if (c == ':' && i + 1 < mut_id.size() && mut_id[i + 1] == ':') {
      out += "__";
      ++i;
    } else if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
               c == '-' || c == '_') {
      out += c;
    } else {
      out += '_';
    }
  }
  return out;
}

}  // namespace mimic
