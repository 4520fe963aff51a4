#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace mimic {

struct FieldBinding {
  std::string name;
  friend bool operator==(const FieldBinding&, const FieldBinding&) = default;
};

struct ParameterBinding {
  std::size_t index = 0;
  friend bool operator==(const ParameterBinding&, const ParameterBinding&) = default;
};

/// The static receiver expression of a mockable call.
using ReceiverBinding = std::variant<FieldBinding, ParameterBinding>;

std::string describe(const ReceiverBinding& binding);

struct SourceLocation {
  std::string file;  // project-relative, '/'-separated
  int line = 0;
  friend bool operator==(const SourceLocation&, const SourceLocation&) = default;
};

struct CallSite {
  std::string site_id;
  ReceiverBinding receiver;
  std::string callee_type;  // as spelled at the declaration of the receiver
  std::string callee_method;
  std::size_t callee_arity = 0;
  SourceLocation location;
  friend bool operator==(const CallSite&, const CallSite&) = default;
};

enum class ReturnKind { value, none };

struct Parameter {
  std::string name;
  std::string type;  // as spelled in the signature, e.g. `const std::vector<int>&`
  friend bool operator==(const Parameter&, const Parameter&) = default;
};

struct MutDescriptor {
  std::string mut_id;          // <relpath>::<Type>::<method>/<arity>
  std::string declaring_type;  // fully qualified, e.g. `shop::OrderService`
  std::string namespace_name;  // enclosing namespace of declaring_type ("" for global)
  std::string method;
  std::vector<Parameter> params;
  ReturnKind return_kind = ReturnKind::value;
  std::string return_type;
  std::string header;  // project-relative file holding the class definition
  std::vector<CallSite> call_sites;

  std::size_t param_count() const { return params.size(); }
  const CallSite* find_site(const std::string& site_id) const;
  /// Parameter indices bound by at least one call site.
  std::vector<std::size_t> mockable_params() const;
  /// Field names bound by at least one call site, in first-use order.
  std::vector<std::string> mockable_fields() const;

  friend bool operator==(const MutDescriptor&, const MutDescriptor&) = default;
};

std::string make_mut_id(const std::string& header, const std::string& declaring_type,
                        const std::string& method, std::size_t arity);

/// Throws ValidationError naming the first violated MutDescriptor invariant.
void validate_descriptor(const MutDescriptor& d);
void validate_candidate_set(const std::vector<MutDescriptor>& set);

/// `a/b.hpp::ns::T::m/2` -> `a_b.hpp__ns__T__m_2`; safe as a directory name.
std::string sanitize_mut_id(const std::string& mut_id);

}  // namespace mimic
