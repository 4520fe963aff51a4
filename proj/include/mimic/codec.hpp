#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "mimic/descriptor.hpp"
#include "mimic/record.hpp"
#include "mimic/snapshot.hpp"

namespace mimic {

/// Compact canonical JSON for one snapshot tree. Throws SerializationError.
std::string encode_snapshot(const Snapshot& s);
/// Throws ParseError / ValidationError.
Snapshot decode_snapshot(std::string_view text);

/// Line-delimited canonical encoding: one `key SP json` line per field and one
/// `call` line per mockable call, newline terminated.
std::string encode_record(const InvocationRecord& record);

/// Parses and validates the intrinsic record invariants.
InvocationRecord decode_record(std::string_view data);

/// Additionally validates the record against its descriptor.
InvocationRecord decode_record(std::string_view data, const MutDescriptor& descriptor);

/// Intrinsic invariants: contiguous sorted seq, resolvable refs, unique node
/// ids, opaque nodes without payload, scalar mapping keys, non-empty ids.
/// `depth_limit` also bounds tree depth of every snapshot when set.
void validate_record(const InvocationRecord& r, std::optional<std::size_t> depth_limit = {});
void validate_record(const InvocationRecord& r, const MutDescriptor& d,
                     std::optional<std::size_t> depth_limit = {});
void validate_snapshot(const Snapshot& s);

}  // namespace mimic
