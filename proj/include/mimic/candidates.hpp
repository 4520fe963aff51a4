#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mimic/descriptor.hpp"

namespace mimic {

/// Text form of a candidate list: a comment header, then one block per MUT:
///
///   mut app/Cut.hpp::demo::Cut::run/2
///     type demo::Cut
///     namespace demo
///     returns value int
///     param a int
///     param ext ext::Two*
///     site s1 field extField ext::One::get/1 at app/Cut.hpp:14
///     site s2 param 1 ext::Two::put/1 at app/Cut.hpp:15
///
/// Lines starting with `#` are comments. Blocks may be deleted or reordered.
std::string format_candidates(const std::vector<MutDescriptor>& descriptors);

/// Parses and validates a candidate list. Errors are ValidationErrors that
/// name the offending line.
std::vector<MutDescriptor> parse_candidates(std::string_view text);

void write_candidates(const std::vector<MutDescriptor>& descriptors, const std::string& path);
std::vector<MutDescriptor> load_candidates(const std::string& path);

}  // namespace mimic
