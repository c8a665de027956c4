#pragma once

#include <span>
#include <string_view>

namespace newsreuse::detail {

struct PrefixResource {
  std::string_view language;
  std::string_view contents;
};

// Generated at configure time from data/prefixes/nonbreaking_prefix.*.
std::span<const PrefixResource> shipped_prefix_lists();

}  // namespace newsreuse::detail
