#pragma once

#include <string>

namespace intuition::detail {

bool is_url(const std::string& source);

/// Body of an http(s) GET. Throws std::runtime_error on transport failure
/// or a non-200 status.
std::string fetch_url(const std::string& url);

} // namespace intuition::detail
