#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace practice {

using Timestamp = std::chrono::sys_seconds;

// Accepts "YYYY-MM-DDTHH:MM:SSZ" (the trailing Z is optional).
std::optional<Timestamp> parseTimestamp(std::string_view text);

// Canonical form, always with a trailing Z.
std::string formatTimestamp(Timestamp t);

// Compact form used in catalog file names: YYYYMMDDTHHMMSSZ.
std::string formatTimestampCompact(Timestamp t);

}  // namespace practice
