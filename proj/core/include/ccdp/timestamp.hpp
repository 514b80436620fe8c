#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace ccdp {

// Second-resolution UTC instant.
using Timestamp = std::chrono::sys_seconds;

// RFC 5322 date-time ("Thu, 20 Apr 2017 16:22:00 +0200"), including the
// obsolete two-digit years and named zones (GMT, UT, EST, ...). Returns
// nullopt on anything that does not denote a valid instant.
std::optional<Timestamp> parse_rfc5322_date(std::string_view text);

// "YYYY-MM-DDTHH:MM:SS" followed by "Z" or a numeric offset.
std::optional<Timestamp> parse_iso8601(std::string_view text);

// Always "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601(Timestamp t);

// RFC 5322 form in UTC: "Thu, 20 Apr 2017 16:22:00 +0000".
std::string format_rfc5322(Timestamp t);

// Signed difference (b - a) in hours.
double hours_between(Timestamp a, Timestamp b) noexcept;

}  // namespace ccdp
