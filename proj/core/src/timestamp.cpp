#include "ccdp/timestamp.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <string>
#include <vector>

namespace ccdp {
namespace {

using namespace std::chrono;

constexpr std::array<std::string_view, 12> kMonths = {"jan", "feb", "mar", "apr", "may", "jun",
                                                      "jul", "aug", "sep", "oct", "nov", "dec"};
constexpr std::array<std::string_view, 7> kWeekdays = {"Sun", "Mon", "Tue", "Wed",
                                                       "Thu", "Fri", "Sat"};

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

std::optional<Timestamp> make_instant(int year, int month, int day, int hour, int minute,
                                      int second, int offset_minutes) {
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                           std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok()) return std::nullopt;
  if (hour < 0 || hour > 23 || minute < 0 || minute > 59 || second < 0 || second > 60) {
    return std::nullopt;
  }
  const sys_days date{ymd};
  return Timestamp{date} + hours{hour} + minutes{minute} + seconds{second} -
         minutes{offset_minutes};
}

// Returns offset east of UTC in minutes.
std::optional<int> parse_zone(std::string_view zone) {
  if (zone.empty()) return 0;
  if (zone[0] == '+' || zone[0] == '-') {
    std::string digits;
    for (char ch : zone.substr(1)) {
      if (ch != ':') digits.push_back(ch);
    }
    int value = 0;
    if (digits.size() != 4 || !parse_int(digits, value)) return std::nullopt;
    const int hh = value / 100;
    const int mm = value % 100;
    if (hh > 23 || mm > 59) return std::nullopt;
    const int total = hh * 60 + mm;
    return zone[0] == '-' ? -total : total;
  }
  const std::string z = lower(zone);
  if (z == "ut" || z == "utc" || z == "gmt" || z == "z") return 0;
  if (z == "edt") return -4 * 60;
  if (z == "est" || z == "cdt") return -5 * 60;
  if (z == "cst" || z == "mdt") return -6 * 60;
  if (z == "mst" || z == "pdt") return -7 * 60;
  if (z == "pst") return -8 * 60;
  // Military zones carry no reliable information (RFC 5322 4.3).
  if (z.size() == 1 && std::isalpha(static_cast<unsigned char>(z[0]))) return 0;
  return std::nullopt;
}

}  // namespace

std::optional<Timestamp> parse_rfc5322_date(std::string_view text) {
  // Drop comments and commas, then split on whitespace.
  std::string cleaned;
  int depth = 0;
  for (char ch : text) {
    if (ch == '(') {
      ++depth;
    } else if (ch == ')') {
      if (depth > 0) --depth;
    } else if (depth == 0) {
      cleaned.push_back(ch == ',' ? ' ' : ch);
    }
  }
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : cleaned) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(ch);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));

  std::size_t i = 0;
  if (i < tokens.size() && !tokens[i].empty() &&
      std::isalpha(static_cast<unsigned char>(tokens[i][0]))) {
    ++i;  // day-of-week
  }
  if (tokens.size() < i + 4) return std::nullopt;

  int day = 0;
  if (!parse_int(tokens[i], day)) return std::nullopt;
  const std::string month_name = lower(tokens[i + 1]).substr(0, 3);
  int month = 0;
  for (std::size_t m = 0; m < kMonths.size(); ++m) {
    if (kMonths[m] == month_name) month = static_cast<int>(m) + 1;
  }
  if (month == 0) return std::nullopt;
  int year = 0;
  if (!parse_int(tokens[i + 2], year)) return std::nullopt;
  const std::size_t year_digits = tokens[i + 2].size();
  if (year_digits == 2) {
    year += year < 50 ? 2000 : 1900;
  } else if (year_digits == 3) {
    year += 1900;
  }

  const std::string& clock = tokens[i + 3];
  int hour = 0;
  int minute = 0;
  int second = 0;
  const auto c1 = clock.find(':');
  if (c1 == std::string::npos) return std::nullopt;
  const auto c2 = clock.find(':', c1 + 1);
  if (!parse_int(std::string_view(clock).substr(0, c1), hour)) return std::nullopt;
  if (c2 == std::string::npos) {
    if (!parse_int(std::string_view(clock).substr(c1 + 1), minute)) return std::nullopt;
  } else {
    if (!parse_int(std::string_view(clock).substr(c1 + 1, c2 - c1 - 1), minute)) return std::nullopt;
    if (!parse_int(std::string_view(clock).substr(c2 + 1), second)) return std::nullopt;
  }

  const auto offset = parse_zone(tokens.size() > i + 4 ? std::string_view(tokens[i + 4]) : "");
  if (!offset) return std::nullopt;
  return make_instant(year, month, day, hour, minute, second, *offset);
}

std::optional<Timestamp> parse_iso8601(std::string_view text) {
  // YYYY-MM-DDTHH:MM:SS[.fff](Z|+HH:MM|-HH:MM|+HHMM)
  if (text.size() < 20) return std::nullopt;
  if (text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != 't' && text[10] != ' ') ||
      text[13] != ':' || text[16] != ':') {
    return std::nullopt;
  }
  int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
  if (!parse_int(text.substr(0, 4), year) || !parse_int(text.substr(5, 2), month) ||
      !parse_int(text.substr(8, 2), day) || !parse_int(text.substr(11, 2), hour) ||
      !parse_int(text.substr(14, 2), minute) || !parse_int(text.substr(17, 2), second)) {
    return std::nullopt;
  }
  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    const std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) return std::nullopt;
  }
  const std::string_view zone = text.substr(pos);
  if (zone.empty()) return std::nullopt;
  std::optional<int> offset;
  if (zone == "Z" || zone == "z") {
    offset = 0;
  } else if (zone[0] == '+' || zone[0] == '-') {
    offset = parse_zone(zone);
  }
  if (!offset) return std::nullopt;
  return make_instant(year, month, day, hour, minute, second, *offset);
}

std::string format_iso8601(Timestamp t) {
  const auto day_point = floor<days>(t);
  const year_month_day ymd{day_point};
  const hh_mm_ss<seconds> tod{t - day_point};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                static_cast<int>(tod.seconds().count()));
  return buf;
}

std::string format_rfc5322(Timestamp t) {
  const auto day_point = floor<days>(t);
  const year_month_day ymd{day_point};
  const weekday wd{day_point};
  const hh_mm_ss<seconds> tod{t - day_point};
  static constexpr std::array<std::string_view, 12> kMonthNames = {
      "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s, %02u %s %04d %02d:%02d:%02d +0000",
                std::string(kWeekdays[wd.c_encoding()]).c_str(), static_cast<unsigned>(ymd.day()),
                std::string(kMonthNames[static_cast<unsigned>(ymd.month()) - 1]).c_str(),
                static_cast<int>(ymd.year()), static_cast<int>(tod.hours().count()),
                static_cast<int>(tod.minutes().count()), static_cast<int>(tod.seconds().count()));
  return buf;
}

double hours_between(Timestamp a, Timestamp b) noexcept {
  return static_cast<double>((b - a).count()) / 3600.0;
}

}  // namespace ccdp
