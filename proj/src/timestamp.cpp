#include "newsreuse/timestamp.hpp"

#include <array>
#include <cstdio>

#include "newsreuse/error.hpp"

namespace newsreuse {
namespace {

constexpr std::int64_t kMicrosPerSecond = 1'000'000;
constexpr std::int64_t kMicrosPerDay = 86'400 * kMicrosPerSecond;

[[noreturn]] void bad(std::string_view text, const char* why) {
  throw Error(ErrorCode::BadTimestamp, "'" + std::string(text) + "': " + why);
}

bool is_leap(std::int64_t y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

unsigned days_in_month(std::int64_t y, unsigned m) {
  static constexpr std::array<unsigned, 12> kDays{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m == 2 && is_leap(y) ? 29 : kDays[m - 1];
}

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  int digits(std::size_t n) {
    int value = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (pos_ >= text_.size() || text_[pos_] < '0' || text_[pos_] > '9') bad(text_, "expected digit");
      value = value * 10 + (text_[pos_++] - '0');
    }
    return value;
  }

  void expect(char c) {
    if (pos_ >= text_.size() || text_[pos_] != c) bad(text_, "unexpected character");
    ++pos_;
  }

  bool at_end() const { return pos_ == text_.size(); }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void advance() { ++pos_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

// Howard Hinnant's civil_from_days.
void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp < 10 ? mp + 3 : mp - 9;
  if (m <= 2) ++y;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

Timestamp parse_rfc3339(std::string_view text) {
  Cursor c(text);
  const int year = c.digits(4);
  c.expect('-');
  const auto month = static_cast<unsigned>(c.digits(2));
  c.expect('-');
  const auto day = static_cast<unsigned>(c.digits(2));
  if (c.peek() != 'T' && c.peek() != 't' && c.peek() != ' ') bad(text, "missing time separator");
  c.advance();
  const int hour = c.digits(2);
  c.expect(':');
  const int minute = c.digits(2);
  c.expect(':');
  const int second = c.digits(2);

  if (month < 1 || month > 12) bad(text, "month out of range");
  if (day < 1 || day > days_in_month(year, month)) bad(text, "day out of range");
  if (hour > 23 || minute > 59 || second > 59) bad(text, "time out of range");

  std::int64_t fraction = 0;
  if (c.peek() == '.') {
    c.advance();
    int n = 0;
    while (c.peek() >= '0' && c.peek() <= '9') {
      if (n < 6) fraction = fraction * 10 + (c.peek() - '0');
      ++n;
      c.advance();
    }
    if (n == 0) bad(text, "empty fraction");
    for (; n < 6; ++n) fraction *= 10;
  }

  std::int64_t offset_seconds = 0;
  const char zone = c.peek();
  if (zone == 'Z' || zone == 'z') {
    c.advance();
  } else if (zone == '+' || zone == '-') {
    c.advance();
    const int oh = c.digits(2);
    c.expect(':');
    const int om = c.digits(2);
    if (oh > 23 || om > 59) bad(text, "offset out of range");
    offset_seconds = (zone == '+' ? 1 : -1) * (oh * 3600 + om * 60);
  } else {
    bad(text, "missing zone designator");
  }
  if (!c.at_end()) bad(text, "trailing characters");

  const std::int64_t seconds = days_from_civil(year, month, day) * 86400 + hour * 3600 + minute * 60 +
                               second - offset_seconds;
  return Timestamp{seconds * kMicrosPerSecond + fraction};
}

std::string format_rfc3339(Timestamp ts) {
  const std::int64_t days = floor_div(ts.micros, kMicrosPerDay);
  const std::int64_t rem = ts.micros - days * kMicrosPerDay;
  std::int64_t y = 0;
  unsigned m = 0, d = 0;
  civil_from_days(days, y, m, d);
  const std::int64_t secs = rem / kMicrosPerSecond;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lld.%06lldZ", static_cast<long long>(y), m, d,
                static_cast<long long>(secs / 3600), static_cast<long long>(secs / 60 % 60),
                static_cast<long long>(secs % 60), static_cast<long long>(rem % kMicrosPerSecond));
  return buf;
}

CivilDay utc_day(Timestamp ts) { return CivilDay{floor_div(ts.micros, kMicrosPerDay)}; }

std::string format_day(CivilDay day) {
  std::int64_t y = 0;
  unsigned m = 0, d = 0;
  civil_from_days(day.days, y, m, d);
  char buf[24];
  std::snprintf(buf, sizeof buf, "%04lld-%02u-%02u", static_cast<long long>(y), m, d);
  return buf;
}

}  // namespace newsreuse
