#pragma once

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"
#include "graph.hpp"

namespace cpdetect {

using Timestamp = std::chrono::sys_seconds;
using Date = std::chrono::sys_days;

struct TransactionRecord {
  Timestamp timestamp;
  std::string lender;
  std::string borrower;
  double amount = 0.0;  // validated, never enters the adjacency
  std::size_t line = 0;
};

using TransactionLog = std::vector<TransactionRecord>;

struct ParseIssue {
  std::size_t line = 0;
  std::string message;
};

struct ParsedLog {
  TransactionLog log;
  std::vector<ParseIssue> skipped;  // lenient mode only
};

enum class ParseMode { strict, lenient };

enum class Scale { day, week, month, quarter, full };

inline const char* to_string(Scale scale) {
  switch (scale) {
    case Scale::day: return "day";
    case Scale::week: return "week";
    case Scale::month: return "month";
    case Scale::quarter: return "quarter";
    case Scale::full: return "static";
  }
  return "static";
}

inline Scale parse_scale(std::string_view text) {
  if (text == "day") return Scale::day;
  if (text == "week") return Scale::week;
  if (text == "month") return Scale::month;
  if (text == "quarter") return Scale::quarter;
  if (text == "static") return Scale::full;
  throw Error(ErrorKind::usage, "unknown scale '" + std::string(text) + "'");
}

inline std::string format_date(Date date) {
  const std::chrono::year_month_day ymd{date};
  char buf[48];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

inline std::string format_timestamp(Timestamp ts) {
  const auto date = std::chrono::floor<std::chrono::days>(ts);
  const auto secs = (ts - date).count();
  char buf[48];
  std::snprintf(buf, sizeof buf, "T%02lld:%02lld:%02lld", static_cast<long long>(secs / 3600),
                static_cast<long long>(secs / 60 % 60), static_cast<long long>(secs % 60));
  return format_date(date) + buf;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::optional<int> read_digits(std::string_view& s, std::size_t count) {
  if (s.size() < count) return std::nullopt;
  int value = 0;
  for (std::size_t i = 0; i < count; ++i) {
    if (s[i] < '0' || s[i] > '9') return std::nullopt;
    value = value * 10 + (s[i] - '0');
  }
  s.remove_prefix(count);
  return value;
}

inline bool consume(std::string_view& s, char c) {
  if (s.empty() || s.front() != c) return false;
  s.remove_prefix(1);
  return true;
}

}  // namespace detail

// ISO-8601 date or date-time: YYYY-MM-DD[(T| )hh:mm[:ss[.fff]]][Z|(+|-)hh[:]mm].
// Offsets are folded into UTC.
inline std::optional<Timestamp> parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  auto s = detail::trim(text);
  auto y = detail::read_digits(s, 4);
  if (!y || !detail::consume(s, '-')) return std::nullopt;
  auto mo = detail::read_digits(s, 2);
  if (!mo || !detail::consume(s, '-')) return std::nullopt;
  auto d = detail::read_digits(s, 2);
  if (!d) return std::nullopt;
  const year_month_day ymd{year{*y}, month{static_cast<unsigned>(*mo)}, day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) return std::nullopt;
  Timestamp ts = sys_days{ymd};
  if (s.empty()) return ts;
  if (!detail::consume(s, 'T') && !detail::consume(s, ' ')) return std::nullopt;
  auto hh = detail::read_digits(s, 2);
  if (!hh || !detail::consume(s, ':')) return std::nullopt;
  auto mm = detail::read_digits(s, 2);
  if (!mm) return std::nullopt;
  int ss = 0;
  if (detail::consume(s, ':')) {
    auto sec = detail::read_digits(s, 2);
    if (!sec) return std::nullopt;
    ss = *sec;
    if (detail::consume(s, '.')) {
      std::size_t digits = 0;
      while (digits < s.size() && s[digits] >= '0' && s[digits] <= '9') ++digits;
      if (digits == 0) return std::nullopt;
      s.remove_prefix(digits);
    }
  }
  if (*hh > 23 || *mm > 59 || ss > 60) return std::nullopt;
  ts += hours{*hh} + minutes{*mm} + seconds{ss};
  if (s.empty() || s == "Z") return ts;
  const char sign = s.front();
  if (sign != '+' && sign != '-') return std::nullopt;
  s.remove_prefix(1);
  auto oh = detail::read_digits(s, 2);
  if (!oh) return std::nullopt;
  detail::consume(s, ':');
  auto om = detail::read_digits(s, 2);
  if (!om || !s.empty() || *oh > 23 || *om > 59) return std::nullopt;
  const auto offset = hours{*oh} + minutes{*om};
  return sign == '+' ? ts - offset : ts + offset;
}

// CSV with header `timestamp,lender,borrower,amount`. Strict mode fails on the
// first pass listing every malformed line; lenient mode skips and reports them.
inline ParsedLog parse_transactions(std::istream& in, ParseMode mode = ParseMode::strict) {
  ParsedLog out;
  std::string line;
  std::size_t number = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view = detail::trim(line);
    if (number == 1 && view.substr(0, 3) == "\xEF\xBB\xBF") view.remove_prefix(3);
    if (view.empty()) continue;
    if (!header_seen) {
      std::string header;
      for (char c : view) {
        if (c != ' ' && c != '\t') header.push_back(c);
      }
      if (header != "timestamp,lender,borrower,amount") {
        throw ParseError("line " + std::to_string(number) +
                         ": expected header 'timestamp,lender,borrower,amount'");
      }
      header_seen = true;
      continue;
    }

    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= view.size(); ++i) {
      if (i == view.size() || view[i] == ',') {
        fields.push_back(detail::trim(view.substr(start, i - start)));
        start = i + 1;
      }
    }
    auto reject = [&](std::string message) { out.skipped.push_back({number, std::move(message)}); };
    if (fields.size() != 4) {
      reject("expected 4 fields, found " + std::to_string(fields.size()));
      continue;
    }
    auto ts = parse_timestamp(fields[0]);
    if (!ts) {
      reject("unparseable timestamp '" + std::string(fields[0]) + "'");
      continue;
    }
    if (fields[1].empty() || fields[2].empty()) {
      reject("empty lender or borrower");
      continue;
    }
    double amount = 0.0;
    const auto* first = fields[3].data();
    const auto* last = first + fields[3].size();
    auto [ptr, ec] = std::from_chars(first, last, amount);
    if (ec != std::errc{} || ptr != last || !std::isfinite(amount)) {
      reject("unparseable amount '" + std::string(fields[3]) + "'");
      continue;
    }
    if (!(amount > 0.0)) {
      reject("amount must be positive, got '" + std::string(fields[3]) + "'");
      continue;
    }
    out.log.push_back(TransactionRecord{*ts, std::string(fields[1]), std::string(fields[2]), amount, number});
  }
  if (!header_seen) throw ParseError("missing header 'timestamp,lender,borrower,amount'");
  if (mode == ParseMode::strict && !out.skipped.empty()) {
    std::string message = "malformed rows:";
    for (const auto& issue : out.skipped) {
      message += "\n  line " + std::to_string(issue.line) + ": " + issue.message;
    }
    throw ParseError(message);
  }
  return out;
}

struct WindowKey {
  std::string label;
  Date start;  // first day, inclusive
  Date end;    // last day, inclusive
};

// Calendar window containing `date`. Weeks are ISO weeks (Monday start,
// labeled by ISO year), quarters are calendar quarters.
inline WindowKey window_of(Date date, Scale scale) {
  using namespace std::chrono;
  const year_month_day ymd{date};
  char buf[32];
  switch (scale) {
    case Scale::day:
      return {format_date(date), date, date};
    case Scale::week: {
      const unsigned iso_weekday = weekday{date}.iso_encoding();  // Mon = 1
      const Date monday = date - days{iso_weekday - 1};
      const Date thursday = monday + days{3};
      const year iso_year = year_month_day{thursday}.year();
      const Date jan1 = sys_days{iso_year / January / 1};
      const auto week = (thursday - jan1).count() / 7 + 1;
      std::snprintf(buf, sizeof buf, "%04d-W%02d", static_cast<int>(iso_year), static_cast<int>(week));
      return {buf, monday, monday + days{6}};
    }
    case Scale::month: {
      const Date first = sys_days{ymd.year() / ymd.month() / 1};
      const Date last = sys_days{ymd.year() / ymd.month() / std::chrono::last};
      std::snprintf(buf, sizeof buf, "%04d-%02u", static_cast<int>(ymd.year()),
                    static_cast<unsigned>(ymd.month()));
      return {buf, first, last};
    }
    case Scale::quarter: {
      const unsigned q = (static_cast<unsigned>(ymd.month()) - 1) / 3;
      const Date first = sys_days{ymd.year() / month{q * 3 + 1} / 1};
      const Date last = sys_days{ymd.year() / month{q * 3 + 3} / std::chrono::last};
      std::snprintf(buf, sizeof buf, "%04d-Q%u", static_cast<int>(ymd.year()), q + 1);
      return {buf, first, last};
    }
    case Scale::full:
      return {"static", date, date};
  }
  throw DomainError("unknown scale");
}

struct Window {
  std::string label;
  Date start;
  Date end;
  std::size_t trade_count = 0;  // records falling in the window, self-trades included
  Network network;
};

struct WindowedNetworkSeries {
  Scale scale = Scale::full;
  std::vector<Window> windows;
  std::size_t self_trades = 0;
  std::size_t omitted_trades = 0;  // trades in windows that produced no edge
  std::vector<std::string> warnings;
};

// Buckets trades into calendar windows and binarizes each window: edge {i,j}
// iff at least one trade in either direction. Banks without trades in a
// window are absent from its network.
inline WindowedNetworkSeries aggregate(const TransactionLog& log, Scale scale) {
  if (log.empty()) throw DomainError("empty transaction log");
  using std::chrono::floor;
  using std::chrono::days;

  struct Bucket {
    WindowKey key;
    std::size_t trades = 0;
    std::vector<IdEdge> edges;
  };
  std::map<Date, Bucket> buckets;

  WindowedNetworkSeries series;
  series.scale = scale;
  Date first_day = floor<days>(log.front().timestamp);
  Date last_day = first_day;
  for (const auto& rec : log) {
    const Date day = floor<days>(rec.timestamp);
    first_day = std::min(first_day, day);
    last_day = std::max(last_day, day);
  }

  for (const auto& rec : log) {
    const Date day = floor<days>(rec.timestamp);
    auto key = scale == Scale::full ? WindowKey{"static", first_day, last_day} : window_of(day, scale);
    auto [it, inserted] = buckets.try_emplace(key.start);
    if (inserted) it->second.key = std::move(key);
    auto& bucket = it->second;
    ++bucket.trades;
    if (rec.lender == rec.borrower) {
      ++series.self_trades;
      series.warnings.push_back("line " + std::to_string(rec.line) + ": self-trade by '" + rec.lender +
                                "' dropped");
      continue;
    }
    bucket.edges.emplace_back(rec.lender, rec.borrower);
  }

  for (auto& [start, bucket] : buckets) {
    if (bucket.edges.empty()) {
      series.omitted_trades += bucket.trades;
      series.warnings.push_back("window " + bucket.key.label + " has no trades between distinct banks; omitted");
      continue;
    }
    series.windows.push_back(Window{bucket.key.label, bucket.key.start, bucket.key.end, bucket.trades,
                                    build_network(bucket.edges)});
  }
  return series;
}

}  // namespace cpdetect
