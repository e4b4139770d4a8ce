#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace codesurvey::timeutil {

// Proleptic Gregorian calendar <-> days since 1970-01-01, all UTC.
int64_t days_from_civil(int year, unsigned month, unsigned day);
void civil_from_days(int64_t days, int& year, unsigned& month, unsigned& day);

// "YYYY-MM-DDTHH:MM:SS[.frac](Z|+HH:MM|-HH:MM)" -> unix seconds.
// Fractional seconds are accepted and dropped.
std::optional<int64_t> parse_rfc3339(const std::string& text);

// "YYYY-MM-DD" -> unix seconds at 00:00:00 UTC.
std::optional<int64_t> parse_date(const std::string& text);

// Unix seconds -> "YYYY-MM-DDTHH:MM:SSZ".
std::string format_rfc3339(int64_t unix_seconds);

// Calendar-month bucket of a UTC timestamp: year * 12 + (month - 1).
int month_index(int64_t unix_seconds);

// "YYYY-MM" for a month bucket.
std::string month_label(int month_index);

}  // namespace codesurvey::timeutil
