#include "codesurvey/timeutil.hpp"

#include <cstdio>
#include <cstdlib>

namespace codesurvey::timeutil {

// Howard Hinnant's days/civil algorithms (public domain).
int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

void civil_from_days(int64_t z, int& y, unsigned& m, unsigned& d) {
    z += 719468;
    const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int64_t yy = static_cast<int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y = static_cast<int>(yy + (m <= 2));
}

namespace {

bool read_digits(const std::string& s, size_t pos, size_t count, int& out) {
    if (pos + count > s.size()) return false;
    int v = 0;
    for (size_t i = 0; i < count; ++i) {
        char c = s[pos + i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    out = v;
    return true;
}

bool valid_ymd(int y, int mo, int d) {
    if (mo < 1 || mo > 12 || d < 1) return false;
    static const int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int limit = lengths[mo - 1];
    bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    if (mo == 2 && leap) limit = 29;
    return d <= limit;
}

}  // namespace

std::optional<int64_t> parse_date(const std::string& text) {
    int y, mo, d;
    if (text.size() != 10) return std::nullopt;
    if (!read_digits(text, 0, 4, y) || text[4] != '-' ||
        !read_digits(text, 5, 2, mo) || text[7] != '-' ||
        !read_digits(text, 8, 2, d))
        return std::nullopt;
    if (!valid_ymd(y, mo, d)) return std::nullopt;
    return days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d)) * 86400;
}

std::optional<int64_t> parse_rfc3339(const std::string& text) {
    int y, mo, d, h, mi, se;
    if (text.size() < 20) return std::nullopt;
    if (!read_digits(text, 0, 4, y) || text[4] != '-' ||
        !read_digits(text, 5, 2, mo) || text[7] != '-' ||
        !read_digits(text, 8, 2, d))
        return std::nullopt;
    if (text[10] != 'T' && text[10] != 't' && text[10] != ' ') return std::nullopt;
    if (!read_digits(text, 11, 2, h) || text[13] != ':' ||
        !read_digits(text, 14, 2, mi) || text[16] != ':' ||
        !read_digits(text, 17, 2, se))
        return std::nullopt;
    if (!valid_ymd(y, mo, d) || h > 23 || mi > 59 || se > 60) return std::nullopt;

    size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        size_t start = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
        if (pos == start) return std::nullopt;
    }
    if (pos >= text.size()) return std::nullopt;

    int64_t offset = 0;
    char tz = text[pos];
    if (tz == 'Z' || tz == 'z') {
        if (pos + 1 != text.size()) return std::nullopt;
    } else if (tz == '+' || tz == '-') {
        int oh, om;
        if (!read_digits(text, pos + 1, 2, oh) || pos + 3 >= text.size() || text[pos + 3] != ':' ||
            !read_digits(text, pos + 4, 2, om) || pos + 6 != text.size())
            return std::nullopt;
        offset = (static_cast<int64_t>(oh) * 60 + om) * 60;
        if (tz == '-') offset = -offset;
    } else {
        return std::nullopt;
    }

    int64_t days = days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d));
    int64_t secs = days * 86400 + h * 3600 + mi * 60 + se;
    return secs - offset;
}

std::string format_rfc3339(int64_t unix_seconds) {
    int64_t days = unix_seconds / 86400;
    int64_t rem = unix_seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    int y;
    unsigned mo, d;
    civil_from_days(days, y, mo, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", y, mo, d,
                  static_cast<long long>(rem / 3600), static_cast<long long>((rem / 60) % 60),
                  static_cast<long long>(rem % 60));
    return buf;
}

int month_index(int64_t unix_seconds) {
    int64_t days = unix_seconds / 86400;
    if (unix_seconds % 86400 < 0) days -= 1;
    int y;
    unsigned mo, d;
    civil_from_days(days, y, mo, d);
    return y * 12 + static_cast<int>(mo) - 1;
}

std::string month_label(int mindex) {
    int y = mindex / 12;
    int m = mindex % 12;
    if (m < 0) {
        m += 12;
        y -= 1;
    }
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", y, m + 1);
    return buf;
}

}  // namespace codesurvey::timeutil
