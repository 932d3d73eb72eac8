#include "entroshock/date.hpp"

#include <charconv>
#include <cstdio>

#include "entroshock/error.hpp"

namespace entroshock {

namespace chr = std::chrono;

namespace {

bool parse_uint(std::string_view s, unsigned& out) {
    if (s.empty()) return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size();
}

bool parse_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size();
}

chr::year_month_day clamp_day(chr::year y, chr::month m, chr::day d) {
    chr::year_month_day ymd{y, m, d};
    if (!ymd.ok()) ymd = chr::year_month_day{chr::year_month_day_last{y, chr::month_day_last{m}}};
    return ymd;
}

Date shift(Date d, const CalendarSpan& span, int sign) {
    auto ymd = d.ymd();
    int total_months = sign * (span.years * 12 + span.months);
    auto ym = chr::year_month{ymd.year(), ymd.month()} + chr::months{total_months};
    auto moved = clamp_day(ym.year(), ym.month(), ymd.day());
    return Date{chr::sys_days{moved} + chr::days{sign * span.days}};
}

}  // namespace

Date::Date(int y, unsigned m, unsigned d) {
    chr::year_month_day ymd{chr::year{y}, chr::month{m}, chr::day{d}};
    if (!ymd.ok()) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "invalid calendar date %04d-%02u-%02u", y, m, d);
        throw ParseError(buf);
    }
    days_ = chr::sys_days{ymd};
}

std::optional<Date> Date::try_parse(std::string_view text) noexcept {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);

    int y = 0;
    unsigned m = 0, d = 0;
    if (text.size() == 10 && text[4] == '-' && text[7] == '-') {
        if (!parse_int(text.substr(0, 4), y) || !parse_uint(text.substr(5, 2), m) ||
            !parse_uint(text.substr(8, 2), d))
            return std::nullopt;
    } else if (text.size() == 10 && text[2] == '/' && text[5] == '/') {
        if (!parse_uint(text.substr(0, 2), m) || !parse_uint(text.substr(3, 2), d) ||
            !parse_int(text.substr(6, 4), y))
            return std::nullopt;
    } else if (text.size() == 8 && text.find_first_not_of("0123456789") == std::string_view::npos) {
        // stooq-style YYYYMMDD
        parse_int(text.substr(0, 4), y);
        parse_uint(text.substr(4, 2), m);
        parse_uint(text.substr(6, 2), d);
    } else {
        return std::nullopt;
    }
    chr::year_month_day ymd{chr::year{y}, chr::month{m}, chr::day{d}};
    if (!ymd.ok()) return std::nullopt;
    return Date{chr::sys_days{ymd}};
}

Date Date::parse(std::string_view text) {
    if (auto d = try_parse(text)) return *d;
    throw ParseError("unrecognised date '" + std::string(text) + "' (expected YYYY-MM-DD or MM/DD/YYYY)");
}

std::string Date::iso() const {
    auto ymd = this->ymd();
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()), unsigned(ymd.day()));
    return buf;
}

bool Date::is_weekday() const {
    auto wd = chr::weekday{days_};
    return wd != chr::Saturday && wd != chr::Sunday;
}

CalendarSpan CalendarSpan::parse(std::string_view text) {
    CalendarSpan span;
    std::string_view rest = text;
    if (rest.empty()) throw ParseError("empty span");
    while (!rest.empty()) {
        std::size_t i = 0;
        while (i < rest.size() && rest[i] >= '0' && rest[i] <= '9') ++i;
        int value = 0;
        if (i == 0 || i == rest.size() || !parse_int(rest.substr(0, i), value))
            throw ParseError("invalid span '" + std::string(text) + "' (expected e.g. 1y, 6m, 90d)");
        switch (rest[i]) {
            case 'y': case 'Y': span.years += value; break;
            case 'm': case 'M': span.months += value; break;
            case 'd': case 'D': span.days += value; break;
            default: throw ParseError("invalid span unit in '" + std::string(text) + "'");
        }
        rest.remove_prefix(i + 1);
    }
    if (!span.positive()) throw ParseError("span must be positive: '" + std::string(text) + "'");
    return span;
}

std::string CalendarSpan::str() const {
    std::string out;
    if (years) out += std::to_string(years) + "y";
    if (months) out += std::to_string(months) + "m";
    if (days || out.empty()) out += std::to_string(days) + "d";
    return out;
}

Date add_span(Date d, const CalendarSpan& span) { return shift(d, span, +1); }
Date subtract_span(Date d, const CalendarSpan& span) { return shift(d, span, -1); }

Date next_weekday(Date d) {
    while (!d.is_weekday()) d = d + chr::days{1};
    return d;
}

}  // namespace entroshock
