#pragma once

#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace entroshock {

// Calendar day. Printed as ISO-8601; parsed from ISO-8601 or US-style MM/DD/YYYY.
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::chrono::sys_days d) : days_(d) {}
    Date(int y, unsigned m, unsigned d);

    static Date parse(std::string_view text);  // throws ParseError
    static std::optional<Date> try_parse(std::string_view text) noexcept;

    std::string iso() const;
    std::chrono::year_month_day ymd() const { return std::chrono::year_month_day{days_}; }
    std::chrono::sys_days sys_days() const noexcept { return days_; }
    bool is_weekday() const;

    Date operator+(std::chrono::days d) const { return Date{days_ + d}; }
    Date operator-(std::chrono::days d) const { return Date{days_ - d}; }
    std::chrono::days operator-(const Date& o) const { return days_ - o.days_; }

    constexpr auto operator<=>(const Date&) const = default;

private:
    std::chrono::sys_days days_{};
};

// Calendar span such as "1y", "6m", "90d" or "1y2m3d". Month arithmetic clamps to the
// last valid day, so 2024-02-29 minus 1y is 2023-02-28.
struct CalendarSpan {
    int years = 0;
    int months = 0;
    int days = 0;

    static CalendarSpan parse(std::string_view text);  // throws ParseError
    std::string str() const;
    bool positive() const noexcept { return years >= 0 && months >= 0 && days >= 0 && (years + months + days) > 0; }

    bool operator==(const CalendarSpan&) const = default;
};

Date add_span(Date d, const CalendarSpan& span);
Date subtract_span(Date d, const CalendarSpan& span);

// First weekday on or after d.
Date next_weekday(Date d);

}  // namespace entroshock
