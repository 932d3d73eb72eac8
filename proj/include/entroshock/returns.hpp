#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "entroshock/date.hpp"
#include "entroshock/ingest.hpp"

namespace entroshock {

// log:    R_i = ln(P_i / P_{i-1})       (canonical)
// simple: R_i = (P_i - P_{i-1}) / P_{i-1}  (first-order approximation, for sensitivity checks)
enum class ReturnMode { log, simple };

const char* to_string(ReturnMode m) noexcept;
ReturnMode parse_return_mode(std::string_view s);

struct ReturnPoint {
    Date date;  // day i, the later of the two closes
    double value = 0.0;

    bool operator==(const ReturnPoint&) const = default;
};

struct ReturnSeries {
    std::string symbol;
    std::vector<ReturnPoint> points;

    std::size_t n() const noexcept { return points.size(); }
    std::vector<double> values() const;

    bool operator==(const ReturnSeries&) const = default;
};

// Daily returns; the first close is consumed as the base. Throws TooShort for < 2 prices.
ReturnSeries log_returns(const PriceSeries& prices, ReturnMode mode = ReturnMode::log);

}  // namespace entroshock
