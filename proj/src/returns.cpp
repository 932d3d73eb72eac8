#include "entroshock/returns.hpp"

#include <cmath>

#include "entroshock/error.hpp"

namespace entroshock {

const char* to_string(ReturnMode m) noexcept { return m == ReturnMode::log ? "log" : "simple"; }

ReturnMode parse_return_mode(std::string_view s) {
    if (s == "log") return ReturnMode::log;
    if (s == "simple") return ReturnMode::simple;
    throw ParseError("unknown return mode '" + std::string(s) + "' (expected log or simple)");
}

std::vector<double> ReturnSeries::values() const {
    std::vector<double> v;
    v.reserve(points.size());
    for (const auto& p : points) v.push_back(p.value);
    return v;
}

ReturnSeries log_returns(const PriceSeries& prices, ReturnMode mode) {
    if (prices.size() < 2)
        throw TooShort(prices.symbol() + ": need at least 2 prices for a return, have " + std::to_string(prices.size()));
    ReturnSeries out{prices.symbol(), {}};
    const auto& pts = prices.points();
    out.points.reserve(pts.size() - 1);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        double prev = pts[i - 1].close, cur = pts[i].close;
        double r = mode == ReturnMode::log ? std::log(cur / prev) : (cur - prev) / prev;
        if (!std::isfinite(r)) throw Error(prices.symbol() + ": non-finite return on " + pts[i].date.iso());
        out.points.push_back({pts[i].date, r});
    }
    return out;
}

}  // namespace entroshock
