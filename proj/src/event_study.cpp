#include "entroshock/event_study.hpp"

#include <algorithm>
#include <exception>

#include "entroshock/parallel.hpp"

namespace entroshock {

namespace {

struct Bounds {
    Date first;        // inclusive
    Date last;         // inclusive
};

Bounds side_bounds(Date event_date, const CalendarSpan& span, Side side) {
    if (side == Side::before) return {subtract_span(event_date, span), event_date - std::chrono::days{1}};
    return {event_date, add_span(event_date, span) - std::chrono::days{1}};
}

std::vector<PricePoint> window_points(const PriceSeries& prices, const Bounds& b) {
    const auto& pts = prices.points();
    auto lo = std::lower_bound(pts.begin(), pts.end(), b.first, [](const PricePoint& p, Date d) { return p.date < d; });
    auto hi = std::upper_bound(lo, pts.end(), b.last, [](Date d, const PricePoint& p) { return d < p.date; });
    return {lo, hi};
}

std::vector<double> values_of(const std::vector<PricePoint>& pts, ReturnMode mode, const std::string& symbol) {
    return log_returns(PriceSeries(symbol, pts), mode).values();
}

}  // namespace

ReturnSeries window_returns(const PriceSeries& prices, Date event_date, const CalendarSpan& span, Side side,
                            ReturnMode mode, bool* is_short) {
    if (!span.positive()) throw Error("event window span must be positive");
    auto b = side_bounds(event_date, span, side);
    auto pts = window_points(prices, b);
    if (pts.size() < 2)
        throw InsufficientData(side, prices.symbol() + " has " + std::to_string(pts.size()) + " prices in " +
                                         b.first.iso() + ".." + b.last.iso());
    if (is_short)
        *is_short = (pts.front().date - b.first) > short_window_tolerance ||
                    (b.last - pts.back().date) > short_window_tolerance;
    return log_returns(PriceSeries(prices.symbol(), std::move(pts)), mode);
}

EventSplit split_at_event(const PriceSeries& prices, Date event_date, const CalendarSpan& span, ReturnMode mode) {
    if (prices.empty()) throw EmptySeries(prices.symbol() + ": empty price series");
    EventSplit s;
    s.event_date = event_date;
    s.span = span;
    s.before = window_returns(prices, event_date, span, Side::before, mode, &s.before_short);
    s.after = window_returns(prices, event_date, span, Side::after, mode, &s.after_short);
    return s;
}

std::size_t window_size(const PriceSeries& prices, Date event_date, const CalendarSpan& span, Side side) {
    return window_points(prices, side_bounds(event_date, span, side)).size();
}

ComparisonRow compare_series(const PriceSeries& prices, const StudyConfig& config) {
    ComparisonRow row;
    row.symbol = prices.symbol();
    row.full_name = prices.symbol();
    for (Side side : {Side::before, Side::after}) {
        auto& slot = side == Side::before ? row.before : row.after;
        try {
            bool is_short = false;
            auto r = window_returns(prices, config.event_date, config.span, side, config.mode, &is_short);
            slot = measure_set(r.values(), config.m, config.base);
            if (is_short) row.flags.push_back(std::string(to_string(side)) + "_short");
        } catch (const InsufficientData&) {
            row.flags.push_back(std::string(to_string(side)) + "_missing");
        }
    }
    if (row.before && row.after) {
        // A zero std or entropy (constant window) has no defined percentage difference.
        if (row.before->std > 0 && row.after->std > 0) row.std_pct_diff = pct_difference(row.before->std, row.after->std);
        else row.flags.push_back("std_pct_undefined");
        if (row.before->entropy.value > 0 && row.after->entropy.value > 0)
            row.entropy_pct_diff = pct_difference(row.before->entropy.value, row.after->entropy.value);
        else row.flags.push_back("entropy_pct_undefined");
    }
    return row;
}

ComparisonTable compare_universe(const AssetUniverse& universe, const PriceStore& prices, const StudyConfig& config,
                                 unsigned jobs) {
    auto index_it = prices.find(universe.index_symbol);
    if (index_it == prices.end())
        throw MissingIndexData("no price data for index " + universe.index_symbol);

    std::vector<const AssetMeta*> assets;
    for (const auto& a : universe.assets)
        if (prices.count(a.symbol)) assets.push_back(&a);
    std::stable_sort(assets.begin(), assets.end(), [](const AssetMeta* a, const AssetMeta* b) {
        if (a->group != b->group) return a->group < b->group;
        return a->symbol < b->symbol;
    });

    // Slot n holds the index row.
    std::vector<ComparisonRow> rows(assets.size() + 1);
    std::vector<std::exception_ptr> errors(rows.size());
    parallel_for(rows.size(), jobs, [&](std::size_t i) {
        try {
            if (i == assets.size()) {
                rows[i] = compare_series(index_it->second, config);
                rows[i].symbol = universe.index_symbol;
                rows[i].full_name = universe.index_name.empty() ? universe.index_symbol : universe.index_name;
            } else {
                rows[i] = compare_series(prices.find(assets[i]->symbol)->second, config);
                rows[i].symbol = assets[i]->symbol;
                rows[i].full_name = assets[i]->full_name;
                rows[i].group = assets[i]->group;
            }
        } catch (...) {
            errors[i] = std::current_exception();
        }
    });
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    ComparisonTable table;
    table.config = config;
    table.index_row = std::move(rows.back());
    rows.pop_back();
    table.rows = std::move(rows);
    return table;
}

WindowScanResult window_scan(const PriceSeries& prices, Date event_date, const std::vector<std::size_t>& lengths,
                             Side side, std::size_t m, LogBase base, ReturnMode mode) {
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        if (lengths[i] < 2) throw Error("window length must be at least 2 trading days");
        if (i > 0 && lengths[i] <= lengths[i - 1]) throw Error("window lengths must be strictly increasing");
    }

    const auto& pts = prices.points();
    auto split = std::lower_bound(pts.begin(), pts.end(), event_date,
                                  [](const PricePoint& p, Date d) { return p.date < d; });
    const auto available = std::size_t(side == Side::before ? split - pts.begin() : pts.end() - split);

    WindowScanResult out;
    out.symbol = prices.symbol();
    out.side = side;
    for (auto len : lengths) {
        if (len > available) {
            out.omitted.push_back(len);
            continue;
        }
        auto first = side == Side::before ? split - std::ptrdiff_t(len) : split;
        auto values = values_of({first, first + std::ptrdiff_t(len)}, mode, prices.symbol());
        out.points.push_back({len, shannon_entropy(build_histogram(values, m), base)});
    }
    if (out.points.empty())
        throw NoWindows(prices.symbol() + ": none of the requested window lengths fit the " + to_string(side) +
                        " side (" + std::to_string(available) + " trading days available)");
    return out;
}

std::vector<std::size_t> default_scan_lengths(std::size_t max_length, std::size_t first, std::size_t step) {
    std::vector<std::size_t> out;
    if (max_length < 2) return out;
    if (step == 0) step = 1;
    for (auto len = std::max<std::size_t>(first, 2); len <= max_length; len += step) out.push_back(len);
    if (out.empty() || out.back() != max_length) out.push_back(max_length);
    return out;
}

}  // namespace entroshock
