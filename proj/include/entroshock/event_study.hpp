#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "entroshock/date.hpp"
#include "entroshock/error.hpp"
#include "entroshock/ingest.hpp"
#include "entroshock/measures.hpp"
#include "entroshock/returns.hpp"

namespace entroshock {

inline const CalendarSpan default_span{1, 0, 0};

// A window whose data starts (or stops) more than this far from its nominal boundary is
// flagged as short; ordinary weekends and holidays stay inside the tolerance.
inline constexpr std::chrono::days short_window_tolerance{7};

// Prices in [event - span, event) and [event, event + span). Returns are computed inside
// each window, so the return straddling the event date belongs to neither side.
struct EventSplit {
    Date event_date;
    CalendarSpan span;
    ReturnSeries before;
    ReturnSeries after;
    bool before_short = false;
    bool after_short = false;
};

EventSplit split_at_event(const PriceSeries& prices, Date event_date, const CalendarSpan& span = default_span,
                          ReturnMode mode = ReturnMode::log);

// Returns of one side only; throws InsufficientData(side) when the window has < 2 prices.
ReturnSeries window_returns(const PriceSeries& prices, Date event_date, const CalendarSpan& span, Side side,
                            ReturnMode mode, bool* is_short = nullptr);

struct ComparisonRow {
    std::string symbol;
    std::string full_name;
    std::optional<Group> group;  // empty for the index row
    std::optional<MeasureSet> before;
    std::optional<MeasureSet> after;
    std::optional<double> std_pct_diff;
    std::optional<double> entropy_pct_diff;
    std::vector<std::string> flags;  // before_short, after_missing, ...

    bool operator==(const ComparisonRow&) const = default;
};

struct StudyConfig {
    Date event_date;
    CalendarSpan span = default_span;
    std::size_t m = default_bins;
    LogBase base = LogBase::e;
    ReturnMode mode = ReturnMode::log;
};

struct ComparisonTable {
    StudyConfig config;
    std::vector<ComparisonRow> rows;  // group order (constant, introduced, removed), then symbol
    ComparisonRow index_row;
};

using PriceStore = std::map<std::string, PriceSeries, std::less<>>;

ComparisonRow compare_series(const PriceSeries& prices, const StudyConfig& config);

// One row per universe asset present in the store, plus the index row. Throws
// MissingIndexData when the store lacks the index symbol.
ComparisonTable compare_universe(const AssetUniverse& universe, const PriceStore& prices, const StudyConfig& config,
                                 unsigned jobs = 1);

struct WindowScanPoint {
    std::size_t window_length = 0;  // trading days (price points) in the window
    EntropyValue entropy;

    bool operator==(const WindowScanPoint&) const = default;
};

struct WindowScanResult {
    std::string symbol;
    Side side = Side::before;
    std::vector<WindowScanPoint> points;
    std::vector<std::size_t> omitted;  // requested lengths with too little data

    bool operator==(const WindowScanResult&) const = default;
};

// Entropy of windows anchored at the event: the last L trading days strictly before it
// (side = before) or the first L trading days on/after it (side = after). Each window is
// rebinned on its own range. Lengths must be strictly increasing and >= 2.
WindowScanResult window_scan(const PriceSeries& prices, Date event_date, const std::vector<std::size_t>& lengths,
                             Side side, std::size_t m = default_bins, LogBase base = LogBase::e,
                             ReturnMode mode = ReturnMode::log);

// 20, 30, ... up to max_length, with max_length itself appended when not on the grid.
std::vector<std::size_t> default_scan_lengths(std::size_t max_length, std::size_t first = 20, std::size_t step = 10);

// Trading days available on one side of the event within `span`.
std::size_t window_size(const PriceSeries& prices, Date event_date, const CalendarSpan& span, Side side);

}  // namespace entroshock
