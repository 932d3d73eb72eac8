#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "entroshock/date.hpp"

namespace entroshock {

struct PricePoint {
    Date date;
    double close = 0.0;

    bool operator==(const PricePoint&) const = default;
};

// Daily closing prices for one asset. Every constructed instance has strictly
// increasing dates and finite, positive closes; the constructor enforces it.
class PriceSeries {
public:
    PriceSeries() = default;
    PriceSeries(std::string symbol, std::vector<PricePoint> points);

    const std::string& symbol() const noexcept { return symbol_; }
    const std::vector<PricePoint>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }
    const PricePoint& front() const { return points_.front(); }
    const PricePoint& back() const { return points_.back(); }

    bool operator==(const PriceSeries&) const = default;

private:
    std::string symbol_;
    std::vector<PricePoint> points_;
};

// Parses a daily price CSV. The header row is recognised when its close column is not
// numeric; "date" and "close" columns are located by name (case-insensitive), falling back
// to column 0 for the date and the last numeric column for the close. Rows are sorted by
// date. Non-positive or unparseable closes raise MalformedRow with the 1-based line number.
PriceSeries parse_price_csv(std::string_view text, std::string symbol);
PriceSeries load_price_csv(const std::filesystem::path& path, std::string symbol);

// Canonical "Date,Close" form; parse_price_csv(serialize_price_csv(s), s.symbol()) == s.
std::string serialize_price_csv(const PriceSeries& series);

// Points with start <= date <= end.
PriceSeries slice_by_dates(const PriceSeries& series, Date start, Date end);

// ---------------------------------------------------------------------------
// Asset universe

enum class Group { constant, introduced, removed };

const char* to_string(Group g) noexcept;
Group parse_group(std::string_view s);

enum class Membership { joined, left };

struct MembershipEvent {
    Date date;
    Membership kind = Membership::joined;

    bool operator==(const MembershipEvent&) const = default;
};

struct AssetMeta {
    std::string symbol;
    std::string full_name;
    Group group = Group::constant;
    std::vector<MembershipEvent> membership_events;

    bool operator==(const AssetMeta&) const = default;
};

struct AssetUniverse {
    std::string index_symbol;
    std::string index_name;
    std::vector<AssetMeta> assets;

    const AssetMeta* find(std::string_view symbol) const;
};

// Line-oriented universe file:
//
//   # comment
//   index = WIG20, WIG20 index
//   PCO, Pepco, introduced, 2022-03-18:joined
//
// Each asset record is `symbol, full_name, group[, date:joined|left ...]`.
AssetUniverse load_universe(std::string_view text);
AssetUniverse load_universe_file(const std::filesystem::path& path);

// WIG20 constituents over 2021-02-24..2023-02-23 with the four composition changes.
std::string_view default_universe_text();
AssetUniverse default_universe();

}  // namespace entroshock
