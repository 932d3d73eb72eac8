#include <doctest.h>

#include <cmath>

#include "entroshock/event_study.hpp"
#include "entroshock/report.hpp"
#include "entroshock/synth.hpp"

using namespace entroshock;

namespace {

// 252 weekdays before and 252 on/after the event, starting 2021-03-01.
struct Fixture {
    PriceSeries prices;
    Date event;
};

Fixture symmetric(std::uint64_t seed, std::string symbol = "SYN", double sigma2 = 0.01) {
    SynthSpec spec;
    spec.kind = SynthKind::regime_switch;
    spec.n1 = 252;
    spec.n2 = 252;
    spec.sigma1 = 0.01;
    spec.sigma2 = sigma2;
    spec.seed = seed;
    spec.start_date = Date(2021, 3, 1);
    spec.symbol = std::move(symbol);
    return {regime_switch_series(spec), regime_switch_event_date(spec)};
}

PriceSeries renamed(const PriceSeries& s, std::string symbol) { return PriceSeries(std::move(symbol), s.points()); }

PriceSeries from(const PriceSeries& s, Date start) {
    std::vector<PricePoint> pts;
    for (const auto& p : s.points())
        if (!(p.date < start)) pts.push_back(p);
    return PriceSeries(s.symbol(), std::move(pts));
}

}  // namespace

TEST_CASE("split_at_event: symmetric 504-day construction gives N = 251 per side") {
    auto [prices, event] = symmetric(1);
    REQUIRE(prices.size() == 504);
    auto split = split_at_event(prices, event);
    CHECK(split.before.n() == 251);
    CHECK(split.after.n() == 251);
    // 252 weekdays fall about two weeks short of a calendar year
    CHECK(split.before_short);
    CHECK(split.after_short);
    for (const auto& p : split.before.points) CHECK(p.date < event);
    for (const auto& p : split.after.points) CHECK(!(p.date < event));
}

TEST_CASE("split_at_event: late-starting data is kept and flagged") {
    auto [prices, event] = symmetric(2);
    auto window_start = subtract_span(event, default_span);
    auto late = from(prices, add_span(window_start, CalendarSpan{0, 3, 0}));
    auto split = split_at_event(late, event);
    CHECK(split.before_short);
    CHECK(split.before.n() < 251);
    CHECK(split.before.n() > 150);
    CHECK(split.after.n() == 251);
}

TEST_CASE("split_at_event: no return straddles the event") {
    // Closes climb to 200 just before the event, then the after window starts at 100 and
    // rises. A leaked before-price would make the first after return negative.
    std::vector<PricePoint> pts;
    Date event(2022, 2, 24);
    double before_price = 150;
    for (Date d = subtract_span(event, default_span); d < event; d = d + std::chrono::days{1})
        if (d.is_weekday()) pts.push_back({d, before_price += 0.1});
    pts.back().close = 200;
    pts.push_back({event, 100});
    pts.push_back({event + std::chrono::days{1}, 110});
    pts.push_back({event + std::chrono::days{4}, 111});
    PriceSeries s("X", pts);

    auto split = split_at_event(s, event);
    REQUIRE(split.after.n() == 2);
    CHECK(split.after.points[0].date == event + std::chrono::days{1});
    CHECK(split.after.points[0].value == doctest::Approx(std::log(1.1)));
    CHECK(split.after.points[0].value > 0);
    CHECK(split.before.points.back().date < event);
}

TEST_CASE("split_at_event: errors") {
    auto [prices, event] = symmetric(3);
    CHECK_THROWS_AS(split_at_event(prices, Date(2030, 1, 1)), InsufficientData);
    try {
        split_at_event(prices, prices.front().date);
        FAIL("expected InsufficientData");
    } catch (const InsufficientData& e) {
        CHECK(e.side() == Side::before);
    }
    CHECK_THROWS_AS(split_at_event(PriceSeries(), event), EmptySeries);
}

TEST_CASE("compare_universe: single asset, both sides populated") {
    auto [idx, event] = symmetric(10, "IDX");
    auto asset = renamed(symmetric(11).prices, "AAA");
    AssetUniverse u = load_universe("index = IDX, Index\nAAA, Asset A, constant\n");
    PriceStore store{{"IDX", idx}, {"AAA", asset}};
    StudyConfig c;
    c.event_date = event;
    auto t = compare_universe(u, store, c);
    REQUIRE(t.rows.size() == 1);
    const auto& row = t.rows[0];
    CHECK(row.full_name == "Asset A");
    REQUIRE(row.before);
    REQUIRE(row.after);
    CHECK(row.before->n == 251);
    REQUIRE(row.std_pct_diff);
    CHECK(*row.std_pct_diff == doctest::Approx(pct_difference(row.before->std, row.after->std)));
    CHECK(*row.entropy_pct_diff ==
          doctest::Approx(pct_difference(row.before->entropy.value, row.after->entropy.value)));
    CHECK(t.index_row.symbol == "IDX");
    CHECK_FALSE(t.index_row.group.has_value());

    // rows are labelled by universe symbol, not by whatever the series carries
    PriceStore unlabelled{{"IDX", renamed(idx, "SYN")}, {"AAA", renamed(asset, "SYN")}};
    auto t2 = compare_universe(u, unlabelled, c);
    CHECK(t2.index_row.symbol == "IDX");
    CHECK(t2.rows[0].symbol == "AAA");
}

TEST_CASE("compare_universe: asset listed after the event has no before side") {
    auto [idx, event] = symmetric(12, "IDX");
    auto late = from(renamed(symmetric(13).prices, "NEW"), event);
    AssetUniverse u = load_universe("index = IDX\nNEW, Newcomer, introduced, 2022-06-01:joined\n");
    StudyConfig c;
    c.event_date = event;
    auto t = compare_universe(u, PriceStore{{"IDX", idx}, {"NEW", late}}, c);
    REQUIRE(t.rows.size() == 1);
    CHECK_FALSE(t.rows[0].before.has_value());
    CHECK(t.rows[0].after.has_value());
    CHECK_FALSE(t.rows[0].std_pct_diff.has_value());
    CHECK_FALSE(t.rows[0].entropy_pct_diff.has_value());
    CHECK(std::find(t.rows[0].flags.begin(), t.rows[0].flags.end(), "before_missing") != t.rows[0].flags.end());
}

TEST_CASE("compare_universe: missing index, ordering, determinism, monotone removal") {
    auto u = default_universe();
    StudyConfig c;
    PriceStore store;
    std::uint64_t seed = 100;
    for (const auto& a : u.assets) {
        auto f = symmetric(seed++, a.symbol);
        c.event_date = f.event;
        store.emplace(a.symbol, f.prices);
    }
    CHECK_THROWS_AS(compare_universe(u, store, c), MissingIndexData);

    store.emplace("WIG20", symmetric(seed++, "WIG20").prices);
    auto t1 = compare_universe(u, store, c, 1);
    auto t4 = compare_universe(u, store, c, 4);
    CHECK(render_table(t1, TableFormat::json) == render_table(t4, TableFormat::json));
    CHECK(render_table(t1, TableFormat::csv) == render_table(compare_universe(u, store, c, 3), TableFormat::csv));

    REQUIRE(t1.rows.size() == 24);
    for (std::size_t i = 1; i < t1.rows.size(); ++i) {
        const auto &a = t1.rows[i - 1], &b = t1.rows[i];
        CHECK((*a.group < *b.group || (*a.group == *b.group && a.symbol < b.symbol)));
    }
    CHECK(t1.rows.front().symbol == "ACP");
    CHECK(t1.rows[16].symbol == "KRU");
    CHECK(t1.rows.back().symbol == "TPE");

    auto reduced = store;
    reduced.erase("PKO");
    reduced.erase("MRC");
    auto t2 = compare_universe(u, reduced, c);
    CHECK(t2.rows.size() == 22);
    for (const auto& row : t2.rows) {
        auto it = std::find_if(t1.rows.begin(), t1.rows.end(), [&](const auto& r) { return r.symbol == row.symbol; });
        REQUIRE(it != t1.rows.end());
        CHECK(*it == row);
    }
    CHECK(t2.index_row == t1.index_row);
}

TEST_CASE("window_scan: full length reproduces the split entropy exactly") {
    auto [prices, event] = symmetric(21);
    auto split = split_at_event(prices, event);
    for (Side side : {Side::before, Side::after}) {
        const auto& r = side == Side::before ? split.before : split.after;
        auto full = shannon_entropy(build_histogram(r.values(), 20));
        auto scan = window_scan(prices, event, {r.n() + 1}, side);
        REQUIRE(scan.points.size() == 1);
        CHECK(scan.points[0].window_length == 252);
        CHECK(scan.points[0].entropy.value == full.value);
    }
}

TEST_CASE("window_scan: anchoring, omissions and errors") {
    auto [prices, event] = symmetric(22);
    auto lengths = default_scan_lengths(252);
    CHECK(lengths.front() == 20);
    CHECK(lengths[1] == 30);
    CHECK(lengths.back() == 252);
    CHECK(lengths[lengths.size() - 2] == 250);

    auto scan = window_scan(prices, event, lengths, Side::after);
    CHECK(scan.points.size() == lengths.size());
    double bound = std::log(20.0);
    for (const auto& p : scan.points) CHECK((p.entropy.value >= 0 && p.entropy.value <= bound));

    // after side, length 20 = the first 20 trading days on/after the event
    std::vector<PricePoint> first20;
    for (const auto& p : prices.points())
        if (!(p.date < event) && first20.size() < 20) first20.push_back(p);
    auto direct = shannon_entropy(build_histogram(log_returns(PriceSeries("SYN", first20)).values(), 20));
    CHECK(scan.points[0].entropy.value == direct.value);

    auto partial = window_scan(prices, event, {100, 252, 300, 1000}, Side::before);
    CHECK(partial.points.size() == 2);
    CHECK(partial.omitted == std::vector<std::size_t>{300, 1000});

    CHECK_THROWS_AS(window_scan(prices, event, {600}, Side::before), NoWindows);
    CHECK_THROWS_AS(window_scan(prices, event, {30, 20}, Side::before), Error);
    CHECK_THROWS_AS(window_scan(prices, event, {1, 20}, Side::before), Error);
}
