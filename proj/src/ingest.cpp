#include "entroshock/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "entroshock/error.hpp"

namespace entroshock {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

std::optional<double> parse_number(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
    return v;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return char(std::tolower(c)); });
    // stooq's legacy exports wrap names as <DATE>, <CLOSE>
    if (out.size() > 2 && out.front() == '<' && out.back() == '>') out = out.substr(1, out.size() - 2);
    return out;
}

struct Line {
    std::size_t number;
    std::string_view text;
};

std::vector<Line> content_lines(std::string_view text) {
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
    std::vector<Line> lines;
    std::size_t number = 0, start = 0;
    while (start <= text.size()) {
        auto pos = text.find('\n', start);
        auto raw = text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
        ++number;
        if (!trim(raw).empty()) lines.push_back({number, raw});
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return lines;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot open for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

PriceSeries::PriceSeries(std::string symbol, std::vector<PricePoint> points)
    : symbol_(std::move(symbol)), points_(std::move(points)) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        if (!std::isfinite(p.close) || p.close <= 0.0)
            throw NonPositiveInput(symbol_ + ": close on " + p.date.iso() + " is not a finite positive price");
        if (i > 0 && !(points_[i - 1].date < p.date)) {
            if (points_[i - 1].date == p.date) throw DuplicateDate(p.date.iso());
            throw Error(symbol_ + ": dates not strictly increasing at " + p.date.iso());
        }
    }
}

PriceSeries parse_price_csv(std::string_view text, std::string symbol) {
    auto lines = content_lines(text);
    if (lines.empty()) throw EmptySeries(symbol + ": no rows");

    char delim = ',';
    if (lines.front().text.find(',') == std::string_view::npos && lines.front().text.find(';') != std::string_view::npos)
        delim = ';';

    auto first = split(lines.front().text, delim);
    std::size_t date_col = 0;
    std::optional<std::size_t> close_col;
    std::size_t first_data = 0;

    // A header is any first row whose fields are not all date/number shaped.
    bool header = !Date::try_parse(first[0]).has_value();
    if (header) {
        first_data = 1;
        std::optional<std::size_t> partial;
        for (std::size_t i = 0; i < first.size(); ++i) {
            auto name = lower(first[i]);
            if (name == "date") date_col = i;
            if (name == "close") close_col = i;
            else if (!partial && name.find("close") != std::string::npos) partial = i;
        }
        if (!close_col) close_col = partial;
    }
    if (!close_col) {
        if (first_data >= lines.size()) throw EmptySeries(symbol + ": header without data rows");
        auto row = split(lines[first_data].text, delim);
        for (std::size_t i = row.size(); i-- > 0;) {
            if (i != date_col && parse_number(row[i])) {
                close_col = i;
                break;
            }
        }
        if (!close_col) throw MalformedRow(lines[first_data].number, "no numeric close column");
    }

    std::vector<PricePoint> points;
    points.reserve(lines.size());
    for (std::size_t k = first_data; k < lines.size(); ++k) {
        const auto& line = lines[k];
        auto row = split(line.text, delim);
        if (row.size() <= std::max(date_col, *close_col))
            throw MalformedRow(line.number, "expected at least " + std::to_string(std::max(date_col, *close_col) + 1) +
                                                " columns");
        auto date = Date::try_parse(row[date_col]);
        if (!date) throw MalformedRow(line.number, "unparseable date '" + std::string(row[date_col]) + "'");
        auto close = parse_number(row[*close_col]);
        if (!close) throw MalformedRow(line.number, "unparseable close '" + std::string(row[*close_col]) + "'");
        if (!std::isfinite(*close) || *close <= 0.0)
            throw MalformedRow(line.number, "close must be a finite positive price, got '" +
                                                std::string(row[*close_col]) + "'");
        points.push_back({*date, *close});
    }
    if (points.empty()) throw EmptySeries(symbol + ": no data rows");

    std::stable_sort(points.begin(), points.end(), [](const auto& a, const auto& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i].date == points[i - 1].date) throw DuplicateDate(points[i].date.iso());
    return PriceSeries(std::move(symbol), std::move(points));
}

PriceSeries load_price_csv(const std::filesystem::path& path, std::string symbol) {
    return parse_price_csv(read_file(path), std::move(symbol));
}

std::string serialize_price_csv(const PriceSeries& series) {
    std::string out = "Date,Close\n";
    char buf[64];
    for (const auto& p : series.points()) {
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, p.close);
        out += p.date.iso();
        out += ',';
        out.append(buf, end);
        out += '\n';
    }
    return out;
}

PriceSeries slice_by_dates(const PriceSeries& series, Date start, Date end) {
    if (end < start) throw Error("slice start " + start.iso() + " is after end " + end.iso());
    const auto& pts = series.points();
    auto lo = std::lower_bound(pts.begin(), pts.end(), start, [](const PricePoint& p, Date d) { return p.date < d; });
    auto hi = std::upper_bound(lo, pts.end(), end, [](Date d, const PricePoint& p) { return d < p.date; });
    if (lo == hi)
        throw EmptySlice(series.symbol() + ": no prices between " + start.iso() + " and " + end.iso());
    return PriceSeries(series.symbol(), std::vector<PricePoint>(lo, hi));
}

// ---------------------------------------------------------------------------

const char* to_string(Group g) noexcept {
    switch (g) {
        case Group::constant: return "constant";
        case Group::introduced: return "introduced";
        case Group::removed: return "removed";
    }
    return "?";
}

Group parse_group(std::string_view s) {
    auto name = lower(trim(s));
    if (name == "constant") return Group::constant;
    if (name == "introduced") return Group::introduced;
    if (name == "removed") return Group::removed;
    throw ParseError("unknown group '" + std::string(s) + "' (expected constant, introduced or removed)");
}

const AssetMeta* AssetUniverse::find(std::string_view symbol) const {
    for (const auto& a : assets)
        if (a.symbol == symbol) return &a;
    return nullptr;
}

AssetUniverse load_universe(std::string_view text) {
    AssetUniverse u;
    std::set<std::string, std::less<>> seen;
    bool have_index = false;

    for (const auto& line : content_lines(text)) {
        auto body = trim(line.text);
        if (body.front() == '#') continue;
        auto where = "universe line " + std::to_string(line.number) + ": ";

        if (auto eq = body.find('='); eq != std::string_view::npos) {
            if (lower(trim(body.substr(0, eq))) != "index") throw ParseError(where + "unknown key");
            auto fields = split(body.substr(eq + 1), ',');
            if (fields[0].empty()) throw ParseError(where + "empty index symbol");
            u.index_symbol = std::string(fields[0]);
            u.index_name = fields.size() > 1 && !fields[1].empty() ? std::string(fields[1]) : u.index_symbol;
            have_index = true;
            continue;
        }

        auto fields = split(body, ',');
        if (fields.size() < 3) throw ParseError(where + "expected `symbol, full_name, group[, events]`");
        AssetMeta meta;
        meta.symbol = std::string(fields[0]);
        meta.full_name = std::string(fields[1]);
        if (meta.symbol.empty()) throw ParseError(where + "empty symbol");
        try {
            meta.group = parse_group(fields[2]);
        } catch (const ParseError& e) {
            throw ParseError(where + e.what());
        }
        for (std::size_t i = 3; i < fields.size(); ++i) {
            std::istringstream tokens{std::string(fields[i])};
            std::string tok;
            while (tokens >> tok) {
                auto colon = tok.find(':');
                if (colon == std::string::npos) throw ParseError(where + "event '" + tok + "' lacks ':joined|left'");
                auto date = Date::try_parse(tok.substr(0, colon));
                if (!date) throw ParseError(where + "bad event date in '" + tok + "'");
                auto kind = lower(tok.substr(colon + 1));
                MembershipEvent ev{*date, Membership::joined};
                if (kind == "left") ev.kind = Membership::left;
                else if (kind != "joined") throw ParseError(where + "event kind must be joined or left: '" + tok + "'");
                if (!meta.membership_events.empty() && !(meta.membership_events.back().date < ev.date))
                    throw ParseError(where + "membership events out of chronological order");
                meta.membership_events.push_back(ev);
            }
        }
        if (!seen.insert(meta.symbol).second) throw DuplicateSymbol(meta.symbol);
        u.assets.push_back(std::move(meta));
    }
    if (!have_index) throw ParseError("universe file has no `index = SYMBOL` line");
    if (seen.count(u.index_symbol)) throw DuplicateSymbol(u.index_symbol);
    return u;
}

AssetUniverse load_universe_file(const std::filesystem::path& path) { return load_universe(read_file(path)); }

}  // namespace entroshock
