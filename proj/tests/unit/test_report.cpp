#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "entroshock/error.hpp"
#include "entroshock/report.hpp"
#include "entroshock/synth.hpp"
#include "xml_check.hpp"

using namespace entroshock;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

MeasureSet ms(double std, double h) {
    MeasureSet m;
    m.std = std;
    m.entropy = {h, LogBase::e};
    m.n = 251;
    m.m = 20;
    m.max_entropy = std::log(20.0);
    return m;
}

ComparisonRow row(std::string symbol, std::string name, Group g, MeasureSet before, MeasureSet after) {
    ComparisonRow r;
    r.symbol = std::move(symbol);
    r.full_name = std::move(name);
    r.group = g;
    r.before = before;
    r.after = after;
    r.std_pct_diff = pct_difference(before.std, after.std);
    r.entropy_pct_diff = pct_difference(before.entropy.value, after.entropy.value);
    return r;
}

ComparisonTable mercator_table() {
    ComparisonTable t;
    t.config.event_date = Date(2022, 2, 24);
    t.rows.push_back(row("MRC", "Mercator", Group::removed, ms(0.047, 1.894), ms(0.043, 1.785)));
    return t;
}

std::vector<std::string> split(const std::string& s, char d) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, d)) out.push_back(tok);
    if (!s.empty() && s.back() == d) out.push_back("");
    return out;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("entroshock_report_" + name);
    fs::remove_all(p);
    return p;
}

double attr(const std::string& doc, const std::string& name) {
    auto pos = doc.find(name + "=\"");
    REQUIRE(pos != std::string::npos);
    return std::stod(doc.substr(pos + name.size() + 2));
}

}  // namespace

TEST_CASE("render_table: empty table gives a header-only CSV") {
    auto csv = render_table(ComparisonTable{}, TableFormat::csv);
    CHECK(csv == "symbol,name,std_before,std_after,std_pct_diff,entropy_before,entropy_after,entropy_pct_diff,group,"
                 "flags\n");
}

TEST_CASE("render_table: single synthetic row") {
    ComparisonTable t;
    t.config.event_date = Date(2022, 2, 24);
    t.rows.push_back(row("SYN", "Synthetic", Group::constant, ms(0.0123456, 2.3456789), ms(0.0234567, 2.4567891)));
    auto csv = render_table(t, TableFormat::csv);
    auto lines = split(csv, '\n');
    REQUIRE(lines.size() == 3);  // header, row, trailing empty
    auto cells = split(lines[1], ',');
    REQUIRE(cells.size() == 10);
    CHECK(cells[0] == "SYN");
    CHECK(cells[2] == "0.012");
    CHECK(cells[3] == "0.023");
    CHECK(cells[5] == "2.346");
    CHECK(cells[6] == "2.457");
    CHECK(cells[4] == format_fixed(pct_difference(0.0123456, 0.0234567)));
    CHECK(cells[7] == format_fixed(pct_difference(2.3456789, 2.4567891)));
    CHECK(cells[8] == "constant");
}

TEST_CASE("render_table: Mercator-like row prints 8.889") {
    auto t = mercator_table();
    CHECK(render_table(t, TableFormat::text).find("8.889 %") != std::string::npos);
    CHECK(render_table(t, TableFormat::csv).find(",8.889,") != std::string::npos);
    auto j = json::parse(render_table(t, TableFormat::json));
    CHECK(j["rows"][0]["display"]["std_pct_diff"] == "8.889");
    CHECK(j["rows"][0]["std_pct_diff"].get<double>() == doctest::Approx(8.888888888888));
}

TEST_CASE("render_table: absent sides render as '-' and null") {
    ComparisonTable t;
    ComparisonRow r;
    r.symbol = "NEW";
    r.full_name = "Newcomer, Inc";
    r.group = Group::introduced;
    r.after = ms(0.02, 2.0);
    r.flags = {"before_missing"};
    t.rows.push_back(r);
    auto csv = render_table(t, TableFormat::csv);
    CHECK(csv.find("NEW,\"Newcomer, Inc\",-,0.020,-,-,2.000,-,introduced,before_missing") != std::string::npos);
    auto j = table_json(t);
    CHECK(j["rows"][0]["before"].is_null());
    CHECK(j["rows"][0]["std_pct_diff"].is_null());
}

TEST_CASE("property: every displayed number is the rounded full-precision JSON value") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> sd(0.001, 0.08), h(0.5, 2.99);
    ComparisonTable t;
    for (int i = 0; i < 50; ++i)
        t.rows.push_back(row("S" + std::to_string(i), "N", Group::constant, ms(sd(rng), h(rng)), ms(sd(rng), h(rng))));
    auto j = table_json(t);
    auto lines = split(render_table(t, TableFormat::csv), '\n');
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        auto cells = split(lines[i + 1], ',');
        const auto& r = j["rows"][i];
        CHECK(cells[2] == format_fixed(r["before"]["std"].get<double>()));
        CHECK(cells[3] == format_fixed(r["after"]["std"].get<double>()));
        CHECK(cells[4] == format_fixed(r["std_pct_diff"].get<double>()));
        CHECK(cells[5] == format_fixed(r["before"]["entropy"].get<double>()));
        CHECK(cells[6] == format_fixed(r["after"]["entropy"].get<double>()));
        CHECK(cells[7] == format_fixed(r["entropy_pct_diff"].get<double>()));
        CHECK(cells[2] == r["before"]["display"]["std"].get<std::string>());
        CHECK(cells[7] == r["display"]["entropy_pct_diff"].get<std::string>());
    }
}

TEST_CASE("render_histogram_svg: degenerate histogram is one full-height bar") {
    auto h = build_histogram(std::vector<double>(5, 0.0), 20);
    auto svg = render_histogram_svg(h, std::nullopt, "flat");
    CHECK(xml_problem(svg).empty());
    CHECK(count_of(svg, "class=\"bar\"") == 1);
    CHECK(attr(svg, "class=\"bar\" data-bin=\"0\" data-count=\"5\" x") > 0);
    auto bar = svg.substr(svg.find("class=\"bar\""));
    CHECK(attr(bar, "height") == doctest::Approx(410.0));
    CHECK(svg.find("width=\"960\"") != std::string::npos);
    CHECK(svg.find("height=\"540\"") != std::string::npos);
}

TEST_CASE("render_histogram_svg: equal probabilities give equal bars") {
    auto h = build_histogram(std::vector<double>{-0.02, -0.01, 0.01, 0.02}, 2);
    auto svg = render_histogram_svg(h, std::nullopt, "halves");
    CHECK(count_of(svg, "class=\"bar\"") == 2);
    auto first = svg.substr(svg.find("data-bin=\"0\""));
    auto second = svg.substr(svg.find("data-bin=\"1\""));
    CHECK(attr(first, "height") == attr(second, "height"));
    CHECK(attr(first, "width") == doctest::Approx(attr(second, "width")));
}

TEST_CASE("render_histogram_svg: bar count equals bins, overlay, escaping, metadata") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> z(0, 0.02);
    for (std::size_t m : {1, 5, 20, 37}) {
        std::vector<double> a(251), b(251);
        for (auto& x : a) x = z(rng);
        for (auto& x : b) x = 2 * z(rng);
        auto ha = build_histogram(a, m), hb = build_histogram(b, m);
        SvgStyle style;
        style.metadata = "config: {\"x\": \"a--b\"}";
        auto svg = render_histogram_svg(ha, hb, "A & B <before/after>", style);
        CHECK_MESSAGE(xml_problem(svg).empty(), xml_problem(svg));
        CHECK(count_of(svg, "class=\"bar\"") == 2 * m);
        CHECK(svg.find(style.before_color) != std::string::npos);
        CHECK(svg.find(style.after_color) != std::string::npos);
        CHECK(svg.find("A &amp; B &lt;before/after&gt;") != std::string::npos);
        CHECK(svg.find("probability") != std::string::npos);
        CHECK(svg.find("return") != std::string::npos);
        CHECK(count_of(render_histogram_svg(ha, std::nullopt, "one"), "class=\"bar\"") == m);
    }
}

TEST_CASE("render_scan_plot") {
    WindowScanResult one{"IDX", Side::before, {{20, {2.5, LogBase::e}}}, {}};
    auto single = render_scan_plot({one}, "single");
    CHECK(xml_problem(single).empty());
    CHECK(count_of(single, "<polyline") == 0);
    CHECK(count_of(single, "class=\"marker\"") == 1);

    WindowScanResult before{"IDX", Side::before, {{20, {2.1, LogBase::e}}, {30, {2.3, LogBase::e}}, {40, {2.4, LogBase::e}}}, {}};
    WindowScanResult after{"IDX", Side::after, {{20, {2.6, LogBase::e}}, {30, {2.5, LogBase::e}}}, {}};
    auto both = render_scan_plot({before, after}, "both");
    CHECK(xml_problem(both).empty());
    CHECK(count_of(both, "<polyline") == 2);
    CHECK(count_of(both, "stroke-dasharray") >= 1);
    CHECK(both.find("data-side=\"before\"") != std::string::npos);
    CHECK(both.find("data-side=\"after\"") != std::string::npos);
    CHECK(both.find("IDX before") != std::string::npos);
    CHECK(both.find("IDX after") != std::string::npos);

    double lo = attr(both, "data-y-min"), hi = attr(both, "data-y-max");
    CHECK(lo == doctest::Approx(2.1 - 0.05 * 0.5));
    CHECK(hi == doctest::Approx(2.6 + 0.05 * 0.5));

    CHECK_THROWS_AS(render_scan_plot({}, "none"), EmptyScan);
    CHECK_THROWS_AS(render_scan_plot({WindowScanResult{}}, "none"), EmptyScan);
}

TEST_CASE("sha256_hex known vectors") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("write_report_bundle: manifest hashes verify and output is deterministic") {
    ReportBundle bundle;
    bundle.table = mercator_table();
    bundle.histograms["MRC"].before = build_histogram(std::vector<double>{-0.02, -0.01, 0.01, 0.02}, 2);
    bundle.histograms["MRC"].after = build_histogram(std::vector<double>{-0.03, -0.01, 0.01, 0.04}, 2);
    bundle.scans.push_back({"IDX", Side::before, {{20, {2.1, LogBase::e}}, {30, {2.2, LogBase::e}}}, {}});
    bundle.config_echo = {{"command", "analyze"}, {"settings", {{"bins", "20"}}}};

    auto dir1 = scratch("a"), dir2 = scratch("b");
    auto m1 = write_report_bundle(bundle, dir1);
    auto m2 = write_report_bundle(bundle, dir2);
    CHECK(m1.files.size() >= 3);
    for (const auto& f : m1.files) {
        auto content = slurp(dir1 / f.path);
        CHECK(content.size() == f.bytes);
        CHECK(sha256_hex(content) == f.sha256);
    }
    CHECK(m1.to_json() == m2.to_json());
    CHECK(slurp(dir1 / "manifest.json") == slurp(dir2 / "manifest.json"));
    auto manifest = json::parse(slurp(dir1 / "manifest.json"));
    CHECK(manifest["schema_version"] == manifest_schema_version);

    for (auto name : {"table.txt", "table.csv", "table.json", "config.json", "histograms/MRC.svg",
                      "histograms/MRC_before.csv", "histograms/MRC_after.csv", "scan.svg", "scan.csv"})
        CHECK_MESSAGE(fs::exists(dir1 / name), name);
    CHECK(slurp(dir1 / "scan.svg").find("<!-- config: ") != std::string::npos);
    fs::remove_all(dir1);
    fs::remove_all(dir2);
}

TEST_CASE("write_report_bundle: unwritable destination raises IoError") {
    auto blocker = scratch("blocker");
    { std::ofstream(blocker) << "not a directory"; }
    ReportBundle bundle;
    CHECK_THROWS_AS(write_report_bundle(bundle, blocker / "out"), IoError);
    fs::remove(blocker);
}
