#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "entroshock/event_study.hpp"
#include "entroshock/measures.hpp"

namespace entroshock {

inline constexpr int manifest_schema_version = 1;

enum class TableFormat { text, csv, json };

TableFormat parse_table_format(std::string_view s);

// Fixed-point with `decimals` digits; "-" for an absent value.
std::string format_fixed(double value, int decimals = 3);

// Table-1 style rendering: std, entropy and percentages with three decimals. The JSON
// form carries full-precision values next to the rounded display strings.
std::string render_table(const ComparisonTable& table, TableFormat format);
nlohmann::json table_json(const ComparisonTable& table);

struct SvgStyle {
    std::string before_color = "#1f77b4";
    std::string after_color = "#ff7f0e";
    std::string metadata;  // embedded as an XML comment
};

inline constexpr int svg_width = 960;
inline constexpr int svg_height = 540;

// Bars are <rect class="bar">, one per bin (empty bins get zero height). With an overlay
// the first histogram is drawn in the before color and the overlay in the after color.
std::string render_histogram_svg(const Histogram& h, const std::optional<Histogram>& overlay, const std::string& title,
                                 const SvgStyle& style = {});

// One polyline per scan with two or more points, a marker per point. Throws EmptyScan
// unless some scan has a point. The y-axis spans [min, max] entropy padded by 5% of the range.
std::string render_scan_plot(const std::vector<WindowScanResult>& scans, const std::string& title,
                             const SvgStyle& style = {});

std::string scan_csv(const std::vector<WindowScanResult>& scans);

struct SideHistograms {
    std::optional<Histogram> before;
    std::optional<Histogram> after;
};

struct ReportBundle {
    std::optional<ComparisonTable> table;
    std::map<std::string, SideHistograms> histograms;  // by symbol
    std::vector<WindowScanResult> scans;
    nlohmann::json config_echo = nlohmann::json::object();
};

struct ManifestEntry {
    std::string path;  // relative to the output directory, '/'-separated
    std::string sha256;
    std::uintmax_t bytes = 0;
};

struct Manifest {
    std::vector<ManifestEntry> files;  // sorted by path; excludes manifest.json itself
    nlohmann::json to_json() const;
};

std::string sha256_hex(std::string_view data);

// Writes table.{txt,csv,json} (when a table is present), histograms/<SYMBOL>_<side>.csv,
// histograms/<SYMBOL>.svg, scan.{svg,csv} (when scans are present), config.json and
// manifest.json. Throws IoError on any filesystem failure.
Manifest write_report_bundle(const ReportBundle& bundle, const std::filesystem::path& out_dir);

}  // namespace entroshock
