#include "entroshock/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <openssl/evp.h>

#include "entroshock/error.hpp"

namespace entroshock {

using nlohmann::json;

namespace {

std::string opt_fixed(const std::optional<double>& v, int decimals = 3) {
    return v ? format_fixed(*v, decimals) : "-";
}

std::optional<double> std_of(const std::optional<MeasureSet>& m) {
    return m ? std::optional<double>(m->std) : std::nullopt;
}

std::optional<double> entropy_of(const std::optional<MeasureSet>& m) {
    return m ? std::optional<double>(m->entropy.value) : std::nullopt;
}

std::string group_name(const ComparisonRow& row) { return row.group ? to_string(*row.group) : "index"; }

std::string join_flags(const std::vector<std::string>& flags, char sep) {
    std::string out;
    for (const auto& f : flags) {
        if (!out.empty()) out += sep;
        out += f;
    }
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<const ComparisonRow*> display_rows(const ComparisonTable& t) {
    std::vector<const ComparisonRow*> rows;
    for (const auto& r : t.rows) rows.push_back(&r);
    if (!t.index_row.symbol.empty()) rows.push_back(&t.index_row);
    return rows;
}

json measure_json(const std::optional<MeasureSet>& m) {
    if (!m) return nullptr;
    return {{"std", m->std},
            {"entropy", m->entropy.value},
            {"unit", m->entropy.unit()},
            {"n", m->n},
            {"m", m->m},
            {"max_entropy", m->max_entropy},
            {"display", {{"std", format_fixed(m->std)}, {"entropy", format_fixed(m->entropy.value)}}}};
}

json pct_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json row_json(const ComparisonRow& r) {
    return {{"symbol", r.symbol},
            {"name", r.full_name},
            {"group", group_name(r)},
            {"before", measure_json(r.before)},
            {"after", measure_json(r.after)},
            {"std_pct_diff", pct_json(r.std_pct_diff)},
            {"entropy_pct_diff", pct_json(r.entropy_pct_diff)},
            {"display",
             {{"std_pct_diff", opt_fixed(r.std_pct_diff)}, {"entropy_pct_diff", opt_fixed(r.entropy_pct_diff)}}},
            {"flags", r.flags}};
}

std::string render_text(const ComparisonTable& t) {
    const auto& c = t.config;
    std::string out;
    char buf[512];
    std::snprintf(buf, sizeof buf, "event date %s, span %s, %zu bins, entropy in %s, %s returns\n\n",
                  c.event_date.iso().c_str(), c.span.str().c_str(), c.m, unit_name(c.base), to_string(c.mode));
    out += buf;
    std::snprintf(buf, sizeof buf, "%-16s %-7s %10s %10s %10s %10s %10s %10s  %s\n", "Name", "Symbol", "Std bef",
                  "Std aft", "Std %diff", "H bef", "H aft", "H %diff", "Flags");
    out += buf;
    std::optional<Group> last_group;
    bool first = true;
    for (const auto* r : display_rows(t)) {
        if (!first && r->group != last_group) out += std::string(100, '-') + "\n";
        first = false;
        last_group = r->group;
        auto pct = [](const std::optional<double>& v) { return v ? format_fixed(*v) + " %" : std::string("-"); };
        std::snprintf(buf, sizeof buf, "%-16s %-7s %10s %10s %10s %10s %10s %10s  %s\n", r->full_name.c_str(),
                      r->symbol.c_str(), opt_fixed(std_of(r->before)).c_str(), opt_fixed(std_of(r->after)).c_str(),
                      pct(r->std_pct_diff).c_str(), opt_fixed(entropy_of(r->before)).c_str(),
                      opt_fixed(entropy_of(r->after)).c_str(), pct(r->entropy_pct_diff).c_str(),
                      join_flags(r->flags, ',').c_str());
        out += buf;
    }
    return out;
}

std::string render_csv(const ComparisonTable& t) {
    std::string out =
        "symbol,name,std_before,std_after,std_pct_diff,entropy_before,entropy_after,entropy_pct_diff,group,flags\n";
    for (const auto* r : display_rows(t)) {
        out += csv_field(r->symbol) + ',' + csv_field(r->full_name) + ',' + opt_fixed(std_of(r->before)) + ',' +
               opt_fixed(std_of(r->after)) + ',' + opt_fixed(r->std_pct_diff) + ',' +
               opt_fixed(entropy_of(r->before)) + ',' + opt_fixed(entropy_of(r->after)) + ',' +
               opt_fixed(r->entropy_pct_diff) + ',' + group_name(*r) + ',' + csv_field(join_flags(r->flags, ';')) +
               '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// SVG

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string comment_safe(std::string s) {
    for (auto pos = s.find("--"); pos != std::string::npos; pos = s.find("--", pos)) s.replace(pos, 2, "- -");
    if (!s.empty() && s.back() == '-') s += ' ';
    return s;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", std::fabs(v) < 1e-12 ? 0.0 : v);
    return buf;
}

// Plot area inside the 960x540 canvas.
constexpr double left = 80, right = 930, top = 60, bottom = 470;

struct Axis {
    double lo, hi;
    double to_x(double v) const { return left + (v - lo) / (hi - lo) * (right - left); }
    double to_y(double v) const { return bottom - (v - lo) / (hi - lo) * (bottom - top); }
};

std::string svg_open(const std::string& title, const SvgStyle& style) {
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(svg_width) + "\" height=\"" +
           std::to_string(svg_height) + "\" viewBox=\"0 0 " + std::to_string(svg_width) + " " +
           std::to_string(svg_height) + "\">\n";
    if (!style.metadata.empty()) out += "<!-- " + comment_safe(style.metadata) + " -->\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(svg_width) + "\" height=\"" + std::to_string(svg_height) +
           "\" fill=\"white\"/>\n";
    out += "<text class=\"title\" x=\"" + num(svg_width / 2.0) +
           "\" y=\"32\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">" + xml_escape(title) +
           "</text>\n";
    return out;
}

std::string axes(const Axis& x, const Axis& y, const std::string& x_label, const std::string& y_label, int ticks) {
    std::string out = "<g class=\"axes\" stroke=\"black\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out += "<line x1=\"" + num(left) + "\" y1=\"" + num(bottom) + "\" x2=\"" + num(right) + "\" y2=\"" + num(bottom) +
           "\"/>\n";
    out += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\"" + num(bottom) +
           "\"/>\n";
    for (int i = 0; i <= ticks; ++i) {
        double fx = x.lo + (x.hi - x.lo) * i / ticks;
        double px = left + (right - left) * i / ticks;
        out += "<line x1=\"" + num(px) + "\" y1=\"" + num(bottom) + "\" x2=\"" + num(px) + "\" y2=\"" +
               num(bottom + 5) + "\"/>";
        out += "<text x=\"" + num(px) + "\" y=\"" + num(bottom + 20) + "\" text-anchor=\"middle\" stroke=\"none\">" +
               tick_label(fx) + "</text>\n";
        double fy = y.lo + (y.hi - y.lo) * i / ticks;
        double py = bottom - (bottom - top) * i / ticks;
        out += "<line x1=\"" + num(left - 5) + "\" y1=\"" + num(py) + "\" x2=\"" + num(left) + "\" y2=\"" + num(py) +
               "\"/>";
        out += "<text x=\"" + num(left - 8) + "\" y=\"" + num(py + 4) + "\" text-anchor=\"end\" stroke=\"none\">" +
               tick_label(fy) + "</text>\n";
    }
    out += "<text class=\"x-label\" x=\"" + num((left + right) / 2) + "\" y=\"" + num(bottom + 45) +
           "\" text-anchor=\"middle\" stroke=\"none\">" + xml_escape(x_label) + "</text>\n";
    out += "<text class=\"y-label\" x=\"20\" y=\"" + num((top + bottom) / 2) +
           "\" text-anchor=\"middle\" stroke=\"none\" transform=\"rotate(-90 20 " + num((top + bottom) / 2) + ")\">" +
           xml_escape(y_label) + "</text>\n";
    out += "</g>\n";
    return out;
}

std::string legend_entry(int slot, const std::string& color, const std::string& label, bool dashed) {
    double y = top + 10 + 22.0 * slot;
    std::string out = "<line x1=\"" + num(right - 150) + "\" y1=\"" + num(y) + "\" x2=\"" + num(right - 120) +
                      "\" y2=\"" + num(y) + "\" stroke=\"" + color + "\" stroke-width=\"6\"" +
                      (dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>";
    out += "<text x=\"" + num(right - 112) + "\" y=\"" + num(y + 4) +
           "\" font-family=\"sans-serif\" font-size=\"13\">" + xml_escape(label) + "</text>\n";
    return out;
}

std::string bars(const Histogram& h, const Axis& x, const Axis& y, const std::string& color, const char* series) {
    std::string out = "<g class=\"histogram\" data-series=\"" + std::string(series) + "\" fill=\"" + color +
                      "\" fill-opacity=\"0.6\" stroke=\"" + color + "\">\n";
    for (std::size_t k = 0; k < h.bins(); ++k) {
        double lo = h.edges[k], hi = h.edges[k + 1];
        if (h.degenerate()) {
            double pad = (x.hi - x.lo) / 20.0;
            lo -= pad;
            hi += pad;
        }
        double x0 = x.to_x(lo), x1 = x.to_x(hi);
        double y0 = y.to_y(h.probabilities[k]);
        out += "<rect class=\"bar\" data-bin=\"" + std::to_string(k) + "\" data-count=\"" +
               std::to_string(h.counts[k]) + "\" x=\"" + num(x0) + "\" y=\"" + num(y0) + "\" width=\"" +
               num(std::max(0.0, x1 - x0)) + "\" height=\"" + num(bottom - y0) + "\"/>\n";
    }
    out += "</g>\n";
    return out;
}

// Symbols end up in file names.
std::string file_stem(const std::string& symbol) {
    std::string out;
    for (unsigned char c : symbol) out += (std::isalnum(c) || c == '-' || c == '_' || c == '.') ? char(c) : '_';
    if (out.empty() || out == "." || out == "..") out = "_" + out;
    return out;
}

}  // namespace

TableFormat parse_table_format(std::string_view s) {
    if (s == "text" || s == "txt") return TableFormat::text;
    if (s == "csv") return TableFormat::csv;
    if (s == "json") return TableFormat::json;
    throw ParseError("unknown table format '" + std::string(s) + "' (expected text, csv or json)");
}

std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

json table_json(const ComparisonTable& t) {
    json rows = json::array();
    for (const auto& r : t.rows) rows.push_back(row_json(r));
    return {{"schema_version", manifest_schema_version},
            {"config",
             {{"event_date", t.config.event_date.iso()},
              {"span", t.config.span.str()},
              {"bins", t.config.m},
              {"base", to_string(t.config.base)},
              {"unit", unit_name(t.config.base)},
              {"return_mode", to_string(t.config.mode)}}},
            {"index", t.index_row.symbol.empty() ? json(nullptr) : row_json(t.index_row)},
            {"rows", rows}};
}

std::string render_table(const ComparisonTable& table, TableFormat format) {
    switch (format) {
        case TableFormat::text: return render_text(table);
        case TableFormat::csv: return render_csv(table);
        case TableFormat::json: return table_json(table).dump(2) + "\n";
    }
    return {};
}

std::string render_histogram_svg(const Histogram& h, const std::optional<Histogram>& overlay, const std::string& title,
                                 const SvgStyle& style) {
    double xlo = h.edges.front(), xhi = h.edges.back();
    double pmax = *std::max_element(h.probabilities.begin(), h.probabilities.end());
    if (overlay) {
        xlo = std::min(xlo, overlay->edges.front());
        xhi = std::max(xhi, overlay->edges.back());
        pmax = std::max(pmax, *std::max_element(overlay->probabilities.begin(), overlay->probabilities.end()));
    }
    if (xhi == xlo) {
        double pad = xlo == 0.0 ? 1.0 : std::fabs(xlo) * 0.5;
        xlo -= pad;
        xhi += pad;
    }
    Axis x{xlo, xhi};
    Axis y{0.0, pmax > 0 ? pmax : 1.0};

    std::string out = svg_open(title, style);
    out += bars(h, x, y, style.before_color, overlay ? "before" : "sample");
    if (overlay) out += bars(*overlay, x, y, style.after_color, "after");
    out += axes(x, y, "return", "probability", 5);
    if (overlay) {
        out += "<g class=\"legend\">\n";
        out += legend_entry(0, style.before_color, "before", false);
        out += legend_entry(1, style.after_color, "after", false);
        out += "</g>\n";
    }
    out += "</svg>\n";
    return out;
}

std::string render_scan_plot(const std::vector<WindowScanResult>& scans, const std::string& title,
                             const SvgStyle& style) {
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& s : scans)
        for (const auto& p : s.points) {
            xmin = std::min(xmin, double(p.window_length));
            xmax = std::max(xmax, double(p.window_length));
            ymin = std::min(ymin, p.entropy.value);
            ymax = std::max(ymax, p.entropy.value);
        }
    if (!(xmin <= xmax)) throw EmptyScan("window scan plot needs at least one point");

    double pad = 0.05 * (ymax - ymin);
    if (pad == 0.0) pad = ymax == 0.0 ? 0.05 : 0.05 * std::fabs(ymax);
    Axis y{ymin - pad, ymax + pad};
    Axis x{xmin, xmax};
    if (xmin == xmax) x = {xmin - 1.0, xmax + 1.0};

    std::string out = svg_open(title, style);
    char buf[160];
    std::snprintf(buf, sizeof buf, "<g class=\"plot-area\" data-y-min=\"%.17g\" data-y-max=\"%.17g\">\n", y.lo, y.hi);
    out += buf;
    int slot = 0;
    std::string legend = "<g class=\"legend\">\n";
    for (const auto& s : scans) {
        if (s.points.empty()) continue;
        bool after = s.side == Side::after;
        const auto& color = after ? style.after_color : style.before_color;
        std::string label = (s.symbol.empty() ? std::string() : s.symbol + " ") + to_string(s.side);
        if (s.points.size() >= 2) {
            out += "<polyline class=\"scan\" data-side=\"" + std::string(to_string(s.side)) +
                   "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\"" +
                   (after ? " stroke-dasharray=\"6 4\"" : "") + " points=\"";
            for (std::size_t i = 0; i < s.points.size(); ++i) {
                if (i) out += ' ';
                out += num(x.to_x(double(s.points[i].window_length))) + "," + num(y.to_y(s.points[i].entropy.value));
            }
            out += "\"/>\n";
        }
        for (const auto& p : s.points)
            out += "<circle class=\"marker\" data-side=\"" + std::string(to_string(s.side)) + "\" cx=\"" +
                   num(x.to_x(double(p.window_length))) + "\" cy=\"" + num(y.to_y(p.entropy.value)) +
                   "\" r=\"4\" fill=\"" + color + "\"/>\n";
        legend += legend_entry(slot++, color, label, after);
    }
    out += "</g>\n";
    out += legend + "</g>\n";
    std::string unit = "entropy";
    for (const auto& s : scans)
        if (!s.points.empty()) {
            unit += std::string(" (") + s.points.front().entropy.unit() + ")";
            break;
        }
    out += axes(x, y, "window length (trading days)", unit, 5);
    out += "</svg>\n";
    return out;
}

std::string scan_csv(const std::vector<WindowScanResult>& scans) {
    std::string out = "symbol,side,window_length,entropy,unit\n";
    char buf[64];
    for (const auto& s : scans)
        for (const auto& p : s.points) {
            std::snprintf(buf, sizeof buf, "%.17g", p.entropy.value);
            out += csv_field(s.symbol) + ',' + to_string(s.side) + ',' + std::to_string(p.window_length) + ',' + buf +
                   ',' + p.entropy.unit() + '\n';
        }
    return out;
}

// ---------------------------------------------------------------------------

json Manifest::to_json() const {
    json files_json = json::array();
    for (const auto& f : files) files_json.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
    return {{"schema_version", manifest_schema_version}, {"files", files_json}};
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw Error("SHA-256 computation failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

Manifest write_report_bundle(const ReportBundle& bundle, const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    std::map<std::string, std::string> files;  // relative path -> content

    SvgStyle style;
    style.metadata = "config: " + bundle.config_echo.dump();

    files["config.json"] = bundle.config_echo.dump(2) + "\n";
    if (bundle.table) {
        files["table.txt"] = render_table(*bundle.table, TableFormat::text);
        files["table.csv"] = render_table(*bundle.table, TableFormat::csv);
        files["table.json"] = render_table(*bundle.table, TableFormat::json);
    }
    for (const auto& [raw_symbol, sides] : bundle.histograms) {
        auto symbol = file_stem(raw_symbol);
        if (sides.before) files["histograms/" + symbol + "_before.csv"] = histogram_csv(*sides.before);
        if (sides.after) files["histograms/" + symbol + "_after.csv"] = histogram_csv(*sides.after);
        const auto* base = sides.before ? &*sides.before : sides.after ? &*sides.after : nullptr;
        if (!base) continue;
        std::optional<Histogram> overlay;
        if (sides.before && sides.after) overlay = sides.after;
        std::string title = raw_symbol + " return distribution";
        if (!overlay) title += sides.before ? " (before)" : " (after)";
        files["histograms/" + symbol + ".svg"] = render_histogram_svg(*base, overlay, title, style);
    }
    bool any_point = std::any_of(bundle.scans.begin(), bundle.scans.end(), [](const auto& s) { return !s.points.empty(); });
    if (any_point) {
        files["scan.svg"] = render_scan_plot(bundle.scans, "Entropy by window length", style);
        files["scan.csv"] = scan_csv(bundle.scans);
    }

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError(out_dir.string(), ec.message());

    Manifest manifest;
    for (const auto& [rel, content] : files) {
        auto path = out_dir / fs::path(rel);
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw IoError(path.parent_path().string(), ec.message());
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError(path.string(), "cannot open for writing");
        out.write(content.data(), std::streamsize(content.size()));
        out.close();
        if (!out) throw IoError(path.string(), "write failed");
        manifest.files.push_back({rel, sha256_hex(content), content.size()});
    }

    auto path = out_dir / "manifest.json";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    out << manifest.to_json().dump(2) << "\n";
    out.close();
    if (!out) throw IoError(path.string(), "write failed");
    return manifest;
}

}  // namespace entroshock
