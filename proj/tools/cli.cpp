#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "entroshock/event_study.hpp"
#include "entroshock/fetch.hpp"
#include "entroshock/ingest.hpp"
#include "entroshock/report.hpp"
#include "entroshock/synth.hpp"

namespace entroshock::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class UsageError : public Error {
public:
    using Error::Error;
};

struct SettingDef {
    std::string key;
    std::string default_value;  // empty = no default
    std::string help;
    bool echo = true;  // part of the reproducibility echo
};

std::vector<SettingDef> study_settings() {
    return {
        {"event-date", "", "event date, YYYY-MM-DD or MM/DD/YYYY"},
        {"span", "1y", "window length on each side of the event (e.g. 1y, 6m, 90d)"},
        {"bins", "20", "histogram bin count M"},
        {"base", "e", "entropy log base: e (nats), 2 (shannons), 10 (hartleys)"},
        {"return-mode", "log", "log or simple returns"},
    };
}

struct Command {
    std::string name;
    std::string description;
    std::vector<SettingDef> settings;
};

std::vector<Command> commands() {
    auto with = [](std::vector<SettingDef> base, std::vector<SettingDef> extra) {
        base.insert(base.end(), extra.begin(), extra.end());
        return base;
    };
    return {
        {"analyze", "before/after comparison table, histograms and index window scan for a universe",
         with(study_settings(),
              {{"data", "", "directory of <SYMBOL>.csv price files"},
               {"universe", "", "universe file (default: bundled WIG20 universe)"},
               {"endpoint", "", "fetch prices from this URL template instead of --data", true},
               {"scan-lengths", "", "window lengths for the index scan, e.g. 20,30,40 or 20:250:10"},
               {"jobs", "1", "parallel workers", false},
               {"out", "", "output directory", false}})},
        {"scan", "entropy over windows of increasing length anchored at the event",
         with(study_settings(),
              {{"input", "", "price CSV file"},
               {"symbol", "", "symbol name (default: input file stem)"},
               {"lengths", "", "window lengths in trading days, e.g. 20,30,40 or 20:250:10"},
               {"side", "both", "before, after or both"},
               {"out", "", "output directory", false}})},
        {"hist", "before/after return histograms for one price series",
         with(study_settings(),
              {{"input", "", "price CSV file"},
               {"symbol", "", "symbol name (default: input file stem)"},
               {"out", "", "output directory", false}})},
        {"synth", "generate a synthetic price series as CSV",
         {{"kind", "gaussian", "gaussian or regime_switch"},
          {"n", "251", "gaussian: number of returns"},
          {"n1", "252", "regime_switch: trading days in the first regime"},
          {"n2", "252", "regime_switch: trading days in the second regime"},
          {"mu", "0", "mean daily return"},
          {"sigma", "0.02", "gaussian: return standard deviation"},
          {"sigma1", "0.01", "regime_switch: first-regime standard deviation"},
          {"sigma2", "0.02", "regime_switch: second-regime standard deviation"},
          {"seed", "1", "64-bit generator seed"},
          {"start-date", "2021-01-04", "first trading day"},
          {"p0", "100", "initial price"},
          {"symbol", "SYN", "symbol name"},
          {"out", "-", "output CSV file, - for stdout", false}}},
        {"fetch", "download price CSVs from a configured HTTP endpoint",
         {{"endpoint", "", "URL template with {symbol}, {start}, {end}"},
          {"symbols", "", "comma-separated symbols (default: universe symbols and index)"},
          {"universe", "", "universe file (default: bundled WIG20 universe)"},
          {"start", "", "first date"},
          {"end", "", "last date"},
          {"event-date", "", "alternative to --start/--end: event date +/- --span"},
          {"span", "1y", "window length on each side of the event"},
          {"retries", "4", "attempts per symbol"},
          {"jobs", "4", "concurrent requests", false},
          {"out", "", "output directory", false}}},
    };
}

std::string env_name(const std::string& key) {
    std::string out = env_prefix;
    for (char c : key) out += c == '-' ? '_' : char(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

// flags > environment > settings file > defaults
class Settings {
public:
    Settings(const Command& cmd, std::map<std::string, std::string> flags, std::map<std::string, std::string> file)
        : cmd_(cmd), flags_(std::move(flags)), file_(std::move(file)) {}

    std::optional<std::string> get(const std::string& key) const {
        if (auto it = flags_.find(key); it != flags_.end()) return it->second;
        if (const char* env = std::getenv(env_name(key).c_str()); env && *env) return std::string(env);
        if (auto it = file_.find(key); it != file_.end()) return it->second;
        for (const auto& d : cmd_.settings)
            if (d.key == key && !d.default_value.empty()) return d.default_value;
        return std::nullopt;
    }

    bool from_flag(const std::string& key) const { return flags_.count(key) > 0; }

    std::string required(const std::string& key) const {
        auto v = get(key);
        if (!v || v->empty()) throw UsageError("missing required --" + key + " (or " + env_name(key) + ")");
        return *v;
    }

    template <class Fn>
    auto typed(const std::string& key, Fn&& parse) const -> decltype(parse(std::string())) {
        auto v = required(key);
        try {
            return parse(v);
        } catch (const std::exception& e) {
            throw UsageError("invalid --" + key + " '" + v + "': " + e.what());
        }
    }

    Date date(const std::string& key) const { return typed(key, [](const std::string& s) { return Date::parse(s); }); }

    std::size_t count(const std::string& key) const {
        return typed(key, [](const std::string& s) {
            std::size_t pos = 0;
            long long v = std::stoll(s, &pos);
            if (pos != s.size() || v < 0) throw std::invalid_argument("expected a non-negative integer");
            return std::size_t(v);
        });
    }

    double real(const std::string& key) const {
        return typed(key, [](const std::string& s) {
            std::size_t pos = 0;
            double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument("expected a number");
            return v;
        });
    }

    StudyConfig study() const {
        StudyConfig c;
        c.event_date = date("event-date");
        c.span = typed("span", [](const std::string& s) { return CalendarSpan::parse(s); });
        c.m = count("bins");
        if (c.m == 0) throw UsageError("--bins must be at least 1");
        c.base = typed("base", [](const std::string& s) { return parse_log_base(s); });
        c.mode = typed("return-mode", [](const std::string& s) { return parse_return_mode(s); });
        return c;
    }

    // Resolved values for every echoed setting, dates normalised to ISO-8601.
    json echo() const {
        json settings = json::object();
        for (const auto& d : cmd_.settings) {
            if (!d.echo) continue;
            auto v = get(d.key);
            if (!v || v->empty()) continue;
            bool is_date = d.key.find("date") != std::string::npos || d.key == "start" || d.key == "end";
            if (auto dt = Date::try_parse(*v); dt && is_date) *v = dt->iso();
            settings[d.key] = *v;
        }
        return {{"command", cmd_.name}, {"settings", settings}};
    }

private:
    const Command& cmd_;
    std::map<std::string, std::string> flags_;
    std::map<std::string, std::string> file_;
};

std::vector<std::size_t> parse_lengths(const std::string& s) {
    std::vector<std::size_t> out;
    if (auto c1 = s.find(':'); c1 != std::string::npos) {
        auto c2 = s.find(':', c1 + 1);
        std::size_t first = std::stoul(s.substr(0, c1));
        std::size_t last = std::stoul(s.substr(c1 + 1, c2 == std::string::npos ? std::string::npos : c2 - c1 - 1));
        std::size_t step = c2 == std::string::npos ? 10 : std::stoul(s.substr(c2 + 1));
        if (step == 0) throw std::invalid_argument("step must be positive");
        for (auto l = first; l <= last; l += step) out.push_back(l);
        return out;
    }
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(std::stoul(tok));
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
}

std::vector<std::string> parse_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(tok);
    return out;
}

std::string upper(std::string s) {
    for (auto& c : s) c = char(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

PriceSeries load_series_file(const fs::path& path, const std::string& symbol) {
    try {
        return load_price_csv(path, symbol);
    } catch (const IoError&) {
        throw;
    } catch (const Error& e) {
        throw Error(path.string() + " (" + symbol + "): " + e.what());
    }
}

PriceStore load_data_dir(const fs::path& dir, const AssetUniverse& universe, std::ostream& err) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw IoError(dir.string(), "not a directory");
    std::map<std::string, fs::path> by_symbol;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        auto ext = entry.path().extension().string();
        for (auto& c : ext) c = char(std::tolower(static_cast<unsigned char>(c)));
        if (ext != ".csv") continue;
        by_symbol[upper(entry.path().stem().string())] = entry.path();
    }
    std::vector<std::string> wanted{universe.index_symbol};
    for (const auto& a : universe.assets) wanted.push_back(a.symbol);

    PriceStore store;
    for (const auto& symbol : wanted) {
        auto it = by_symbol.find(upper(symbol));
        if (it == by_symbol.end()) {
            err << "warning: no price file for " << symbol << " in " << dir.string() << "\n";
            continue;
        }
        store.emplace(symbol, load_series_file(it->second, symbol));
    }
    return store;
}

AssetUniverse universe_from(const Settings& s) {
    auto path = s.get("universe");
    if (!path || path->empty()) return default_universe();
    try {
        return load_universe_file(*path);
    } catch (const IoError&) {
        throw;
    } catch (const Error& e) {
        throw Error(*path + ": " + e.what());
    }
}

std::string symbol_for(const Settings& s, const fs::path& input) {
    auto sym = s.get("symbol");
    return sym && !sym->empty() ? *sym : input.stem().string();
}

SideHistograms histograms_for(const PriceSeries& prices, const StudyConfig& c) {
    SideHistograms h;
    for (Side side : {Side::before, Side::after}) {
        try {
            auto r = window_returns(prices, c.event_date, c.span, side, c.mode);
            (side == Side::before ? h.before : h.after) = build_histogram(r.values(), c.m);
        } catch (const InsufficientData&) {
        }
    }
    return h;
}

void print_manifest(const Manifest& m, const fs::path& out_dir, std::ostream& out) {
    out << "wrote " << m.files.size() + 1 << " files to " << out_dir.string() << "\n";
}

int cmd_analyze(const Settings& s, std::ostream& out, std::ostream& err) {
    auto config = s.study();
    fs::path out_dir = s.required("out");
    auto jobs = unsigned(std::max<std::size_t>(1, s.count("jobs")));
    auto universe = universe_from(s);

    PriceStore store;
    auto data = s.get("data");
    if (data && !data->empty()) {
        store = load_data_dir(*data, universe, err);
    } else if (s.from_flag("endpoint")) {
        std::vector<std::string> symbols{universe.index_symbol};
        for (const auto& a : universe.assets) symbols.push_back(a.symbol);
        auto start = subtract_span(config.event_date, config.span);
        auto end = add_span(config.event_date, config.span) - std::chrono::days{1};
        for (auto& [symbol, body] : fetch_many(s.required("endpoint"), symbols, start, end, jobs)) {
            try {
                store.emplace(symbol, parse_price_csv(body, symbol));
            } catch (const Error& e) {
                err << "warning: " << symbol << ": " << e.what() << "\n";
            }
        }
    } else {
        throw UsageError("analyze needs --data DIR (or an explicit --endpoint URL template)");
    }

    ReportBundle bundle;
    bundle.table = compare_universe(universe, store, config, jobs);
    for (const auto& [symbol, prices] : store) bundle.histograms[symbol] = histograms_for(prices, config);

    const auto& index = store.at(universe.index_symbol);
    auto explicit_lengths = s.get("scan-lengths");
    for (Side side : {Side::before, Side::after}) {
        auto lengths = explicit_lengths && !explicit_lengths->empty()
                           ? s.typed("scan-lengths", parse_lengths)
                           : default_scan_lengths(window_size(index, config.event_date, config.span, side));
        try {
            auto scan = window_scan(index, config.event_date, lengths, side, config.m, config.base, config.mode);
            for (auto l : scan.omitted)
                err << "warning: " << index.symbol() << " " << to_string(side) << " window " << l
                    << " exceeds available data\n";
            bundle.scans.push_back(std::move(scan));
        } catch (const NoWindows& e) {
            err << "warning: " << e.what() << "\n";
        }
    }
    bundle.config_echo = s.echo();

    for (const auto& row : bundle.table->rows)
        for (const auto& f : row.flags) err << "note: " << row.symbol << ": " << f << "\n";

    auto manifest = write_report_bundle(bundle, out_dir);
    out << render_table(*bundle.table, TableFormat::text);
    print_manifest(manifest, out_dir, out);
    return 0;
}

int cmd_scan(const Settings& s, std::ostream& out, std::ostream& err) {
    auto config = s.study();
    fs::path input = s.required("input");
    fs::path out_dir = s.required("out");
    auto prices = load_series_file(input, symbol_for(s, input));
    auto side_opt = s.required("side");
    std::vector<Side> sides;
    if (side_opt == "before" || side_opt == "both") sides.push_back(Side::before);
    if (side_opt == "after" || side_opt == "both") sides.push_back(Side::after);
    if (sides.empty()) throw UsageError("invalid --side '" + side_opt + "' (expected before, after or both)");

    ReportBundle bundle;
    auto explicit_lengths = s.get("lengths");
    for (Side side : sides) {
        auto lengths = explicit_lengths ? s.typed("lengths", parse_lengths)
                                        : default_scan_lengths(window_size(prices, config.event_date, config.span, side));
        auto scan = window_scan(prices, config.event_date, lengths, side, config.m, config.base, config.mode);
        for (auto l : scan.omitted) err << "warning: " << to_string(side) << " window " << l << " omitted\n";
        bundle.scans.push_back(std::move(scan));
    }
    bundle.config_echo = s.echo();
    auto manifest = write_report_bundle(bundle, out_dir);
    out << scan_csv(bundle.scans);
    print_manifest(manifest, out_dir, out);
    return 0;
}

int cmd_hist(const Settings& s, std::ostream& out, std::ostream&) {
    auto config = s.study();
    fs::path input = s.required("input");
    fs::path out_dir = s.required("out");
    auto prices = load_series_file(input, symbol_for(s, input));
    split_at_event(prices, config.event_date, config.span, config.mode);  // both sides must exist

    ReportBundle bundle;
    bundle.histograms[prices.symbol()] = histograms_for(prices, config);
    bundle.config_echo = s.echo();
    auto manifest = write_report_bundle(bundle, out_dir);
    const auto& h = bundle.histograms[prices.symbol()];
    out << "before\n" << histogram_csv(*h.before) << "after\n" << histogram_csv(*h.after);
    print_manifest(manifest, out_dir, out);
    return 0;
}

int cmd_synth(const Settings& s, std::ostream& out, std::ostream&) {
    SynthSpec spec;
    spec.kind = s.typed("kind", [](const std::string& v) { return parse_synth_kind(v); });
    spec.n = s.count("n");
    spec.n1 = s.count("n1");
    spec.n2 = s.count("n2");
    spec.mu = s.real("mu");
    spec.sigma = s.real("sigma");
    spec.sigma1 = s.real("sigma1");
    spec.sigma2 = s.real("sigma2");
    spec.seed = s.typed("seed", [](const std::string& v) {
        std::size_t pos = 0;
        auto x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("expected an integer");
        return std::uint64_t(x);
    });
    spec.start_date = s.date("start-date");
    spec.p0 = s.real("p0");
    spec.symbol = s.required("symbol");

    std::string csv;
    try {
        csv = serialize_price_csv(synth_series(spec));
    } catch (const InvalidSpec& e) {
        throw UsageError(e.what());
    }
    auto dest = s.required("out");
    if (dest == "-") {
        out << csv;
        return 0;
    }
    std::ofstream f(dest, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError(dest, "cannot open for writing");
    f << csv;
    if (!f) throw IoError(dest, "write failed");
    out << "wrote " << dest;
    if (spec.kind == SynthKind::regime_switch) out << " (regime switch on " << regime_switch_event_date(spec).iso() << ")";
    out << "\n";
    return 0;
}

int cmd_fetch(const Settings& s, std::ostream& out, std::ostream&) {
    auto endpoint = s.required("endpoint");
    fs::path out_dir = s.required("out");
    Date start, end;
    if (s.get("start") || s.get("end")) {
        start = s.date("start");
        end = s.date("end");
    } else if (s.get("event-date")) {
        auto event = s.date("event-date");
        auto span = s.typed("span", [](const std::string& v) { return CalendarSpan::parse(v); });
        start = subtract_span(event, span);
        end = add_span(event, span) - std::chrono::days{1};
    } else {
        throw UsageError("fetch needs --start and --end, or --event-date");
    }
    if (end < start) throw UsageError("--start is after --end");

    std::vector<std::string> symbols;
    if (auto list = s.get("symbols"); list && !list->empty()) {
        symbols = parse_list(*list);
    } else {
        auto u = universe_from(s);
        symbols.push_back(u.index_symbol);
        for (const auto& a : u.assets) symbols.push_back(a.symbol);
    }
    FetchOptions opts;
    opts.max_attempts = int(std::max<std::size_t>(1, s.count("retries")));
    auto jobs = unsigned(std::max<std::size_t>(1, s.count("jobs")));
    try {
        expand_endpoint(endpoint, "X", start, end);
    } catch (const TemplateError& e) {
        throw UsageError(std::string("--endpoint: ") + e.what());
    }

    auto bodies = fetch_many(endpoint, symbols, start, end, jobs, opts);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError(out_dir.string(), ec.message());
    for (const auto& [symbol, body] : bodies) {
        try {
            parse_price_csv(body, symbol);
        } catch (const Error& e) {
            throw Error("response for " + symbol + " is not a valid price CSV: " + e.what());
        }
        auto path = out_dir / (symbol + ".csv");
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError(path.string(), "cannot open for writing");
        f << body;
        if (!f) throw IoError(path.string(), "write failed");
        out << "fetched " << symbol << " -> " << path.string() << "\n";
    }
    return 0;
}

}  // namespace

std::map<std::string, std::string> load_settings_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();

    std::map<std::string, std::string> out;
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::exception& e) {
            throw UsageError("config file " + path + ": " + e.what());
        }
        const json& settings = j.contains("settings") ? j["settings"] : j;
        for (auto it = settings.begin(); it != settings.end(); ++it)
            out[it.key()] = it->is_string() ? it->get<std::string>() : it->dump();
        return out;
    }
    std::istringstream lines(text);
    try {
        for (const auto& item : CLI::ConfigINI().from_config(lines)) {
            if (item.inputs.empty()) continue;
            std::string value;
            for (std::size_t i = 0; i < item.inputs.size(); ++i) value += (i ? "," : "") + item.inputs[i];
            out[item.name] = value;
        }
    } catch (const CLI::Error& e) {
        throw UsageError("config file " + path + ": " + e.what());
    }
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const auto cmds = commands();
    CLI::App app{"Entropy and standard-deviation volatility analysis around an event date", "entroshock"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path;
    app.add_option("--config", config_path, "settings file (key = value lines, or a config.json echo)");
    app.footer(std::string("Settings resolve as: flags > environment (") + env_prefix +
               "<FLAG_NAME>, e.g. ENTROSHOCK_EVENT_DATE) > --config file > defaults.");

    std::map<std::string, std::map<std::string, std::string>> values;
    std::map<std::string, CLI::App*> subs;
    for (const auto& c : cmds) {
        auto* sub = app.add_subcommand(c.name, c.description);
        subs[c.name] = sub;
        for (const auto& d : c.settings) {
            auto help = d.help + (d.default_value.empty() ? "" : " [default: " + d.default_value + "]");
            sub->add_option("--" + d.key, values[c.name][d.key], help);
        }
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        const CLI::App* target = &app;
        for (const auto& [name, sub] : subs)
            if (sub->parsed()) target = sub;
        out << target->help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    const Command* cmd = nullptr;
    for (const auto& c : cmds)
        if (subs[c.name]->parsed()) cmd = &c;
    if (!cmd) {
        err << app.help();
        return 2;
    }

    try {
        std::map<std::string, std::string> flags;
        for (const auto& d : cmd->settings)
            if (subs[cmd->name]->count("--" + d.key) > 0) flags[d.key] = values[cmd->name][d.key];
        std::map<std::string, std::string> file;
        if (!config_path.empty()) file = load_settings_file(config_path);
        else if (const char* env = std::getenv((std::string(env_prefix) + "CONFIG").c_str()); env && *env)
            file = load_settings_file(env);
        Settings settings(*cmd, std::move(flags), std::move(file));

        if (cmd->name == "analyze") return cmd_analyze(settings, out, err);
        if (cmd->name == "scan") return cmd_scan(settings, out, err);
        if (cmd->name == "hist") return cmd_hist(settings, out, err);
        if (cmd->name == "synth") return cmd_synth(settings, out, err);
        return cmd_fetch(settings, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << subs[cmd->name]->help();
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace entroshock::cli
