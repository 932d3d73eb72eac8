#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "entroshock/event_study.hpp"
#include "entroshock/ingest.hpp"
#include "entroshock/measures.hpp"
#include "entroshock/report.hpp"
#include "entroshock/returns.hpp"
#include "entroshock/synth.hpp"

namespace py = pybind11;
using namespace entroshock;

namespace {

std::vector<std::string> dates_of(const PriceSeries& s) {
    std::vector<std::string> out;
    for (const auto& p : s.points()) out.push_back(p.date.iso());
    return out;
}

PriceSeries make_series(const std::string& symbol, const std::vector<std::string>& dates,
                        const std::vector<double>& closes) {
    if (dates.size() != closes.size()) throw Error("dates and closes differ in length");
    std::vector<PricePoint> pts;
    for (std::size_t i = 0; i < dates.size(); ++i) pts.push_back({Date::parse(dates[i]), closes[i]});
    return PriceSeries(symbol, std::move(pts));
}

}  // namespace

PYBIND11_MODULE(_entroshock, m) {
    m.doc() = "Binned Shannon entropy and standard deviation of returns around an event date";

    static py::exception<Error> exc(m, "EntroshockError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            exc(e.what());
        }
    });

    py::class_<PriceSeries>(m, "PriceSeries")
        .def(py::init(&make_series), py::arg("symbol"), py::arg("dates"), py::arg("closes"))
        .def_property_readonly("symbol", &PriceSeries::symbol)
        .def_property_readonly("dates", &dates_of)
        .def_property_readonly("closes",
                               [](const PriceSeries& s) {
                                   std::vector<double> v;
                                   for (const auto& p : s.points()) v.push_back(p.close);
                                   return v;
                               })
        .def("__len__", &PriceSeries::size)
        .def("to_csv", &serialize_price_csv)
        .def("slice", [](const PriceSeries& s, const std::string& a, const std::string& b) {
            return slice_by_dates(s, Date::parse(a), Date::parse(b));
        });

    m.def("parse_price_csv", [](const std::string& text, const std::string& symbol) {
        return parse_price_csv(text, symbol);
    }, py::arg("text"), py::arg("symbol"));

    py::class_<ReturnSeries>(m, "ReturnSeries")
        .def_readonly("symbol", &ReturnSeries::symbol)
        .def_property_readonly("n", &ReturnSeries::n)
        .def_property_readonly("values", &ReturnSeries::values)
        .def_property_readonly("dates", [](const ReturnSeries& r) {
            std::vector<std::string> out;
            for (const auto& p : r.points) out.push_back(p.date.iso());
            return out;
        });

    m.def("log_returns", [](const PriceSeries& p, const std::string& mode) {
        return log_returns(p, parse_return_mode(mode));
    }, py::arg("prices"), py::arg("mode") = "log");

    py::class_<Histogram>(m, "Histogram")
        .def_readonly("edges", &Histogram::edges)
        .def_readonly("counts", &Histogram::counts)
        .def_readonly("probabilities", &Histogram::probabilities)
        .def_readonly("n", &Histogram::n)
        .def("to_csv", &histogram_csv);

    py::class_<EntropyValue>(m, "EntropyValue")
        .def_readonly("value", &EntropyValue::value)
        .def_property_readonly("base", [](const EntropyValue& e) { return std::string(to_string(e.base)); })
        .def_property_readonly("unit", [](const EntropyValue& e) { return std::string(e.unit()); })
        .def("__float__", [](const EntropyValue& e) { return e.value; });

    py::class_<MeasureSet>(m, "MeasureSet")
        .def_readonly("std", &MeasureSet::std)
        .def_readonly("entropy", &MeasureSet::entropy)
        .def_readonly("n", &MeasureSet::n)
        .def_readonly("m", &MeasureSet::m)
        .def_readonly("max_entropy", &MeasureSet::max_entropy);

    m.def("build_histogram", [](const std::vector<double>& v, std::size_t bins) { return build_histogram(v, bins); },
          py::arg("values"), py::arg("m") = default_bins);
    m.def("shannon_entropy", [](const Histogram& h, const std::string& base) {
        return shannon_entropy(h, parse_log_base(base));
    }, py::arg("histogram"), py::arg("base") = "e");
    m.def("std_dev", [](const std::vector<double>& v) { return std_dev(v); }, py::arg("values"));
    m.def("pct_difference", &pct_difference, py::arg("a"), py::arg("b"));
    m.def("measure_set", [](const std::vector<double>& v, std::size_t bins, const std::string& base) {
        return measure_set(v, bins, parse_log_base(base));
    }, py::arg("values"), py::arg("m") = default_bins, py::arg("base") = "e");

    py::class_<EventSplit>(m, "EventSplit")
        .def_property_readonly("event_date", [](const EventSplit& s) { return s.event_date.iso(); })
        .def_readonly("before", &EventSplit::before)
        .def_readonly("after", &EventSplit::after)
        .def_readonly("before_short", &EventSplit::before_short)
        .def_readonly("after_short", &EventSplit::after_short);

    m.def("split_at_event", [](const PriceSeries& p, const std::string& event, const std::string& span,
                               const std::string& mode) {
        return split_at_event(p, Date::parse(event), CalendarSpan::parse(span), parse_return_mode(mode));
    }, py::arg("prices"), py::arg("event_date"), py::arg("span") = "1y", py::arg("mode") = "log");

    py::class_<WindowScanResult>(m, "WindowScanResult")
        .def_property_readonly("side", [](const WindowScanResult& r) { return std::string(to_string(r.side)); })
        .def_property_readonly("lengths", [](const WindowScanResult& r) {
            std::vector<std::size_t> v;
            for (const auto& p : r.points) v.push_back(p.window_length);
            return v;
        })
        .def_property_readonly("entropies", [](const WindowScanResult& r) {
            std::vector<double> v;
            for (const auto& p : r.points) v.push_back(p.entropy.value);
            return v;
        })
        .def_readonly("omitted", &WindowScanResult::omitted);

    m.def("window_scan", [](const PriceSeries& p, const std::string& event, const std::vector<std::size_t>& lengths,
                            const std::string& side, std::size_t bins, const std::string& base) {
        Side s = side == "before" ? Side::before : side == "after" ? Side::after
                                                                    : throw Error("side must be before or after");
        return window_scan(p, Date::parse(event), lengths, s, bins, parse_log_base(base));
    }, py::arg("prices"), py::arg("event_date"), py::arg("lengths"), py::arg("side") = "before",
       py::arg("m") = default_bins, py::arg("base") = "e");

    py::class_<ComparisonTable>(m, "ComparisonTable")
        .def("render", [](const ComparisonTable& t, const std::string& fmt) {
            return render_table(t, parse_table_format(fmt));
        }, py::arg("format") = "text")
        .def("to_json", [](const ComparisonTable& t) { return table_json(t).dump(); });

    m.def("compare_universe", [](const std::map<std::string, PriceSeries>& prices, const std::string& event,
                                 const std::optional<std::string>& universe_text, const std::string& span,
                                 std::size_t bins, const std::string& base, unsigned jobs) {
        auto universe = universe_text ? load_universe(*universe_text) : default_universe();
        PriceStore store(prices.begin(), prices.end());
        StudyConfig c;
        c.event_date = Date::parse(event);
        c.span = CalendarSpan::parse(span);
        c.m = bins;
        c.base = parse_log_base(base);
        return compare_universe(universe, store, c, jobs);
    }, py::arg("prices"), py::arg("event_date"), py::arg("universe_text") = py::none(), py::arg("span") = "1y",
       py::arg("m") = default_bins, py::arg("base") = "e", py::arg("jobs") = 1);

    m.def("default_universe_text", [] { return std::string(default_universe_text()); });

    m.def("gaussian_returns", [](std::size_t n, double mu, double sigma, std::uint64_t seed) {
        SynthSpec s;
        s.kind = SynthKind::gaussian;
        s.n = n;
        s.mu = mu;
        s.sigma = sigma;
        s.seed = seed;
        return gaussian_returns(s);
    }, py::arg("n"), py::arg("mu") = 0.0, py::arg("sigma") = 0.02, py::arg("seed") = 1);
    m.def("regime_switch_series", [](std::size_t n1, std::size_t n2, double sigma1, double sigma2, std::uint64_t seed,
                                     const std::string& start, double p0) {
        SynthSpec s;
        s.kind = SynthKind::regime_switch;
        s.n1 = n1;
        s.n2 = n2;
        s.sigma1 = sigma1;
        s.sigma2 = sigma2;
        s.seed = seed;
        s.start_date = Date::parse(start);
        s.p0 = p0;
        return py::make_tuple(regime_switch_series(s), regime_switch_event_date(s).iso());
    }, py::arg("n1") = 252, py::arg("n2") = 252, py::arg("sigma1") = 0.01, py::arg("sigma2") = 0.02,
       py::arg("seed") = 1, py::arg("start_date") = "2021-01-04", py::arg("p0") = 100.0);
    m.def("to_prices", [](const std::vector<double>& r, double p0, const std::string& start) {
        return to_prices(r, p0, Date::parse(start));
    }, py::arg("returns"), py::arg("p0") = 100.0, py::arg("start_date") = "2021-01-04");
}
