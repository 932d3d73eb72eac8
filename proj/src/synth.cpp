#include "entroshock/synth.hpp"

#include <cmath>
#include <numbers>

#include "entroshock/error.hpp"

namespace entroshock {

const char* to_string(SynthKind k) noexcept { return k == SynthKind::gaussian ? "gaussian" : "regime_switch"; }

SynthKind parse_synth_kind(std::string_view s) {
    if (s == "gaussian") return SynthKind::gaussian;
    if (s == "regime_switch" || s == "regime-switch") return SynthKind::regime_switch;
    throw ParseError("unknown synth kind '" + std::string(s) + "' (expected gaussian or regime_switch)");
}

NormalStream::NormalStream(std::uint64_t seed) : engine_(seed) {}

double NormalStream::uniform() {
    // (0, 1]: never 0, so log() below is finite.
    return double((engine_() >> 11) + 1) * 0x1.0p-53;
}

double NormalStream::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

namespace {

void check_sigma(double sigma, const char* name) {
    if (!(std::isfinite(sigma) && sigma > 0.0))
        throw InvalidSpec(std::string(name) + " must be finite and > 0, got " + std::to_string(sigma));
}

void check_common(const SynthSpec& spec) {
    if (!std::isfinite(spec.mu)) throw InvalidSpec("mu must be finite");
    if (!(std::isfinite(spec.p0) && spec.p0 > 0.0)) throw InvalidSpec("p0 must be finite and > 0");
}

}  // namespace

std::vector<double> gaussian_returns(const SynthSpec& spec) {
    if (spec.kind != SynthKind::gaussian) throw InvalidSpec("gaussian_returns needs kind = gaussian");
    check_common(spec);
    check_sigma(spec.sigma, "sigma");
    if (spec.n < 2) throw InvalidSpec("n must be at least 2");

    NormalStream z(spec.seed);
    std::vector<double> out(spec.n);
    for (auto& r : out) r = spec.mu + spec.sigma * z.next();
    return out;
}

PriceSeries regime_switch_series(const SynthSpec& spec) {
    if (spec.kind != SynthKind::regime_switch) throw InvalidSpec("regime_switch_series needs kind = regime_switch");
    check_common(spec);
    check_sigma(spec.sigma1, "sigma1");
    check_sigma(spec.sigma2, "sigma2");
    if (spec.n1 < 2 || spec.n2 < 2) throw InvalidSpec("n1 and n2 must be at least 2");

    NormalStream z(spec.seed);
    std::vector<double> returns(spec.n1 + spec.n2 - 1);
    for (std::size_t i = 0; i < returns.size(); ++i) {
        double sigma = i + 1 < spec.n1 ? spec.sigma1 : spec.sigma2;
        returns[i] = spec.mu + sigma * z.next();
    }
    return to_prices(returns, spec.p0, spec.start_date, spec.symbol);
}

Date regime_switch_event_date(const SynthSpec& spec) {
    Date d = next_weekday(spec.start_date);
    for (std::size_t i = 0; i < spec.n1; ++i) d = next_weekday(d + std::chrono::days{1});
    return d;
}

PriceSeries to_prices(std::span<const double> returns, double p0, Date start_date, std::string symbol) {
    if (!(std::isfinite(p0) && p0 > 0.0)) throw InvalidSpec("p0 must be finite and > 0");
    std::vector<PricePoint> pts;
    pts.reserve(returns.size() + 1);
    Date d = next_weekday(start_date);
    double price = p0;
    pts.push_back({d, price});
    for (double r : returns) {
        d = next_weekday(d + std::chrono::days{1});
        price *= std::exp(r);
        pts.push_back({d, price});
    }
    return PriceSeries(std::move(symbol), std::move(pts));
}

PriceSeries synth_series(const SynthSpec& spec) {
    if (spec.kind == SynthKind::regime_switch) return regime_switch_series(spec);
    return to_prices(gaussian_returns(spec), spec.p0, spec.start_date, spec.symbol);
}

}  // namespace entroshock
