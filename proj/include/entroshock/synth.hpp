#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "entroshock/date.hpp"
#include "entroshock/ingest.hpp"

namespace entroshock {

enum class SynthKind { gaussian, regime_switch };

const char* to_string(SynthKind k) noexcept;
SynthKind parse_synth_kind(std::string_view s);

struct SynthSpec {
    SynthKind kind = SynthKind::gaussian;
    std::size_t n = 251;   // gaussian: number of returns
    std::size_t n1 = 252;  // regime_switch: trading days in each regime
    std::size_t n2 = 252;
    double mu = 0.0;
    double sigma = 0.02;  // gaussian
    double sigma1 = 0.01;  // regime_switch
    double sigma2 = 0.02;
    std::uint64_t seed = 1;
    Date start_date{2021, 1, 4};
    double p0 = 100.0;
    std::string symbol = "SYN";
};

// Standard-normal stream. The uniform source is std::mt19937_64, whose output sequence
// is fixed by the C++ standard; normals come from the Box-Muller transform applied to
// 53-bit uniforms in (0, 1]. Unlike std::normal_distribution, the algorithm is the
// same on every standard library.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed);
    double next();

private:
    double uniform();

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// n draws of mu + sigma * z. Throws InvalidSpec for a non-gaussian spec, sigma <= 0 or n < 2.
std::vector<double> gaussian_returns(const SynthSpec& spec);

// n1 trading days at sigma1 followed by n2 at sigma2 (n1 + n2 prices on consecutive
// weekdays from start_date). The n1 - 1 returns ending on regime-1 days use sigma1; the n2
// returns ending on regime-2 days use sigma2. With sigma1 == sigma2 the returns equal
// gaussian_returns() for n = n1 + n2 - 1 and the same seed.
PriceSeries regime_switch_series(const SynthSpec& spec);

// Date of the first regime-2 trading day, the natural event date for regime_switch_series.
Date regime_switch_event_date(const SynthSpec& spec);

// P_0 = p0, P_i = P_{i-1} * exp(R_i), dated on consecutive weekdays from start_date.
PriceSeries to_prices(std::span<const double> returns, double p0, Date start_date, std::string symbol = "SYN");

// Dispatches on spec.kind; gaussian specs are converted with to_prices.
PriceSeries synth_series(const SynthSpec& spec);

}  // namespace entroshock
