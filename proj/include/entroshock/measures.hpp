#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace entroshock {

inline constexpr std::size_t default_bins = 20;

enum class LogBase { e, two, ten };

const char* to_string(LogBase b) noexcept;  // "e", "2", "10"
const char* unit_name(LogBase b) noexcept;  // "nats", "shannons", "hartleys"
LogBase parse_log_base(std::string_view s);
double log_of_base(LogBase b) noexcept;  // ln(base)

// Discrete probability density of a sample: M equal-width bins over [min, max].
// Bins are half-open [lo, hi) except the last, which is closed so the maximum is counted.
// A zero-range sample yields a single bin with edges {x, x} and probability 1.
struct Histogram {
    std::vector<double> edges;  // M + 1
    std::vector<std::uint64_t> counts;
    std::vector<double> probabilities;
    std::uint64_t n = 0;

    std::size_t bins() const noexcept { return counts.size(); }
    bool degenerate() const noexcept { return counts.size() == 1 && edges.front() == edges.back(); }

    bool operator==(const Histogram&) const = default;
};

struct EntropyValue {
    double value = 0.0;
    LogBase base = LogBase::e;

    const char* unit() const noexcept { return unit_name(base); }

    bool operator==(const EntropyValue&) const = default;
};

struct MeasureSet {
    double std = 0.0;
    EntropyValue entropy;
    std::size_t n = 0;
    std::size_t m = 0;
    double max_entropy = 0.0;  // log_base(m), reported alongside H

    bool operator==(const MeasureSet&) const = default;
};

// Throws EmptyInput for an empty sample, Error for m == 0 or non-finite values.
Histogram build_histogram(std::span<const double> values, std::size_t m);

// H = -sum p_i log_base(p_i) over occupied bins. Summation runs over counts in ascending
// order, so H depends only on the multiset of counts. Every result is checked against
// 0 <= H <= log_base(M); a violation is a logic_error.
EntropyValue shannon_entropy(const Histogram& h, LogBase base = LogBase::e);

// Sample standard deviation (N - 1 denominator). Throws TooShort for fewer than 2 values.
double std_dev(std::span<const double> values);

// Symmetric percentage difference 100 * |a - b| / ((a + b) / 2).
// Throws NonPositiveInput unless both arguments are finite and positive.
double pct_difference(double a, double b);

// std_dev and shannon_entropy(build_histogram(values, m), base) bundled together.
MeasureSet measure_set(std::span<const double> values, std::size_t m = default_bins, LogBase base = LogBase::e);

// `bin_lo,bin_hi,count,probability` with a header row.
std::string histogram_csv(const Histogram& h);

}  // namespace entroshock
