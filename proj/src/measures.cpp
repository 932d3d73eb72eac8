#include "entroshock/measures.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "entroshock/error.hpp"

namespace entroshock {

const char* to_string(LogBase b) noexcept {
    switch (b) {
        case LogBase::e: return "e";
        case LogBase::two: return "2";
        case LogBase::ten: return "10";
    }
    return "?";
}

const char* unit_name(LogBase b) noexcept {
    switch (b) {
        case LogBase::e: return "nats";
        case LogBase::two: return "shannons";
        case LogBase::ten: return "hartleys";
    }
    return "?";
}

LogBase parse_log_base(std::string_view s) {
    if (s == "e" || s == "nats" || s == "nat") return LogBase::e;
    if (s == "2" || s == "shannons" || s == "bits") return LogBase::two;
    if (s == "10" || s == "hartleys") return LogBase::ten;
    throw ParseError("unknown log base '" + std::string(s) + "' (expected e, 2 or 10)");
}

double log_of_base(LogBase b) noexcept {
    switch (b) {
        case LogBase::e: return 1.0;
        case LogBase::two: return std::numbers::ln2;
        case LogBase::ten: return std::numbers::ln10;
    }
    return 1.0;
}

Histogram build_histogram(std::span<const double> values, std::size_t m) {
    if (values.empty()) throw EmptyInput("cannot bin an empty sample");
    if (m == 0) throw Error("bin count must be at least 1");
    for (double v : values)
        if (!std::isfinite(v)) throw Error("cannot bin non-finite value");

    auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it, hi = *hi_it;

    Histogram h;
    h.n = values.size();
    if (lo == hi) {
        h.edges = {lo, hi};
        h.counts = {h.n};
        h.probabilities = {1.0};
        return h;
    }

    const double width = (hi - lo) / double(m);
    h.edges.resize(m + 1);
    for (std::size_t k = 0; k < m; ++k) h.edges[k] = lo + double(k) * width;
    h.edges[m] = hi;
    for (std::size_t k = 1; k <= m; ++k)
        if (!(h.edges[k - 1] < h.edges[k]))
            throw Error("sample range too narrow for " + std::to_string(m) + " distinct bins");

    // Bin index = number of interior edges <= x, so assignment agrees with the published edges.
    h.counts.assign(m, 0);
    auto interior_begin = h.edges.begin() + 1;
    auto interior_end = h.edges.end() - 1;
    for (double v : values) {
        auto k = std::upper_bound(interior_begin, interior_end, v) - interior_begin;
        ++h.counts[std::size_t(k)];
    }
    h.probabilities.resize(m);
    for (std::size_t k = 0; k < m; ++k) h.probabilities[k] = double(h.counts[k]) / double(h.n);
    return h;
}

EntropyValue shannon_entropy(const Histogram& h, LogBase base) {
    if (h.counts.empty() || h.n == 0 || h.edges.size() != h.counts.size() + 1)
        throw Error("invalid histogram");

    std::vector<std::uint64_t> counts(h.counts);
    std::sort(counts.begin(), counts.end());
    const long double n = static_cast<long double>(h.n);
    long double acc = 0.0L;
    for (auto c : counts) {
        if (c == 0) continue;
        long double p = static_cast<long double>(c) / n;
        acc -= p * std::log(p);
    }
    double value = static_cast<double>(acc / static_cast<long double>(log_of_base(base)));
    if (value <= 0.0) value = 0.0;

    const double bound = std::log(double(h.bins())) / log_of_base(base);
    if (value > bound * (1.0 + 1e-12) + 1e-15)
        throw std::logic_error("entropy " + std::to_string(value) + " exceeds log_base(M) = " + std::to_string(bound));
    return {value, base};
}

double std_dev(std::span<const double> values) {
    if (values.size() < 2)
        throw TooShort("standard deviation needs at least 2 values, have " + std::to_string(values.size()));
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*lo == *hi) return 0.0;

    long double sum = 0.0L;
    for (double v : values) sum += v;
    const long double mean = sum / static_cast<long double>(values.size());
    long double ss = 0.0L;
    for (double v : values) {
        long double d = v - mean;
        ss += d * d;
    }
    return static_cast<double>(std::sqrt(ss / static_cast<long double>(values.size() - 1)));
}

double pct_difference(double a, double b) {
    if (!(std::isfinite(a) && std::isfinite(b) && a > 0.0 && b > 0.0))
        throw NonPositiveInput("percentage difference needs positive operands, got " + std::to_string(a) + " and " +
                               std::to_string(b));
    return 100.0 * std::fabs(a - b) / ((a + b) / 2.0);
}

MeasureSet measure_set(std::span<const double> values, std::size_t m, LogBase base) {
    MeasureSet ms;
    ms.std = std_dev(values);
    ms.entropy = shannon_entropy(build_histogram(values, m), base);
    ms.n = values.size();
    ms.m = m;
    ms.max_entropy = std::log(double(m)) / log_of_base(base);
    return ms;
}

std::string histogram_csv(const Histogram& h) {
    std::string out = "bin_lo,bin_hi,count,probability\n";
    char buf[64];
    auto put = [&](double v) {
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
        out.append(buf, end);
    };
    for (std::size_t k = 0; k < h.bins(); ++k) {
        put(h.edges[k]);
        out += ',';
        put(h.edges[k + 1]);
        out += ',';
        out += std::to_string(h.counts[k]);
        out += ',';
        put(h.probabilities[k]);
        out += '\n';
    }
    return out;
}

}  // namespace entroshock
