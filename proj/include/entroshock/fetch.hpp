#pragma once

#include <chrono>
#include <map>
#include <string>
#include <vector>

#include "entroshock/date.hpp"

namespace entroshock {

struct FetchOptions {
    int max_attempts = 4;
    std::chrono::milliseconds initial_backoff{250};
    std::chrono::milliseconds max_backoff{4000};
    std::chrono::seconds timeout{30};
};

// Substitutes {symbol}, {start} and {end} in an endpoint template. Dates expand to
// ISO-8601; {start:compact} / {end:compact} expand to YYYYMMDD. All three
// placeholders must be present (TemplateError otherwise).
std::string expand_endpoint(const std::string& endpoint_template, const std::string& symbol, Date start, Date end);

// GET the expanded URL and return the body. Connection failures, 429 and 5xx are retried
// with exponential backoff capped at max_backoff; other non-2xx statuses raise HttpStatus.
std::string fetch_history(const std::string& endpoint_template, const std::string& symbol, Date start, Date end,
                          const FetchOptions& options = {});

// Fetches several symbols with at most `jobs` requests in flight. Throws the first error
// encountered in symbol order.
std::map<std::string, std::string> fetch_many(const std::string& endpoint_template,
                                              const std::vector<std::string>& symbols, Date start, Date end,
                                              unsigned jobs, const FetchOptions& options = {});

}  // namespace entroshock
