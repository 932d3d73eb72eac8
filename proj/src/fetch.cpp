#include "entroshock/fetch.hpp"

#include <exception>
#include <optional>
#include <thread>

#include <httplib.h>

#include "entroshock/error.hpp"
#include "entroshock/parallel.hpp"

namespace entroshock {

namespace {

std::string compact(Date d) {
    auto iso = d.iso();
    return iso.substr(0, 4) + iso.substr(5, 2) + iso.substr(8, 2);
}

bool replace_all(std::string& s, const std::string& from, const std::string& to) {
    bool any = false;
    for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
        s.replace(pos, from.size(), to);
        any = true;
    }
    return any;
}

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;    // /path?query
};

SplitUrl split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw TemplateError("endpoint is not an absolute URL: " + url);
    auto scheme = url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https") throw TemplateError("unsupported URL scheme '" + scheme + "'");
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    if (path_start == scheme_end + 3) throw TemplateError("endpoint URL has no host: " + url);
    return {url.substr(0, path_start), url.substr(path_start)};
}

bool transient(int status) { return status == 429 || status >= 500; }

}  // namespace

std::string expand_endpoint(const std::string& endpoint_template, const std::string& symbol, Date start, Date end) {
    std::string url = endpoint_template;
    if (!replace_all(url, "{symbol}", symbol)) throw TemplateError("endpoint template lacks {symbol}");
    bool s = replace_all(url, "{start:compact}", compact(start));
    s = replace_all(url, "{start}", start.iso()) || s;
    if (!s) throw TemplateError("endpoint template lacks {start}");
    bool e = replace_all(url, "{end:compact}", compact(end));
    e = replace_all(url, "{end}", end.iso()) || e;
    if (!e) throw TemplateError("endpoint template lacks {end}");
    if (url.find_first_of(" \t\n") != std::string::npos) throw TemplateError("expanded URL contains whitespace: " + url);
    split_url(url);
    return url;
}

std::string fetch_history(const std::string& endpoint_template, const std::string& symbol, Date start, Date end,
                          const FetchOptions& options) {
    auto url = expand_endpoint(endpoint_template, symbol, start, end);
    auto [origin, path] = split_url(url);

    httplib::Client client(origin);
    client.set_follow_location(true);
    client.set_connection_timeout(options.timeout);
    client.set_read_timeout(options.timeout);

    auto backoff = options.initial_backoff;
    std::optional<int> last_status;
    std::string last_error;
    for (int attempt = 1; attempt <= std::max(1, options.max_attempts); ++attempt) {
        auto res = client.Get(path);
        if (res) {
            if (res->status >= 200 && res->status < 300) return res->body;
            if (!transient(res->status)) throw HttpStatus(res->status, url);
            last_status = res->status;
        } else {
            last_error = httplib::to_string(res.error());
        }
        if (attempt < options.max_attempts) {
            std::this_thread::sleep_for(backoff);
            backoff = std::min(backoff * 2, options.max_backoff);
        }
    }
    if (last_status) throw HttpStatus(*last_status, url);
    throw NetworkError("request to " + url + " failed: " + last_error);
}

std::map<std::string, std::string> fetch_many(const std::string& endpoint_template,
                                              const std::vector<std::string>& symbols, Date start, Date end,
                                              unsigned jobs, const FetchOptions& options) {
    std::vector<std::string> bodies(symbols.size());
    std::vector<std::exception_ptr> errors(symbols.size());
    parallel_for(symbols.size(), jobs, [&](std::size_t i) {
        try {
            bodies[i] = fetch_history(endpoint_template, symbols[i], start, end, options);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    });
    std::map<std::string, std::string> out;
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        out.emplace(symbols[i], std::move(bodies[i]));
    }
    return out;
}

}  // namespace entroshock
