#include <doctest.h>

#include "entroshock/error.hpp"
#include "entroshock/fetch.hpp"
#include "entroshock/ingest.hpp"
#include "stub_server.hpp"

using namespace entroshock;
using namespace std::chrono_literals;

namespace {

FetchOptions quick() {
    FetchOptions o;
    o.initial_backoff = 5ms;
    o.max_backoff = 20ms;
    o.timeout = 5s;
    return o;
}

}  // namespace

TEST_CASE("expand_endpoint substitutes all placeholders") {
    auto url = expand_endpoint("https://example.test/q?s={symbol}&d1={start}&d2={end}", "PKO", Date(2021, 2, 24),
                               Date(2023, 2, 23));
    CHECK(url == "https://example.test/q?s=PKO&d1=2021-02-24&d2=2023-02-23");
    auto compact = expand_endpoint("http://h/q?s={symbol}&d1={start:compact}&d2={end:compact}", "pko",
                                   Date(2021, 2, 24), Date(2023, 2, 23));
    CHECK(compact == "http://h/q?s=pko&d1=20210224&d2=20230223");
}

TEST_CASE("expand_endpoint rejects incomplete or malformed templates") {
    Date a(2021, 1, 1), b(2021, 2, 1);
    CHECK_THROWS_AS(expand_endpoint("http://h/q?d1={start}&d2={end}", "X", a, b), TemplateError);
    CHECK_THROWS_AS(expand_endpoint("http://h/q?s={symbol}&d2={end}", "X", a, b), TemplateError);
    CHECK_THROWS_AS(expand_endpoint("http://h/q?s={symbol}&d1={start}", "X", a, b), TemplateError);
    CHECK_THROWS_AS(expand_endpoint("ftp://h/{symbol}/{start}/{end}", "X", a, b), TemplateError);
    CHECK_THROWS_AS(expand_endpoint("h/{symbol}/{start}/{end}", "X", a, b), TemplateError);
}

TEST_CASE("fetch_history against a local stub server") {
    StubServer stub;
    Date a(2022, 2, 23), b(2022, 2, 24);

    auto body = fetch_history(stub.base() + "/ok/{symbol}?from={start}&to={end}", "PKO", a, b, quick());
    CHECK(parse_price_csv(body, "PKO").size() == 2);
    CHECK(stub.last_query() == "2022-02-23..2022-02-24");

    try {
        fetch_history(stub.base() + "/missing/{symbol}/{start}/{end}", "PKO", a, b, quick());
        FAIL("expected HttpStatus");
    } catch (const HttpStatus& e) {
        CHECK(e.code() == 404);
    }

    // transient 503s are retried with backoff
    auto flaky = fetch_history(stub.base() + "/flaky/{symbol}/{start}/{end}", "PKO", a, b, quick());
    CHECK(!flaky.empty());
    CHECK(stub.flaky_calls() == 3);
}

TEST_CASE("fetch_history gives up after bounded attempts") {
    // bind then close a port so nothing is listening on it
    int port = 0;
    {
        httplib::Server s;
        port = s.bind_to_any_port("127.0.0.1");
    }
    auto opts = quick();
    opts.max_attempts = 2;
    opts.timeout = 1s;
    CHECK_THROWS_AS(fetch_history("http://127.0.0.1:" + std::to_string(port) + "/{symbol}/{start}/{end}", "X",
                                  Date(2022, 1, 1), Date(2022, 1, 2), opts),
                    NetworkError);
}

TEST_CASE("fetch_many keeps per-symbol results independent of completion order") {
    StubServer stub;
    std::vector<std::string> symbols{"AAA", "BBB", "CCC", "DDD", "EEE"};
    auto bodies = fetch_many(stub.base() + "/ok/{symbol}?from={start}&to={end}", symbols, Date(2022, 1, 1),
                             Date(2022, 3, 1), 3, quick());
    CHECK(bodies.size() == symbols.size());
    for (const auto& s : symbols) CHECK(bodies.count(s) == 1);

    CHECK_THROWS_AS(fetch_many(stub.base() + "/missing/{symbol}/{start}/{end}", symbols, Date(2022, 1, 1),
                               Date(2022, 3, 1), 2, quick()),
                    HttpStatus);
}
