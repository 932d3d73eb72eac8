#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace entroshock {

// Base for every user-facing failure. Anything else escaping the library is a bug.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ingest

class MalformedRow : public Error {
public:
    MalformedRow(std::size_t line, const std::string& why)
        : Error("malformed row at line " + std::to_string(line) + ": " + why), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class DuplicateDate : public Error {
public:
    explicit DuplicateDate(const std::string& date)
        : Error("duplicate date " + date), date_(date) {}
    const std::string& date() const noexcept { return date_; }

private:
    std::string date_;
};

class EmptySeries : public Error {
public:
    using Error::Error;
};

class EmptySlice : public Error {
public:
    using Error::Error;
};

class TemplateError : public Error {
public:
    using Error::Error;
};

class NetworkError : public Error {
public:
    using Error::Error;
};

class HttpStatus : public Error {
public:
    HttpStatus(int code, const std::string& url)
        : Error("HTTP status " + std::to_string(code) + " from " + url), code_(code) {}
    int code() const noexcept { return code_; }

private:
    int code_;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class DuplicateSymbol : public Error {
public:
    explicit DuplicateSymbol(const std::string& symbol)
        : Error("duplicate symbol " + symbol), symbol_(symbol) {}
    const std::string& symbol() const noexcept { return symbol_; }

private:
    std::string symbol_;
};

// returns / measures

class TooShort : public Error {
public:
    using Error::Error;
};

class EmptyInput : public Error {
public:
    using Error::Error;
};

class NonPositiveInput : public Error {
public:
    using Error::Error;
};

// event_study

enum class Side { before, after };

inline const char* to_string(Side s) noexcept { return s == Side::before ? "before" : "after"; }

class InsufficientData : public Error {
public:
    InsufficientData(Side side, const std::string& what)
        : Error(std::string("insufficient data on ") + to_string(side) + " side: " + what), side_(side) {}
    Side side() const noexcept { return side_; }

private:
    Side side_;
};

class MissingIndexData : public Error {
public:
    using Error::Error;
};

class NoWindows : public Error {
public:
    using Error::Error;
};

// synth / report

class InvalidSpec : public Error {
public:
    using Error::Error;
};

class EmptyScan : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    IoError(const std::string& path, const std::string& why)
        : Error("I/O error on " + path + ": " + why), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace entroshock
