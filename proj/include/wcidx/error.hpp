#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wcidx {

// Every failure the library reports derives from `error`.  The CLI maps the
// concrete types onto its exit codes, so keep the hierarchy flat.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class parse_error : public error {
public:
    parse_error(std::size_t offset, const std::string& what)
        : error("parse error at offset " + std::to_string(offset) + ": " + what), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class invalid_argument : public error {
public:
    using error::error;
};

// Pattern needs more normal/optional wildcards than the index was built for.
class budget_error : public error {
public:
    using error::error;
};

// A configured size guard was exceeded during construction, or an oracle cap was hit.
class resource_error : public error {
public:
    resource_error(const std::string& what, std::size_t count)
        : error(what + " (count=" + std::to_string(count) + ")"), count_(count) {}

    std::size_t count() const noexcept { return count_; }

private:
    std::size_t count_;
};

class format_error : public error {
public:
    using error::error;
};

// Well-formed file written by an incompatible format version.
class version_error : public format_error {
public:
    using format_error::format_error;
};

class io_error : public error {
public:
    using error::error;
};

} // namespace wcidx
