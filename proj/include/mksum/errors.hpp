#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace mksum {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Raised when (d, k) lies below max{2, (d-1)(d-2)}.
class BelowThreshold : public Error {
public:
    explicit BelowThreshold(const std::string& what)
        : Error("below stability threshold: " + what) {}
};

class CellCapExceeded : public Error {
public:
    CellCapExceeded(std::size_t requested, std::size_t cap)
        : Error("grid of " + std::to_string(requested) + " cells exceeds cap of " +
                std::to_string(cap)),
          requested_(requested), cap_(cap) {}
    std::size_t requested() const noexcept { return requested_; }
    std::size_t cap() const noexcept { return cap_; }

private:
    std::size_t requested_;
    std::size_t cap_;
};

/// Distance minimization stopped at its iteration cap; carries the best bounds seen.
class Nonconvergence : public Error {
public:
    Nonconvergence(double lower, double upper)
        : Error("nonconvergence: distance bounds [" + std::to_string(lower) + ", " +
                std::to_string(upper) + "]"),
          lower_(lower), upper_(upper) {}
    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }

private:
    double lower_;
    double upper_;
};

/// Parse/validation error for set-spec documents, located by a JSON-pointer style path.
class SpecError : public Error {
public:
    SpecError(std::string path, const std::string& reason)
        : Error(path + ": " + reason), path_(std::move(path)), reason_(reason) {}
    const std::string& path() const noexcept { return path_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::string path_;
    std::string reason_;
};

/// File could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace mksum
