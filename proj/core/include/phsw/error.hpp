#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace phsw {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// order_n outside the supported range.
class InvalidOrder : public Error {
public:
    using Error::Error;
};

// Spectral factorization could not be completed at the requested accuracy.
class ConditioningFailure : public Error {
public:
    using Error::Error;
};

// Size/level/shape preconditions violated.
class GeometryError : public Error {
public:
    using Error::Error;
};

// A Hermitian-reduced pyramid failed conjugate consistency.
class SymmetryError : public Error {
public:
    using Error::Error;
};

// A quantization index does not fit the coded index range.
class OverflowError : public Error {
public:
    using Error::Error;
};

// Malformed coded container (magic, version, length, payload).
class CorruptStream : public Error {
public:
    using Error::Error;
};

// Malformed image file; carries the byte offset of the offending data.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t offset)
        : Error(msg + " (byte offset " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_ = 0;
};

// Matched-PSNR search could not bracket the target; carries the closest PSNR reached.
class SearchFailure : public Error {
public:
    SearchFailure(const std::string& msg, double achieved_psnr)
        : Error(msg), achieved_(achieved_psnr) {}

    double achieved_psnr() const noexcept { return achieved_; }

private:
    double achieved_ = 0.0;
};

}  // namespace phsw
