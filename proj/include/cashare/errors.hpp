#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cashare {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Value outside its mathematical domain (rule number > 511, cell >= 2^b, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Wrong number of rules for the window order.
class ArityError : public Error {
public:
    using Error::Error;
};

// Matrices of differing shape or modulus combined.
class ShapeError : public Error {
public:
    using Error::Error;
};

// Invalid scheme or generator parameters.
class ParamError : public Error {
public:
    using Error::Error;
};

// BBS seed rejected.
class SeedError : public Error {
public:
    using Error::Error;
};

// Malformed input bytes; carries the byte offset where decoding stopped.
class FormatError : public Error {
public:
    FormatError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}
    explicit FormatError(const std::string& what) : Error(what) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_ = 0;
};

class EncodeError : public Error {
public:
    using Error::Error;
};

// Checksum mismatch.
class IntegrityError : public Error {
public:
    using Error::Error;
};

// Protocol errors: the supplied share set cannot be used for recovery.
class ProtocolError : public Error {
public:
    using Error::Error;
};

class MixedSchemeError : public ProtocolError {
public:
    using ProtocolError::ProtocolError;
};

class InsufficientSharesError : public ProtocolError {
public:
    InsufficientSharesError(const std::string& what, std::size_t longest_run)
        : ProtocolError(what), longest_run_(longest_run) {}

    std::size_t longest_run() const noexcept { return longest_run_; }

private:
    std::size_t longest_run_;
};

class TooLargeError : public Error {
public:
    using Error::Error;
};

}  // namespace cashare
