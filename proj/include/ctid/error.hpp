#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ctid {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A closed form was evaluated outside its domain (e.g. a Gamma pole).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Caller-supplied parameters violate an operation's precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// An internal contract between engine stages was broken.
class ContractError : public Error {
public:
    using Error::Error;
};

/// A negative-exponent factor vanishes at an evaluation point; resample.
class PoleError : public Error {
public:
    using Error::Error;
};

/// The engine and the specialization oracle disagree.
class OracleMismatch : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

}  // namespace ctid
