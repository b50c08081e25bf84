#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lleekit {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `position()` is the byte offset of the offending token.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Chained binary star without parentheses, e.g. `a*b*c`.
class AssocError : public SyntaxError {
public:
    using SyntaxError::SyntaxError;
};

/// A file could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

class StateExplosion : public Error {
public:
    using Error::Error;
};

class UnknownNode : public Error {
public:
    using Error::Error;
};

class ParentMismatch : public Error {
public:
    ParentMismatch() : Error("sub-charts belong to different parent charts") {}
};

/// Error while reading one of the line-oriented or JSON file formats.
class FormatError : public Error {
public:
    FormatError(const std::string& what, std::size_t line)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class EmptyEntrySet : public Error {
public:
    EmptyEntrySet() : Error("entry transition set is empty") {}
};

class NotALoopChart : public Error {
public:
    using Error::Error;
};

class InvalidWitness : public Error {
public:
    using Error::Error;
};

class NotLEE : public Error {
public:
    using Error::Error;
};

class NotLLEE : public Error {
public:
    using Error::Error;
};

class NotCollapse : public Error {
public:
    using Error::Error;
};

class LemmaViolated : public Error {
public:
    using Error::Error;
};

} // namespace lleekit
