#pragma once

#include <stdexcept>
#include <string>

namespace dra {

/// An argument lies outside the domain of the function it was passed to.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A computation reached a state that is impossible for correct geometry,
/// e.g. a root that is not bracketed or a square-root argument that is
/// negative beyond rounding noise.
class InternalInconsistency : public std::logic_error {
public:
    explicit InternalInconsistency(const std::string& what) : std::logic_error(what) {}
};

/// Reading or writing a file failed.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input file; the message names the line.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace dra
