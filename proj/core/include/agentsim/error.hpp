#pragma once

#include <stdexcept>
#include <string>

namespace agentsim {

// Base class for every error raised by the engine. The CLI maps these to a
// nonzero exit code and an "error:" line on stderr.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input bytes (CSV rows, scenario text). Messages carry the file
// line or the section.key path of the offending token.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
};

// Structurally valid input that violates an invariant (duplicate samples,
// missing weights, impossible placement, ...).
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(what) {}
};

// Raised by the per-frame decision loop, e.g. an empty candidate set.
class SolverError : public Error {
public:
    explicit SolverError(const std::string& what) : Error(what) {}
};

}  // namespace agentsim
