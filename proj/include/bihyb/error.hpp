#pragma once

#include <stdexcept>
#include <string>

namespace bihyb {

/// Violated precondition of a public operation (bad sizes, invalid mapping, ...).
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A directed cycle was found where an acyclic graph was required.
class CycleError : public std::runtime_error {
public:
    CycleError(int from, int to)
        : std::runtime_error("cycle through edge " + std::to_string(from) + "->" +
                             std::to_string(to)),
          from_(from), to_(to) {}
    int from() const noexcept { return from_; }
    int to() const noexcept { return to_; }

private:
    int from_;
    int to_;
};

/// Malformed instance document. `path` points at the offending element.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Well-formed document whose content breaks an instance invariant.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Action rejected by the environment; the state is left untouched.
class InvalidAction : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace bihyb
