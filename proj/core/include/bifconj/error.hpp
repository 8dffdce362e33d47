#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bifconj {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// A parameter lies outside a normal form's validity box, or a tail exceeds
// its declared bound K.
class BoundViolation : public Error {
public:
    BoundViolation(const std::string& constraint, const std::string& detail)
        : Error(detail.empty() ? constraint : constraint + ": " + detail), constraint_(constraint) {}
    const std::string& constraint() const noexcept { return constraint_; }

private:
    std::string constraint_;
};

class PoleError : public Error {
public:
    using Error::Error;
};

class BracketError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::size_t iterations)
        : Error(what + " (after " + std::to_string(iterations) + " iterations)"),
          iterations_(iterations) {}
    std::size_t iterations() const noexcept { return iterations_; }

private:
    std::size_t iterations_;
};

class PreconditionError : public Error {
public:
    PreconditionError(const std::string& condition, const std::string& detail)
        : Error("precondition " + condition + " violated: " + detail), condition_(condition) {}
    const std::string& condition() const noexcept { return condition_; }

private:
    std::string condition_;
};

class AccuracyError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

}  // namespace bifconj
