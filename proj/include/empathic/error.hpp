#pragma once

#include <stdexcept>
#include <string>

namespace empathic {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input data violates a documented invariant.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what, std::string field = {})
        : Error(what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    using Error::Error;
};

class InfeasibleError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

class ConflictError : public Error {
public:
    using Error::Error;
};

class CorruptError : public Error {
public:
    using Error::Error;
};

}  // namespace empathic
