#pragma once

#include <stdexcept>
#include <string>

namespace sqzcool {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class NotConverged : public Error {
public:
    NotConverged(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class Unstable : public Error {
public:
    Unstable(const std::string& what, double max_real_eigenvalue)
        : Error(what), max_real_(max_real_eigenvalue) {}
    double max_real_eigenvalue() const noexcept { return max_real_; }

private:
    double max_real_;
};

class IllConditioned : public Error {
public:
    using Error::Error;
};

class Degenerate : public Error {
public:
    using Error::Error;
};

// Raised when chi >= |delta_a|: no Bogoliubov rotation removes the
// parametric term.
class NotEquivalentRegime : public Error {
public:
    using Error::Error;
};

class NoStablePoint : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace sqzcool
