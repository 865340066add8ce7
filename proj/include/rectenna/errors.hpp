// errors.hpp - exception types shared by every rectenna module
#pragma once

#include <stdexcept>
#include <string>

namespace rectenna {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Violated precondition on a caller-supplied value.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Lookup outside a tabulated or validity range.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Requested configuration exists in the data model but has no evaluator.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Circuit topology problem: a floating node, a dangling terminal, a singular matrix.
class StructuralError : public Error {
public:
    StructuralError(const std::string& what, std::string node)
        : Error(what), node_(std::move(node)) {}
    const std::string& node() const noexcept { return node_; }

private:
    std::string node_;
};

/// Newton or steady-state iteration gave up. Carries the last residual and,
/// for transient runs, the simulation time at which the step failed.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double residual, double time = -1.0)
        : Error(what), residual_(residual), time_(time) {}
    double residual() const noexcept { return residual_; }
    double time() const noexcept { return time_; }

private:
    double residual_;
    double time_;
};

/// A periodic steady-state search ran out of periods.
class SettlingError : public ConvergenceError {
public:
    SettlingError(const std::string& what, double residual, bool settled)
        : ConvergenceError(what, residual), settled_(settled) {}
    bool settled() const noexcept { return settled_; }

private:
    bool settled_;
};

/// Bad configuration file content. `key_path` is `section.key` (or the file path).
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, std::string key_path)
        : Error(what), key_path_(std::move(key_path)) {}
    const std::string& key_path() const noexcept { return key_path_; }

private:
    std::string key_path_;
};

}  // namespace rectenna
