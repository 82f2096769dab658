// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace policybench {

/// Root of every error the library raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration; `field()` names the offending field path.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& message)
        : Error(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// A policy or artifact whose structure violates its invariants.
class StructuralError : public Error {
public:
    using Error::Error;
};

class GenerationError : public Error {
public:
    using Error::Error;
};

/// An expression references something the binding does not provide.
class BindingError : public Error {
public:
    using Error::Error;
};

/// A call names a tool that is not registered.
class ProtocolError : public Error {
public:
    using Error::Error;
};

class InputError : public Error {
public:
    using Error::Error;
};

/// Transport-level failure talking to a completion endpoint.
class ClientError : public Error {
public:
    using Error::Error;
};

class ScoringError : public Error {
public:
    using Error::Error;
};

/// Analyst output that could not be parsed; carries the raw text.
class AnalysisError : public Error {
public:
    AnalysisError(const std::string& message, std::string raw_output)
        : Error(message), raw_output_(std::move(raw_output)) {}

    const std::string& raw_output() const { return raw_output_; }

private:
    std::string raw_output_;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace policybench
