#pragma once

#include <stdexcept>
#include <string>

namespace longrag {

/// Coarse error category. The CLI maps each kind to a process exit code.
enum class ErrorKind {
    Config,    ///< bad configuration or template (exit 2)
    Upstream,  ///< embedder / chat service failure (exit 3)
    Data,      ///< malformed or inconsistent input data (exit 4)
};

/// Base class of every error thrown by the library.
///
/// `code()` is a stable machine-readable identifier such as "ParseError" or
/// "DimensionMismatch"; `what()` carries the human-readable detail.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string code, const std::string& message)
            : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& code() const noexcept { return code_; }

private:
    ErrorKind kind_;
    std::string code_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg)
            : Error(ErrorKind::Config, "ConfigError", msg) {}
};

class TemplateError : public Error {
public:
    explicit TemplateError(const std::string& msg)
            : Error(ErrorKind::Config, "TemplateError", msg) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg)
            : Error(ErrorKind::Data, "IoError", msg) {}
};

class ParseError : public Error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& msg);

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class DuplicateId : public Error {
public:
    explicit DuplicateId(std::string id);

    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

class NotFound : public Error {
public:
    explicit NotFound(const std::string& msg)
            : Error(ErrorKind::Data, "NotFound", msg) {}
};

class DimensionMismatch : public Error {
public:
    DimensionMismatch(std::size_t expected, std::size_t actual);
};

class LengthMismatch : public Error {
public:
    LengthMismatch(std::size_t expected, std::size_t actual);
};

class CorruptIndex : public Error {
public:
    explicit CorruptIndex(const std::string& msg)
            : Error(ErrorKind::Data, "CorruptIndex", msg) {}
};

class AlignmentError : public Error {
public:
    explicit AlignmentError(const std::string& msg)
            : Error(ErrorKind::Data, "AlignmentError", msg) {}
};

class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& msg)
            : Error(ErrorKind::Data, "PreconditionError", msg) {}
};

/// Network-level failure (connection refused, timeout). Retryable.
class TransportError : public Error {
public:
    explicit TransportError(const std::string& msg)
            : Error(ErrorKind::Upstream, "TransportError", msg) {}
};

/// The remote service answered with a non-200 status or an unusable body.
class RemoteError : public Error {
public:
    RemoteError(int status, const std::string& msg);

    int status() const noexcept { return status_; }

private:
    int status_;
};

/// The chat model returned a blank completion. `partial()` holds whatever
/// was produced before the blank turn (the long answer when Turn 2 is blank).
class EmptyCompletion : public Error {
public:
    EmptyCompletion(const std::string& msg, std::string partial)
            : Error(ErrorKind::Upstream, "EmptyCompletion", msg),
              partial_(std::move(partial)) {}

    const std::string& partial() const noexcept { return partial_; }

private:
    std::string partial_;
};

/// Process exit code for an error kind: 2 config, 3 upstream, 4 data.
int exit_code_for(ErrorKind kind) noexcept;

}  // namespace longrag
