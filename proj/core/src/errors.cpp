#include "longrag/errors.hpp"

namespace longrag {

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& msg)
        : Error(ErrorKind::Data, "ParseError",
                source + ":" + std::to_string(line) + ": " + msg),
          line_(line) {}

DuplicateId::DuplicateId(std::string id)
        : Error(ErrorKind::Data, "DuplicateId", "duplicate id: " + id), id_(std::move(id)) {}

DimensionMismatch::DimensionMismatch(std::size_t expected, std::size_t actual)
        : Error(ErrorKind::Data, "DimensionMismatch",
                "dimension mismatch: expected " + std::to_string(expected) + ", got " +
                        std::to_string(actual)) {}

LengthMismatch::LengthMismatch(std::size_t expected, std::size_t actual)
        : Error(ErrorKind::Data, "LengthMismatch",
                "length mismatch: expected " + std::to_string(expected) + ", got " +
                        std::to_string(actual)) {}

RemoteError::RemoteError(int status, const std::string& msg)
        : Error(ErrorKind::Upstream, "RemoteError",
                "remote error (status " + std::to_string(status) + "): " + msg),
          status_(status) {}

int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Config:
            return 2;
        case ErrorKind::Upstream:
            return 3;
        case ErrorKind::Data:
            return 4;
    }
    return 1;
}

}  // namespace longrag
