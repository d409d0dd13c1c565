#pragma once

#include <stdexcept>
#include <string>

namespace factaudit {

enum class ErrorCode {
    InvalidGrade,
    EmptySlice,
    ZeroImr,
    ParseError,
    NoRatingToken,
    GradeOutOfRange,
    DuplicateScenario,
    ReferenceUnobtainable,
    PrototypeStarvation,
    AuthError,
    TimeoutError,
    ExhaustedRetries,
    MockScriptMiss,
    ToolError,
    CorruptCheckpoint,
    AbsoluteContinuityViolation,
    ConfigError,
    RunLocked,
    IoError,
};

const char* to_string(ErrorCode code);

// Every engine failure funnels through this exception; the code is what
// tests and the CLI exit-code mapping dispatch on.
class AuditError : public std::runtime_error {
public:
    AuditError(ErrorCode code, const std::string& message);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

} // namespace factaudit
