#include "factaudit/errors.hpp"

namespace factaudit {

const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidGrade: return "invalid_grade";
    case ErrorCode::EmptySlice: return "empty_slice";
    case ErrorCode::ZeroImr: return "zero_imr";
    case ErrorCode::ParseError: return "parse_error";
    case ErrorCode::NoRatingToken: return "no_rating_token";
    case ErrorCode::GradeOutOfRange: return "grade_out_of_range";
    case ErrorCode::DuplicateScenario: return "duplicate_scenario";
    case ErrorCode::ReferenceUnobtainable: return "reference_unobtainable";
    case ErrorCode::PrototypeStarvation: return "prototype_starvation";
    case ErrorCode::AuthError: return "auth_error";
    case ErrorCode::TimeoutError: return "timeout_error";
    case ErrorCode::ExhaustedRetries: return "exhausted_retries";
    case ErrorCode::MockScriptMiss: return "mock_script_miss";
    case ErrorCode::ToolError: return "tool_error";
    case ErrorCode::CorruptCheckpoint: return "corrupt_checkpoint";
    case ErrorCode::AbsoluteContinuityViolation: return "absolute_continuity_violation";
    case ErrorCode::ConfigError: return "config_error";
    case ErrorCode::RunLocked: return "run_locked";
    case ErrorCode::IoError: return "io_error";
    }
    return "unknown";
}

AuditError::AuditError(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) {
    throw AuditError(code, message);
}

} // namespace factaudit
