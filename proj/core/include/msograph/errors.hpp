#pragma once

#include <stdexcept>
#include <string>

namespace mso {

// Every recoverable failure in the library throws Error with a stable code.
// The CLI maps codes to exit statuses; tests match on codes, not messages.
enum class ErrorCode {
    InvalidArity,
    NotSurjective,
    IndexOutOfRange,
    TypeTooLarge,
    LoopCreated,
    UnknownId,
    SizeLimitExceeded,
    ModeMismatch,
    SyntaxError,
    SortError,
    AssignmentIncomplete,
    NotRooted,
    TerminalsNotCoBagged,
    DecompositionInvalid,
    NotVerdant,
    NotVerdurous,
    JoinNodePresent,
    BoundExceeded,
    ClosureBudgetExceeded,
    MissingTransition,
    NoneWithinBound,
    BadInput,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

} // namespace mso
