#include "divflt/error.hpp"

namespace divflt {

const char* to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::size: return "size error";
    case ErrorCode::parameter: return "parameter error";
    case ErrorCode::numerical_integrity: return "numerical-integrity error";
    case ErrorCode::schedule: return "schedule error";
    case ErrorCode::degenerate_contract: return "degenerate-contract error";
    case ErrorCode::interval: return "interval error";
    case ErrorCode::configuration: return "configuration error";
    case ErrorCode::degenerate_payoff: return "degenerate-payoff error";
    case ErrorCode::coverage: return "coverage error";
    case ErrorCode::internal: return "internal error";
    case ErrorCode::measurement: return "measurement error";
    case ErrorCode::reference_validity: return "reference-validity error";
    }
    return "unknown error";
}

bool is_validation_error(ErrorCode code)
{
    switch (code) {
    case ErrorCode::size:
    case ErrorCode::parameter:
    case ErrorCode::schedule:
    case ErrorCode::degenerate_contract:
    case ErrorCode::interval:
    case ErrorCode::configuration:
        return true;
    default:
        return false;
    }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code)
{
}

}  // namespace divflt
