#pragma once

#include <stdexcept>
#include <string>

namespace divflt {

enum class ErrorCode {
    size,
    parameter,
    numerical_integrity,
    schedule,
    degenerate_contract,
    interval,
    configuration,
    degenerate_payoff,
    coverage,
    internal,
    measurement,
    reference_validity,
};

const char* to_string(ErrorCode code);

// True for codes raised by input validation rather than by a computation.
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace divflt
