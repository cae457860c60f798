#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fleetsim {

enum class ErrorCode {
    GraphNotConnected,
    NotOnSubnetwork,
    NoCoveringSubnetwork,
    InfeasibleWindow,
    LabelError,
    UnknownGenerator,
    BadParams,
    PolicyStuck,
    IllegalCommand,
    TraceMismatch,
    InstanceTooLarge,
    Infeasible,
    ZeroOptimum,
    AssignedToLine,
    AssignedToCircuit,
    NonOriginPickup,
    NonOriginDropoff,
    UnsupportedRequestKind,
    ParseError,
    IoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

/// One validation finding: `where` locates it, `what` names the violated condition.
struct Violation {
    std::string where;
    std::string what;

    bool operator==(const Violation&) const = default;
};

std::string violations_to_string(const std::vector<Violation>& v);

} // namespace fleetsim
