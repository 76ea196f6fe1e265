#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace twinbounds {

enum class ErrorKind {
    InvalidInput,
    ZeroTotal,
    MarginDegenerate,
    TraitAbsent,
    InconsistentConcordance,
    Infeasible,
    NumericFailure,
    Schema,
    DegenerateReport,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace twinbounds
