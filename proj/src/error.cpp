#include "twinbounds/error.hpp"

namespace twinbounds {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidInput: return "invalid-input";
        case ErrorKind::ZeroTotal: return "zero-total";
        case ErrorKind::MarginDegenerate: return "margin-degenerate";
        case ErrorKind::TraitAbsent: return "trait-absent";
        case ErrorKind::InconsistentConcordance: return "assumption-inconsistent-concordance";
        case ErrorKind::Infeasible: return "infeasible";
        case ErrorKind::NumericFailure: return "numeric-failure";
        case ErrorKind::Schema: return "schema";
        case ErrorKind::DegenerateReport: return "degenerate-report";
    }
    return "unknown";
}

}  // namespace twinbounds
