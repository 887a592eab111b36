#include "covent/error.hpp"

namespace covent {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::CarrierMismatch: return "CARRIER_MISMATCH";
    case ErrorCode::NotAPartition: return "NOT_A_PARTITION";
    case ErrorCode::NotACover: return "NOT_A_COVER";
    case ErrorCode::InadmissibleWord: return "INADMISSIBLE_WORD";
    case ErrorCode::ReducibleChain: return "REDUCIBLE_CHAIN";
    case ErrorCode::RouteDisagreement: return "ROUTE_DISAGREEMENT";
    case ErrorCode::SubadditivityViolation: return "SUBADDITIVITY_VIOLATION";
    case ErrorCode::BudgetExceeded: return "BUDGET_EXCEEDED";
    case ErrorCode::Internal: return "INTERNAL";
  }
  return "UNKNOWN";
}

}  // namespace covent
