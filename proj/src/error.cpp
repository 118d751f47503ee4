#include "packlp/error.hpp"

namespace packlp {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::ParameterPole: return "ParameterPole";
    case ErrorKind::AccuracyLoss: return "AccuracyLoss";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::IntegrationFailure: return "IntegrationFailure";
    case ErrorKind::SpectrumMismatch: return "SpectrumMismatch";
    case ErrorKind::DifferentiationInstability: return "DifferentiationInstability";
    case ErrorKind::CertificationFailure: return "CertificationFailure";
    case ErrorKind::GridError: return "GridError";
    case ErrorKind::DegenerateWitness: return "DegenerateWitness";
    case ErrorKind::TailBoundFailure: return "TailBoundFailure";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::BudgetExhausted: return "BudgetExhausted";
  }
  return "Unknown";
}

}  // namespace packlp
