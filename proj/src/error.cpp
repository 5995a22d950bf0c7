#include "ncmart/error.hpp"

namespace ncmart {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::not_self_adjoint: return "NotSelfAdjoint";
    case Errc::eigen_failure: return "EigenFailure";
    case Errc::bad_exponent: return "BadExponent";
    case Errc::domain_error: return "DomainError";
    case Errc::bad_params: return "BadParams";
    case Errc::not_a_subalgebra: return "NotASubalgebra";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::symbol_too_large: return "SymbolTooLarge";
    case Errc::symbol_not_commuting: return "SymbolNotCommuting";
    case Errc::symbol_not_adapted: return "SymbolNotAdapted";
    case Errc::filtration_mismatch: return "FiltrationMismatch";
    case Errc::not_disjoint: return "NotDisjoint";
    case Errc::reconstruction_mismatch: return "ReconstructionMismatch";
    case Errc::not_convex: return "NotConvex";
    case Errc::not_q_concave: return "NotQConcave";
    case Errc::unknown_check: return "UnknownCheck";
    case Errc::generator_failure: return "GeneratorFailure";
    case Errc::io_error: return "IoError";
  }
  return "Error";
}

}  // namespace ncmart
