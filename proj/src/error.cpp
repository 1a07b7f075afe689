#include "nctgabor/error.hpp"

namespace nct {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::NotCoprime: return "not coprime";
    case ErrorCode::SpecMismatch: return "grid spec mismatch";
    case ErrorCode::LatticeMismatch: return "lattice mismatch";
    case ErrorCode::PeriodTooSmall: return "period too small";
    case ErrorCode::NotAFrame: return "not a frame (numerically)";
    case ErrorCode::CgStagnation: return "CG stagnation";
    case ErrorCode::NotAProjection: return "not a projection";
    case ErrorCode::NotDual: return "not dual";
    case ErrorCode::LaurentUnavailable: return "Laurent structure unavailable";
    case ErrorCode::Config: return "config error";
    case ErrorCode::Io: return "i/o error";
  }
  return "unknown";
}

}  // namespace nct
