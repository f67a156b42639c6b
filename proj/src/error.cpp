#include "cty/error.hpp"

namespace cty {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NotCartan: return "NotCartan";
    case Errc::NotSymmetrizable: return "NotSymmetrizable";
    case Errc::Decomposable: return "Decomposable";
    case Errc::NoValidColoring: return "NoValidColoring";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::UnknownVertex: return "UnknownVertex";
    case Errc::NonCommutingSet: return "NonCommutingSet";
    case Errc::InvalidPermutation: return "InvalidPermutation";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::InvalidColoring: return "InvalidColoring";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::UnknownKind: return "UnknownKind";
    case Errc::ParityMismatch: return "ParityMismatch";
    case Errc::Parse: return "Parse";
    case Errc::UniverseMismatch: return "UniverseMismatch";
  }
  return "Unknown";
}

}  // namespace cty
