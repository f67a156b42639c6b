#pragma once

#include <stdexcept>
#include <string>

namespace cty {

enum class Errc {
  NotCartan,
  NotSymmetrizable,
  Decomposable,
  NoValidColoring,
  DivisionByZero,
  UnknownVertex,
  NonCommutingSet,
  InvalidPermutation,
  InvalidParams,
  InvalidColoring,
  IndexOutOfRange,
  UnknownKind,
  ParityMismatch,
  Parse,
  UniverseMismatch,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc c, const std::string& what)
      : std::runtime_error(std::string(errc_name(c)) + ": " + what), code_(c) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace cty
