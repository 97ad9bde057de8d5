#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace progset {

enum class Errc {
  NotPrime,
  ReducibleModulus,
  BadModulus,
  FieldTooLarge,
  FieldMismatch,
  BadElement,
  ZeroInverse,
  DlogOfZero,
  KExceedsCharacteristic,
  KTooLarge,
  KTooSmall,
  SetTooSmall,
  ZeroShift,
  BadDensity,
  EvenCharacteristic,
  NotADivisor,
  NotPrimeField,
  TooExpensive,
  ConfigError,
  ParseError,
  IoError,
};

constexpr std::string_view errc_name(Errc c) noexcept {
  switch (c) {
    case Errc::NotPrime: return "NotPrime";
    case Errc::ReducibleModulus: return "ReducibleModulus";
    case Errc::BadModulus: return "BadModulus";
    case Errc::FieldTooLarge: return "FieldTooLarge";
    case Errc::FieldMismatch: return "FieldMismatch";
    case Errc::BadElement: return "BadElement";
    case Errc::ZeroInverse: return "ZeroInverse";
    case Errc::DlogOfZero: return "DlogOfZero";
    case Errc::KExceedsCharacteristic: return "KExceedsCharacteristic";
    case Errc::KTooLarge: return "KTooLarge";
    case Errc::KTooSmall: return "KTooSmall";
    case Errc::SetTooSmall: return "SetTooSmall";
    case Errc::ZeroShift: return "ZeroShift";
    case Errc::BadDensity: return "BadDensity";
    case Errc::EvenCharacteristic: return "EvenCharacteristic";
    case Errc::NotADivisor: return "NotADivisor";
    case Errc::NotPrimeField: return "NotPrimeField";
    case Errc::TooExpensive: return "TooExpensive";
    case Errc::ConfigError: return "ConfigError";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

// All library failures carry an Errc so callers (and the CLI) can map them
// to exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace progset
