#pragma once

#include <stdexcept>
#include <string>

namespace lotto {

enum class Errc {
  EmptyBattlefields,
  NonPositiveWeight,
  NonPositiveQ,
  NegativeBudget,
  NonPositiveRB,
  BadPreAllocation,
  ZeroRealTimeBudget,
  ZeroBudget,
  NoFeasiblePartition,
  InvalidLevel,
  InvalidCost,
  InvalidStep,
  TooLarge,
};

const char* errc_name(Errc code);

/// Domain error carrying a stable machine-readable name plus detail text.
/// what() is "<name>: <detail>" so callers can surface the name verbatim.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail),
        code_(code) {}

  Errc code() const noexcept { return code_; }
  const char* name() const noexcept { return errc_name(code_); }

 private:
  Errc code_;
};

}  // namespace lotto
