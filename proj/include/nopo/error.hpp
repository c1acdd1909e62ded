#pragma once

#include <stdexcept>
#include <string>

namespace nopo {

enum class ErrorKind {
  Domain,      // parameter outside the model's domain
  Regime,      // operation called outside its operating regime
  Estimation,  // Monte Carlo estimate could not be formed
  Contract,    // caller broke a precondition on state
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct DomainError : Error {
  explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

struct RegimeError : Error {
  explicit RegimeError(const std::string& what) : Error(ErrorKind::Regime, what) {}
};

struct EstimationError : Error {
  explicit EstimationError(const std::string& what) : Error(ErrorKind::Estimation, what) {}
};

struct ContractError : Error {
  explicit ContractError(const std::string& what) : Error(ErrorKind::Contract, what) {}
};

}  // namespace nopo
