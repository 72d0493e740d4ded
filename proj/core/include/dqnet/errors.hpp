#pragma once

#include <stdexcept>
#include <string>

namespace dqnet {

/// Malformed input text (DIMACS formula, state file, target file).
/// Messages name the offending line/field.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Instance exceeds a configured size cap (dense dimension, qubit count,
/// brute-force enumeration limit).
struct CapacityError : std::runtime_error {
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

/// Input state violates a declared promise (e.g. it straddles two
/// decoherence-free sectors where a single sector is required).
struct PromiseViolation : std::runtime_error {
  explicit PromiseViolation(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical integration lost the trace/Hermiticity contract.
struct IntegrationError : std::runtime_error {
  explicit IntegrationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dqnet
