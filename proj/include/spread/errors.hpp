#pragma once

#include "spread/numeric.hpp"

#include <stdexcept>
#include <string>

namespace spread {

enum class ErrKind {
  malformed_input,      // unparseable or invariant-violating document / value
  precondition,         // caller violated an operation precondition
  budget_exceeded,      // brute-force candidate count above budget
  scale_exceeded,       // instance too large for desk-scale enumeration
  attempts_exhausted,   // construct_certified ran out of attempts
  length_mismatch,      // threshold_extract input length does not fit any n
  oracle_contract,      // a DescriptionOracle returned an out-of-range answer
  nondistinct_outputs   // graph_from_family requires distinct outputs per sigma
};

const char* err_kind_name(ErrKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  ErrKind kind() const { return kind_; }

 private:
  ErrKind kind_;
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(BigInt candidate_count, BigInt budget, const std::string& msg)
      : Error(ErrKind::budget_exceeded, msg),
        candidate_count(std::move(candidate_count)),
        budget(std::move(budget)) {}

  BigInt candidate_count;
  BigInt budget;
};

} // namespace spread
