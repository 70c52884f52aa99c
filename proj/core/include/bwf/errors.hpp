#pragma once

#include <stdexcept>
#include <string>

namespace bwf {

enum class ErrorKind {
  config,                     // bad scenario / unparseable input
  geometry_degenerate,        // det DF or |S_X x S_Y| below threshold
  unsupported_configuration,  // op requires identity slab etc.
  contract_violation,         // precondition broken by caller data
  compatibility,              // e.g. nonzero-mean Poisson source
  decomposition_invalid,      // n.curl B != 0 on a boundary
  solver_failure,             // iteration did not converge
  io,                         // file read/write problems
  step_size                   // perturbed map stops being a diffeomorphism
};

// All library failures carry a kind (for exit-code mapping) and the pipeline
// stage that raised them.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string stage, const std::string& what)
      : std::runtime_error("[" + stage + "] " + what), kind_(kind), stage_(std::move(stage)) {}

  ErrorKind kind() const { return kind_; }
  const std::string& stage() const { return stage_; }

 private:
  ErrorKind kind_;
  std::string stage_;
};

}  // namespace bwf
