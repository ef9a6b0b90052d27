#pragma once

#include <stdexcept>
#include <string>

namespace imfs {

// Operation requires the other diffusion model.
class ModelMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Exact enumeration would exceed the configured cap.
class InstanceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An IMS pipeline could not produce a trustworthy surrogate.
class PipelineError : public std::runtime_error {
 public:
  PipelineError(const std::string& what, std::string diagnostics)
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}
  const std::string& diagnostics() const { return diagnostics_; }

 private:
  std::string diagnostics_;
};

}  // namespace imfs
