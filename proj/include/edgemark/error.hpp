/* Copyright 2026 The EdgeMark Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef EDGEMARK_ERROR_HPP_
#define EDGEMARK_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace edgemark {

// Category of a hard failure. Recoverable per-job outcomes (a model that does
// not fit a device, an unsupported backend combination) are not errors; they
// are carried as data in DeploymentResult / BenchmarkJob instead.
enum class ErrKind {
  kSyntax,            // unparseable input file
  kValidation,        // parseable but violates a documented constraint
  kUnsupportedModel,  // model_type outside the supported set
  kIo,                // missing file, unreadable directory
  kShape,             // tensor shape mismatch at graph build or execution
  kNonFinite,         // NaN/Inf produced by a reference execution
  kUnsupportedOp,     // graph op with no kernel for the requested dtype
  kInfeasible,        // arena search proved no feasible size exists
  kNonMonotone,       // arena trial oracle contradicted itself
  kUsage,             // bad command line arguments
  kInternal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrKind kind() const { return kind_; }

 private:
  ErrKind kind_;
};

const char* err_kind_name(ErrKind kind);

}  // namespace edgemark

#endif  // EDGEMARK_ERROR_HPP_
