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
#ifndef EDGEMARK_EXECUTE_HPP_
#define EDGEMARK_EXECUTE_HPP_

#include <functional>
#include <vector>

#include "edgemark/dataset.hpp"
#include "edgemark/graph.hpp"
#include "edgemark/tensor.hpp"

namespace edgemark {

struct ExecHooks {
  // Invoked for the graph input and after every node on float tensors.
  // Quantization calibration taps this.
  std::function<void(const TensorInfo&, const std::vector<float>&)> observe;
};

// Runs one inference. The input must match the graph input shape; a float
// input is quantized on entry when the graph expects quantized data. Integer
// weights feeding float ops (dynamic and float16 variants) are dequantized
// on the fly. Throws Error{kShape} on geometry mismatch and
// Error{kUnsupportedOp} if a node has no kernel for its dtype combination.
TensorValue execute_graph(const Graph& g, const TensorValue& input,
                          const ExecHooks* hooks = nullptr);

// Reference run over a sample set: float outputs, flattened per sample.
// Throws Error{kNonFinite} if any output is NaN or infinite.
std::vector<std::vector<float>> run_reference(const Graph& g,
                                              const SampleSet& samples);

}  // namespace edgemark

#endif  // EDGEMARK_EXECUTE_HPP_
