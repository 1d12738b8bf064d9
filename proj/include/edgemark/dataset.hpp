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
#ifndef EDGEMARK_DATASET_HPP_
#define EDGEMARK_DATASET_HPP_

#include <cstdint>
#include <vector>

#include "edgemark/config.hpp"
#include "edgemark/tensor.hpp"

namespace edgemark {

struct SampleSet {
  std::vector<TensorValue> inputs;
  std::vector<std::vector<float>> targets;

  std::size_t size() const { return inputs.size(); }
};

// Input/output geometry a dataset imposes on a model.
struct DatasetIoInfo {
  std::vector<int> input_shape;  // no batch dimension
  bool token_input = false;      // integer class indices instead of floats
  int vocab = 0;
  int head_dim = 0;              // width of the final dense layer
  bool classification = false;   // softmax head
  bool per_step_head = false;    // head applies per sequence step
};

// Derives geometry from the spec. For csv datasets this reads the file
// header to discover the feature width; throws Error{kIo} if missing.
DatasetIoInfo dataset_io_info(const DatasetSpec& ds);

// Draws `count` deterministic samples. Feature values are uniform in [0, 1),
// token values uniform in [0, vocab). Sample i depends only on (seed, i), so
// prefixes agree across different counts. Sinus ignores the seed: inputs are
// `count` evenly spaced grid points on [-pi, pi] with targets sin(x).
// csv_file ignores both and returns every row of the file, features from all
// but the last column and the target from the last.
SampleSet generate_samples(const DatasetSpec& ds, int count,
                           std::uint64_t seed);

}  // namespace edgemark

#endif  // EDGEMARK_DATASET_HPP_
