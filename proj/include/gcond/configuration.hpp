// Copyright 2026 The gcond Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <vector>

namespace gcond {

using cplx = std::complex<double>;

/// A finite point configuration; order carries no meaning.
struct Configuration {
  std::vector<cplx> points;

  std::size_t size() const { return points.size(); }
  /// True when every coordinate is finite.
  bool valid() const;
};

}  // namespace gcond
