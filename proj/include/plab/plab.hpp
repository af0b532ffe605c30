// Copyright 2026 The plab Authors.
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


/// \file plab.hpp
/// Umbrella header.

#ifndef PLAB_PLAB_HPP
#define PLAB_PLAB_HPP

#include "plab/coarse_grain.hpp"
#include "plab/compression.hpp"
#include "plab/emx.hpp"
#include "plab/feasibility.hpp"
#include "plab/quantum.hpp"
#include "plab/random.hpp"
#include "plab/rational.hpp"
#include "plab/sdp.hpp"

#endif  // PLAB_PLAB_HPP
