// Copyright 2026 cpdyn developers
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

// Umbrella header for the whole library (the config/runner layer, which
// drags in the vendored JSON header, stays opt-in via runner.hpp).

#ifndef CPDYN_CPDYN_HPP
#define CPDYN_CPDYN_HPP

#include "cpdyn/choi.hpp"
#include "cpdyn/cp_check.hpp"
#include "cpdyn/density.hpp"
#include "cpdyn/errors.hpp"
#include "cpdyn/fock.hpp"
#include "cpdyn/generator.hpp"
#include "cpdyn/integrate.hpp"
#include "cpdyn/io.hpp"
#include "cpdyn/matrix.hpp"
#include "cpdyn/optics.hpp"
#include "cpdyn/quadrature.hpp"
#include "cpdyn/random.hpp"
#include "cpdyn/scenario.hpp"
#include "cpdyn/superop.hpp"

#endif  // CPDYN_CPDYN_HPP
