// Copyright 2026 The qkit Authors.
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

#include "qkit/canonical_grid.hpp"
#include "qkit/error.hpp"
#include "qkit/frames.hpp"
#include "qkit/hamiltonian.hpp"
#include "qkit/hilbert.hpp"
#include "qkit/quantizer.hpp"
#include "qkit/symplectic.hpp"
#include "qkit/version.hpp"
