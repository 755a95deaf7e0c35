// Copyright 2026 The composim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "composim/common.hpp"
#include "composim/pauli.hpp"
#include "composim/hamiltonians.hpp"
#include "composim/kernels.hpp"
#include "composim/partition.hpp"
#include "composim/propagators.hpp"
#include "composim/metrics.hpp"
#include "composim/costing.hpp"
#include "composim/optimizer.hpp"
#include "composim/lattice.hpp"
#include "composim/scaling.hpp"
