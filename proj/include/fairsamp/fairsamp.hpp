// Copyright 2026 The fairsamp Authors
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
/**
 * @file
 * Umbrella header.
 */
#pragma once

#include "anneal.hpp"
#include "circuit.hpp"
#include "common.hpp"
#include "compiler.hpp"
#include "experiment.hpp"
#include "gmqaoa.hpp"
#include "ising.hpp"
#include "metrics.hpp"
#include "passes.hpp"
#include "statevector.hpp"
#include "topology.hpp"
#include "unitary.hpp"
