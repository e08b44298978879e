// Copyright 2026 The qutrace authors
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

#include "qutrace/circuit.hpp"
#include "qutrace/dist.hpp"
#include "qutrace/noise.hpp"

namespace qutrace {

/// Pauli-trajectory statevector sampler. Each shot draws per-gate Pauli
/// insertions per the depolarizing decomposition, evolves a statevector,
/// and applies readout flips classically. Deterministic given the seed.
/// Keys cover c.measured (all qubits when empty), qubit order ascending.
Counts sample(const Circuit& c, const NoiseModel& nm, uint64_t shots, uint64_t seed);

}  // namespace qutrace
