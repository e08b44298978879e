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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qutrace/circuit.hpp"
#include "qutrace/exact.hpp"
#include "qutrace/state.hpp"

namespace qutrace {

/// A pair of Pauli checks confined to a qubit subset. For subset size 2 the
/// canonical form applies the per-qubit Z pairs simultaneously; the stored
/// strings are the products over the subset.
struct CheckPair {
    PauliString c_left;
    PauliString c_right;
    std::vector<size_t> subset;

    static CheckPair canonical_z(size_t n, std::vector<size_t> subset);
    bool is_canonical_z() const;
};

/// Subset-local preparation: a product of reduced basis states, or a direct
/// preparation of the (possibly Z-conjugated) tracked state.
struct PrepSpec {
    bool direct = false;
    size_t conj_mask = 0;     // Z conjugation over subset qubits (direct only)
    size_t packed_basis = 0;  // base-4 packed PrepState per subset qubit

    std::string label(size_t subset_size) const;
    bool operator==(const PrepSpec& o) const {
        return direct == o.direct && conj_mask == o.conj_mask && packed_basis == o.packed_basis;
    }
};

/// One classical weight attached to a copy: multiplies the measured parity
/// of `obs_mask` (and the signed upstream parity of `upstream_mask` for
/// wire-cut copies) into the numerator of `target` or the denominator.
struct TermContribution {
    std::string term_tag;
    std::string target;        // requested observable letters; empty = denominator
    size_t obs_mask = 0;       // downstream parity support over subset qubits
    size_t upstream_mask = 0;  // upstream signed-parity support
    cplx coeff{0.0, 0.0};
    bool doubled_real = false;  // off-diagonal conjugate pair folded as 2*Re(...)
    bool denominator = false;
};

/// One prepare-and-measure variant. The subset qubits are prepared at the
/// start of `payload`; wire-cut copies first run `prefix`, measure the
/// subset in `upstream_basis`, then prepare and continue.
struct CircuitCopy {
    Circuit prefix;    // empty for tracked copies
    Circuit payload;
    std::vector<size_t> subset;  // ascending copy-register indices
    std::vector<PauliLetter> upstream_basis;  // empty for tracked copies
    PrepSpec prep;
    Mat tracked_state;  // 2^s x 2^s input state (direct preps; may be empty)
    std::vector<PauliLetter> measure_basis;   // per subset qubit
    std::vector<size_t> qubit_map;            // copy qubit -> physical qubit
    std::vector<TermContribution> contributions;

    std::string execution_key() const;
};

/// Copies plus the purely classical contribution terms (parity treated as 1)
/// and the check-group size used for acceptance normalization.
struct CopyEnsemble {
    std::vector<CircuitCopy> copies;
    std::vector<TermContribution> classical;
    size_t group_size = 1;
    std::vector<std::string> targets;  // requested observable letter keys
};

/// Per-copy execution record: joint distribution over (upstream outcome,
/// downstream outcome); outcome bit i corresponds to subset[i]. Tracked
/// copies hold a single upstream slot.
struct CopyResult {
    std::vector<double> joint;
    size_t subset_size = 0;
    bool has_upstream = false;

    double parity(size_t upstream_mask, size_t obs_mask) const;
    std::vector<double> upstream_marginal() const;
    void replace_upstream_marginal(const std::vector<double>& target);
};

struct MitigatedResult {
    std::map<std::string, double> expectations;
    std::map<std::string, cplx> numerators;
    cplx denominator{0.0, 0.0};
    double post_selection_rate = 0.0;
    double imag_residue = 0.0;
    bool residue_warning = false;

    double expectation(const std::string& letters) const;
    /// Joint subset distribution in a per-qubit basis assembled from the
    /// mitigated parity expectations.
    std::vector<double> basis_distribution(const std::vector<PauliLetter>& basis) const;
};

/// Decomposition of C_L * rho for a single-qubit Z check into the reduced
/// prep set; the weighted states contract back to Z*rho.
struct LeftCheckDecomposition {
    std::vector<std::pair<PrepState, cplx>> terms;
    Mat contraction() const;
};
LeftCheckDecomposition decompose_left_check(const SingleQubitState& rho);

using BasisSet = std::vector<std::vector<PauliLetter>>;
BasisSet all_bases(size_t s);
BasisSet single_basis(size_t s, PauliLetter b);

/// Merged copy ensemble for one checked segment with a tracked input state
/// (rho_in over the subset). The payload must already be pruned; subset
/// indices refer to the payload register and must be ascending.
CopyEnsemble build_copies(const Circuit& segment, const CheckPair& check, const Mat& rho_in,
                          const BasisSet& bases_needed);

/// Wire-cut variant: the input state is read through 3^s upstream
/// measurement settings instead of classical tracking; `prefix` holds the
/// raw history up to the cut. `checked` false degenerates to plain cut
/// tomography (no Pauli checks).
CopyEnsemble build_copies_measured(const Circuit& prefix, const Circuit& segment,
                                   const CheckPair& check, const BasisSet& bases_needed,
                                   bool checked = true);

/// Standard-cutting grid with every (upstream basis, prep, downstream basis)
/// combination present — exactly 3^m * 4^n copies per cut — carrying the
/// checked (or plain) reconstruction weights over all three bases.
CopyEnsemble build_copies_grid(const Circuit& prefix, const Circuit& segment,
                               const CheckPair& check, bool checked);

MitigatedResult assemble(const CopyEnsemble& ensemble, const std::vector<CopyResult>& results);

struct ReconstructedQubit {
    SingleQubitState state;
    double projection_correction = 0.0;
};
ReconstructedQubit reconstruct_qubit(double x, double y, double z, double shot_tolerance = 0.05);

struct ReconstructedPair {
    Mat state;
    double projection_correction = 0.0;
};
ReconstructedPair reconstruct_pair(const std::map<std::string, double>& expectations);

/// Dense post-selection oracle: accepted state and acceptance probability
/// for an explicit Pauli-mixture channel acting after the segment.
struct PostSelectedState {
    Mat state;
    double acceptance = 0.0;
};
PostSelectedState pcs_postselect_oracle(const Circuit& segment, const PauliChannel& channel,
                                        const CheckPair& check, const Mat& rho_in_full);

/// Standard-cut tomographic reconstruction: exactly 3^m * 4^n copies for m
/// measure sites and n prep sites on the subset wire.
CopyEnsemble tomographic_baseline(const Circuit& prefix, const Circuit& segment,
                                  const std::vector<size_t>& subset, size_t measure_sites,
                                  size_t prep_sites);

nlohmann::ordered_json copy_manifest(const CopyEnsemble& ensemble);

std::string letters_key(const std::vector<PauliLetter>& letters);
PauliString subset_observable(size_t n, const std::vector<size_t>& subset,
                              const std::vector<PauliLetter>& letters);

// ---------------------------------------------------------------------------
// Copy execution

struct CopyExecutionOptions {
    NoiseModel noise;
    std::optional<PauliChannel> injected_channel;  // applied after the payload
    bool sampled = false;
    uint64_t shots_per_copy = 0;  // sampled backend only
    uint64_t seed = 0;
    bool use_heisenberg = true;  // exact backend fast path
    size_t exact_limit = kExactLimit;
};

std::vector<CopyResult> execute_copies(const std::vector<CircuitCopy>& copies,
                                       const CopyExecutionOptions& options);

}  // namespace qutrace
