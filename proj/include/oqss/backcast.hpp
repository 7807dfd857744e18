/*
 * Copyright 2026 The oqss Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/**
 * @brief Layered backward synthesis of a single-mode Fock superposition.
 *
 * The circuit is a balanced binary tree. Leaves (layer 1) are Gaussian
 * circuits on 1 + h modes whose modes 1..h are heralded by photon-number
 * detectors; every interior node mixes its two children on a beam splitter
 * and keeps the output when the second port registers no photon. Targets are
 * split from the root down, then the leaves are solved.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oqss/error.hpp"
#include "oqss/fock.hpp"
#include "oqss/gaussian.hpp"
#include "oqss/optimize.hpp"

namespace oqss::backcast {

// ---------------------------------------------------------------- planning

/// Upper limits on first-layer circuits.
inline constexpr std::size_t kMaxInputs = 4;
inline constexpr std::size_t kMaxHerald = 4;

struct PlanPolicy {
    std::optional<std::size_t> n_layers; ///< forced depth; chosen automatically otherwise
    std::size_t leaf_budget = 4;         ///< preferred photon budget per leaf (3 inputs, heralds (2,2))
};

struct PlanNode {
    std::size_t id = 0;
    std::size_t layer = 1; ///< 1 = first layer (leaves), n_layers = root
    std::size_t index = 0; ///< position within the layer
    std::size_t budget = 0;
    std::optional<std::size_t> left, right; ///< children ids (interior nodes)
    std::vector<std::size_t> herald;        ///< detector counts (leaves)

    bool is_leaf() const noexcept { return !left.has_value(); }
    std::size_t inputs() const noexcept { return herald.size() + 1; }
};

struct LayerPlan {
    std::size_t n_max = 0;
    std::size_t n_layers = 1;
    std::vector<PlanNode> nodes; ///< breadth first, root at 0

    std::vector<std::size_t> leaf_ids() const;
};

/// Independent-coefficient capacity of an l-input circuit, (l+2)(l-1)/2 - 1
/// (zero for a single input).
std::size_t leaf_capacity(std::size_t inputs);

/// Detector counts used for a leaf of the given budget: the fewest detectors
/// whose circuit capacity covers the budget, preferring at most two photons
/// per detector and allowing up to kMaxHerald otherwise. Empty for budget 0.
/// Throws PlanningError when no circuit within the input/herald limits fits.
std::vector<std::size_t> leaf_herald(std::size_t budget);

/// Balanced plan for the given root budget. Throws PlanningError (listing
/// feasible budgets) when the request violates the input/herald/capacity limits.
LayerPlan plan_layers(std::size_t n_max, const PlanPolicy &policy = {});

/// Throws PlanningError if a plan violates budget additivity, the per-leaf
/// limits or the capacity bound.
void check_plan(const LayerPlan &plan);

// ---------------------------------------------------------------- interior nodes

/// Raised when a node's best fidelity stays below its floor; carries the node's best attempt.
class BelowFloorError : public SolverError {
  public:
    BelowFloorError(const std::string &what, double best) : SolverError(what), best_fidelity(best) {}
    double best_fidelity;
};

struct SplitOptions {
    std::size_t max_partitions = 256; ///< root partitions scored per split
    double floor = 0.0;               ///< minimum acceptable fidelity
    std::uint64_t seed = 1;
    optimize::OptimizerConfig polish; ///< bounds are filled in by split_target
};

struct SplitResult {
    fock::FockVector sub_a; ///< cutoff n_a, normalized
    fock::FockVector sub_b; ///< cutoff n_b, normalized
    double theta = 0.0;
    double fidelity = 0.0;
    double probability = 0.0; ///< vacuum-herald probability for normalized sub-targets
    std::size_t partitions_scored = 0;
    optimize::OptTrace trace; ///< empty unless the polish ran
};

/// Finds sub-targets and an angle with couple_and_herald_zero(sub_a, sub_b, theta) ~ target.
/// The coupled output polynomial factorizes as A(z cos theta) B(-z sin theta), so
/// the roots of the target polynomial are divided between the inputs; among the
/// divisions, the one with the highest vacuum-herald probability is kept.
SplitResult split_target(const fock::FockVector &target, std::size_t n_a, std::size_t n_b,
                         const SplitOptions &opt = {});

// ---------------------------------------------------------------- leaves

/// Flat parameter vector of a leaf circuit with l inputs (mode 0 is the output):
///   per input k:         r_k, phi_k, Re alpha_k, Im alpha_k
///   per pair i < j:       theta_ij, phi_ij        (triangular interferometer)
///   output rotation:      phi_out
struct CircuitParams {
    std::size_t inputs = 1;
    std::vector<double> values;

    static std::size_t count(std::size_t inputs);
    gaussian::Circuit circuit() const;
};

struct LeafOptions {
    double r_max = 2.0;
    double alpha_max = 2.0;
    std::size_t guard = 4; ///< extra Fock levels kept in the emitted leaf state
    double floor = 0.0;
    /// Herald probabilities below this scale the objective down linearly; near-zero
    /// probabilities make the conditional state numerically meaningless.
    double min_probability = 1e-6;
    /// Solve the heralded polynomial in Bargmann space first and map the
    /// solution to circuit parameters; falls back to direct multistart.
    bool algebraic_seed = true;
    /// Bounds are filled in by solve_first_layer; restarts stop once one is exact to 1e-9.
    optimize::OptimizerConfig opt{.restarts = 100,
                                  .max_evals = 5000,
                                  .method = optimize::Method::hybrid,
                                  .target = 1.0 - 1e-9};
};

std::vector<optimize::Bound> leaf_bounds(std::size_t inputs, const LeafOptions &opt);

struct LeafEvaluation {
    double fidelity = 0.0;    ///< of the full conditional state with the target
    double probability = 0.0; ///< exact herald probability
};

/// Fidelity of the heralded output with `target`, accounting exactly for the
/// output support above the target cutoff.
LeafEvaluation evaluate_leaf(const CircuitParams &p, const std::vector<std::size_t> &herald,
                             const fock::FockVector &target);

struct LeafResult {
    CircuitParams params;
    double fidelity = 0.0;
    double probability = 0.0;
    optimize::OptTrace trace;
};

/// Circuit (squeezers, displacements, triangular mesh, zero output phase)
/// whose state has Bargmann matrix B and vector gamma. Throws ContractError when
/// ||B|| >= 1 or the factorization is degenerate.
CircuitParams circuit_from_bargmann(const Eigen::MatrixXcd &b, const Eigen::VectorXcd &gamma);

/// Optimizes a leaf circuit. Requires cutoff(sub_target) == sum(herald).
LeafResult solve_first_layer(const fock::FockVector &sub_target, const std::vector<std::size_t> &herald,
                             const LeafOptions &opt = {});

/// Heralded leaf output with `guard` extra levels.
gaussian::HeraldedState leaf_state(const CircuitParams &p, const std::vector<std::size_t> &herald,
                                   std::size_t cutoff);

// ---------------------------------------------------------------- whole tree

/// Best single-mode correction U = D(alpha) R(rotation) S(r, phi) applied to
/// the synthesized output; reported separately from the uncorrected fidelity.
struct PostCorrection {
    double fidelity = 0.0;
    double r = 0.0, phi = 0.0, rotation = 0.0;
    fock::cplx alpha = 0.0;
};

/// Maximizes |<target| U |output>|^2 over U (r <= 1, |Re/Im alpha| <= 2), starting
/// from the identity. Evaluated on a padded Fock space of cutoff + 48 levels.
PostCorrection post_correct(const fock::FockVector &output, const fock::FockVector &target,
                            const optimize::OptimizerConfig &opt = {});

struct SynthesisConfig {
    SplitOptions split;
    LeafOptions leaf;
    bool post_correct = false; ///< also report the best single-mode Gaussian correction
    double interior_floor = 0.999;
    double leaf_floor = 0.99;
    std::uint64_t seed = 1;
    std::size_t threads = 1; ///< 0 = hardware concurrency
};

enum class NodeStatus { ok, below_floor, failed, skipped };
std::string to_string(NodeStatus s);
NodeStatus node_status_from_string(const std::string &s);

struct NodeSolution {
    std::size_t id = 0;
    NodeStatus status = NodeStatus::skipped;
    std::string message;
    fock::FockVector target; ///< normalized local target
    double theta = 0.0;      ///< interior nodes
    CircuitParams params;    ///< leaves
    double local_fidelity = 0.0;
    double herald_probability = 0.0; ///< leaf herald or interior vacuum-herald probability (backward pass)
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;
    optimize::OptTrace trace;
};

struct SynthesisResult {
    LayerPlan plan;
    std::vector<NodeSolution> nodes; ///< indexed like plan.nodes
    double end_to_end_fidelity = 0.0;
    double p_suc_first_layer = 0.0; ///< product of leaf herald probabilities
    double p_suc_total = 0.0;       ///< also including every vacuum herald of the forward pass
    double max_leaf_tail = 0.0;
    std::size_t guard = 4; ///< extra Fock levels kept in each forward-pass leaf state
    std::optional<std::size_t> failed_node;
    std::optional<PostCorrection> post_correction;
    double wall_seconds = 0.0;

    bool complete() const;
};

/// Backward pass (splits, then leaves) followed by forward_verify. Node errors
/// do not throw: the result records them and stays partial.
SynthesisResult synthesize(const fock::FockVector &target, const LayerPlan &plan, const SynthesisConfig &cfg);

struct Verification {
    double fidelity = 0.0;
    double max_local_mismatch = 0.0; ///< largest |recomputed - stored| local fidelity
    double p_suc_first_layer = 0.0;
    double p_suc_total = 0.0;
    double max_leaf_tail = 0.0;
    fock::FockVector output;
};

/// Re-simulates the tree forward from the stored parameters. Each node's
/// local fidelity is recomputed and must match the stored value to 1e-6
/// (ConsistencyError otherwise); the leaf outputs are then propagated through
/// the interior beam splitters and compared with `target`.
/// Throws ContractError for an incomplete result. With strict == false the
/// mismatch is only reported.
Verification forward_verify(const SynthesisResult &result, const fock::FockVector &target, bool strict = true);

/// Tolerance of the forward/backward agreement check.
inline constexpr double kConsistencyTol = 1e-6;

} // namespace oqss::backcast
