#pragma once

#include <cstddef>
#include <span>
#include <variant>

#include "banditlab/discount.hpp"
#include "banditlab/expfam.hpp"

namespace banditlab {

/// Arm with a known, constant payoff per pull.
struct KnownArm {
    double lambda = 0.0;
    friend bool operator==(const KnownArm&, const KnownArm&) = default;
};

/// Two-armed (gamma1, tau1; gamma2, tau2; A) bandit, or the one-armed
/// (gamma, tau; lambda; A) bandit when arm2 holds a KnownArm.
struct BanditInstance {
    Family family = Family::Bernoulli;
    ConjugateArm arm1;
    std::variant<ConjugateArm, KnownArm> arm2;
    DiscountSequence discount;

    bool one_armed() const noexcept { return std::holds_alternative<KnownArm>(arm2); }
};

/// Validates both arms (ImproperPrior) and a finite known payoff.
BanditInstance validate_instance(BanditInstance inst);

struct ValueResult {
    double v = 0.0;
    double v1 = 0.0;
    double v2 = 0.0;
    double advantage = 0.0;
    int optimal_arm = 1;  ///< ties go to arm 1

    static ValueResult from_branches(double v1, double v2) noexcept;
};

struct EngineOptions {
    QuadratureOptions quad;
    /// Cap on distinct (state, stage) evaluations for continuous families.
    std::size_t node_budget = 2'000'000;
};

/// Backward induction: V = max(V1, V2) with
///   V1 = a_1 mu_1 + E[V(gamma1 + X, tau1 + 1; ...; A^1)]
/// and V2 symmetric (or a_1 lambda + V(...; A^1) for a known arm). Horizon 0
/// gives the zero result. Throws HorizonTooLarge when a continuous recursion
/// would exceed the node budget.
ValueResult value(const BanditInstance& inst, const EngineOptions& opts = {});

/// Number of distinct recursion states value() would evaluate for a
/// continuous family; 0 for discrete families (exact memoization).
std::size_t planned_nodes(const BanditInstance& inst, const EngineOptions& opts = {});

/// Summands of the advantage after the first two pulls:
///   (a1 - a2)(mu1 - mu2) + E[Delta^+ after an arm-1 pull] + E[Delta^- after an arm-2 pull].
struct AdvantageTerms {
    double myopic = 0.0;
    double plus_term = 0.0;
    double minus_term = 0.0;

    double sum() const noexcept { return myopic + plus_term + minus_term; }
};

/// Requires a two-armed instance (OneArmedUnsupported) with n >= 2 (InsufficientHorizon).
AdvantageTerms advantage_decomposition(const BanditInstance& inst, const EngineOptions& opts = {});

struct HistoryStep {
    int arm = 1;
    double observation = 0.0;
};

struct PolicyDecision {
    int optimal_arm = 1;
    ValueResult value;
    BanditInstance state;  ///< instance after folding the history
};

/// Replays a history of pulls (posterior updates, consumed discount weights)
/// and returns the optimal decision at the resulting state.
PolicyDecision optimal_policy_trace(const BanditInstance& inst, std::span<const HistoryStep> history,
                                    const EngineOptions& opts = {});

/// Independent oracle for bernoulli instances with n <= 4: enumerates every
/// deterministic strategy (a map from outcome histories to arms) and returns
/// the best expected payoff. Shares no code with value().
double brute_force_value(const BanditInstance& inst);

}  // namespace banditlab
