#include "banditlab/engine.hpp"

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "banditlab/error.hpp"

namespace banditlab {

ValueResult ValueResult::from_branches(double v1, double v2) noexcept {
    ValueResult r;
    r.v1 = v1;
    r.v2 = v2;
    r.advantage = v1 - v2;
    r.optimal_arm = r.advantage >= 0.0 ? 1 : 2;
    r.v = r.optimal_arm == 1 ? v1 : v2;
    return r;
}

BanditInstance validate_instance(BanditInstance inst) {
    inst.arm1 = validate_arm(inst.family, inst.arm1);
    if (auto* arm = std::get_if<ConjugateArm>(&inst.arm2)) {
        *arm = validate_arm(inst.family, *arm);
    } else if (!std::isfinite(std::get<KnownArm>(inst.arm2).lambda)) {
        fail(ErrorKind::InvalidArgument, "known arm payoff must be finite");
    }
    return inst;
}

namespace {

// tails[j] = sum_{i >= j} a_i, with tails[n] = 0
std::vector<double> tail_sums(const DiscountSequence& a) {
    std::vector<double> t(a.size() + 1, 0.0);
    for (std::size_t j = a.size(); j > 0; --j) t[j - 1] = t[j] + a[j - 1];
    return t;
}

// ---------------------------------------------------------------------------
// Discrete families: states are integer (pulls, sum) offsets from the root,
// so the recursion memoizes exactly.

class DiscreteSolver {
public:
    DiscreteSolver(const BanditInstance& inst, const EngineOptions& opts)
        : family_(inst.family), quad_(opts.quad), a_(inst.discount.values()), tails_(tail_sums(inst.discount)),
          root1_(inst.arm1) {
        if (a_.size() > 255) fail(ErrorKind::HorizonTooLarge, "discrete horizon above 255");
        if (const auto* known = std::get_if<KnownArm>(&inst.arm2)) {
            known_ = true;
            lambda_ = known->lambda;
        } else {
            root2_ = std::get<ConjugateArm>(inst.arm2);
        }
    }

    std::pair<double, double> branches(std::uint32_t k1, std::uint32_t s1, std::uint32_t k2, std::uint32_t s2) {
        const std::size_t j = k1 + k2;
        const bool more = j + 1 < a_.size() && tails_[j + 1] > 0.0;

        const ConjugateArm arm1{root1_.gamma + s1, root1_.tau + k1};
        double v1 = a_[j] * arm1.mean();
        if (more) {
            const Predictive& pred = cached(cache1_, root1_, k1, s1);
            for (std::size_t i = 0; i < pred.points.size(); ++i) {
                v1 += pred.weights[i] * value(k1 + 1, s1 + static_cast<std::uint32_t>(pred.points[i]), k2, s2);
            }
        }

        double v2 = 0.0;
        if (known_) {
            v2 = a_[j] * lambda_;
            if (more) v2 += value(k1, s1, k2 + 1, 0);
        } else {
            const ConjugateArm arm2{root2_.gamma + s2, root2_.tau + k2};
            v2 = a_[j] * arm2.mean();
            if (more) {
                const Predictive& pred = cached(cache2_, root2_, k2, s2);
                for (std::size_t i = 0; i < pred.points.size(); ++i) {
                    v2 += pred.weights[i] * value(k1, s1, k2 + 1, s2 + static_cast<std::uint32_t>(pred.points[i]));
                }
            }
        }
        return {v1, v2};
    }

private:
    static std::uint64_t key(std::uint32_t k1, std::uint32_t s1, std::uint32_t k2, std::uint32_t s2) {
        if (s1 >= (1u << 24) || s2 >= (1u << 24)) fail(ErrorKind::HorizonTooLarge, "observation sums overflow");
        return (std::uint64_t{k1} << 56) | (std::uint64_t{s1} << 32) | (std::uint64_t{k2} << 24) | s2;
    }

    const Predictive& cached(std::unordered_map<std::uint64_t, Predictive>& cache, const ConjugateArm& root,
                             std::uint32_t k, std::uint32_t s) {
        const std::uint64_t kk = (std::uint64_t{k} << 32) | s;
        auto it = cache.find(kk);
        if (it == cache.end()) {
            it = cache.emplace(kk, predictive(family_, ConjugateArm{root.gamma + s, root.tau + k}, quad_)).first;
        }
        return it->second;
    }

    double value(std::uint32_t k1, std::uint32_t s1, std::uint32_t k2, std::uint32_t s2) {
        const std::uint64_t kk = key(k1, s1, k2, s2);
        if (auto it = memo_.find(kk); it != memo_.end()) return it->second;
        const auto [v1, v2] = branches(k1, s1, k2, s2);
        const double v = std::max(v1, v2);
        memo_.emplace(kk, v);
        return v;
    }

    Family family_;
    QuadratureOptions quad_;
    std::span<const double> a_;
    std::vector<double> tails_;
    ConjugateArm root1_;
    ConjugateArm root2_;
    bool known_ = false;
    double lambda_ = 0.0;
    std::unordered_map<std::uint64_t, double> memo_;
    std::unordered_map<std::uint64_t, Predictive> cache1_, cache2_;
};

// ---------------------------------------------------------------------------
// Continuous families: each arm's reachable posteriors form a tree whose
// children are the quadrature nodes of the predictive. Values are memoized per
// (arm-1 node, arm-2 node, stage) within one call.

struct ArmNode {
    ConjugateArm state;
    bool expanded = false;
    std::vector<double> weights;
    std::vector<std::unique_ptr<ArmNode>> children;

    void expand(Family family, const QuadratureOptions& quad) {
        if (expanded) return;
        Predictive pred = predictive(family, state, quad);
        weights = std::move(pred.weights);
        children.reserve(pred.points.size());
        for (double x : pred.points) {
            auto child = std::make_unique<ArmNode>();
            child->state = ConjugateArm{state.gamma + x, state.tau + 1.0};
            children.push_back(std::move(child));
        }
        expanded = true;
    }
};

struct StateKey {
    const ArmNode* arm1;
    const ArmNode* arm2;
    std::size_t stage;
    bool operator==(const StateKey&) const = default;
};

struct StateKeyHash {
    std::size_t operator()(const StateKey& k) const noexcept {
        auto h = std::hash<const void*>{}(k.arm1);
        h ^= std::hash<const void*>{}(k.arm2) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h ^= std::hash<std::size_t>{}(k.stage) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

class ContinuousSolver {
public:
    ContinuousSolver(const BanditInstance& inst, const EngineOptions& opts)
        : family_(inst.family), opts_(opts), a_(inst.discount.values()), tails_(tail_sums(inst.discount)) {
        root1_.state = inst.arm1;
        if (const auto* known = std::get_if<KnownArm>(&inst.arm2)) {
            known_ = true;
            lambda_ = known->lambda;
        } else {
            root2_.state = std::get<ConjugateArm>(inst.arm2);
        }
    }

    std::pair<double, double> root_branches() { return branches(&root1_, known_ ? nullptr : &root2_, 0); }

private:
    std::pair<double, double> branches(ArmNode* n1, ArmNode* n2, std::size_t j) {
        if (++evaluations_ > opts_.node_budget) {
            fail(ErrorKind::HorizonTooLarge, "node budget of " + std::to_string(opts_.node_budget) + " exceeded");
        }
        const bool more = j + 1 < a_.size() && tails_[j + 1] > 0.0;

        double v1 = a_[j] * n1->state.mean();
        if (more) {
            n1->expand(family_, opts_.quad);
            for (std::size_t i = 0; i < n1->children.size(); ++i) {
                v1 += n1->weights[i] * value(n1->children[i].get(), n2, j + 1);
            }
        }
        double v2 = 0.0;
        if (n2 == nullptr) {
            v2 = a_[j] * lambda_;
            if (more) v2 += value(n1, nullptr, j + 1);
        } else {
            v2 = a_[j] * n2->state.mean();
            if (more) {
                n2->expand(family_, opts_.quad);
                for (std::size_t i = 0; i < n2->children.size(); ++i) {
                    v2 += n2->weights[i] * value(n1, n2->children[i].get(), j + 1);
                }
            }
        }
        return {v1, v2};
    }

    double value(ArmNode* n1, ArmNode* n2, std::size_t j) {
        const StateKey key{n1, n2, j};
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        const auto [v1, v2] = branches(n1, n2, j);
        const double v = std::max(v1, v2);
        memo_.emplace(key, v);
        return v;
    }

    Family family_;
    EngineOptions opts_;
    std::span<const double> a_;
    std::vector<double> tails_;
    ArmNode root1_;
    ArmNode root2_;
    bool known_ = false;
    double lambda_ = 0.0;
    std::size_t evaluations_ = 0;
    std::unordered_map<StateKey, double, StateKeyHash> memo_;
};

std::size_t quadrature_order(Family family, const QuadratureOptions& q) {
    return family == Family::Normal ? q.normal_order : q.exponential_order;
}

}  // namespace

std::size_t planned_nodes(const BanditInstance& inst, const EngineOptions& opts) {
    if (is_discrete(inst.family)) return 0;
    const double q = static_cast<double>(quadrature_order(inst.family, opts.quad));
    const std::size_t n = inst.discount.size();
    // distinct (state, stage) pairs: stage j holds (j+1) q^j two-armed states,
    // or sum_{d<=j} q^d one-armed states
    double total = 0.0;
    double qj = 1.0, geo = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        geo += qj;
        total += inst.one_armed() ? geo : static_cast<double>(j + 1) * qj;
        qj *= q;
        if (total > 1e18) break;
    }
    return total > 1e18 ? static_cast<std::size_t>(-1) : static_cast<std::size_t>(total);
}

ValueResult value(const BanditInstance& raw, const EngineOptions& opts) {
    const BanditInstance inst = validate_instance(raw);
    if (inst.discount.empty()) return ValueResult{};
    if (is_discrete(inst.family)) {
        DiscreteSolver solver(inst, opts);
        const auto [v1, v2] = solver.branches(0, 0, 0, 0);
        return ValueResult::from_branches(v1, v2);
    }
    if (const std::size_t planned = planned_nodes(inst, opts); planned > opts.node_budget) {
        fail(ErrorKind::HorizonTooLarge, "continuous recursion needs ~" + std::to_string(planned) +
                                             " node evaluations, budget is " + std::to_string(opts.node_budget));
    }
    ContinuousSolver solver(inst, opts);
    const auto [v1, v2] = solver.root_branches();
    return ValueResult::from_branches(v1, v2);
}

AdvantageTerms advantage_decomposition(const BanditInstance& raw, const EngineOptions& opts) {
    const BanditInstance inst = validate_instance(raw);
    if (inst.one_armed()) fail(ErrorKind::OneArmedUnsupported, "advantage decomposition needs two conjugate arms");
    if (inst.discount.size() < 2) fail(ErrorKind::InsufficientHorizon, "advantage decomposition needs n >= 2");

    const ConjugateArm arm2 = std::get<ConjugateArm>(inst.arm2);
    const DiscountSequence rest = inst.discount.tail();
    AdvantageTerms out;
    out.myopic = (inst.discount[0] - inst.discount[1]) * (inst.arm1.mean() - arm2.mean());

    const Predictive p1 = predictive(inst.family, inst.arm1, opts.quad);
    for (std::size_t i = 0; i < p1.points.size(); ++i) {
        BanditInstance child{inst.family, posterior_update(inst.family, inst.arm1, p1.points[i]), arm2, rest};
        out.plus_term += p1.weights[i] * std::max(0.0, value(child, opts).advantage);
    }
    const Predictive p2 = predictive(inst.family, arm2, opts.quad);
    for (std::size_t i = 0; i < p2.points.size(); ++i) {
        BanditInstance child{inst.family, inst.arm1, posterior_update(inst.family, arm2, p2.points[i]), rest};
        out.minus_term += p2.weights[i] * std::min(0.0, value(child, opts).advantage);
    }
    return out;
}

PolicyDecision optimal_policy_trace(const BanditInstance& raw, std::span<const HistoryStep> history,
                                    const EngineOptions& opts) {
    BanditInstance state = validate_instance(raw);
    if (history.size() > state.discount.size()) {
        fail(ErrorKind::HistoryLongerThanHorizon, "history has " + std::to_string(history.size()) +
                                                      " pulls but the horizon is " +
                                                      std::to_string(state.discount.size()));
    }
    for (const HistoryStep& step : history) {
        if (step.arm == 1) {
            state.arm1 = posterior_update(state.family, state.arm1, step.observation);
        } else if (step.arm == 2) {
            if (auto* arm = std::get_if<ConjugateArm>(&state.arm2)) {
                *arm = posterior_update(state.family, *arm, step.observation);
            }
        } else {
            fail(ErrorKind::InvalidArgument, "history arm must be 1 or 2");
        }
        state.discount = state.discount.tail();
    }
    PolicyDecision out;
    out.value = value(state, opts);
    out.optimal_arm = out.value.optimal_arm;
    out.state = std::move(state);
    return out;
}

}  // namespace banditlab
