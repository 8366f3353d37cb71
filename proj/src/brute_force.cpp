#include <cstdint>
#include <vector>

#include "banditlab/engine.hpp"
#include "banditlab/error.hpp"

namespace banditlab {

namespace {

struct BetaState {
    double successes;
    double trials;
};

// Expected payoff of the strategy encoded by `choice`: bit h of choice is the
// arm (0 -> arm 1, 1 -> arm 2) played after outcome history h, where h indexes
// the complete binary tree of outcome strings (root 0, children 2h+1, 2h+2).
double strategy_payoff(std::uint32_t choice, std::size_t n, const double* a, BetaState arm1, BetaState arm2,
                       bool known, double lambda) {
    double total = 0.0;
    const std::uint32_t paths = 1u << n;
    for (std::uint32_t path = 0; path < paths; ++path) {
        BetaState s[2] = {arm1, arm2};
        double prob = 1.0;
        double payoff = 0.0;
        std::uint32_t node = 0;
        for (std::size_t stage = 0; stage < n; ++stage) {
            const int arm = static_cast<int>((choice >> node) & 1u);
            const int outcome = static_cast<int>((path >> stage) & 1u);
            double p_success;
            if (arm == 1 && known) {
                // the known arm pays lambda deterministically; only one branch exists
                if (outcome == 1) {
                    prob = 0.0;
                    break;
                }
                payoff += a[stage] * lambda;
            } else {
                p_success = s[arm].successes / s[arm].trials;
                prob *= outcome == 1 ? p_success : 1.0 - p_success;
                payoff += a[stage] * outcome;
                s[arm].successes += outcome;
                s[arm].trials += 1.0;
            }
            node = 2 * node + 1 + static_cast<std::uint32_t>(outcome);
        }
        total += prob * payoff;
    }
    return total;
}

}  // namespace

double brute_force_value(const BanditInstance& inst) {
    if (inst.family != Family::Bernoulli) fail(ErrorKind::UnsupportedFamily, "brute force supports bernoulli only");
    const std::size_t n = inst.discount.size();
    if (n > 4) fail(ErrorKind::HorizonTooLarge, "brute force enumeration supports n <= 4");
    if (n == 0) return 0.0;

    const BetaState arm1{inst.arm1.gamma, inst.arm1.tau};
    BetaState arm2{0.0, 1.0};
    bool known = false;
    double lambda = 0.0;
    if (const auto* k = std::get_if<KnownArm>(&inst.arm2)) {
        known = true;
        lambda = k->lambda;
    } else {
        const auto& c = std::get<ConjugateArm>(inst.arm2);
        arm2 = BetaState{c.gamma, c.tau};
    }

    const std::uint32_t decision_nodes = (1u << n) - 1;
    const std::uint32_t strategies = 1u << decision_nodes;
    std::vector<double> a(inst.discount.values().begin(), inst.discount.values().end());
    double best = -1e300;
    for (std::uint32_t choice = 0; choice < strategies; ++choice) {
        const double payoff = strategy_payoff(choice, n, a.data(), arm1, arm2, known, lambda);
        if (payoff > best) best = payoff;
    }
    return best;
}

}  // namespace banditlab
