#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "game_builder.hpp"
#include "lcp.hpp"

namespace msg {

enum class Player { attacker, defender };

/// Nonnegative weights over one player's sequences satisfying the flow
/// constraints (E w = e, resp. F w = f).
struct RealizationPlan {
  Player owner = Player::attacker;
  Eigen::VectorXd weights;
};

/// Root distribution over attack actions, aligned with the canonical action
/// order of enumerate_attack_actions.
struct AttackerStrategy {
  std::vector<double> probs;
};

/// One distribution per sensing outcome over that outcome's defend actions.
struct DefenderStrategy {
  std::vector<std::vector<double>> probs;
};

/// Flow-consistent plan for a behavioral strategy. In the extended form the
/// attacker's extension weights split the action weight in proportion to the
/// chance probabilities, which satisfies the per-family constraint rows.
RealizationPlan realization_plan(const SequenceFormGame& game,
                                 const AttackerStrategy& strategy);
RealizationPlan realization_plan(const SequenceFormGame& game,
                                 const DefenderStrategy& strategy);

/// Max constraint violation |E w - e| (or F/f) of a plan.
double constraint_residual(const SequenceFormGame& game, const RealizationPlan& plan);

/// Expected payoffs by direct summation over actions, outcomes and defend
/// actions. Returned pair is (defender, attacker) like PayoffPair.
PayoffPair expected_payoffs(const GameConfig& config,
                            const AttackerStrategy& attacker,
                            const DefenderStrategy& defender);

/// Expected payoffs through the sequence-form bilinear forms. For extended
/// games the attacker's sequence weights are realization weights (chance
/// excluded), i.e. every extension carries its action's weight.
PayoffPair expected_payoffs_bilinear(const SequenceFormGame& game,
                                     const AttackerStrategy& attacker,
                                     const DefenderStrategy& defender);

/// Expected payoff of one pure attack action against a defender strategy.
double attacker_action_value(const GameConfig& config, AttackAction action,
                             const DefenderStrategy& defender);

/// The complementarity system whose solutions are the game's equilibria:
/// z = (attacker plan, defender plan, attacker duals, defender duals), all
/// nonnegative. Reduced-form payoffs are shifted uniformly per leaf so both
/// matrices are strictly negative; that keeps the equilibrium set unchanged,
/// makes the relaxed flow inequalities bind at every solution, and gives a
/// copositive system the pivoting solver can process.
LcpProblem assemble_equilibrium_lcp(const SequenceFormGame& game);

struct ExtractedStrategies {
  AttackerStrategy attacker;
  DefenderStrategy defender;
  RealizationPlan attacker_plan;
  RealizationPlan defender_plan;
};

/// Reads plans out of an LCP solution vector and normalizes them into
/// behavioral strategies. Information sets with no reachable weight get the
/// uniform distribution.
ExtractedStrategies extract_strategies(const SequenceFormGame& game,
                                       const Eigen::VectorXd& z);

struct Gaps {
  double attacker = 0.0;
  double defender = 0.0;
};

/// Best-response gaps by enumeration: how much either player could gain by
/// deviating. Zero (up to roundoff) exactly at a Nash equilibrium.
Gaps verify_equilibrium(const GameConfig& config, const AttackerStrategy& attacker,
                        const DefenderStrategy& defender);

/// P(channel attacked) per channel under a mixed attack strategy.
std::vector<double> channel_attack_marginals(const GameConfig& config,
                                             const AttackerStrategy& attacker);

/// P(channel monitored | channel disallowed) per channel, reach-weighted by
/// the attacker's strategy.
std::vector<double> channel_monitor_rates(const GameConfig& config,
                                          const AttackerStrategy& attacker,
                                          const DefenderStrategy& defender);

/// P(channel monitored | channel attacked and disallowed) per channel; falls
/// back to the unconditioned rate for channels the attacker never touches.
std::vector<double> channel_monitor_rates_under_attack(
    const GameConfig& config, const AttackerStrategy& attacker,
    const DefenderStrategy& defender);

struct SolveOptions {
  GameForm form = GameForm::reduced;
  double lcp_tolerance = 1e-9;
  double verify_tolerance = 1e-7;
  int max_pivots = 0;            // 0 = automatic
  int max_lcp_dimension = 4096;  // guards against desk-scale overruns
  std::ostream* pivot_trace = nullptr;
  BuildLimits limits;
};

struct EquilibriumResult {
  AttackerStrategy attacker;
  DefenderStrategy defender;
  double attacker_value = 0.0;  // expected payoff at the returned strategies
  double defender_value = 0.0;
  double attacker_gap = 0.0;
  double defender_gap = 0.0;
  double complementarity_residual = 0.0;
  int pivots = 0;
  double wall_seconds = 0.0;
  LcpStatus lcp_status = LcpStatus::ray_termination;
  bool verified = false;  // solved, residual within tolerance, gaps within tolerance
};

/// Full pipeline: build sequence form, assemble the LCP, run Lemke, extract
/// strategies, and verify the result by enumeration. Never trusts the solver:
/// `verified` reports whether the output actually passed the gap check.
EquilibriumResult solve(const GameConfig& config, const SolveOptions& options = {});

}  // namespace msg
