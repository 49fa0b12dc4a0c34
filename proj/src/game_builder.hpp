#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "channel_model.hpp"

namespace msg {

/// Bit t set means channel t is in the set. Channels are 0-based in code and
/// reported 1-based in user-facing output.
using ChannelMask = std::uint32_t;

struct GameConfig {
  int n_channels = 1;  // N
  int max_attack = 1;  // most channels the attacker can hit at once
  int max_monitor = 1; // most disallowed channels the defender can watch
  std::vector<ChannelParams> channels;

  void validate() const;
  int outcome_count() const { return 1 << n_channels; }
};

/// Builds a homogeneous-economics config from per-channel PU presence priors.
GameConfig make_config(const std::vector<double>& pu_presence,
                       const SensingModel& sensing, const EconomicRatios& econ,
                       int max_attack = 1, int max_monitor = 1);

struct AttackAction {
  ChannelMask channels = 0;  // empty mask is the distinguished no-attack action
};

struct SensingOutcome {
  ChannelMask disallowed = 0;  // outcome index equals this mask
};

struct DefendAction {
  ChannelMask monitored = 0;  // subset of the outcome's disallowed set
};

/// All attack subsets of size <= min(max_attack, N), the empty set first,
/// ordered by size then lexicographically by channel index.
std::vector<AttackAction> enumerate_attack_actions(const GameConfig& config);

/// No-surveillance plus every nonempty monitored subset of the outcome's
/// disallowed set with size <= max_monitor, same canonical order.
std::vector<DefendAction> enumerate_defend_actions(const GameConfig& config,
                                                   SensingOutcome outcome);

/// P(sensing outcome | attack action): product over channels of the
/// per-channel disallowed probability under that channel's attack status.
double chance_probability(const GameConfig& config, AttackAction action,
                          SensingOutcome outcome);

struct PayoffPair {
  double defender = 0.0;
  double attacker = 0.0;
};

/// Sums the payoff-table cells: the attacker over its attacked channels, the
/// defender over its monitored channels.
PayoffPair aggregate_payoffs(const GameConfig& config, AttackAction action,
                             SensingOutcome outcome, DefendAction defend);

/// Coordinate-list sparse matrix. Entries are stored in construction order
/// (row-major over the game's leaves) and may include explicit zeros for
/// leaves whose payoff happens to vanish.
struct SparseMatrix {
  struct Entry {
    int row = 0;
    int col = 0;
    double value = 0.0;
  };
  int rows = 0;
  int cols = 0;
  std::vector<Entry> entries;

  Eigen::MatrixXd dense() const;
};

enum class GameForm {
  reduced,   // attacker sequences stop at the chosen action; chance folded into payoffs
  extended,  // sensing outcomes appended to the attacker's sequences
};

/// Sequence-form representation.
///
/// Attacker sequence order: index 0 is the empty sequence, 1..A the attack
/// actions in canonical order; the extended form appends, for each action i,
/// one extension sequence per sensing outcome k at index
/// 1 + A + i*2^N + k. Defender sequence order: index 0 is the empty sequence,
/// then each outcome's actions, outcomes in mask order.
///
/// Payoff matrices are indexed (attacker sequence, defender action sequence):
/// rows cover every attacker sequence including the root, columns cover the
/// defender's action sequences (column j is defender sequence j+1; the
/// constant root sequence carries no payoffs).
struct SequenceFormGame {
  GameForm form = GameForm::reduced;
  GameConfig config;

  std::vector<AttackAction> attack_actions;
  // defender_offsets[k] is the sequence index of outcome k's first action;
  // defender_actions[k] lists the actions at outcome k.
  std::vector<int> defender_offsets;
  std::vector<std::vector<DefendAction>> defender_actions;

  int n_attacker_sequences = 0;
  int n_defender_sequences = 0;  // including the root sequence

  Eigen::MatrixXd attacker_constraints;  // E
  Eigen::VectorXd attacker_rhs;          // e = (1, 0, ..., 0)
  Eigen::MatrixXd defender_constraints;  // F
  Eigen::VectorXd defender_rhs;          // f = (1, 0, ..., 0)

  SparseMatrix attacker_payoff;  // n_attacker_sequences x (n_defender_sequences - 1)
  SparseMatrix defender_payoff;

  // Aligned with the payoff entry order: the chance probability of each leaf
  // and its raw (unweighted) payoff pair.
  std::vector<double> leaf_chance;
  std::vector<PayoffPair> leaf_payoff;

  int payoff_rows() const { return attacker_payoff.rows; }
  int payoff_cols() const { return attacker_payoff.cols; }

  // Sequence index of attack action i (and, extended form only, of its
  // extension by outcome k).
  int attacker_action_sequence(int action_index) const { return 1 + action_index; }
  int attacker_extension_sequence(int action_index, int outcome) const;
  int defender_action_sequence(int outcome, int action_index) const {
    return defender_offsets[outcome] + action_index;
  }
};

/// Number of attacker sequences in the extended form:
/// 1 + (K1+1) + (K1+1)*2^N with K1 = sum_{i=1..min(M,N)} C(N,i).
long long extended_attacker_sequence_count(int n_channels, int max_attack);

struct BuildLimits {
  long long max_sequences = 1'000'000;
};

/// The article's construction: sensing outcomes are part of the attacker's
/// sequences, extension weights are constrained per action family, and payoff
/// entries carry the chance probability of the leaf.
SequenceFormGame build_sequence_form(const GameConfig& config,
                                     const BuildLimits& limits = {});

/// Textbook construction used as the solving/correctness route: attacker
/// sequences stop at the action, chance is folded into the payoff entries.
SequenceFormGame build_reduced_sequence_form(const GameConfig& config,
                                             const BuildLimits& limits = {});

/// Writes E, F and both payoff matrices as "row col value" triplets.
void dump_game(const SequenceFormGame& game, std::ostream& out);

}  // namespace msg
