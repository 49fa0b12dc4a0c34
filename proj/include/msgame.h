/* Multi-channel PUEA surveillance game solver - public C interface.
 *
 * Handles are opaque; every object returned by a *_new/msg_solve/msg_simulate
 * call owns its memory and is released with the matching *_free. Functions
 * returning msg_status leave outputs untouched on failure;
 * msg_last_error() describes the most recent failure on this thread.
 */
#ifndef MSGAME_H
#define MSGAME_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum msg_status {
  MSG_OK = 0,
  MSG_ERR_ARGUMENT = 1,        /* bad handle, index or parameter value */
  MSG_ERR_BUDGET = 2,          /* a size budget refused the operation */
  MSG_ERR_RAY_TERMINATION = 3, /* Lemke pivoting hit a secondary ray */
  MSG_ERR_ITERATION_LIMIT = 4, /* pivot budget exhausted */
  MSG_ERR_UNVERIFIED = 5,      /* solved, but best-response gaps too large */
  MSG_ERR_NO_EQUILIBRIUM = 6,  /* support enumeration found none in budget */
  MSG_ERR_IO = 7,
  MSG_ERR_INTERNAL = 8
} msg_status;

const char* msg_status_message(msg_status status);
const char* msg_last_error(void);

typedef struct msg_config msg_config;
typedef struct msg_result msg_result;
typedef struct msg_sim_report msg_sim_report;

/* --- configuration ----------------------------------------------------- */

/* A game over n_channels channels where the attacker can hit up to
 * max_attack channels per frame and the defender can monitor up to
 * max_monitor disallowed channels. Returns NULL on invalid sizes. */
msg_config* msg_config_new(int n_channels, int max_attack, int max_monitor);
void msg_config_free(msg_config* config);

msg_status msg_config_set_sensing(msg_config* config, int n_samples,
                                  double false_alarm, double snr_db);
/* Ratios against the per-channel use gain (which is normalized to 1). */
msg_status msg_config_set_economics(msg_config* config, double attack_cost,
                                    double monitor_cost, double penalty_factor,
                                    double network_demand);
msg_status msg_config_set_presence(msg_config* config, int channel,
                                   double pu_presence);
msg_status msg_config_validate(const msg_config* config);

/* CFAR detection probability of the energy detector. */
msg_status msg_detection_probability(int n_samples, double false_alarm,
                                     double snr_db, double* out);

/* --- representation sizes ---------------------------------------------- */

/* Payoff-matrix dimensions of the sequence form (extended != 0 gives the
 * outcome-extended attacker sequences). */
msg_status msg_sequence_form_size(const msg_config* config, int extended,
                                  long long* payoff_rows, long long* payoff_cols);
/* Strategic-form dimensions; cols is the product of per-outcome menu sizes
 * and is returned as a double because it explodes combinatorially. */
msg_status msg_strategic_form_size(const msg_config* config, double* rows,
                                   double* cols);

/* --- equilibrium -------------------------------------------------------- */

typedef struct msg_solve_options {
  int use_extended_form; /* default 0: solve on the reduced sequence form */
  double lcp_tolerance;      /* default 1e-9 */
  double verify_tolerance;   /* default 1e-7 */
  long max_pivots;           /* default 0: automatic */
} msg_solve_options;

void msg_solve_options_init(msg_solve_options* options);

/* Builds the sequence form, runs the Lemke pivoting solver and verifies the
 * result by best-response enumeration. A result handle is returned whenever
 * the pipeline produced strategies, including MSG_ERR_UNVERIFIED. */
msg_status msg_solve(const msg_config* config, const msg_solve_options* options,
                     msg_result** out);
void msg_result_free(msg_result* result);

double msg_result_attacker_value(const msg_result* result);
double msg_result_defender_value(const msg_result* result);
double msg_result_attacker_gap(const msg_result* result);
double msg_result_defender_gap(const msg_result* result);
double msg_result_complementarity(const msg_result* result);
long msg_result_pivots(const msg_result* result);
double msg_result_wall_seconds(const msg_result* result);
int msg_result_verified(const msg_result* result);

int msg_result_attack_action_count(const msg_result* result);
/* Attack action `index`: bit t of channel_mask set when channel t is hit. */
msg_status msg_result_attack_action(const msg_result* result, int index,
                                    unsigned* channel_mask, double* probability);
int msg_result_outcome_count(const msg_result* result);
int msg_result_defend_action_count(const msg_result* result, int outcome);
msg_status msg_result_defend_action(const msg_result* result, int outcome,
                                    int index, unsigned* monitored_mask,
                                    double* probability);
/* Per-channel marginals: P(channel attacked) and
 * P(channel monitored | channel disallowed). */
msg_status msg_result_channel_rates(const msg_result* result, int channel,
                                    double* attack_marginal, double* monitor_rate);

/* --- baselines ---------------------------------------------------------- */

/* Closed-form equilibrium of the one-channel game for channel `channel`;
 * regime receives a static string (pure_no_attack, pure_attack_no_monitor,
 * interior) and may be NULL. */
msg_status msg_single_channel_ne(const msg_config* config, int channel,
                                 double* attack_prob, double* surveillance_prob,
                                 const char** regime);

typedef enum msg_defender_kind {
  MSG_DEFENDER_UNIFORM = 0, /* uniform over nonempty monitor sets, never idle */
  MSG_DEFENDER_RANDOM = 1   /* uniform over the full menu, idle included */
} msg_defender_kind;

/* Defender's expected payoff when it commits to the given strategy and the
 * attacker best-responds. */
msg_status msg_evaluate_defender(const msg_config* config, msg_defender_kind kind,
                                 double* defender_value);
msg_status msg_evaluate_result_defender(const msg_result* result,
                                        double* defender_value);

/* Strategic-form benchmark: the full per-outcome policy explosion plus
 * exhaustive support enumeration up to max_support. Refuses with MSG_ERR_BUDGET when the
 * matrices would exceed max_cells. */
msg_status msg_solve_strategic(const msg_config* config, long long max_cells,
                               int max_support, double* attacker_value,
                               double* defender_value, long long* equilibria_found);

/* --- Monte Carlo --------------------------------------------------------- */

/* Simulates n_frames one-shot frames under the result's equilibrium
 * strategies. Identical arguments reproduce the report exactly. */
msg_status msg_simulate(const msg_result* result, long long n_frames,
                        unsigned long long seed, int workers,
                        msg_sim_report** out);
void msg_sim_report_free(msg_sim_report* report);

long long msg_sim_frames(const msg_sim_report* report);
double msg_sim_mean_attacker(const msg_sim_report* report);
double msg_sim_se_attacker(const msg_sim_report* report);
double msg_sim_mean_defender(const msg_sim_report* report);
double msg_sim_se_defender(const msg_sim_report* report);
double msg_sim_capture_rate(const msg_sim_report* report);

/* --- diagnostics --------------------------------------------------------- */

/* Writes the constraint and payoff matrices as "row col value" triplets. */
msg_status msg_dump_game(const msg_config* config, int extended, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* MSGAME_H */
