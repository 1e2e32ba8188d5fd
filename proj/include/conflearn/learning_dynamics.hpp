#pragma once

#include "conflearn/payoff_geometry.hpp"
#include "conflearn/random.hpp"
#include "conflearn/signal_model.hpp"

#include <cstdint>
#include <vector>

namespace conflearn {

enum class Action { a, b };
enum class PlayerType { match, mismatch };

const char* to_string(Action a) noexcept;
const char* to_string(PlayerType t) noexcept;

// Surrogates for a belief that jumped to 0 or +inf after an action that is
// impossible in one state. Such a trajectory is absorbed.
inline constexpr double kAbsorbedLow = 1e-300;
inline constexpr double kAbsorbedHigh = 1e300;
inline constexpr double kMartingaleTolerance = 1e-10;

// Pr(b | state, lambda, c) = p F(m) + (1 - p)(1 - F(mm)), with cutoffs
// clamped to the support (an inactive type follows the public belief).
double action_prob_b(Belief lambda, double c_eff, State state, const ModelParams& params,
                     const SignalModel& signal);

struct ActionProbabilities {
    double b_given_a = 0.0;  // Pr(b | A)
    double b_given_b = 0.0;  // Pr(b | B)
};

ActionProbabilities action_probabilities(Belief lambda, double c_eff, const ModelParams& params,
                                         const SignalModel& signal);

struct LikelihoodRatio {
    double value = 1.0;       // Pr(action | B) / Pr(action | A); 0 or inf if degenerate
    bool degenerate = false;  // the action is impossible in exactly one state
};

// Throws UndefinedEventError if the action is impossible in both states.
LikelihoodRatio likelihood_ratio(Action action, Belief lambda, double c_eff,
                                 const ModelParams& params, const SignalModel& signal);
LikelihoodRatio likelihood_ratio(Action action, const ActionProbabilities& probs);

struct BeliefUpdate {
    double lambda = 1.0;
    bool absorbed = false;
};

BeliefUpdate update_belief(Belief lambda, Action action, double c_eff, const ModelParams& params,
                           const SignalModel& signal);

// |sum over actions of lambda LR(action) Pr(action | A) - lambda|.
double martingale_residual(Belief lambda, double c_eff, const ModelParams& params,
                           const SignalModel& signal);

// Cutoff rule. Ties (S equal to the cutoff) go to action a.
Action choose_action(PlayerType type, double signal, double m, double mm) noexcept;

struct PeriodRecord {
    std::size_t t = 0;
    bool shock = false;
    double c_eff = 0.0;
    PlayerType type = PlayerType::match;
    double signal = 0.0;
    Action action = Action::a;
    double lambda_before = 1.0;
    double lambda_after = 1.0;
    bool absorbed = false;
};

struct Trajectory {
    State true_state = State::A;
    ModelParams params;
    SignalSpec signal;
    double shock = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t path = 0;
    std::vector<PeriodRecord> records;
    bool absorbed = false;
    double max_martingale_residual = 0.0;  // relative to lambda_t

    double final_lambda() const noexcept {
        return records.empty() ? 1.0 : records.back().lambda_after;
    }
};

// Random draws of period t on `path` come from counter-based streams keyed
// by (seed, path, t, purpose), so any path can be replayed in isolation.
// lambda_1 = 1 (flat prior). Each step asserts the martingale identity and
// throws NumericalError if it fails.
Trajectory simulate_trajectory(const ModelParams& params, const SignalModel& signal,
                               State true_state, double shock, std::size_t horizon,
                               std::uint64_t seed, std::uint64_t path = 0);

struct Histogram {
    double lo = -12.0;  // log10(lambda) range
    double hi = 12.0;
    std::vector<std::size_t> counts;
    std::size_t underflow = 0;
    std::size_t overflow = 0;
};

struct LimitOptions {
    double threshold = 0.01;
    std::size_t bins = 24;
    double log10_lo = -12.0;
    double log10_hi = 12.0;
    unsigned threads = 1;
};

struct RegionOccupancy {
    double confounding = 0.0;
    double herding = 0.0;
    double single_active = 0.0;
};

struct LimitSummary {
    State true_state = State::A;
    double shock = 0.0;
    std::size_t horizon = 0;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
    double threshold = 0.01;
    double fraction_below = 0.0;
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t absorbed_paths = 0;
    double shock_frequency = 0.0;  // realized over all periods and paths
    Histogram histogram;
    RegionOccupancy no_shock_regions;
    RegionOccupancy shock_regions;
    std::vector<double> final_lambdas;  // path order
};

LimitSummary estimate_limit_distribution(const ModelParams& params, const SignalModel& signal,
                                         State true_state, double shock, std::size_t horizon,
                                         std::size_t n_paths, std::uint64_t seed,
                                         const LimitOptions& options = {});

}  // namespace conflearn
