#include "conflearn/learning_dynamics.hpp"

#include "conflearn/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

namespace conflearn {

const char* to_string(Action a) noexcept { return a == Action::a ? "a" : "b"; }

const char* to_string(PlayerType t) noexcept {
    return t == PlayerType::match ? "match" : "mismatch";
}

namespace {

// F(x) with x clamped to the support: exactly 0 below it, exactly 1 above.
double clamped_cdf(const SignalModel& signal, State state, double x) {
    if (x <= signal.support().lo()) return 0.0;
    if (x >= signal.support().hi()) return 1.0;
    return signal.cdf(state, x);
}

}  // namespace

double action_prob_b(Belief lambda, double c_eff, State state, const ModelParams& params,
                     const SignalModel& signal) {
    const double m = cutoff_match(lambda, c_eff, params);
    const double mm = cutoff_mismatch(lambda, c_eff, params);
    return params.p * clamped_cdf(signal, state, m) +
           (1.0 - params.p) * (1.0 - clamped_cdf(signal, state, mm));
}

ActionProbabilities action_probabilities(Belief lambda, double c_eff, const ModelParams& params,
                                         const SignalModel& signal) {
    const double m = cutoff_match(lambda, c_eff, params);
    const double mm = cutoff_mismatch(lambda, c_eff, params);
    const double p = params.p;
    return {p * clamped_cdf(signal, State::A, m) + (1.0 - p) * (1.0 - clamped_cdf(signal, State::A, mm)),
            p * clamped_cdf(signal, State::B, m) + (1.0 - p) * (1.0 - clamped_cdf(signal, State::B, mm))};
}

LikelihoodRatio likelihood_ratio(Action action, const ActionProbabilities& probs) {
    const double pa = action == Action::b ? probs.b_given_a : 1.0 - probs.b_given_a;
    const double pb = action == Action::b ? probs.b_given_b : 1.0 - probs.b_given_b;
    if (pa <= 0.0 && pb <= 0.0) {
        throw UndefinedEventError(std::string("action ") + to_string(action) +
                                  " has zero probability in both states");
    }
    if (pa <= 0.0) return {kInf, true};
    if (pb <= 0.0) return {0.0, true};
    return {pb / pa, false};
}

LikelihoodRatio likelihood_ratio(Action action, Belief lambda, double c_eff,
                                 const ModelParams& params, const SignalModel& signal) {
    return likelihood_ratio(action, action_probabilities(lambda, c_eff, params, signal));
}

namespace {

BeliefUpdate apply(double lambda, const LikelihoodRatio& lr) {
    if (!lr.degenerate) return {lambda * lr.value, false};
    return {lr.value == 0.0 ? kAbsorbedLow : kAbsorbedHigh, true};
}

double residual_of(double lambda, const ActionProbabilities& probs) {
    double expected = 0.0;
    for (Action act : {Action::a, Action::b}) {
        const double pa = act == Action::b ? probs.b_given_a : 1.0 - probs.b_given_a;
        if (pa <= 0.0) continue;  // zero-weight action under A
        const auto lr = likelihood_ratio(act, probs);
        expected += lambda * lr.value * pa;
    }
    return std::abs(expected - lambda);
}

}  // namespace

BeliefUpdate update_belief(Belief lambda, Action action, double c_eff, const ModelParams& params,
                           const SignalModel& signal) {
    return apply(lambda.lambda(), likelihood_ratio(action, lambda, c_eff, params, signal));
}

double martingale_residual(Belief lambda, double c_eff, const ModelParams& params,
                           const SignalModel& signal) {
    return residual_of(lambda.lambda(), action_probabilities(lambda, c_eff, params, signal));
}

Action choose_action(PlayerType type, double signal, double m, double mm) noexcept {
    if (type == PlayerType::match) return signal < m ? Action::b : Action::a;
    return signal > mm ? Action::b : Action::a;
}

namespace {

struct PathResult {
    double final_lambda = 1.0;
    bool absorbed = false;
    std::size_t shocks = 0;
};

// One path; records are appended only when `out` is non-null.
PathResult run_path(const ModelParams& params, const SignalModel& signal, State true_state,
                    double shock, std::size_t horizon, const RandomStream& master,
                    std::uint64_t path, Trajectory* out) {
    PathResult res;
    double lambda = 1.0;
    double max_residual = 0.0;
    for (std::size_t t = 0; t < horizon; ++t) {
        const auto period = static_cast<std::uint32_t>(t);
        auto shock_rng = master.split(path, period, StreamPurpose::shock);
        auto type_rng = master.split(path, period, StreamPurpose::type);
        auto signal_rng = master.split(path, period, StreamPurpose::signal);

        PeriodRecord rec;
        rec.t = t + 1;
        rec.shock = shock_rng.uniform() < params.q;
        rec.c_eff = rec.shock ? shock : 0.0;
        rec.type = type_rng.uniform() < params.p ? PlayerType::match : PlayerType::mismatch;
        rec.signal = signal.sample(true_state, signal_rng);
        rec.lambda_before = lambda;

        const Belief belief(lambda);
        const double m = cutoff_match(belief, rec.c_eff, params);
        const double mm = cutoff_mismatch(belief, rec.c_eff, params);
        rec.action = choose_action(rec.type, rec.signal, m, mm);

        if (res.absorbed) {
            rec.lambda_after = lambda;
            rec.absorbed = true;
        } else {
            const auto probs = action_probabilities(belief, rec.c_eff, params, signal);
            const double residual = residual_of(lambda, probs) / lambda;
            max_residual = std::max(max_residual, residual);
            if (!(residual <= kMartingaleTolerance)) {
                std::ostringstream os;
                os << "martingale identity violated at t = " << rec.t << ", lambda = " << lambda
                   << ": relative residual " << residual;
                throw NumericalError(os.str());
            }
            const auto next = apply(lambda, likelihood_ratio(rec.action, probs));
            lambda = next.lambda;
            res.absorbed = next.absorbed;
            rec.lambda_after = lambda;
            rec.absorbed = next.absorbed;
        }
        if (rec.shock) ++res.shocks;
        if (out) out->records.push_back(rec);
    }
    res.final_lambda = lambda;
    if (out) {
        out->absorbed = res.absorbed;
        out->max_martingale_residual = max_residual;
    }
    return res;
}

}  // namespace

Trajectory simulate_trajectory(const ModelParams& params, const SignalModel& signal,
                               State true_state, double shock, std::size_t horizon,
                               std::uint64_t seed, std::uint64_t path) {
    params.check();
    if (horizon < 1) throw ParameterError("horizon must be at least 1");
    check_shock(shock, params);
    Trajectory traj;
    traj.true_state = true_state;
    traj.params = params;
    traj.signal = signal.spec();
    traj.shock = shock;
    traj.seed = seed;
    traj.path = path;
    traj.records.reserve(horizon);
    run_path(params, signal, true_state, shock, horizon, RandomStream(seed), path, &traj);
    return traj;
}

LimitSummary estimate_limit_distribution(const ModelParams& params, const SignalModel& signal,
                                         State true_state, double shock, std::size_t horizon,
                                         std::size_t n_paths, std::uint64_t seed,
                                         const LimitOptions& options) {
    params.check();
    if (n_paths < 1) throw ParameterError("n_paths must be at least 1");
    if (horizon < 1) throw ParameterError("horizon must be at least 1");
    check_shock(shock, params);

    const RandomStream master(seed);
    std::vector<PathResult> results(n_paths);
    const unsigned threads = std::max(1u, std::min<unsigned>(options.threads,
                                                             static_cast<unsigned>(n_paths)));
    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            results[i] = run_path(params, signal, true_state, shock, horizon, master, i, nullptr);
        }
    };
    if (threads == 1) {
        worker(0, n_paths);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (n_paths + threads - 1) / threads;
        for (unsigned k = 0; k < threads; ++k) {
            const std::size_t begin = k * chunk;
            const std::size_t end = std::min(n_paths, begin + chunk);
            if (begin < end) pool.emplace_back(worker, begin, end);
        }
    }

    LimitSummary s;
    s.true_state = true_state;
    s.shock = shock;
    s.horizon = horizon;
    s.n_paths = n_paths;
    s.seed = seed;
    s.threshold = options.threshold;
    s.histogram.lo = options.log10_lo;
    s.histogram.hi = options.log10_hi;
    s.histogram.counts.assign(options.bins, 0);

    const auto regions0 = region_set(0.0, params, signal.support());
    const auto regions_c = region_set(shock, params, signal.support());
    std::size_t below = 0, shocks = 0;
    double sum = 0.0;
    s.final_lambdas.reserve(n_paths);
    // Merge in path order so the summary does not depend on thread count.
    for (const auto& r : results) {
        const double lam = r.final_lambda;
        s.final_lambdas.push_back(lam);
        if (lam < options.threshold) ++below;
        if (r.absorbed) ++s.absorbed_paths;
        shocks += r.shocks;
        sum += lam;
        const double x = std::log10(lam);
        if (x < options.log10_lo) {
            ++s.histogram.underflow;
        } else if (x >= options.log10_hi) {
            ++s.histogram.overflow;
        } else {
            const double width = (options.log10_hi - options.log10_lo) / static_cast<double>(options.bins);
            auto bin = static_cast<std::size_t>((x - options.log10_lo) / width);
            s.histogram.counts[std::min(bin, options.bins - 1)]++;
        }
        auto tally = [lam](const RegionSet& rs, RegionOccupancy& occ) {
            switch (classify_belief(lam, rs)) {
                case RegionKind::confounding: occ.confounding += 1.0; break;
                case RegionKind::herding: occ.herding += 1.0; break;
                case RegionKind::single_active: occ.single_active += 1.0; break;
            }
        };
        tally(regions0, s.no_shock_regions);
        tally(regions_c, s.shock_regions);
    }
    const double n = static_cast<double>(n_paths);
    s.fraction_below = static_cast<double>(below) / n;
    s.mean = sum / n;
    double ss = 0.0;
    for (double lam : s.final_lambdas) ss += (lam - s.mean) * (lam - s.mean);
    s.std_error = n_paths > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    s.shock_frequency = static_cast<double>(shocks) / (n * static_cast<double>(horizon));
    for (auto* occ : {&s.no_shock_regions, &s.shock_regions}) {
        occ->confounding /= n;
        occ->herding /= n;
        occ->single_active /= n;
    }
    return s;
}

}  // namespace conflearn
