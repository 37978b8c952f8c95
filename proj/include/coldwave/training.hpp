#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coldwave/denoiser.hpp"
#include "coldwave/rng.hpp"
#include "coldwave/schedule.hpp"
#include "coldwave/signal.hpp"

namespace coldwave {

/// Mean absolute difference over all samples. Throws DataError on length
/// mismatch.
double l1_loss(std::span<const double> a, std::span<const double> b);
double l1_loss(const Signal& a, const Signal& b);

enum class TrainMode { cd, unfolded };
enum class UnfoldedPolicy { stop_gradient, full_unroll };

TrainMode parse_train_mode(const std::string& name);
UnfoldedPolicy parse_unfolded_policy(const std::string& name);

struct TrainConfig {
    int iters = 20000;
    int batch = 16;
    double learning_rate = 1e-3;
    int schedule_steps = 50;
    double schedule_s = 0.008;
    TrainMode mode = TrainMode::cd;
    UnfoldedPolicy policy = UnfoldedPolicy::stop_gradient;
    std::uint64_t seed = 0;
    int validate_every = 500;
    double crop_seconds = 1.0;
    DenoiserConfig net;
};

struct TrainRecord {
    struct Iteration {
        std::vector<int> ts;        // severity draw per batch item
        std::vector<int> t_primes;  // second draw (unfolded mode only)
        double loss1 = 0.0;
        double loss2 = 0.0;
        double total = 0.0;
    };
    std::vector<Iteration> iterations;
    struct Validation {
        int iter;
        double si_sdr_db;
    };
    std::vector<Validation> validations;
    int best_iter = -1;
    double best_si_sdr_db = 0.0;
    int numeric_failures = 0;
};

/// CSV with header "iter,loss1,loss2,total"; iter is 1-based.
std::string loss_log_csv(const TrainRecord& record);
/// JSON document with the validation history and best-checkpoint pointer.
std::string validation_json(const TrainRecord& record);

/// Loss of one restoration pass against the clean target, for any restorer:
/// l1(R(degrade(x0, xT, t), t), x0). No gradients, no update.
double restoration_loss(const Restorer& restorer, const Signal& x0, const Signal& xT,
                        const Schedule& schedule, int t);

/// Loss and flat parameter gradients of the original objective for one
/// utterance at a fixed severity.
struct LossGrad {
    double loss;
    std::vector<double> grads;
};
LossGrad cd_loss_grad(const DenoiserNet& net, const Signal& x0, const Signal& xT,
                      const Schedule& schedule, int t);

/// Both unfolded loss terms and the summed gradient. Under stop_gradient the
/// first estimate is treated as a constant when forming the re-degraded
/// input; full_unroll also backpropagates through the re-anchored
/// degradation into the first restoration call.
struct UnfoldedLossGrad {
    double loss1;
    double loss2;
    std::vector<double> grads;
};
UnfoldedLossGrad unfolded_loss_grad(const DenoiserNet& net, const Signal& x0, const Signal& xT,
                                    const Schedule& schedule, int t, int t_prime,
                                    UnfoldedPolicy policy);

/// Single-utterance training steps: draw severities from rng, compute the
/// loss and gradients, apply one SGD update.
struct StepResult {
    double loss1 = 0.0;
    double loss2 = 0.0;
    int t = 0;
    int t_prime = 0;  // 0 for cd mode
};
StepResult cd_train_step(DenoiserNet& net, const Signal& x0, const Signal& xT,
                         const Schedule& schedule, Rng& rng, double learning_rate);
StepResult unfolded_train_step(DenoiserNet& net, const Signal& x0, const Signal& xT,
                               const Schedule& schedule, Rng& rng, double learning_rate,
                               UnfoldedPolicy policy = UnfoldedPolicy::stop_gradient);

/// Minibatch training over paired utterances with periodic validation
/// (mean SI-SDR of improved sampling over the validation set). Returns the
/// model with the best validation score (the final model when the
/// validation set is empty).
struct TrainResult {
    DenoiserNet model;
    TrainRecord record;
};
TrainResult train_loop(const TrainConfig& config, const std::vector<UtterancePair>& train_set,
                       const std::vector<UtterancePair>& valid_set);

}  // namespace coldwave
