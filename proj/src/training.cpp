#include "coldwave/training.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "coldwave/degrade.hpp"
#include "coldwave/errors.hpp"
#include "coldwave/kernels.hpp"
#include "coldwave/metrics.hpp"
#include "coldwave/sampler.hpp"

namespace coldwave {

namespace {

// Named RNG streams: severity draws, crop/pair selection, weight init.
// Substreams are derived per (iteration, batch item), so the first severity
// draw of an iteration is the same in cd and unfolded mode.
constexpr std::uint64_t kStreamSteps = 1;
constexpr std::uint64_t kStreamCrops = 2;
constexpr std::uint64_t kStreamInit = 3;

// Subgradient of mean |out - target|; zero at exact ties.
std::vector<double> l1_grad_out(std::span<const double> out, std::span<const double> target) {
    std::vector<double> g(out.size());
    const double inv_n = 1.0 / static_cast<double>(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double d = out[i] - target[i];
        g[i] = d > 0.0 ? inv_n : (d < 0.0 ? -inv_n : 0.0);
    }
    return g;
}

void accumulate(std::vector<double>& into, const std::vector<double>& from) {
    for (std::size_t i = 0; i < into.size(); ++i) into[i] += from[i];
}

Signal crop_signal(const Signal& s, std::size_t offset, std::size_t length) {
    return Signal(std::vector<double>(s.samples.begin() + static_cast<std::ptrdiff_t>(offset),
                                      s.samples.begin() + static_cast<std::ptrdiff_t>(offset + length)),
                  s.sample_rate);
}

}  // namespace

double l1_loss(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw DataError("l1_loss: signal lengths differ (" + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()) + ")");
    if (a.empty()) return 0.0;
    return kernels::sum_abs_diff(a, b) / static_cast<double>(a.size());
}

double l1_loss(const Signal& a, const Signal& b) { return l1_loss(a.view(), b.view()); }

TrainMode parse_train_mode(const std::string& name) {
    if (name == "cd") return TrainMode::cd;
    if (name == "unfolded") return TrainMode::unfolded;
    throw ConfigError("unknown training mode '" + name + "' (cd|unfolded)");
}

UnfoldedPolicy parse_unfolded_policy(const std::string& name) {
    if (name == "stop-gradient" || name == "stop_gradient") return UnfoldedPolicy::stop_gradient;
    if (name == "full-unroll" || name == "full_unroll") return UnfoldedPolicy::full_unroll;
    throw ConfigError("unknown unfolded policy '" + name + "' (stop-gradient|full-unroll)");
}

std::string loss_log_csv(const TrainRecord& record) {
    std::string out = "iter,loss1,loss2,total\n";
    char line[128];
    for (std::size_t i = 0; i < record.iterations.size(); ++i) {
        const auto& it = record.iterations[i];
        std::snprintf(line, sizeof(line), "%zu,%.17g,%.17g,%.17g\n", i + 1, it.loss1, it.loss2,
                      it.total);
        out += line;
    }
    return out;
}

std::string validation_json(const TrainRecord& record) {
    nlohmann::json doc;
    doc["history"] = nlohmann::json::array();
    for (const auto& v : record.validations)
        doc["history"].push_back({{"iter", v.iter}, {"si_sdr_db", v.si_sdr_db}});
    doc["best_iter"] = record.best_iter;
    doc["best_si_sdr_db"] = record.best_si_sdr_db;
    doc["numeric_failures"] = record.numeric_failures;
    return doc.dump(2) + "\n";
}

double restoration_loss(const Restorer& restorer, const Signal& x0, const Signal& xT,
                        const Schedule& schedule, int t) {
    const Signal x_t = degrade(x0, xT, schedule, t);
    return l1_loss(restorer.restore(x_t, t), x0);
}

LossGrad cd_loss_grad(const DenoiserNet& net, const Signal& x0, const Signal& xT,
                      const Schedule& schedule, int t) {
    const Signal x_t = degrade(x0, xT, schedule, t);
    DenoiserNet::Forward fwd = net.forward(x_t, t);
    const double loss = l1_loss(fwd.output, x0);
    const auto grad_out = l1_grad_out(fwd.output.view(), x0.view());
    return {loss, net.backward(fwd, grad_out)};
}

UnfoldedLossGrad unfolded_loss_grad(const DenoiserNet& net, const Signal& x0, const Signal& xT,
                                    const Schedule& schedule, int t, int t_prime,
                                    UnfoldedPolicy policy) {
    if (t_prime < 1 || t_prime > t)
        throw std::logic_error("unfolded_loss_grad: t' must satisfy 1 <= t' <= t");

    const Signal x_t = degrade(x0, xT, schedule, t);
    DenoiserNet::Forward fwd1 = net.forward(x_t, t);
    const double loss1 = l1_loss(fwd1.output, x0);
    auto grad_out1 = l1_grad_out(fwd1.output.view(), x0.view());

    const Signal x_hat_tp = degrade_reanchored(fwd1.output, x_t, schedule, t, t_prime);
    DenoiserNet::Forward fwd2 = net.forward(x_hat_tp, t_prime);
    const double loss2 = l1_loss(fwd2.output, x0);
    const auto grad_out2 = l1_grad_out(fwd2.output.view(), x0.view());

    std::vector<double> grads;
    if (policy == UnfoldedPolicy::stop_gradient) {
        grads = net.backward(fwd1, grad_out1);
        accumulate(grads, net.backward(fwd2, grad_out2));
    } else {
        // d x_hat_{t'} / d x0_hat is the scalar coefficient of the
        // re-anchored degradation; fold the second term's input gradient
        // into the first call's output gradient (backward is linear in it).
        std::vector<double> grad_in2;
        grads = net.backward(fwd2, grad_out2, &grad_in2);
        const double a_t = schedule.alpha(t);
        const double a_tp = schedule.alpha(t_prime);
        const double ratio = std::sqrt(1.0 - a_tp) / std::sqrt(1.0 - a_t);
        const double chain = std::sqrt(a_tp) - ratio * std::sqrt(a_t);
        for (std::size_t i = 0; i < grad_out1.size(); ++i) grad_out1[i] += chain * grad_in2[i];
        accumulate(grads, net.backward(fwd1, grad_out1));
    }
    return {loss1, loss2, std::move(grads)};
}

StepResult cd_train_step(DenoiserNet& net, const Signal& x0, const Signal& xT,
                         const Schedule& schedule, Rng& rng, double learning_rate) {
    const int t = static_cast<int>(rng.uniform_int(1, schedule.steps()));
    LossGrad lg = cd_loss_grad(net, x0, xT, schedule, t);
    net.sgd_update(lg.grads, learning_rate);
    return {lg.loss, 0.0, t, 0};
}

StepResult unfolded_train_step(DenoiserNet& net, const Signal& x0, const Signal& xT,
                               const Schedule& schedule, Rng& rng, double learning_rate,
                               UnfoldedPolicy policy) {
    const int t = static_cast<int>(rng.uniform_int(1, schedule.steps()));
    const int t_prime = static_cast<int>(rng.uniform_int(1, t));
    UnfoldedLossGrad lg = unfolded_loss_grad(net, x0, xT, schedule, t, t_prime, policy);
    net.sgd_update(lg.grads, learning_rate);
    return {lg.loss1, lg.loss2, t, t_prime};
}

TrainResult train_loop(const TrainConfig& config, const std::vector<UtterancePair>& train_set,
                       const std::vector<UtterancePair>& valid_set) {
    if (config.iters < 1) throw ConfigError("train: iteration count must be >= 1");
    if (config.batch < 1) throw ConfigError("train: batch size must be >= 1");
    if (!(config.learning_rate > 0.0)) throw ConfigError("train: learning rate must be > 0");
    if (!(config.crop_seconds > 0.0)) throw ConfigError("train: crop length must be > 0");
    if (train_set.empty()) throw ConfigError("train: empty training set");

    const int rate = train_set.front().clean.sample_rate;
    for (const auto& p : train_set) {
        if (p.clean.size() != p.noisy.size() || p.clean.sample_rate != p.noisy.sample_rate)
            throw DataError("train: pair '" + p.id + "' has mismatched clean/noisy signals");
        if (p.clean.sample_rate != rate)
            throw DataError("train: mixed sample rates in training set");
    }

    const Schedule schedule = make_cosine_schedule(config.schedule_steps, config.schedule_s);
    const std::uint64_t steps_seed = mix_seed(config.seed, kStreamSteps);
    const std::uint64_t crops_seed = mix_seed(config.seed, kStreamCrops);
    DenoiserNet net(config.net, mix_seed(config.seed, kStreamInit));

    const std::size_t crop_len = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(config.crop_seconds * rate)));

    TrainRecord record;
    std::vector<double> best_params;
    record.best_si_sdr_db = -1e300;

    const std::size_t batch = static_cast<std::size_t>(config.batch);
    std::vector<std::vector<double>> item_grads(batch);
    std::vector<double> item_loss1(batch), item_loss2(batch);
    std::vector<int> item_t(batch), item_tp(batch);

    auto run_validation = [&](int iter_1based) {
        if (valid_set.empty()) return;
        std::vector<double> scores(valid_set.size());
        const std::ptrdiff_t nv = static_cast<std::ptrdiff_t>(valid_set.size());
        std::string error;
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < nv; ++i) {
            try {
                SamplerConfig sc;
                sc.method = SamplerMethod::improved;
                sc.variant = DegradationVariant::reanchored;
                const auto& pair = valid_set[static_cast<std::size_t>(i)];
                const Signal out = run_sampler(net, pair.noisy, schedule, sc).output;
                double score;
                try {
                    score = si_sdr_db(pair.clean, out);
                } catch (const DataError&) {
                    score = -100.0;
                }
                scores[static_cast<std::size_t>(i)] = score;
            } catch (const std::exception& e) {
#pragma omp critical
                if (error.empty()) error = e.what();
            }
        }
        if (!error.empty()) throw DataError("train validation: " + error);
        double mean = 0.0;
        for (double s : scores) mean += s;
        mean /= static_cast<double>(scores.size());
        record.validations.push_back({iter_1based, mean});
        if (mean > record.best_si_sdr_db) {
            record.best_si_sdr_db = mean;
            record.best_iter = iter_1based;
            best_params.assign(net.params().begin(), net.params().end());
        }
    };

    for (int n = 0; n < config.iters; ++n) {
        bool failed = false;
        std::string failure;
        const std::ptrdiff_t nb = static_cast<std::ptrdiff_t>(batch);
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t k = 0; k < nb; ++k) {
            try {
                Rng crop_rng(mix_seed(crops_seed, static_cast<std::uint64_t>(n),
                                      static_cast<std::uint64_t>(k)));
                const auto& pair = train_set[crop_rng.below(train_set.size())];
                const std::size_t len = pair.clean.size();
                const std::size_t take = std::min(crop_len, len);
                const std::size_t offset = crop_rng.below(len - take + 1);
                const Signal x0 = crop_signal(pair.clean, offset, take);
                const Signal xT = crop_signal(pair.noisy, offset, take);

                Rng step_rng(mix_seed(steps_seed, static_cast<std::uint64_t>(n),
                                      static_cast<std::uint64_t>(k)));
                const int t = static_cast<int>(step_rng.uniform_int(1, schedule.steps()));
                item_t[static_cast<std::size_t>(k)] = t;
                if (config.mode == TrainMode::cd) {
                    LossGrad lg = cd_loss_grad(net, x0, xT, schedule, t);
                    item_loss1[static_cast<std::size_t>(k)] = lg.loss;
                    item_loss2[static_cast<std::size_t>(k)] = 0.0;
                    item_tp[static_cast<std::size_t>(k)] = 0;
                    item_grads[static_cast<std::size_t>(k)] = std::move(lg.grads);
                } else {
                    const int t_prime = static_cast<int>(step_rng.uniform_int(1, t));
                    if (t_prime < 1 || t_prime > t)
                        throw std::logic_error("train: t' outside [1, t]");
                    item_tp[static_cast<std::size_t>(k)] = t_prime;
                    UnfoldedLossGrad lg =
                        unfolded_loss_grad(net, x0, xT, schedule, t, t_prime, config.policy);
                    item_loss1[static_cast<std::size_t>(k)] = lg.loss1;
                    item_loss2[static_cast<std::size_t>(k)] = lg.loss2;
                    item_grads[static_cast<std::size_t>(k)] = std::move(lg.grads);
                }
            } catch (const std::exception& e) {
#pragma omp critical
                {
                    failed = true;
                    if (failure.empty()) failure = e.what();
                }
            }
        }

        if (failed) {
            // Numeric failures abort the step without an update; anything
            // else is a real error.
            if (failure.find("non-finite") == std::string::npos) throw DataError("train: " + failure);
            ++record.numeric_failures;
            continue;
        }

        std::vector<double> total = std::move(item_grads[0]);
        for (std::size_t k = 1; k < batch; ++k) accumulate(total, item_grads[k]);
        const double inv_b = 1.0 / static_cast<double>(batch);
        for (double& g : total) g *= inv_b;

        TrainRecord::Iteration it;
        it.ts.assign(item_t.begin(), item_t.end());
        it.t_primes.assign(item_tp.begin(), item_tp.end());
        for (std::size_t k = 0; k < batch; ++k) {
            it.loss1 += item_loss1[k] * inv_b;
            it.loss2 += item_loss2[k] * inv_b;
        }
        it.total = it.loss1 + it.loss2;

        try {
            net.sgd_update(total, config.learning_rate);
        } catch (const NumericError&) {
            ++record.numeric_failures;
            continue;
        }
        record.iterations.push_back(std::move(it));

        const int iter_1based = n + 1;
        if (config.validate_every > 0 &&
            (iter_1based % config.validate_every == 0 || iter_1based == config.iters)) {
            run_validation(iter_1based);
        }
    }

    if (!best_params.empty()) {
        std::copy(best_params.begin(), best_params.end(), net.params().begin());
    }
    return TrainResult{std::move(net), std::move(record)};
}

}  // namespace coldwave
