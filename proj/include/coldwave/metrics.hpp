#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "coldwave/restorer.hpp"
#include "coldwave/sampler.hpp"
#include "coldwave/schedule.hpp"
#include "coldwave/signal.hpp"

namespace coldwave {

// Waveform metrics in dB, clamped to [-100, +100] so reports stay finite.

/// 10 log10(|ref|^2 / |est - ref|^2). Throws DataError when the reference is
/// silent (RMS <= 1e-9).
double snr_db(const Signal& reference, const Signal& estimate);

/// Scale-invariant SDR: project the estimate onto the reference and compare
/// the projection against the residual. Orthogonal estimates hit the -100 dB
/// floor. Throws DataError when either signal is silent.
double si_sdr_db(const Signal& reference, const Signal& estimate);

struct EvalRow {
    std::string id;
    std::string method;
    int steps = 0;
    double snr_db_in = 0.0;
    double snr_db_out = 0.0;
    double si_sdr_in = 0.0;
    double si_sdr_out = 0.0;
    double l1 = 0.0;
};

struct EvalReport {
    std::vector<EvalRow> rows;
    struct Aggregate {
        std::string method;
        int steps = 0;
        std::map<std::string, double> mean;
        std::map<std::string, double> median;
    };
    std::vector<Aggregate> aggregates;  // one per (method, steps), row order

    std::string to_csv() const;
    std::string to_json() const;
};

/// Recompute the aggregates from the rows (grouped by method and steps).
void recompute_aggregates(EvalReport& report);

/// One column of the evaluation grid: a labelled sampler configuration plus
/// the restorer to drive it with. The provider may return a shared model or
/// build a per-utterance instrument (e.g. an oracle).
struct EvalTask {
    std::string method_label;
    int steps = 1;  // 1 = direct reconstruction at severity T
    SamplerMethod method = SamplerMethod::improved;
    DegradationVariant variant = DegradationVariant::reanchored;
    std::function<std::shared_ptr<const Restorer>(const UtterancePair&)> restorer_for;
};

/// Run every task over every utterance; one row per (utterance, task).
/// jobs bounds the per-utterance parallelism (0 = hardware default).
EvalReport evaluate(const std::vector<UtterancePair>& pairs, const Schedule& schedule,
                    const std::vector<EvalTask>& tasks, int jobs = 0);

}  // namespace coldwave
