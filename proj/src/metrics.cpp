#include "coldwave/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "coldwave/errors.hpp"
#include "coldwave/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace coldwave {

namespace {

constexpr double kSilenceRms = 1e-9;
constexpr double kCapDb = 100.0;

double clamp_db(double power_ratio) {
    if (!(power_ratio > 0.0)) return -kCapDb;
    const double db = 10.0 * std::log10(power_ratio);
    return std::clamp(db, -kCapDb, kCapDb);
}

void check_lengths(const Signal& a, const Signal& b, const char* op) {
    if (a.size() != b.size())
        throw DataError(std::string(op) + ": signal lengths differ (" + std::to_string(a.size()) +
                        " vs " + std::to_string(b.size()) + ")");
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

const char* const kColumns[] = {"snr_db_in", "snr_db_out", "si_sdr_in", "si_sdr_out", "l1"};

double column_value(const EvalRow& r, const std::string& col) {
    if (col == "snr_db_in") return r.snr_db_in;
    if (col == "snr_db_out") return r.snr_db_out;
    if (col == "si_sdr_in") return r.si_sdr_in;
    if (col == "si_sdr_out") return r.si_sdr_out;
    return r.l1;
}

}  // namespace

double snr_db(const Signal& reference, const Signal& estimate) {
    check_lengths(reference, estimate, "snr_db");
    const double ref_power = kernels::sum_sq(reference.view());
    if (rms(reference.view()) <= kSilenceRms)
        throw DataError("snr_db: silent reference signal");
    double err_power = 0.0;
    {
        std::vector<double> err(reference.size());
        kernels::lincomb2(1.0, estimate.view(), -1.0, reference.view(), err);
        err_power = kernels::sum_sq(err);
    }
    if (err_power == 0.0) return kCapDb;
    return clamp_db(ref_power / err_power);
}

double si_sdr_db(const Signal& reference, const Signal& estimate) {
    check_lengths(reference, estimate, "si_sdr_db");
    if (rms(reference.view()) <= kSilenceRms) throw DataError("si_sdr_db: silent reference signal");
    if (rms(estimate.view()) <= kSilenceRms) throw DataError("si_sdr_db: silent estimate signal");

    const double ref_power = kernels::sum_sq(reference.view());
    const double scale = kernels::dot(estimate.view(), reference.view()) / ref_power;
    const double target_power = scale * scale * ref_power;
    if (target_power <= 0.0) return -kCapDb;  // orthogonal estimate

    std::vector<double> residual(reference.size());
    kernels::lincomb2(1.0, estimate.view(), -scale, reference.view(), residual);
    const double residual_power = kernels::sum_sq(residual);
    if (residual_power == 0.0) return kCapDb;
    return clamp_db(target_power / residual_power);
}

std::string EvalReport::to_csv() const {
    std::string out = "id,method,steps,snr_db_in,snr_db_out,si_sdr_in,si_sdr_out,l1\n";
    char line[256];
    for (const auto& r : rows) {
        std::snprintf(line, sizeof(line), "%s,%s,%d,%.9g,%.9g,%.9g,%.9g,%.9g\n", r.id.c_str(),
                      r.method.c_str(), r.steps, r.snr_db_in, r.snr_db_out, r.si_sdr_in,
                      r.si_sdr_out, r.l1);
        out += line;
    }
    return out;
}

std::string EvalReport::to_json() const {
    nlohmann::json doc;
    doc["rows"] = nlohmann::json::array();
    for (const auto& r : rows) {
        doc["rows"].push_back({{"id", r.id},
                               {"method", r.method},
                               {"steps", r.steps},
                               {"snr_db_in", r.snr_db_in},
                               {"snr_db_out", r.snr_db_out},
                               {"si_sdr_in", r.si_sdr_in},
                               {"si_sdr_out", r.si_sdr_out},
                               {"l1", r.l1}});
    }
    doc["aggregates"] = nlohmann::json::array();
    for (const auto& a : aggregates) {
        doc["aggregates"].push_back({{"method", a.method},
                                     {"steps", a.steps},
                                     {"mean", a.mean},
                                     {"median", a.median}});
    }
    return doc.dump(2) + "\n";
}

void recompute_aggregates(EvalReport& report) {
    report.aggregates.clear();
    std::vector<std::pair<std::string, int>> keys;
    for (const auto& r : report.rows) {
        const std::pair<std::string, int> key{r.method, r.steps};
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
    }
    for (const auto& [method, steps] : keys) {
        EvalReport::Aggregate agg;
        agg.method = method;
        agg.steps = steps;
        for (const char* col : kColumns) {
            std::vector<double> values;
            for (const auto& r : report.rows)
                if (r.method == method && r.steps == steps) values.push_back(column_value(r, col));
            double sum = 0.0;
            for (double v : values) sum += v;
            agg.mean[col] = values.empty() ? 0.0 : sum / static_cast<double>(values.size());
            agg.median[col] = median_of(values);
        }
        report.aggregates.push_back(std::move(agg));
    }
}

EvalReport evaluate(const std::vector<UtterancePair>& pairs, const Schedule& schedule,
                    const std::vector<EvalTask>& tasks, int jobs) {
    for (const auto& task : tasks) {
        if (task.steps < 1 || task.steps > schedule.steps())
            throw ConfigError("evaluate: task '" + task.method_label + "' steps " +
                              std::to_string(task.steps) + " out of range [1, " +
                              std::to_string(schedule.steps()) + "]");
        if (!task.restorer_for) throw ConfigError("evaluate: task without a restorer");
    }

    EvalReport report;
    const std::size_t n_tasks = tasks.size();
    report.rows.resize(pairs.size() * n_tasks);

#ifdef _OPENMP
    const int n_threads = jobs > 0 ? jobs : omp_get_max_threads();
#else
    const int n_threads = 1;
    (void)jobs;
#endif
    const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(report.rows.size());
    std::string first_error;
#pragma omp parallel for num_threads(n_threads) schedule(dynamic)
    for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
        try {
            const auto& pair = pairs[static_cast<std::size_t>(idx) / n_tasks];
            const auto& task = tasks[static_cast<std::size_t>(idx) % n_tasks];
            auto restorer = task.restorer_for(pair);

            Signal enhanced;
            if (task.steps == 1) {
                enhanced = direct_reconstruction(*restorer, pair.noisy, schedule.steps());
            } else {
                SamplerConfig cfg;
                cfg.method = task.method;
                cfg.variant = task.variant;
                cfg.t_start = task.steps;
                enhanced = run_sampler(*restorer, pair.noisy, schedule, cfg).output;
            }

            EvalRow row;
            row.id = pair.id;
            row.method = task.method_label;
            row.steps = task.steps;
            row.snr_db_in = snr_db(pair.clean, pair.noisy);
            row.snr_db_out = snr_db(pair.clean, enhanced);
            row.si_sdr_in = si_sdr_db(pair.clean, pair.noisy);
            // A silent enhanced signal is reportable (floor), not fatal.
            try {
                row.si_sdr_out = si_sdr_db(pair.clean, enhanced);
            } catch (const DataError&) {
                row.si_sdr_out = -100.0;
            }
            row.l1 = kernels::sum_abs_diff(enhanced.view(), pair.clean.view()) /
                     static_cast<double>(std::max<std::size_t>(1, pair.clean.size()));
            report.rows[static_cast<std::size_t>(idx)] = std::move(row);
        } catch (const std::exception& e) {
#pragma omp critical
            if (first_error.empty()) first_error = e.what();
        }
    }
    if (!first_error.empty()) throw DataError("evaluate: " + first_error);

    recompute_aggregates(report);
    return report;
}

}  // namespace coldwave
