// coldwave: cold-diffusion signal restoration toolkit.
//
// Subcommands: synth (build a synthetic paired corpus), train (cd or
// unfolded training of the denoiser), enhance (restore noisy WAVs with a
// trained checkpoint), eval (metric grid over a test manifest), demo
// (scalar sampling walk-through and schedule dump).
//
// Option resolution order: built-in defaults < --config JSON < flags. Every
// run that produces files echoes the fully resolved configuration next to
// its outputs as resolved_config.json.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "coldwave/dataset.hpp"
#include "coldwave/degrade.hpp"
#include "coldwave/denoiser.hpp"
#include "coldwave/errors.hpp"
#include "coldwave/metrics.hpp"
#include "coldwave/sampler.hpp"
#include "coldwave/schedule.hpp"
#include "coldwave/synth.hpp"
#include "coldwave/training.hpp"
#include "coldwave/wav.hpp"

namespace fs = std::filesystem;
using coldwave::ConfigError;
using coldwave::DataError;
using nlohmann::json;

namespace {

// Binds CLI11 options to JSON config keys. Keys mirror the long flag names
// with dashes replaced by underscores.
class ConfigBinder {
public:
    template <typename T>
    void bind(CLI::Option* opt, const std::string& key, T* target) {
        entries_.push_back({key, opt, [target](const json& v) { *target = v.get<T>(); },
                            [target]() { return json(*target); }});
    }

    void bind_flag(CLI::Option* opt, const std::string& key, bool* target) {
        entries_.push_back({key, opt, [target](const json& v) { *target = v.get<bool>(); },
                            [target]() { return json(*target); }});
    }

    // Applies config-file values for options not given on the command line.
    void apply(const std::string& config_path) {
        if (config_path.empty()) return;
        std::ifstream in(config_path);
        if (!in) throw ConfigError("config: cannot open: " + config_path);
        json doc;
        try {
            in >> doc;
        } catch (const json::exception& e) {
            throw ConfigError("config: invalid JSON in " + config_path + ": " + e.what());
        }
        if (!doc.is_object()) throw ConfigError("config: top level must be an object");
        for (const auto& [key, value] : doc.items()) {
            bool known = false;
            for (auto& e : entries_) {
                if (e.key != key) continue;
                known = true;
                if (e.opt == nullptr || e.opt->count() == 0) {
                    try {
                        e.from_json(value);
                    } catch (const json::exception& ex) {
                        throw ConfigError("config: bad value for '" + key + "': " + ex.what());
                    }
                }
            }
            if (!known) throw ConfigError("config: unknown key '" + key + "'");
        }
    }

    json resolved() const {
        json doc = json::object();
        for (const auto& e : entries_) doc[e.key] = e.to_json();
        return doc;
    }

private:
    struct Entry {
        std::string key;
        CLI::Option* opt;
        std::function<void(const json&)> from_json;
        std::function<json()> to_json;
    };
    std::vector<Entry> entries_;
};

std::vector<double> parse_double_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError(std::string(what) + ": bad number '" + item + "'");
        }
    }
    if (out.empty()) throw ConfigError(std::string(what) + ": empty list");
    return out;
}

std::vector<std::string> parse_string_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
    std::vector<int> out;
    for (double v : parse_double_list(text, what)) out.push_back(static_cast<int>(v));
    return out;
}

// --out, falling back to $COLDWAVE_OUT_ROOT/<subcommand>.
std::string resolve_out_dir(const std::string& out_flag, const std::string& subcommand) {
    if (!out_flag.empty()) return out_flag;
    const char* root = std::getenv("COLDWAVE_OUT_ROOT");
    if (root != nullptr && *root != '\0') return (fs::path(root) / subcommand).string();
    throw ConfigError(subcommand + ": --out is required (or set COLDWAVE_OUT_ROOT)");
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open for writing: " + path);
    out << content;
    if (!out) throw DataError("write failed: " + path);
}

void echo_resolved_config(const std::string& out_dir, const ConfigBinder& binder) {
    write_text_file((fs::path(out_dir) / "resolved_config.json").string(),
                    binder.resolved().dump(2) + "\n");
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create output directory: " + dir);
}

// ---------------------------------------------------------------- synth ---

struct SynthOptions {
    std::string config, out;
    int n_train = 200, n_valid = 20, n_test = 40;
    double duration_s = 1.0;
    int sample_rate = 8000;
    std::uint64_t seed = 0;
    std::string noise_kinds = "white,pink,tonal-babble";
    std::string train_snrs = "0,5,10,15";
    std::string test_snrs = "2.5,7.5,12.5,17.5";
};

int run_synth(const SynthOptions& opt, const ConfigBinder& binder) {
    coldwave::DatasetConfig cfg;
    cfg.n_train = opt.n_train;
    cfg.n_valid = opt.n_valid;
    cfg.n_test = opt.n_test;
    cfg.duration_s = opt.duration_s;
    cfg.sample_rate = opt.sample_rate;
    cfg.seed = opt.seed;
    cfg.train_snrs_db = parse_double_list(opt.train_snrs, "train-snrs");
    cfg.test_snrs_db = parse_double_list(opt.test_snrs, "test-snrs");
    cfg.noise_kinds.clear();
    for (const auto& name : parse_string_list(opt.noise_kinds))
        cfg.noise_kinds.push_back(coldwave::parse_noise_kind(name));

    const std::string out_dir = resolve_out_dir(opt.out, "synth");
    ensure_dir(out_dir);
    const auto records = coldwave::build_synthetic_dataset(cfg, out_dir);
    echo_resolved_config(out_dir, binder);
    std::printf("wrote %zu utterance pairs under %s (manifest.csv + per-split manifests)\n",
                records.size(), out_dir.c_str());
    return 0;
}

// ---------------------------------------------------------------- train ---

struct TrainOptions {
    std::string config, data, out;
    std::string mode = "cd";
    std::string policy = "stop-gradient";
    int iters = 20000, batch = 16;
    double lr = 1e-3;
    int schedule_steps = 50;
    double schedule_s = 0.008;
    std::uint64_t seed = 0;
    int val_every = 500;
    double crop_seconds = 1.0;
    int frame = 256, hidden = 512, layers = 3, embed = 128;
};

int run_train(const TrainOptions& opt, const ConfigBinder& binder) {
    if (opt.data.empty()) throw ConfigError("train: --data is required");
    const std::string train_manifest = (fs::path(opt.data) / "manifest_train.csv").string();
    const std::string valid_manifest = (fs::path(opt.data) / "manifest_valid.csv").string();
    const auto train_pairs =
        coldwave::load_pairs(train_manifest, coldwave::load_manifest(train_manifest));
    std::vector<coldwave::UtterancePair> valid_pairs;
    if (fs::exists(valid_manifest))
        valid_pairs = coldwave::load_pairs(valid_manifest, coldwave::load_manifest(valid_manifest));

    coldwave::TrainConfig cfg;
    cfg.iters = opt.iters;
    cfg.batch = opt.batch;
    cfg.learning_rate = opt.lr;
    cfg.schedule_steps = opt.schedule_steps;
    cfg.schedule_s = opt.schedule_s;
    cfg.mode = coldwave::parse_train_mode(opt.mode);
    cfg.policy = coldwave::parse_unfolded_policy(opt.policy);
    cfg.seed = opt.seed;
    cfg.validate_every = opt.val_every;
    cfg.crop_seconds = opt.crop_seconds;
    cfg.net = {opt.frame, opt.hidden, opt.layers, opt.embed};

    const std::string out_dir = resolve_out_dir(opt.out, "train");
    ensure_dir(out_dir);

    auto result = coldwave::train_loop(cfg, train_pairs, valid_pairs);

    const int rate = train_pairs.front().clean.sample_rate;
    result.model.save_file((fs::path(out_dir) / "checkpoint.bin").string(), cfg.schedule_steps,
                           cfg.schedule_s, rate);
    write_text_file((fs::path(out_dir) / "loss_log.csv").string(),
                    coldwave::loss_log_csv(result.record));
    write_text_file((fs::path(out_dir) / "validation.json").string(),
                    coldwave::validation_json(result.record));
    echo_resolved_config(out_dir, binder);

    std::printf("trained %zu iterations (mode=%s); best validation SI-SDR %.3f dB at iter %d\n",
                result.record.iterations.size(), opt.mode.c_str(), result.record.best_si_sdr_db,
                result.record.best_iter);
    return 0;
}

// -------------------------------------------------------------- enhance ---

struct EnhanceOptions {
    std::string config, ckpt, out;
    std::vector<std::string> inputs;
    int steps = -1;  // -1: checkpoint's T
    std::string method = "improved";
    std::string variant = "reanchored";
    std::string reference;
    bool dump_trajectory = false;
    bool verbose = false;
    int jobs = 0;
};

int run_enhance(const EnhanceOptions& opt, const ConfigBinder& binder) {
    if (opt.ckpt.empty()) throw ConfigError("enhance: --ckpt is required");
    if (!fs::exists(opt.ckpt)) throw ConfigError("enhance: checkpoint not found: " + opt.ckpt);
    if (opt.inputs.empty()) throw ConfigError("enhance: at least one --in WAV is required");
    if (!opt.reference.empty() && opt.inputs.size() != 1)
        throw ConfigError("enhance: --reference works with a single input");

    auto loaded = coldwave::DenoiserNet::load_file(opt.ckpt);
    const coldwave::Schedule schedule =
        coldwave::make_cosine_schedule(loaded.schedule_steps, loaded.schedule_s);
    const int steps = opt.steps < 0 ? schedule.steps() : opt.steps;
    if (steps < 1 || steps > schedule.steps())
        throw ConfigError("enhance: --steps must be in [1, " + std::to_string(schedule.steps()) +
                          "]");
    const auto method = coldwave::parse_method(opt.method);
    const auto variant = coldwave::parse_variant(opt.variant);

    const std::string out_dir = resolve_out_dir(opt.out, "enhance");
    ensure_dir(out_dir);

    coldwave::Signal reference;
    if (!opt.reference.empty()) reference = coldwave::read_wav(opt.reference);

    std::size_t total_calls = 0;
    std::string first_error;
    const std::ptrdiff_t n_inputs = static_cast<std::ptrdiff_t>(opt.inputs.size());
#ifdef _OPENMP
    const int n_threads = opt.jobs > 0 ? opt.jobs : 1;
#else
    const int n_threads = 1;
#endif
#pragma omp parallel for num_threads(n_threads) schedule(dynamic) reduction(+ : total_calls)
    for (std::ptrdiff_t i = 0; i < n_inputs; ++i) {
        try {
            const std::string& in_path = opt.inputs[static_cast<std::size_t>(i)];
            const coldwave::Signal noisy = coldwave::read_wav(in_path);
            if (noisy.sample_rate != loaded.sample_rate)
                throw DataError("enhance: " + in_path + " sample rate " +
                                std::to_string(noisy.sample_rate) +
                                " does not match checkpoint training rate " +
                                std::to_string(loaded.sample_rate));

            const std::string stem = fs::path(in_path).stem().string();
            coldwave::Signal enhanced;
            std::optional<coldwave::Trajectory> trajectory;
            if (steps == 1) {
                enhanced = coldwave::direct_reconstruction(loaded.net, noisy, schedule.steps());
                total_calls += 1;
            } else {
                coldwave::SamplerConfig sc;
                sc.method = method == coldwave::SamplerMethod::direct
                                ? coldwave::SamplerMethod::improved
                                : method;
                sc.variant = variant;
                sc.t_start = steps;
                sc.record_trajectory = opt.dump_trajectory;
                auto result = coldwave::run_sampler(loaded.net, noisy, schedule, sc);
                enhanced = std::move(result.output);
                trajectory = std::move(result.trajectory);
                total_calls += result.restorer_calls;
            }

            coldwave::write_wav((fs::path(out_dir) / (stem + "_enhanced.wav")).string(), enhanced);

            if (trajectory) {
                std::string csv = "t,l1\n";
                for (const auto& step : trajectory->steps) {
                    char name[64];
                    std::snprintf(name, sizeof(name), "%s_t%03d.wav", stem.c_str(), step.t);
                    coldwave::write_wav((fs::path(out_dir) / name).string(), step.x);
                    if (reference.size() == step.x.size()) {
                        char line[64];
                        std::snprintf(line, sizeof(line), "%d,%.9g\n", step.t,
                                      coldwave::l1_loss(step.x, reference));
                        csv += line;
                    }
                }
                if (!reference.samples.empty())
                    write_text_file((fs::path(out_dir) / (stem + "_trajectory.csv")).string(), csv);
            }
        } catch (const std::exception& e) {
#pragma omp critical
            if (first_error.empty()) first_error = e.what();
        }
    }
    if (!first_error.empty()) throw DataError(first_error);

    echo_resolved_config(out_dir, binder);
    if (opt.verbose) std::printf("restorer calls: %zu\n", total_calls);
    std::printf("enhanced %zu file(s) into %s\n", opt.inputs.size(), out_dir.c_str());
    return 0;
}

// ----------------------------------------------------------------- eval ---

struct EvalOptions {
    std::string config, data, manifest, out;
    std::vector<std::string> models;  // NAME=PATH or PATH
    bool oracle = false;
    std::string steps = "1,50";
    std::string method = "improved";
    std::string variants = "reanchored";
    int schedule_steps = 50;
    double schedule_s = 0.008;
    int jobs = 0;
};

int run_eval(const EvalOptions& opt, const ConfigBinder& binder) {
    std::string manifest_path = opt.manifest;
    if (manifest_path.empty()) {
        if (opt.data.empty()) throw ConfigError("eval: give --manifest or --data");
        manifest_path = (fs::path(opt.data) / "manifest_test.csv").string();
    }
    const auto pairs =
        coldwave::load_pairs(manifest_path, coldwave::load_manifest(manifest_path));
    if (pairs.empty()) throw ConfigError("eval: empty manifest: " + manifest_path);

    if (opt.models.empty() && !opt.oracle)
        throw ConfigError("eval: give at least one --model NAME=PATH or --oracle");

    struct Model {
        std::string name;
        std::shared_ptr<coldwave::DenoiserNet> net;
    };
    std::vector<Model> models;
    int steps_T = opt.schedule_steps;
    double s_offset = opt.schedule_s;
    for (const auto& spec : opt.models) {
        const auto eq = spec.find('=');
        const std::string name = eq == std::string::npos ? "model" : spec.substr(0, eq);
        const std::string path = eq == std::string::npos ? spec : spec.substr(eq + 1);
        if (!fs::exists(path)) throw ConfigError("eval: checkpoint not found: " + path);
        auto loaded = coldwave::DenoiserNet::load_file(path);
        if (!models.empty() && (loaded.schedule_steps != steps_T || loaded.schedule_s != s_offset))
            throw ConfigError("eval: checkpoint '" + path +
                              "' disagrees with the grid schedule (T, s)");
        steps_T = loaded.schedule_steps;
        s_offset = loaded.schedule_s;
        if (loaded.sample_rate != pairs.front().clean.sample_rate)
            throw ConfigError("eval: checkpoint '" + path + "' trained at " +
                              std::to_string(loaded.sample_rate) + " Hz but manifest audio is " +
                              std::to_string(pairs.front().clean.sample_rate) + " Hz");
        models.push_back({name, std::make_shared<coldwave::DenoiserNet>(std::move(loaded.net))});
    }
    const coldwave::Schedule schedule = coldwave::make_cosine_schedule(steps_T, s_offset);

    const auto step_list = parse_int_list(opt.steps, "steps");
    const auto variant_list = parse_string_list(opt.variants);
    const auto method = coldwave::parse_method(opt.method);

    std::vector<coldwave::EvalTask> tasks;
    auto add_grid = [&](const std::string& name,
                        std::function<std::shared_ptr<const coldwave::Restorer>(
                            const coldwave::UtterancePair&)> provider) {
        for (int steps : step_list) {
            if (steps == 1) {
                tasks.push_back({name + ":direct", 1, coldwave::SamplerMethod::direct,
                                 coldwave::DegradationVariant::reanchored, provider});
                continue;
            }
            for (const auto& vname : variant_list) {
                const auto variant = coldwave::parse_variant(vname);
                tasks.push_back({name + ":" + coldwave::method_name(method) + ":" +
                                     coldwave::variant_name(variant),
                                 steps, method, variant, provider});
            }
        }
    };
    for (const auto& model : models) {
        auto net = model.net;
        add_grid(model.name, [net](const coldwave::UtterancePair&) {
            return std::static_pointer_cast<const coldwave::Restorer>(net);
        });
    }
    if (opt.oracle) {
        add_grid("oracle", [](const coldwave::UtterancePair& pair) {
            return std::static_pointer_cast<const coldwave::Restorer>(
                std::make_shared<coldwave::OracleRestorer>(pair.clean));
        });
    }

    const auto report = coldwave::evaluate(pairs, schedule, tasks, opt.jobs);

    const std::string out_dir = resolve_out_dir(opt.out, "eval");
    ensure_dir(out_dir);
    write_text_file((fs::path(out_dir) / "report.csv").string(), report.to_csv());
    write_text_file((fs::path(out_dir) / "report.json").string(), report.to_json());
    echo_resolved_config(out_dir, binder);

    for (const auto& agg : report.aggregates) {
        std::printf("%-28s steps=%-3d mean si_sdr_in %7.3f dB -> si_sdr_out %7.3f dB\n",
                    agg.method.c_str(), agg.steps, agg.mean.at("si_sdr_in"),
                    agg.mean.at("si_sdr_out"));
    }
    return 0;
}

// ----------------------------------------------------------------- demo ---

struct DemoOptions {
    std::string config, out;
    int schedule_steps = 2;
    double schedule_s = 0.008;
    bool schedule_dump = false;
};

int run_demo(const DemoOptions& opt, const ConfigBinder& binder) {
    std::string text;
    if (opt.schedule_dump) {
        const auto schedule =
            coldwave::make_cosine_schedule(opt.schedule_steps, opt.schedule_s);
        text = schedule.to_csv();
    } else {
        // Scalar walk-through of the improved sampler on an equally spaced
        // schedule: x0 = 1, x_T = 0, oracle restorer.
        const auto schedule = coldwave::make_linear_schedule(opt.schedule_steps);
        const coldwave::Signal x0({1.0}, 8000);
        const coldwave::Signal xT({0.0}, 8000);
        coldwave::OracleRestorer oracle(x0);
        coldwave::SamplerConfig sc;
        sc.record_trajectory = true;
        const auto result = coldwave::run_sampler(oracle, xT, schedule, sc);
        text = "t,alpha,x\n";
        char line[96];
        for (const auto& step : result.trajectory->steps) {
            std::snprintf(line, sizeof(line), "%d,%.9g,%.9g\n", step.t, schedule.alpha(step.t),
                          step.x.samples[0]);
            text += line;
        }
    }

    std::fputs(text.c_str(), stdout);
    if (!opt.out.empty()) {
        ensure_dir(opt.out);
        write_text_file(
            (fs::path(opt.out) / (opt.schedule_dump ? "schedule.csv" : "demo_trajectory.csv"))
                .string(),
            text);
        echo_resolved_config(opt.out, binder);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cold-diffusion signal restoration toolkit"};
    app.require_subcommand(1);

    SynthOptions synth;
    ConfigBinder synth_binder;
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic paired corpus");
    synth_binder.bind(synth_cmd->add_option("--out", synth.out, "output directory"), "out",
                      &synth.out);
    synth_cmd->add_option("--config", synth.config, "JSON config file");
    synth_binder.bind(synth_cmd->add_option("--n-train", synth.n_train), "n_train", &synth.n_train);
    synth_binder.bind(synth_cmd->add_option("--n-valid", synth.n_valid), "n_valid", &synth.n_valid);
    synth_binder.bind(synth_cmd->add_option("--n-test", synth.n_test), "n_test", &synth.n_test);
    synth_binder.bind(synth_cmd->add_option("--duration", synth.duration_s, "seconds per utterance"),
                      "duration", &synth.duration_s);
    synth_binder.bind(synth_cmd->add_option("--rate", synth.sample_rate, "sample rate in Hz"),
                      "rate", &synth.sample_rate);
    synth_binder.bind(synth_cmd->add_option("--seed", synth.seed), "seed", &synth.seed);
    synth_binder.bind(synth_cmd->add_option("--noise-kinds", synth.noise_kinds,
                                            "comma list: white,pink,tonal-babble"),
                      "noise_kinds", &synth.noise_kinds);
    synth_binder.bind(synth_cmd->add_option("--train-snrs", synth.train_snrs, "dB grid"),
                      "train_snrs", &synth.train_snrs);
    synth_binder.bind(synth_cmd->add_option("--test-snrs", synth.test_snrs, "dB grid"), "test_snrs",
                      &synth.test_snrs);

    TrainOptions train;
    ConfigBinder train_binder;
    auto* train_cmd = app.add_subcommand("train", "train the denoiser (cd or unfolded)");
    train_binder.bind(train_cmd->add_option("--data", train.data, "dataset directory from synth"),
                      "data", &train.data);
    train_binder.bind(train_cmd->add_option("--out", train.out, "output directory"), "out",
                      &train.out);
    train_cmd->add_option("--config", train.config, "JSON config file");
    train_binder.bind(train_cmd->add_option("--mode", train.mode, "cd|unfolded"), "mode",
                      &train.mode);
    train_binder.bind(
        train_cmd->add_option("--unfold-policy", train.policy, "stop-gradient|full-unroll"),
        "unfold_policy", &train.policy);
    train_binder.bind(train_cmd->add_option("--iters", train.iters), "iters", &train.iters);
    train_binder.bind(train_cmd->add_option("--batch", train.batch), "batch", &train.batch);
    train_binder.bind(train_cmd->add_option("--lr", train.lr), "lr", &train.lr);
    train_binder.bind(train_cmd->add_option("--T", train.schedule_steps, "diffusion steps"), "T",
                      &train.schedule_steps);
    train_binder.bind(train_cmd->add_option("--s", train.schedule_s, "cosine schedule offset"), "s",
                      &train.schedule_s);
    train_binder.bind(train_cmd->add_option("--seed", train.seed), "seed", &train.seed);
    train_binder.bind(train_cmd->add_option("--val-every", train.val_every), "val_every",
                      &train.val_every);
    train_binder.bind(train_cmd->add_option("--crop-seconds", train.crop_seconds), "crop_seconds",
                      &train.crop_seconds);
    train_binder.bind(train_cmd->add_option("--frame", train.frame), "frame", &train.frame);
    train_binder.bind(train_cmd->add_option("--hidden", train.hidden), "hidden", &train.hidden);
    train_binder.bind(train_cmd->add_option("--layers", train.layers), "layers", &train.layers);
    train_binder.bind(train_cmd->add_option("--embed", train.embed), "embed", &train.embed);

    EnhanceOptions enhance;
    ConfigBinder enhance_binder;
    auto* enhance_cmd = app.add_subcommand("enhance", "restore noisy WAV files");
    enhance_binder.bind(enhance_cmd->add_option("--ckpt", enhance.ckpt, "checkpoint file"), "ckpt",
                        &enhance.ckpt);
    enhance_binder.bind(enhance_cmd->add_option("--in", enhance.inputs, "input WAV file(s)"), "in",
                        &enhance.inputs);
    enhance_binder.bind(enhance_cmd->add_option("--out", enhance.out, "output directory"), "out",
                        &enhance.out);
    enhance_cmd->add_option("--config", enhance.config, "JSON config file");
    enhance_binder.bind(
        enhance_cmd->add_option("--steps", enhance.steps, "1 = direct; k>1 = sampling from t=k"),
        "steps", &enhance.steps);
    enhance_binder.bind(enhance_cmd->add_option("--method", enhance.method, "improved|naive"),
                        "method", &enhance.method);
    enhance_binder.bind(
        enhance_cmd->add_option("--variant", enhance.variant, "reanchored|fixed-xt"), "variant",
        &enhance.variant);
    enhance_binder.bind(
        enhance_cmd->add_option("--reference", enhance.reference, "clean WAV for trajectory L1"),
        "reference", &enhance.reference);
    enhance_binder.bind_flag(
        enhance_cmd->add_flag("--dump-trajectory", enhance.dump_trajectory,
                              "write one WAV per sampling step"),
        "dump_trajectory", &enhance.dump_trajectory);
    enhance_binder.bind_flag(enhance_cmd->add_flag("-v,--verbose", enhance.verbose),
                             "verbose", &enhance.verbose);
    enhance_binder.bind(enhance_cmd->add_option("--jobs", enhance.jobs, "parallel inputs"), "jobs",
                        &enhance.jobs);

    EvalOptions eval;
    ConfigBinder eval_binder;
    auto* eval_cmd = app.add_subcommand("eval", "metric grid over a test manifest");
    eval_binder.bind(eval_cmd->add_option("--data", eval.data, "dataset directory from synth"),
                     "data", &eval.data);
    eval_binder.bind(eval_cmd->add_option("--manifest", eval.manifest, "explicit manifest CSV"),
                     "manifest", &eval.manifest);
    eval_binder.bind(eval_cmd->add_option("--out", eval.out, "output directory"), "out", &eval.out);
    eval_cmd->add_option("--config", eval.config, "JSON config file");
    eval_binder.bind(eval_cmd->add_option("--model", eval.models, "NAME=CHECKPOINT (repeatable)"),
                     "model", &eval.models);
    eval_binder.bind_flag(eval_cmd->add_flag("--oracle", eval.oracle, "add oracle-restorer rows"),
                          "oracle", &eval.oracle);
    eval_binder.bind(eval_cmd->add_option("--steps", eval.steps, "comma list, e.g. 1,50"), "steps",
                     &eval.steps);
    eval_binder.bind(eval_cmd->add_option("--method", eval.method, "improved|naive"), "method",
                     &eval.method);
    eval_binder.bind(eval_cmd->add_option("--variants", eval.variants,
                                          "comma list: reanchored,fixed-xt"),
                     "variants", &eval.variants);
    eval_binder.bind(eval_cmd->add_option("--T", eval.schedule_steps, "schedule steps (oracle-only runs)"),
                     "T", &eval.schedule_steps);
    eval_binder.bind(eval_cmd->add_option("--s", eval.schedule_s), "s", &eval.schedule_s);
    eval_binder.bind(eval_cmd->add_option("--jobs", eval.jobs, "parallel utterances"), "jobs",
                     &eval.jobs);

    DemoOptions demo;
    ConfigBinder demo_binder;
    auto* demo_cmd = app.add_subcommand("demo", "scalar sampling walk-through / schedule dump");
    demo_binder.bind(demo_cmd->add_option("--T", demo.schedule_steps, "step count"), "T",
                     &demo.schedule_steps);
    demo_binder.bind(demo_cmd->add_option("--s", demo.schedule_s, "cosine offset (schedule dump)"),
                     "s", &demo.schedule_s);
    demo_binder.bind_flag(
        demo_cmd->add_flag("--schedule-dump", demo.schedule_dump, "emit t,alpha CSV"),
        "schedule_dump", &demo.schedule_dump);
    demo_binder.bind(demo_cmd->add_option("--out", demo.out, "optional output directory"), "out",
                     &demo.out);
    demo_cmd->add_option("--config", demo.config, "JSON config file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 1;
    }

    try {
        if (synth_cmd->parsed()) {
            synth_binder.apply(synth.config);
            return run_synth(synth, synth_binder);
        }
        if (train_cmd->parsed()) {
            train_binder.apply(train.config);
            return run_train(train, train_binder);
        }
        if (enhance_cmd->parsed()) {
            enhance_binder.apply(enhance.config);
            return run_enhance(enhance, enhance_binder);
        }
        if (eval_cmd->parsed()) {
            eval_binder.apply(eval.config);
            return run_eval(eval, eval_binder);
        }
        if (demo_cmd->parsed()) {
            demo_binder.apply(demo.config);
            return run_demo(demo, demo_binder);
        }
    } catch (const coldwave::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.exit_code();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
