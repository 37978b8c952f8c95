#include "coldwave/dataset.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "coldwave/errors.hpp"
#include "coldwave/rng.hpp"
#include "coldwave/wav.hpp"

namespace fs = std::filesystem;

namespace coldwave {

namespace {

const char* kSplitNames[] = {"train", "valid", "test"};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::string format_snr(double snr_db) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", snr_db);
    return buf;
}

void write_manifest(const std::string& path, const std::vector<ManifestRecord>& records) {
    std::ofstream out(path);
    if (!out) throw DataError("manifest: cannot open for writing: " + path);
    out << "id,clean,noisy,snr_db\n";
    for (const auto& r : records)
        out << r.id << ',' << r.clean_path << ',' << r.noisy_path << ',' << format_snr(r.snr_db)
            << '\n';
    if (!out) throw DataError("manifest: write failed: " + path);
}

}  // namespace

std::string resolve_manifest_path(const std::string& manifest_path, const std::string& relative) {
    const fs::path rel(relative);
    if (rel.is_absolute()) return relative;
    return (fs::path(manifest_path).parent_path() / rel).string();
}

std::vector<ManifestRecord> load_manifest(const std::string& path, bool check_files) {
    std::ifstream in(path);
    if (!in) throw DataError("manifest: cannot open: " + path);

    std::string line;
    if (!std::getline(in, line)) throw DataError("manifest: empty file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "id,clean,noisy,snr_db")
        throw DataError("manifest: bad header '" + line + "' in " + path);

    std::vector<ManifestRecord> records;
    std::set<std::string> seen;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 4)
            throw DataError("manifest: line " + std::to_string(line_no) + " has " +
                            std::to_string(fields.size()) + " fields (want 4) in " + path);
        ManifestRecord r;
        r.id = fields[0];
        r.clean_path = fields[1];
        r.noisy_path = fields[2];
        try {
            r.snr_db = std::stod(fields[3]);
        } catch (const std::exception&) {
            throw DataError("manifest: bad snr_db '" + fields[3] + "' on line " +
                            std::to_string(line_no) + " in " + path);
        }
        if (!seen.insert(r.id).second)
            throw DataError("manifest: duplicate id '" + r.id + "' in " + path);
        if (check_files) {
            for (const auto& p : {r.clean_path, r.noisy_path}) {
                if (!fs::exists(resolve_manifest_path(path, p)))
                    throw DataError("manifest: referenced file missing: " + p + " (from " + path +
                                    ")");
            }
        }
        records.push_back(std::move(r));
    }
    return records;
}

UtterancePair load_pair(const std::string& manifest_path, const ManifestRecord& record) {
    UtterancePair pair;
    pair.clean = read_wav(resolve_manifest_path(manifest_path, record.clean_path));
    pair.noisy = read_wav(resolve_manifest_path(manifest_path, record.noisy_path));
    pair.id = record.id;
    pair.snr_db = record.snr_db;
    if (pair.clean.size() != pair.noisy.size())
        throw DataError("pair '" + record.id + "': clean/noisy lengths differ");
    if (pair.clean.sample_rate != pair.noisy.sample_rate)
        throw DataError("pair '" + record.id + "': clean/noisy sample rates differ");
    return pair;
}

std::vector<UtterancePair> load_pairs(const std::string& manifest_path,
                                      const std::vector<ManifestRecord>& records) {
    std::vector<UtterancePair> pairs;
    pairs.reserve(records.size());
    for (const auto& r : records) pairs.push_back(load_pair(manifest_path, r));
    return pairs;
}

UtteranceSeeds utterance_seeds(std::uint64_t dataset_seed, int split_index, int utterance_index) {
    // Disjoint ranges per split: each split owns a 2^40-wide block and each
    // utterance two consecutive seeds within it.
    const std::uint64_t base = dataset_seed + (static_cast<std::uint64_t>(split_index + 1) << 40);
    const std::uint64_t at = base + 2 * static_cast<std::uint64_t>(utterance_index);
    return {at, at + 1};
}

std::vector<ManifestRecord> build_synthetic_dataset(const DatasetConfig& config,
                                                    const std::string& out_dir) {
    if (config.n_train < 0 || config.n_valid < 0 || config.n_test < 0)
        throw ConfigError("dataset: utterance counts must be >= 0");
    if (config.n_train + config.n_valid + config.n_test == 0)
        throw ConfigError("dataset: empty dataset requested");
    if (config.noise_kinds.empty()) throw ConfigError("dataset: need at least one noise kind");
    if (config.train_snrs_db.empty() || config.test_snrs_db.empty())
        throw ConfigError("dataset: SNR grids must be non-empty");

    std::error_code ec;
    fs::create_directories(fs::path(out_dir) / "wav", ec);
    if (ec) throw DataError("dataset: cannot create output directory: " + out_dir);

    const int counts[3] = {config.n_train, config.n_valid, config.n_test};
    std::vector<ManifestRecord> all;
    for (int split = 0; split < 3; ++split) {
        const int n = counts[split];
        std::vector<ManifestRecord> records(static_cast<std::size_t>(n));
        const auto& snrs =
            split == 2 ? config.test_snrs_db : config.train_snrs_db;
        std::string first_error;
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < n; ++i) {
            try {
                const UtteranceSeeds seeds = utterance_seeds(config.seed, split, i);
                const Signal clean = synth_clean(seeds.clean, config.duration_s, config.sample_rate);
                const NoiseKind kind =
                    config.noise_kinds[static_cast<std::size_t>(i) % config.noise_kinds.size()];
                const Signal noise =
                    synth_noise(kind, seeds.noise, config.duration_s, config.sample_rate);
                const double snr = snrs[static_cast<std::size_t>(i) % snrs.size()];
                UtterancePair pair = mix_at_snr(clean, noise, snr);

                char id[64];
                std::snprintf(id, sizeof(id), "%s_%04d", kSplitNames[split], i);
                ManifestRecord r;
                r.id = id;
                r.clean_path = std::string("wav/") + id + "_clean.wav";
                r.noisy_path = std::string("wav/") + id + "_noisy.wav";
                r.snr_db = snr;
                write_wav((fs::path(out_dir) / r.clean_path).string(), pair.clean);
                write_wav((fs::path(out_dir) / r.noisy_path).string(), pair.noisy);
                records[static_cast<std::size_t>(i)] = std::move(r);
            } catch (const std::exception& e) {
#pragma omp critical
                if (first_error.empty()) first_error = e.what();
            }
        }
        if (!first_error.empty()) throw DataError("dataset: " + first_error);

        write_manifest((fs::path(out_dir) / (std::string("manifest_") + kSplitNames[split] + ".csv"))
                           .string(),
                       records);
        all.insert(all.end(), records.begin(), records.end());
    }

    write_manifest((fs::path(out_dir) / "manifest.csv").string(), all);
    return all;
}

}  // namespace coldwave
