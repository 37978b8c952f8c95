#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coldwave/signal.hpp"
#include "coldwave/synth.hpp"

namespace coldwave {

struct ManifestRecord {
    std::string id;
    std::string clean_path;  // relative to the manifest's directory
    std::string noisy_path;
    double snr_db = 0.0;
};

/// Parses a manifest CSV (header "id,clean,noisy,snr_db"). Rejects duplicate
/// ids and, when check_files is set, records whose files do not exist.
/// Relative paths stay relative; resolve_manifest_path() maps them to disk.
std::vector<ManifestRecord> load_manifest(const std::string& path, bool check_files = true);

std::string resolve_manifest_path(const std::string& manifest_path, const std::string& relative);

/// Loads the WAV pair behind a record; validates equal lengths and rates.
UtterancePair load_pair(const std::string& manifest_path, const ManifestRecord& record);
std::vector<UtterancePair> load_pairs(const std::string& manifest_path,
                                      const std::vector<ManifestRecord>& records);

struct DatasetConfig {
    int n_train = 200;
    int n_valid = 20;
    int n_test = 40;
    double duration_s = 1.0;
    int sample_rate = 8000;
    std::vector<double> train_snrs_db = {0.0, 5.0, 10.0, 15.0};
    std::vector<double> test_snrs_db = {2.5, 7.5, 12.5, 17.5};
    std::vector<NoiseKind> noise_kinds = {NoiseKind::white, NoiseKind::pink,
                                          NoiseKind::tonal_babble};
    std::uint64_t seed = 0;
};

/// Clean/noise generator seeds for one utterance; the per-split offsets keep
/// seed ranges disjoint across splits.
struct UtteranceSeeds {
    std::uint64_t clean;
    std::uint64_t noise;
};
UtteranceSeeds utterance_seeds(std::uint64_t dataset_seed, int split_index, int utterance_index);

/// Writes float32 WAV pairs under <out_dir>/wav plus per-split manifests
/// (manifest_train.csv, manifest_valid.csv, manifest_test.csv) and a
/// combined manifest.csv. Returns the combined record list (train, valid,
/// test order). Deterministic per config.
std::vector<ManifestRecord> build_synthetic_dataset(const DatasetConfig& config,
                                                    const std::string& out_dir);

}  // namespace coldwave
