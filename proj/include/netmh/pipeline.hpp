#pragma once

#include "netmh/graphlets.hpp"
#include "netmh/netmodel.hpp"
#include "netmh/predict.hpp"
#include "netmh/synthetic.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace netmh {

/// Flat `key = value` configuration. Lines starting with '#' are comments. Relative paths in a file
/// are resolved against the file's directory.
struct PipelineConfig {
    std::filesystem::path events_path;
    std::filesystem::path labels_path;
    std::filesystem::path nodes_path;     // optional explicit node universe
    std::filesystem::path baseline_path;  // optional external predictions
    std::string baseline_name = "external";
    std::filesystem::path output_dir = "netmh_out";
    int num_weeks = 31;
    std::vector<Trait> traits{Trait::depressed, Trait::anxious};

    FeatureOptions features;

    int cluster_k = 4;
    std::uint64_t cluster_seed = 1;
    bool cluster_concatenated = false;

    int cv_repeats = 5;
    int cv_folds = 5;
    std::uint64_t cv_seed = 1;
    std::uint64_t random_guess_seed = 1;
    CvOptions cv;

    /// Throws std::invalid_argument for unknown keys and malformed values.
    void set(const std::string& key, const std::string& value, const std::filesystem::path& base_dir = {});
    /// Range checks; paths are checked when a stage opens them.
    void validate() const;
    std::string to_text() const;
};

PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {},
                            const std::string& source = "<config>");
PipelineConfig load_config(const std::filesystem::path& path);

/// A pipeline failure tagged with the stage it happened in. `data_error` distinguishes bad inputs
/// from bad configuration.
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& message, bool data_error)
        : std::runtime_error(stage + ": " + message), stage_(std::move(stage)), message_(message), data_error_(data_error) {}
    const std::string& stage() const noexcept { return stage_; }
    const std::string& message() const noexcept { return message_; }
    bool data_error() const noexcept { return data_error_; }

private:
    std::string stage_;
    std::string message_;
    bool data_error_;
};

struct PipelineTasks {
    bool ingest = false;
    bool task1 = false;
    bool task2 = false;
    bool task3 = false;

    static PipelineTasks all() { return {true, true, true, true}; }
};

/// Runs the requested tasks and writes their reports under config.output_dir. Returns the files written.
/// On failure every file written by this call is removed and a StageError is thrown.
std::vector<std::filesystem::path> run_pipeline(const PipelineConfig& config, PipelineTasks tasks);

/// Writes `node_id,<columns...>` for one feature kind. Rows are the nodes labeled for any configured
/// trait, or the whole universe when no labels file is configured.
void export_features(const PipelineConfig& config, FeatureTag tag, const std::filesystem::path& out);

/// events.csv, labels.csv, nodes.csv and a netmh.cfg pointing at them.
std::vector<std::filesystem::path> write_synthetic_bundle(const SyntheticParams& params,
                                                          const std::filesystem::path& dir);

}  // namespace netmh
