#ifndef LEXCHAIN_PIPELINE_CONFIG_HPP
#define LEXCHAIN_PIPELINE_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>

namespace lexchain {

// Every knob the pipeline stages accept, collected so a run can be saved to
// a key-value file and replayed. Paths are kept verbatim; they are checked
// by the stage that uses them.
struct PipelineConfig {
    // inputs and outputs
    std::string wordnet_dir;
    std::string portable_db;
    std::string word_model;
    std::string synset_model;
    std::string input;
    std::string output;

    // chaining
    std::string mode = "flexible";
    std::uint64_t chunk_size = 2;
    int passes = 0;

    // embedding training
    int dimension = 300;
    int window = 15;
    int min_count = 10;
    int epochs = 5;
    int negative = 5;
    double learning_rate = 0.05;

    // classification
    std::string classifier = "knn";
    std::uint64_t knn_k = 3;
    int logreg_epochs = 200;
    double logreg_rate = 0.5;
    double logreg_l2 = 1e-4;
    std::uint64_t folds = 10;

    // global
    std::uint64_t seed = 1;
    int workers = 1;

    bool operator==(const PipelineConfig&) const = default;
};

// "key value" lines, '#' comments allowed; unknown keys are rejected.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);
void save_pipeline_config(const PipelineConfig& config, const std::filesystem::path& path);
std::string to_config_text(const PipelineConfig& config);

}  // namespace lexchain

#endif
