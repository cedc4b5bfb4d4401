#ifndef LEXCHAIN_CBOW_HPP
#define LEXCHAIN_CBOW_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lexchain/embedding_model.hpp"

namespace lexchain {

// One document per entry, tokens in surface order.
using TokenCorpus = std::vector<std::vector<std::string>>;

struct TrainConfig {
    int dimension = 300;
    int window = 15;
    int min_count = 10;
    int epochs = 5;
    int negative_samples = 5;
    float learning_rate = 0.05f;
    std::uint64_t seed = 1;
    // 1 = deterministic sequential pass (the only reproducible mode);
    // >1 = hogwild threads whose unsynchronized updates may interleave.
    int workers = 1;
};

// Negative-sampling objective for one example:
//   L = -log sigmoid(h . rows[0]) - sum_i>0 log sigmoid(-h . rows[i])
// rows[0] is the positive output row, the rest are sampled negatives.
// Writes the exact dL/d hidden into grad_hidden and dL/d rows[i] into
// grad_rows[i] (all length hidden.size()); returns L. The trainer applies
// precisely these gradients, which keeps them checkable against finite
// differences of the loss.
double negative_sampling_loss_grad(std::span<const float> hidden,
                                   std::span<const float* const> rows,
                                   std::span<float* const> grad_rows,
                                   std::span<float> grad_hidden);

// CBOW with negative sampling. The model contains exactly the tokens with
// corpus frequency >= min_count, ordered by (frequency desc, token asc).
// Throws Error when nothing survives the frequency filter.
EmbeddingModel train_cbow(const TokenCorpus& corpus, const TrainConfig& cfg);

}  // namespace lexchain

#endif
