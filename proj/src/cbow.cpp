#include "lexchain/cbow.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <unordered_map>

#include "lexchain/error.hpp"

namespace lexchain {

double negative_sampling_loss_grad(std::span<const float> hidden,
                                   std::span<const float* const> rows,
                                   std::span<float* const> grad_rows,
                                   std::span<float> grad_hidden) {
    const std::size_t dim = hidden.size();
    std::fill(grad_hidden.begin(), grad_hidden.end(), 0.0f);
    double loss = 0.0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const float* row = rows[r];
        double f = 0.0;
        for (std::size_t d = 0; d < dim; ++d) f += static_cast<double>(hidden[d]) * row[d];
        const double label = (r == 0) ? 1.0 : 0.0;
        // -log sigmoid(f) = log1p(exp(-f)); -log sigmoid(-f) = log1p(exp(f))
        loss += (r == 0) ? std::log1p(std::exp(-f)) : std::log1p(std::exp(f));
        const double g = 1.0 / (1.0 + std::exp(-f)) - label;  // dL/df
        for (std::size_t d = 0; d < dim; ++d) {
            grad_rows[r][d] = static_cast<float>(g * hidden[d]);
            grad_hidden[d] += static_cast<float>(g * row[d]);
        }
    }
    return loss;
}

namespace {

// word2vec's linear congruential generator; keeps initialization and
// sampling identical across platforms and standard libraries.
struct Lcg {
    std::uint64_t state;
    std::uint64_t next() {
        state = state * 25214903917ULL + 11ULL;
        return state;
    }
    // uniform in [0,1)
    float next_float() { return static_cast<float>((next() & 0xFFFFULL) / 65536.0); }
};

struct Vocab {
    std::vector<std::string> tokens;  // (freq desc, token asc)
    std::vector<std::int64_t> counts;
    std::unordered_map<std::string, std::size_t> index;
    std::int64_t total = 0;
};

Vocab build_vocab(const TokenCorpus& corpus, int min_count) {
    std::unordered_map<std::string, std::int64_t> freq;
    for (const auto& doc : corpus) {
        for (const auto& tok : doc) ++freq[tok];
    }
    std::vector<std::pair<std::string, std::int64_t>> kept;
    for (auto& [tok, n] : freq) {
        if (n >= min_count) kept.emplace_back(tok, n);
    }
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    Vocab v;
    for (auto& [tok, n] : kept) {
        v.index.emplace(tok, v.tokens.size());
        v.tokens.push_back(std::move(tok));
        v.counts.push_back(n);
        v.total += n;
    }
    return v;
}

// Cumulative count^0.75 table for drawing negatives.
std::vector<std::uint32_t> build_unigram_table(const Vocab& vocab) {
    const std::size_t size =
        std::clamp<std::size_t>(vocab.tokens.size() * 1000, 100'000, 10'000'000);
    std::vector<std::uint32_t> table(size);
    double total_pow = 0.0;
    for (std::int64_t n : vocab.counts) total_pow += std::pow(static_cast<double>(n), 0.75);
    std::size_t word = 0;
    double cum = std::pow(static_cast<double>(vocab.counts[0]), 0.75) / total_pow;
    for (std::size_t i = 0; i < size; ++i) {
        table[i] = static_cast<std::uint32_t>(word);
        if (static_cast<double>(i + 1) / size > cum && word + 1 < vocab.tokens.size()) {
            ++word;
            cum += std::pow(static_cast<double>(vocab.counts[word]), 0.75) / total_pow;
        }
    }
    return table;
}

class Trainer {
public:
    Trainer(const TokenCorpus& corpus, const TrainConfig& cfg)
        : cfg_(cfg), vocab_(build_vocab(corpus, cfg.min_count)) {
        if (cfg.dimension < 1) throw Error("train_cbow: dimension must be >= 1");
        if (cfg.window < 1) throw Error("train_cbow: window must be >= 1");
        if (cfg.min_count < 1) throw Error("train_cbow: min_count must be >= 1");
        if (cfg.epochs < 1) throw Error("train_cbow: epochs must be >= 1");
        if (cfg.negative_samples < 0) throw Error("train_cbow: negative_samples must be >= 0");
        if (vocab_.tokens.empty())
            throw Error("train_cbow: corpus is empty after the min_count filter");

        for (const auto& doc : corpus) {
            std::vector<std::uint32_t> ids;
            ids.reserve(doc.size());
            for (const auto& tok : doc) {
                auto it = vocab_.index.find(tok);
                if (it != vocab_.index.end()) ids.push_back(static_cast<std::uint32_t>(it->second));
            }
            if (!ids.empty()) docs_.push_back(std::move(ids));
        }
        unigram_ = build_unigram_table(vocab_);

        const std::size_t dim = static_cast<std::size_t>(cfg.dimension);
        syn0_.resize(vocab_.tokens.size() * dim);
        syn1_.assign(vocab_.tokens.size() * dim, 0.0f);
        Lcg init{cfg.seed};
        for (float& w : syn0_) w = (init.next_float() - 0.5f) / static_cast<float>(cfg.dimension);
    }

    EmbeddingModel run() {
        const int workers = std::max(1, cfg_.workers);
        if (workers == 1 || docs_.size() < 2) {
            train_slice(0, docs_.size(), cfg_.seed + 1);
        } else {
            std::vector<std::thread> pool;
            const std::size_t chunk = (docs_.size() + workers - 1) / workers;
            for (int w = 0; w < workers; ++w) {
                std::size_t begin = std::min(docs_.size(), w * chunk);
                std::size_t end = std::min(docs_.size(), begin + chunk);
                if (begin == end) continue;
                pool.emplace_back([this, begin, end, w] {
                    train_slice(begin, end, cfg_.seed + 1 + static_cast<std::uint64_t>(w));
                });
            }
            for (auto& t : pool) t.join();
        }

        EmbeddingModel model(static_cast<std::size_t>(cfg_.dimension));
        const std::size_t dim = static_cast<std::size_t>(cfg_.dimension);
        for (std::size_t i = 0; i < vocab_.tokens.size(); ++i) {
            Vector v(syn0_.begin() + i * dim, syn0_.begin() + (i + 1) * dim);
            model.insert(vocab_.tokens[i], std::move(v));
        }
        return model;
    }

private:
    void train_slice(std::size_t doc_begin, std::size_t doc_end, std::uint64_t seed) {
        Lcg rng{seed};
        const std::size_t dim = static_cast<std::size_t>(cfg_.dimension);
        const int window = cfg_.window;
        std::int64_t slice_words = 0;
        for (std::size_t d = doc_begin; d < doc_end; ++d)
            slice_words += static_cast<std::int64_t>(docs_[d].size());
        const std::int64_t plan = std::max<std::int64_t>(1, slice_words * cfg_.epochs);

        std::vector<float> hidden(dim), grad_hidden(dim);
        std::vector<float> grad_storage((1 + cfg_.negative_samples) * dim);
        std::vector<const float*> rows;
        std::vector<float*> grad_rows;
        std::vector<std::uint32_t> row_ids;
        std::int64_t processed = 0;

        for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
            for (std::size_t d = doc_begin; d < doc_end; ++d) {
                const auto& doc = docs_[d];
                for (std::size_t pos = 0; pos < doc.size(); ++pos, ++processed) {
                    const float alpha =
                        cfg_.learning_rate *
                        std::max(1e-4f, 1.0f - static_cast<float>(processed) / (plan + 1));
                    const int shrink = static_cast<int>(rng.next() % window);

                    // Average the surviving context rows into the hidden layer.
                    std::fill(hidden.begin(), hidden.end(), 0.0f);
                    std::size_t context = 0;
                    auto for_context = [&](auto&& fn) {
                        for (int off = -(window - shrink); off <= window - shrink; ++off) {
                            if (off == 0) continue;
                            std::int64_t j = static_cast<std::int64_t>(pos) + off;
                            if (j < 0 || j >= static_cast<std::int64_t>(doc.size())) continue;
                            fn(doc[static_cast<std::size_t>(j)]);
                        }
                    };
                    for_context([&](std::uint32_t id) {
                        const float* row = &syn0_[id * dim];
                        for (std::size_t k = 0; k < dim; ++k) hidden[k] += row[k];
                        ++context;
                    });
                    if (context == 0) continue;
                    for (std::size_t k = 0; k < dim; ++k) hidden[k] /= static_cast<float>(context);

                    // Positive row plus sampled negatives (resamples that hit
                    // the target are skipped, as in word2vec).
                    const std::uint32_t target = doc[pos];
                    rows.clear();
                    grad_rows.clear();
                    row_ids.clear();
                    rows.push_back(&syn1_[target * dim]);
                    grad_rows.push_back(&grad_storage[0]);
                    row_ids.push_back(target);
                    for (int n = 0; n < cfg_.negative_samples; ++n) {
                        std::uint32_t sample = unigram_[(rng.next() >> 16) % unigram_.size()];
                        if (sample == target) continue;
                        grad_rows.push_back(&grad_storage[rows.size() * dim]);
                        rows.push_back(&syn1_[sample * dim]);
                        row_ids.push_back(sample);
                    }

                    negative_sampling_loss_grad(hidden, rows, grad_rows, grad_hidden);

                    for (std::size_t r = 0; r < rows.size(); ++r) {
                        float* row = &syn1_[row_ids[r] * dim];
                        const float* g = grad_rows[r];
                        for (std::size_t k = 0; k < dim; ++k) row[k] -= alpha * g[k];
                    }
                    // h is the mean of the context rows, so each row takes
                    // grad_hidden / context.
                    const float scale = alpha / static_cast<float>(context);
                    for_context([&](std::uint32_t id) {
                        float* row = &syn0_[id * dim];
                        for (std::size_t k = 0; k < dim; ++k) row[k] -= scale * grad_hidden[k];
                    });
                }
            }
        }
    }

    TrainConfig cfg_;
    Vocab vocab_;
    std::vector<std::vector<std::uint32_t>> docs_;
    std::vector<std::uint32_t> unigram_;
    std::vector<float> syn0_;
    std::vector<float> syn1_;
};

}  // namespace

EmbeddingModel train_cbow(const TokenCorpus& corpus, const TrainConfig& cfg) {
    return Trainer(corpus, cfg).run();
}

}  // namespace lexchain
