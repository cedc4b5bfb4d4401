#ifndef LEXCHAIN_EMBEDDING_MODEL_HPP
#define LEXCHAIN_EMBEDDING_MODEL_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "lexchain/vectors.hpp"

namespace lexchain {

// token -> dense vector map with a fixed dimension. Immutable in normal use
// once loaded or trained; lookups are safe from any number of threads.
// Out-of-vocabulary lookups return nullptr; the caller decides the policy.
class EmbeddingModel {
public:
    EmbeddingModel() = default;
    explicit EmbeddingModel(std::size_t dimension) : dimension_(dimension) {}

    std::size_t dimension() const { return dimension_; }
    std::size_t size() const { return tokens_.size(); }
    bool empty() const { return tokens_.empty(); }

    const Vector* find(const std::string& token) const {
        auto it = index_.find(token);
        return it == index_.end() ? nullptr : &vectors_[it->second];
    }
    bool contains(const std::string& token) const { return index_.count(token) != 0; }

    // Tokens in insertion order; drives deterministic serialization.
    const std::vector<std::string>& tokens() const { return tokens_; }
    const Vector& vector_at(std::size_t i) const { return vectors_[i]; }

    // Inserting an existing token replaces its vector in place (last wins).
    void insert(std::string token, Vector v);

    bool operator==(const EmbeddingModel& other) const {
        return dimension_ == other.dimension_ && tokens_ == other.tokens_ &&
               vectors_ == other.vectors_;
    }

private:
    std::size_t dimension_ = 0;
    std::vector<std::string> tokens_;
    std::vector<Vector> vectors_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct TextModelStats {
    std::size_t duplicate_tokens = 0;  // rows that replaced an earlier one
};

// Text vector format: header "vocab_size dimension", then one
// "token c1 ... cd" row per token, floats at 6 significant digits.
// Files ending in .gz are decompressed transparently on load.
EmbeddingModel load_text_model(const std::filesystem::path& path,
                               TextModelStats* stats = nullptr);
EmbeddingModel parse_text_model(std::istream& in, const std::string& name,
                                TextModelStats* stats = nullptr);

void save_text_model(const EmbeddingModel& model, const std::filesystem::path& path);
std::string to_text(const EmbeddingModel& model);

}  // namespace lexchain

#endif
