#include "lexchain/mssa.hpp"

#include <optional>
#include <thread>
#include <unordered_map>

#include "lexchain/preprocess.hpp"
#include "lexchain/vectors.hpp"

namespace lexchain {

namespace {

// gloss words + the synset's own lemma words (multiwords split at '_'),
// cleaned the same way documents are.
std::vector<std::string> sense_words(const Synset& synset) {
    std::vector<std::string> words = preprocess(synset.gloss);
    for (const std::string& lemma : synset.lemmas) {
        std::size_t start = 0;
        while (start <= lemma.size()) {
            std::size_t us = lemma.find('_', start);
            std::string piece = lemma.substr(start, us == std::string::npos ? us : us - start);
            if (!piece.empty()) words.push_back(std::move(piece));
            if (us == std::string::npos) break;
            start = us + 1;
        }
    }
    return words;
}

std::optional<Vector> usable(Vector v) {
    if (norm(v) == 0.0) return std::nullopt;
    return v;
}

std::optional<Vector> words_centroid(const std::vector<std::string>& words,
                                     const EmbeddingModel& model) {
    std::vector<const Vector*> found;
    for (const std::string& w : words) {
        if (const Vector* v = model.find(w)) found.push_back(v);
    }
    if (found.empty()) return std::nullopt;
    return usable(centroid(found));
}

class SenseScorer {
public:
    virtual ~SenseScorer() = default;
    // Representation of candidate sense `id` for surface form `surface`;
    // nullopt when no usable vector exists.
    virtual std::optional<Vector> sense_vector(SynsetId id, const std::string& surface) = 0;
    // Representation of a neighboring token; nullptr contributes nothing.
    virtual const Vector* context_vector(const std::string& token) = 0;
};

// Plain pass: senses scored by gloss centroids over a word-level model,
// neighbors by their own word vectors.
class GlossScorer : public SenseScorer {
public:
    GlossScorer(const EmbeddingModel& words, const LexicalDatabase& db)
        : words_(words), db_(db) {}

    std::optional<Vector> sense_vector(SynsetId id, const std::string&) override {
        auto it = cache_.find(id);
        if (it == cache_.end())
            it = cache_.emplace(id, words_centroid(sense_words(db_.at(id)), words_)).first;
        return it->second;
    }

    const Vector* context_vector(const std::string& token) override { return words_.find(token); }

private:
    const EmbeddingModel& words_;
    const LexicalDatabase& db_;
    std::unordered_map<SynsetId, std::optional<Vector>, SynsetIdHash> cache_;
};

// Recurrent pass: senses and neighbors live in a synset model keyed by
// rendered tokens. A sense missing its exact key falls back to the centroid
// of its gloss words' first-sense entries; a neighbor uses its own first
// sense's entry.
class SynsetModelScorer : public SenseScorer {
public:
    SynsetModelScorer(const EmbeddingModel& synsets, const LexicalDatabase& db)
        : synsets_(synsets), db_(db) {}

    std::optional<Vector> sense_vector(SynsetId id, const std::string& surface) override {
        if (const Vector* v = synsets_.find(AnnotatedToken{surface, id}.str()))
            return usable(*v);
        auto it = fallback_.find(id);
        if (it == fallback_.end()) it = fallback_.emplace(id, gloss_fallback(id)).first;
        return it->second;
    }

    const Vector* context_vector(const std::string& token) override {
        return first_sense_entry(token);
    }

private:
    const Vector* first_sense_entry(const std::string& word) {
        auto senses = db_.senses(word);
        if (senses.empty()) return nullptr;
        return synsets_.find(AnnotatedToken{word, senses.front()}.str());
    }

    std::optional<Vector> gloss_fallback(SynsetId id) {
        std::vector<const Vector*> found;
        for (const std::string& w : preprocess(db_.at(id).gloss)) {
            if (const Vector* v = first_sense_entry(w)) found.push_back(v);
        }
        if (found.empty()) return std::nullopt;
        return usable(centroid(found));
    }

    const EmbeddingModel& synsets_;
    const LexicalDatabase& db_;
    std::unordered_map<SynsetId, std::optional<Vector>, SynsetIdHash> fallback_;
};

AnnotatedDocument annotate_with(const std::vector<std::string>& tokens, const LexicalDatabase& db,
                                SenseScorer& scorer, MssaStats* stats) {
    AnnotatedDocument doc;
    MssaStats local;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::string& word = tokens[i];
        const std::vector<SynsetId> candidates = db.senses(word);
        if (candidates.empty()) {
            ++local.dropped_tokens;
            continue;
        }

        // Neighbors are the adjacent tokens of the raw window, whether or
        // not they are mappable themselves; edges simply lack one side.
        const Vector* left = i > 0 ? scorer.context_vector(tokens[i - 1]) : nullptr;
        const Vector* right = i + 1 < tokens.size() ? scorer.context_vector(tokens[i + 1]) : nullptr;

        std::size_t best = 0;
        double best_score = 0.0;
        bool any_scored = false;
        for (std::size_t s = 0; s < candidates.size(); ++s) {
            auto g = scorer.sense_vector(candidates[s], word);
            if (!g) continue;
            double score = 0.0;
            if (left && norm(*left) > 0.0) score += cosine(*g, *left);
            if (right && norm(*right) > 0.0) score += cosine(*g, *right);
            if (!any_scored || score > best_score) {
                best = s;
                best_score = score;
                any_scored = true;
            }
        }
        if (!any_scored) ++local.fallback_senses;  // sense index 0 by rule
        ++local.assigned_senses;
        doc.tokens.push_back(AnnotatedToken{word, candidates[best]});
    }
    if (stats) *stats = local;
    return doc;
}

}  // namespace

AnnotatedDocument disambiguate(const std::vector<std::string>& tokens,
                               const EmbeddingModel& word_vectors, const LexicalDatabase& db,
                               MssaStats* stats) {
    GlossScorer scorer(word_vectors, db);
    return annotate_with(tokens, db, scorer, stats);
}

AnnotatedDocument refine(const std::vector<std::string>& tokens,
                         const EmbeddingModel& synset_vectors, const LexicalDatabase& db,
                         MssaStats* stats) {
    SynsetModelScorer scorer(synset_vectors, db);
    return annotate_with(tokens, db, scorer, stats);
}

namespace {

template <typename MakeScorer>
std::vector<AnnotatedDocument> annotate_corpus(const std::vector<std::vector<std::string>>& docs,
                                               const LexicalDatabase& db, int workers,
                                               MssaStats* stats, MakeScorer make_scorer) {
    std::vector<AnnotatedDocument> out(docs.size());
    std::vector<MssaStats> partial(std::max(1, workers));

    auto run = [&](std::size_t begin, std::size_t end, std::size_t slot) {
        auto scorer = make_scorer();  // one gloss cache per thread
        for (std::size_t i = begin; i < end; ++i) {
            MssaStats doc_stats;
            out[i] = annotate_with(docs[i], db, scorer, &doc_stats);
            partial[slot].dropped_tokens += doc_stats.dropped_tokens;
            partial[slot].assigned_senses += doc_stats.assigned_senses;
            partial[slot].fallback_senses += doc_stats.fallback_senses;
        }
    };

    if (workers <= 1 || docs.size() < 2) {
        run(0, docs.size(), 0);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (docs.size() + workers - 1) / static_cast<std::size_t>(workers);
        for (int w = 0; w < workers; ++w) {
            const std::size_t begin = std::min(docs.size(), static_cast<std::size_t>(w) * chunk);
            const std::size_t end = std::min(docs.size(), begin + chunk);
            if (begin < end) pool.emplace_back(run, begin, end, static_cast<std::size_t>(w));
        }
        for (auto& t : pool) t.join();
    }

    if (stats) {
        MssaStats total;
        for (const MssaStats& p : partial) {
            total.dropped_tokens += p.dropped_tokens;
            total.assigned_senses += p.assigned_senses;
            total.fallback_senses += p.fallback_senses;
        }
        *stats = total;
    }
    return out;
}

}  // namespace

std::vector<AnnotatedDocument> disambiguate_corpus(
    const std::vector<std::vector<std::string>>& docs, const EmbeddingModel& word_vectors,
    const LexicalDatabase& db, int workers, MssaStats* stats) {
    return annotate_corpus(docs, db, workers, stats,
                           [&] { return GlossScorer(word_vectors, db); });
}

std::vector<AnnotatedDocument> refine_corpus(const std::vector<std::vector<std::string>>& docs,
                                             const EmbeddingModel& synset_vectors,
                                             const LexicalDatabase& db, int workers,
                                             MssaStats* stats) {
    return annotate_corpus(docs, db, workers, stats,
                           [&] { return SynsetModelScorer(synset_vectors, db); });
}

}  // namespace lexchain
