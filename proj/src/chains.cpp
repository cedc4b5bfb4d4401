#include "lexchain/chains.hpp"

#include <algorithm>

#include "lexchain/error.hpp"
#include "lexchain/vectors.hpp"

namespace lexchain {

namespace {

bool sorted_intersects(const std::vector<SynsetId>& a, const std::vector<SynsetId>& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j])
            ++i;
        else if (b[j] < a[i])
            ++j;
        else
            return true;
    }
    return false;
}

void sorted_union_into(std::vector<SynsetId>& dst, const std::vector<SynsetId>& src) {
    std::vector<SynsetId> merged;
    merged.reserve(dst.size() + src.size());
    std::set_union(dst.begin(), dst.end(), src.begin(), src.end(), std::back_inserter(merged));
    dst = std::move(merged);
}

}  // namespace

AnnotatedToken best_repr(const LexicalChain& chain, const EmbeddingModel& synset_model) {
    if (chain.members.empty()) throw Error("best_repr: empty chain");

    const AnnotatedToken* best = nullptr;
    double best_score = 0.0;

    std::vector<const Vector*> vectors;
    std::vector<const AnnotatedToken*> with_vector;
    for (const AnnotatedToken& member : chain.members) {
        if (const Vector* v = synset_model.find(member.str()); v && norm(*v) > 0.0) {
            vectors.push_back(v);
            with_vector.push_back(&member);
        }
    }
    if (vectors.empty()) return chain.members.front();

    const Vector center = centroid(vectors);
    if (norm(center) == 0.0) return *with_vector.front();

    for (std::size_t i = 0; i < vectors.size(); ++i) {
        const double score = cosine(*vectors[i], center);
        if (!best || score > best_score) {
            best = with_vector[i];
            best_score = score;
        }
    }
    return *best;
}

ChainedDocument fllc2(const AnnotatedDocument& doc, const EmbeddingModel& synset_model,
                      const LexicalDatabase& db) {
    ChainedDocument out;
    if (doc.tokens.empty()) return out;

    auto flush = [&](LexicalChain&& chain) {
        out.representatives.push_back(best_repr(chain, synset_model));
        out.chains.push_back(std::move(chain));
    };

    LexicalChain current;
    current.members.push_back(doc.tokens.front());
    current.related = db.related_synsets(doc.tokens.front().synset);

    for (std::size_t i = 1; i < doc.tokens.size(); ++i) {
        const AnnotatedToken& token = doc.tokens[i];
        std::vector<SynsetId> new_rel = db.related_synsets(token.synset);
        if (sorted_intersects(current.related, new_rel)) {
            current.members.push_back(token);
            sorted_union_into(current.related, new_rel);
        } else {
            flush(std::move(current));
            current = LexicalChain{};
            current.members.push_back(token);
            current.related = std::move(new_rel);
        }
    }
    flush(std::move(current));
    return out;
}

ChainedDocument fxlc2(const AnnotatedDocument& doc, const EmbeddingModel& synset_model,
                      std::size_t chunk_size) {
    if (chunk_size == 0) throw Error("fxlc2: chunk_size must be >= 1");
    ChainedDocument out;
    for (std::size_t begin = 0; begin < doc.tokens.size(); begin += chunk_size) {
        const std::size_t end = std::min(doc.tokens.size(), begin + chunk_size);
        LexicalChain chunk;
        chunk.members.assign(doc.tokens.begin() + begin, doc.tokens.begin() + end);
        out.representatives.push_back(best_repr(chunk, synset_model));
        out.chains.push_back(std::move(chunk));
    }
    return out;
}

AnnotatedCorpus chain_corpus(const AnnotatedCorpus& corpus, const ChainParams& params,
                             const EmbeddingModel& synset_model, const LexicalDatabase* db) {
    if (params.mode == ChainMode::flexible && !db)
        throw Error("chain_corpus: flexible mode needs a lexical database");

    AnnotatedCorpus out;
    out.reserve(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        try {
            ChainedDocument chained = params.mode == ChainMode::flexible
                                          ? fllc2(corpus[i], synset_model, *db)
                                          : fxlc2(corpus[i], synset_model, params.chunk_size);
            AnnotatedDocument doc;
            doc.label = corpus[i].label;
            doc.tokens = std::move(chained.representatives);
            out.push_back(std::move(doc));
        } catch (const Error& e) {
            throw Error("document " + std::to_string(i) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace lexchain
