#ifndef LEXCHAIN_CLASSIFY_HPP
#define LEXCHAIN_CLASSIFY_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lexchain/embedding_model.hpp"
#include "lexchain/vectors.hpp"

namespace lexchain {

using TokenSeq = std::vector<std::string>;

struct LabeledDoc {
    TokenSeq tokens;
    std::string label;
};

struct LabeledDataset {
    std::vector<LabeledDoc> docs;

    std::size_t size() const { return docs.size(); }
    std::vector<std::string> labels() const;        // sorted distinct labels
};

// Labeled corpus file: one document per line, "label<TAB>token token ...".
LabeledDataset load_labeled_corpus(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Document vectors

struct DocumentVector {
    Vector vector;          // defined only when covered >= 1
    std::size_t covered = 0;
    std::size_t total = 0;

    bool valid() const { return covered > 0; }
};

// Mean of the in-vocabulary token vectors. Fully out-of-vocabulary
// documents come back invalid; they are excluded from training and take
// the majority class at prediction time.
DocumentVector doc_vector(const TokenSeq& doc, const EmbeddingModel& model);

// ---------------------------------------------------------------------------
// Bag of words

struct BowModel {
    std::vector<std::string> features;  // top_k tokens by total term frequency
    std::vector<double> idf;            // ln((1+N)/(1+df)) + 1
};

BowModel bow_fit(const std::vector<TokenSeq>& corpus, std::size_t top_k = 300);
// tf * idf row, L2-normalized (zero rows stay zero).
Vector bow_transform(const BowModel& model, const TokenSeq& doc);

struct BowMatrix {
    BowModel model;
    std::vector<Vector> rows;
};
BowMatrix bow_tfidf(const std::vector<TokenSeq>& corpus, std::size_t top_k = 300);

// ---------------------------------------------------------------------------
// Classifiers

// Majority label among the k cosine-nearest training points. Distance ties
// resolve by training index, vote ties by smaller mean distance, then by
// lexicographic label.
std::string knn_predict(const std::vector<std::pair<Vector, std::string>>& train,
                        const Vector& query, std::size_t k);

struct LogRegConfig {
    double l2 = 1e-4;
    int epochs = 200;
    double rate = 0.5;
};

// Multinomial softmax regression, full-batch gradient descent from zero
// weights: deterministic by construction.
class LogRegModel {
public:
    const std::vector<std::string>& classes() const { return classes_; }
    std::string predict(const Vector& query) const;

private:
    friend LogRegModel logreg_train(const std::vector<std::pair<Vector, std::string>>&,
                                    const LogRegConfig&);
    std::vector<std::string> classes_;        // sorted
    std::vector<double> weights_;             // classes x (dim + 1), bias last
    std::size_t dim_ = 0;
};

LogRegModel logreg_train(const std::vector<std::pair<Vector, std::string>>& train,
                         const LogRegConfig& cfg);

// Mean softmax cross-entropy over rows plus (l2/2)*|W|^2 (biases are not
// penalized). weights and grad are classes x (dim+1) row-major with the
// bias in the last column. Exposed so the training gradient can be checked
// against finite differences of the loss.
double logreg_loss_grad(std::span<const double> weights, std::size_t classes, std::size_t dim,
                        const std::vector<Vector>& x, const std::vector<std::size_t>& y, double l2,
                        std::span<double> grad);

// ---------------------------------------------------------------------------
// Metrics and evaluation

// Micro-averaged F1 from globally pooled true/false positives; for
// single-label multiclass this coincides with accuracy.
double f1_micro(const std::vector<std::string>& predicted, const std::vector<std::string>& gold);

// Trains on the fold-train documents and predicts labels for the held-out
// token sequences.
using Pipeline = std::function<std::vector<std::string>(const std::vector<LabeledDoc>& train,
                                                        const std::vector<TokenSeq>& test)>;

struct KFoldResult {
    double mean_f1 = 0.0;
    std::vector<double> fold_f1;
    bool stratified = true;
};

// Stratified k-fold cross-validation from a seeded shuffle. Falls back to
// unstratified folding (with stratified=false) when some class has fewer
// than k members. Throws when the dataset itself is smaller than k.
KFoldResult kfold_eval(const LabeledDataset& dataset, std::size_t k, const Pipeline& pipeline,
                       std::uint64_t seed);

// Same protocol over pre-vectorized rows (e.g. loaded from a CSV export).
struct VectorDataset {
    std::vector<std::pair<Vector, std::string>> rows;
};
using VectorPipeline = std::function<std::vector<std::string>(
    const std::vector<std::pair<Vector, std::string>>& train, const std::vector<Vector>& test)>;
KFoldResult kfold_eval_vectors(const VectorDataset& dataset, std::size_t k,
                               const VectorPipeline& pipeline, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Grid search

struct GridPoint {
    std::map<std::string, std::string> params;
};

// Row-major cartesian expansion of the given axes; the resulting order is
// the tie-break order.
std::vector<GridPoint> expand_grid(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& axes);

using PipelineFactory = std::function<Pipeline(const GridPoint&)>;

struct GridResult {
    GridPoint best;
    double best_score = 0.0;
    std::vector<double> scores;  // one per grid point, in grid order
};

GridResult grid_search(const LabeledDataset& dataset, const std::vector<GridPoint>& grid,
                       const PipelineFactory& factory, std::size_t k, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Stock pipelines

Pipeline make_embedding_knn_pipeline(const EmbeddingModel& model, std::size_t k);
Pipeline make_embedding_logreg_pipeline(const EmbeddingModel& model, LogRegConfig cfg = {});
Pipeline make_bow_knn_pipeline(std::size_t top_k, std::size_t k);
Pipeline make_bow_logreg_pipeline(std::size_t top_k, LogRegConfig cfg = {});
VectorPipeline make_vector_knn_pipeline(std::size_t k);
VectorPipeline make_vector_logreg_pipeline(LogRegConfig cfg = {});

}  // namespace lexchain

#endif
