#include "lexchain/classify.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <unordered_map>

#include "lexchain/error.hpp"

namespace lexchain {

namespace {

// Fisher-Yates with an explicit draw so fold assignment does not depend on
// the standard library's distribution implementation.
void deterministic_shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::swap(v[i - 1], v[rng() % i]);
    }
}

std::string majority_label(const std::vector<std::string>& labels) {
    std::map<std::string, std::size_t> counts;
    for (const auto& l : labels) ++counts[l];
    std::string best;
    std::size_t best_count = 0;
    for (const auto& [label, count] : counts) {
        if (count > best_count) {
            best = label;
            best_count = count;
        }
    }
    return best;
}

}  // namespace

std::vector<std::string> LabeledDataset::labels() const {
    std::set<std::string> distinct;
    for (const auto& doc : docs) distinct.insert(doc.label);
    return {distinct.begin(), distinct.end()};
}

LabeledDataset load_labeled_corpus(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    LabeledDataset dataset;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0)
            throw Error(path.filename().string() + ":" + std::to_string(line_no) +
                        ": expected 'label<TAB>token ...'");
        LabeledDoc doc;
        doc.label = line.substr(0, tab);
        std::size_t i = tab + 1;
        while (i < line.size()) {
            while (i < line.size() && line[i] == ' ') ++i;
            std::size_t start = i;
            while (i < line.size() && line[i] != ' ') ++i;
            if (i > start) doc.tokens.push_back(line.substr(start, i - start));
        }
        dataset.docs.push_back(std::move(doc));
    }
    return dataset;
}

DocumentVector doc_vector(const TokenSeq& doc, const EmbeddingModel& model) {
    DocumentVector out;
    out.total = doc.size();
    std::vector<double> sum(model.dimension(), 0.0);
    for (const std::string& token : doc) {
        if (const Vector* v = model.find(token)) {
            for (std::size_t d = 0; d < v->size(); ++d) sum[d] += (*v)[d];
            ++out.covered;
        }
    }
    if (out.covered > 0) {
        out.vector.resize(sum.size());
        for (std::size_t d = 0; d < sum.size(); ++d)
            out.vector[d] = static_cast<float>(sum[d] / static_cast<double>(out.covered));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Bag of words

BowModel bow_fit(const std::vector<TokenSeq>& corpus, std::size_t top_k) {
    if (corpus.empty()) throw Error("bow_fit: empty corpus");
    std::map<std::string, std::size_t> tf;  // ordered, so frequency ties sort lexicographically
    std::map<std::string, std::size_t> df;
    for (const TokenSeq& doc : corpus) {
        std::set<std::string> seen;
        for (const std::string& tok : doc) {
            ++tf[tok];
            seen.insert(tok);
        }
        for (const std::string& tok : seen) ++df[tok];
    }

    std::vector<std::pair<std::string, std::size_t>> ranked(tf.begin(), tf.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    if (ranked.size() > top_k) ranked.resize(top_k);

    BowModel model;
    const double n = static_cast<double>(corpus.size());
    for (auto& [token, freq] : ranked) {
        model.idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(df[token]))) + 1.0);
        model.features.push_back(std::move(token));
    }
    return model;
}

Vector bow_transform(const BowModel& model, const TokenSeq& doc) {
    std::unordered_map<std::string_view, std::size_t> feature_index;
    for (std::size_t i = 0; i < model.features.size(); ++i)
        feature_index.emplace(model.features[i], i);

    std::vector<double> row(model.features.size(), 0.0);
    for (const std::string& tok : doc) {
        auto it = feature_index.find(tok);
        if (it != feature_index.end()) row[it->second] += 1.0;
    }
    double norm2 = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) {
        row[i] *= model.idf[i];
        norm2 += row[i] * row[i];
    }
    Vector out(row.size(), 0.0f);
    if (norm2 > 0.0) {
        const double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t i = 0; i < row.size(); ++i) out[i] = static_cast<float>(row[i] * inv);
    }
    return out;
}

BowMatrix bow_tfidf(const std::vector<TokenSeq>& corpus, std::size_t top_k) {
    BowMatrix out;
    out.model = bow_fit(corpus, top_k);
    out.rows.reserve(corpus.size());
    for (const TokenSeq& doc : corpus) out.rows.push_back(bow_transform(out.model, doc));
    return out;
}

// ---------------------------------------------------------------------------
// k-NN

namespace {

double cosine_distance(const Vector& a, const Vector& b) {
    if (norm(a) == 0.0 || norm(b) == 0.0) return 2.0;  // worse than any real angle
    return 1.0 - cosine(a, b);
}

}  // namespace

std::string knn_predict(const std::vector<std::pair<Vector, std::string>>& train,
                        const Vector& query, std::size_t k) {
    if (k == 0) throw Error("knn_predict: k must be >= 1");
    if (train.empty()) throw Error("knn_predict: empty training set");
    k = std::min(k, train.size());

    std::vector<std::pair<double, std::size_t>> by_distance;
    by_distance.reserve(train.size());
    for (std::size_t i = 0; i < train.size(); ++i)
        by_distance.emplace_back(cosine_distance(train[i].first, query), i);
    std::sort(by_distance.begin(), by_distance.end());  // (distance, train index)

    struct Tally {
        std::size_t votes = 0;
        double distance_sum = 0.0;
    };
    std::map<std::string, Tally> tallies;
    for (std::size_t j = 0; j < k; ++j) {
        Tally& t = tallies[train[by_distance[j].second].second];
        ++t.votes;
        t.distance_sum += by_distance[j].first;
    }

    const std::string* best = nullptr;
    std::size_t best_votes = 0;
    double best_mean = 0.0;
    for (const auto& [label, tally] : tallies) {
        const double mean = tally.distance_sum / static_cast<double>(tally.votes);
        if (!best || tally.votes > best_votes || (tally.votes == best_votes && mean < best_mean)) {
            best = &label;
            best_votes = tally.votes;
            best_mean = mean;
        }
    }
    return *best;
}

// ---------------------------------------------------------------------------
// Logistic regression

double logreg_loss_grad(std::span<const double> weights, std::size_t classes, std::size_t dim,
                        const std::vector<Vector>& x, const std::vector<std::size_t>& y, double l2,
                        std::span<double> grad) {
    const std::size_t stride = dim + 1;
    if (weights.size() != classes * stride || grad.size() != weights.size())
        throw Error("logreg_loss_grad: weight shape mismatch");
    if (x.size() != y.size() || x.empty()) throw Error("logreg_loss_grad: bad data shape");

    std::fill(grad.begin(), grad.end(), 0.0);
    double loss = 0.0;
    std::vector<double> scores(classes);
    const double inv_n = 1.0 / static_cast<double>(x.size());

    for (std::size_t i = 0; i < x.size(); ++i) {
        const Vector& xi = x[i];
        if (xi.size() != dim) throw Error("logreg_loss_grad: row dimension mismatch");
        for (std::size_t c = 0; c < classes; ++c) {
            const double* w = weights.data() + c * stride;
            double s = w[dim];
            for (std::size_t d = 0; d < dim; ++d) s += w[d] * xi[d];
            scores[c] = s;
        }
        const double peak = *std::max_element(scores.begin(), scores.end());
        double z = 0.0;
        for (double& s : scores) {
            s = std::exp(s - peak);
            z += s;
        }
        loss -= inv_n * std::log(scores[y[i]] / z);
        for (std::size_t c = 0; c < classes; ++c) {
            const double p = scores[c] / z - (c == y[i] ? 1.0 : 0.0);
            double* g = grad.data() + c * stride;
            for (std::size_t d = 0; d < dim; ++d) g[d] += inv_n * p * xi[d];
            g[dim] += inv_n * p;
        }
    }

    for (std::size_t c = 0; c < classes; ++c) {
        const double* w = weights.data() + c * stride;
        double* g = grad.data() + c * stride;
        for (std::size_t d = 0; d < dim; ++d) {  // bias stays unpenalized
            loss += 0.5 * l2 * w[d] * w[d];
            g[d] += l2 * w[d];
        }
    }
    return loss;
}

LogRegModel logreg_train(const std::vector<std::pair<Vector, std::string>>& train,
                         const LogRegConfig& cfg) {
    if (train.empty()) throw Error("logreg_train: empty training set");
    std::set<std::string> distinct;
    for (const auto& [v, label] : train) distinct.insert(label);
    if (distinct.size() < 2) throw Error("logreg_train: training set has a single class");

    LogRegModel model;
    model.classes_.assign(distinct.begin(), distinct.end());
    model.dim_ = train.front().first.size();

    std::unordered_map<std::string, std::size_t> class_index;
    for (std::size_t c = 0; c < model.classes_.size(); ++c)
        class_index.emplace(model.classes_[c], c);

    std::vector<Vector> x;
    std::vector<std::size_t> y;
    for (const auto& [v, label] : train) {
        if (v.size() != model.dim_) throw Error("logreg_train: ragged feature dimensions");
        x.push_back(v);
        y.push_back(class_index.at(label));
    }

    const std::size_t stride = model.dim_ + 1;
    model.weights_.assign(model.classes_.size() * stride, 0.0);
    std::vector<double> grad(model.weights_.size());
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        logreg_loss_grad(model.weights_, model.classes_.size(), model.dim_, x, y, cfg.l2, grad);
        for (std::size_t i = 0; i < model.weights_.size(); ++i)
            model.weights_[i] -= cfg.rate * grad[i];
    }
    return model;
}

std::string LogRegModel::predict(const Vector& query) const {
    if (query.size() != dim_) throw Error("logreg predict: dimension mismatch");
    const std::size_t stride = dim_ + 1;
    std::size_t best = 0;
    double best_score = 0.0;
    for (std::size_t c = 0; c < classes_.size(); ++c) {
        const double* w = weights_.data() + c * stride;
        double s = w[dim_];
        for (std::size_t d = 0; d < dim_; ++d) s += w[d] * query[d];
        if (c == 0 || s > best_score) {  // ties keep the lexicographically first class
            best = c;
            best_score = s;
        }
    }
    return classes_[best];
}

// ---------------------------------------------------------------------------
// Metrics

double f1_micro(const std::vector<std::string>& predicted, const std::vector<std::string>& gold) {
    if (predicted.size() != gold.size())
        throw Error("f1_micro: prediction/gold length mismatch (" +
                    std::to_string(predicted.size()) + " vs " + std::to_string(gold.size()) + ")");
    if (predicted.empty()) throw Error("f1_micro: empty input");

    std::set<std::string> labels(gold.begin(), gold.end());
    labels.insert(predicted.begin(), predicted.end());

    double tp = 0.0, fp = 0.0, fn = 0.0;
    for (const std::string& label : labels) {
        for (std::size_t i = 0; i < gold.size(); ++i) {
            const bool p = predicted[i] == label;
            const bool g = gold[i] == label;
            tp += p && g;
            fp += p && !g;
            fn += !p && g;
        }
    }
    if (tp == 0.0) return 0.0;
    const double precision = tp / (tp + fp);
    const double recall = tp / (tp + fn);
    return 2.0 * precision * recall / (precision + recall);
}

// ---------------------------------------------------------------------------
// Cross-validation

namespace {

struct Folds {
    std::vector<std::vector<std::size_t>> assignment;  // fold -> dataset indices, ascending
    bool stratified = true;
};

Folds make_folds(const std::vector<std::string>& labels, std::size_t k, std::uint64_t seed) {
    const std::size_t n = labels.size();
    if (k < 2) throw Error("kfold: k must be >= 2");
    if (n < k)
        throw Error("kfold: dataset of " + std::to_string(n) + " documents is smaller than k=" +
                    std::to_string(k));

    std::map<std::string, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < n; ++i) by_class[labels[i]].push_back(i);

    Folds out;
    out.assignment.resize(k);
    std::mt19937_64 rng(seed);

    bool can_stratify = true;
    for (const auto& [label, members] : by_class) {
        if (members.size() < k) {
            can_stratify = false;
            break;
        }
    }

    if (can_stratify) {
        for (auto& [label, members] : by_class) {
            deterministic_shuffle(members, rng);
            for (std::size_t j = 0; j < members.size(); ++j)
                out.assignment[j % k].push_back(members[j]);
        }
    } else {
        out.stratified = false;
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        deterministic_shuffle(order, rng);
        for (std::size_t j = 0; j < n; ++j) out.assignment[j % k].push_back(order[j]);
    }
    for (auto& fold : out.assignment) std::sort(fold.begin(), fold.end());
    return out;
}

}  // namespace

KFoldResult kfold_eval(const LabeledDataset& dataset, std::size_t k, const Pipeline& pipeline,
                       std::uint64_t seed) {
    std::vector<std::string> labels;
    labels.reserve(dataset.size());
    for (const auto& doc : dataset.docs) labels.push_back(doc.label);
    const Folds folds = make_folds(labels, k, seed);

    KFoldResult result;
    result.stratified = folds.stratified;
    std::vector<char> held(dataset.size());
    for (const auto& fold : folds.assignment) {
        std::fill(held.begin(), held.end(), 0);
        for (std::size_t i : fold) held[i] = 1;

        std::vector<LabeledDoc> train;
        std::vector<TokenSeq> test;
        std::vector<std::string> gold;
        for (std::size_t i = 0; i < dataset.size(); ++i) {
            if (held[i]) {
                test.push_back(dataset.docs[i].tokens);
                gold.push_back(dataset.docs[i].label);
            } else {
                train.push_back(dataset.docs[i]);
            }
        }
        result.fold_f1.push_back(f1_micro(pipeline(train, test), gold));
    }
    result.mean_f1 = std::accumulate(result.fold_f1.begin(), result.fold_f1.end(), 0.0) /
                     static_cast<double>(result.fold_f1.size());
    return result;
}

KFoldResult kfold_eval_vectors(const VectorDataset& dataset, std::size_t k,
                               const VectorPipeline& pipeline, std::uint64_t seed) {
    std::vector<std::string> labels;
    labels.reserve(dataset.rows.size());
    for (const auto& [v, label] : dataset.rows) labels.push_back(label);
    const Folds folds = make_folds(labels, k, seed);

    KFoldResult result;
    result.stratified = folds.stratified;
    std::vector<char> held(dataset.rows.size());
    for (const auto& fold : folds.assignment) {
        std::fill(held.begin(), held.end(), 0);
        for (std::size_t i : fold) held[i] = 1;

        std::vector<std::pair<Vector, std::string>> train;
        std::vector<Vector> test;
        std::vector<std::string> gold;
        for (std::size_t i = 0; i < dataset.rows.size(); ++i) {
            if (held[i]) {
                test.push_back(dataset.rows[i].first);
                gold.push_back(dataset.rows[i].second);
            } else {
                train.push_back(dataset.rows[i]);
            }
        }
        result.fold_f1.push_back(f1_micro(pipeline(train, test), gold));
    }
    result.mean_f1 = std::accumulate(result.fold_f1.begin(), result.fold_f1.end(), 0.0) /
                     static_cast<double>(result.fold_f1.size());
    return result;
}

// ---------------------------------------------------------------------------
// Grid search

std::vector<GridPoint> expand_grid(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& axes) {
    std::vector<GridPoint> points{GridPoint{}};
    for (const auto& [name, values] : axes) {
        if (values.empty()) throw Error("expand_grid: axis '" + name + "' has no values");
        std::vector<GridPoint> next;
        next.reserve(points.size() * values.size());
        for (const GridPoint& p : points) {
            for (const std::string& v : values) {
                GridPoint q = p;
                q.params[name] = v;
                next.push_back(std::move(q));
            }
        }
        points = std::move(next);
    }
    return points;
}

GridResult grid_search(const LabeledDataset& dataset, const std::vector<GridPoint>& grid,
                       const PipelineFactory& factory, std::size_t k, std::uint64_t seed) {
    if (grid.empty()) throw Error("grid_search: empty grid");
    GridResult result;
    bool have_best = false;
    for (const GridPoint& point : grid) {
        const double score = kfold_eval(dataset, k, factory(point), seed).mean_f1;
        result.scores.push_back(score);
        if (!have_best || score > result.best_score) {  // ties keep the earlier grid point
            result.best = point;
            result.best_score = score;
            have_best = true;
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Stock pipelines

namespace {

// Shared policy for vector-based classification: documents with no usable
// vector are excluded from training and predicted as the training majority.
template <typename TrainFn, typename PredictFn>
std::vector<std::string> classify_vectors(const std::vector<std::pair<Vector, std::string>>& rows,
                                          const std::vector<Vector>& queries, TrainFn make,
                                          PredictFn predict) {
    std::vector<std::pair<Vector, std::string>> usable;
    std::vector<std::string> all_labels;
    for (const auto& [v, label] : rows) {
        all_labels.push_back(label);
        if (norm(v) > 0.0) usable.push_back({v, label});
    }
    if (usable.empty()) throw Error("classification: no usable training vectors");
    const std::string fallback = majority_label(all_labels);

    auto model = make(usable);
    std::vector<std::string> out;
    out.reserve(queries.size());
    for (const Vector& q : queries) {
        if (norm(q) == 0.0)
            out.push_back(fallback);
        else
            out.push_back(predict(model, q));
    }
    return out;
}

std::vector<std::pair<Vector, std::string>> embed_docs(const std::vector<LabeledDoc>& docs,
                                                       const EmbeddingModel& model) {
    std::vector<std::pair<Vector, std::string>> rows;
    rows.reserve(docs.size());
    for (const LabeledDoc& doc : docs) {
        DocumentVector dv = doc_vector(doc.tokens, model);
        rows.push_back({dv.valid() ? std::move(dv.vector) : Vector(model.dimension(), 0.0f),
                        doc.label});
    }
    return rows;
}

std::vector<Vector> embed_queries(const std::vector<TokenSeq>& docs, const EmbeddingModel& model) {
    std::vector<Vector> out;
    out.reserve(docs.size());
    for (const TokenSeq& doc : docs) {
        DocumentVector dv = doc_vector(doc, model);
        out.push_back(dv.valid() ? std::move(dv.vector) : Vector(model.dimension(), 0.0f));
    }
    return out;
}

}  // namespace

VectorPipeline make_vector_knn_pipeline(std::size_t k) {
    return [k](const std::vector<std::pair<Vector, std::string>>& train,
               const std::vector<Vector>& test) {
        return classify_vectors(
            train, test, [](const auto& rows) { return rows; },
            [k](const auto& rows, const Vector& q) { return knn_predict(rows, q, k); });
    };
}

VectorPipeline make_vector_logreg_pipeline(LogRegConfig cfg) {
    return [cfg](const std::vector<std::pair<Vector, std::string>>& train,
                 const std::vector<Vector>& test) {
        return classify_vectors(
            train, test, [cfg](const auto& rows) { return logreg_train(rows, cfg); },
            [](const LogRegModel& model, const Vector& q) { return model.predict(q); });
    };
}

Pipeline make_embedding_knn_pipeline(const EmbeddingModel& model, std::size_t k) {
    return [&model, k](const std::vector<LabeledDoc>& train, const std::vector<TokenSeq>& test) {
        return make_vector_knn_pipeline(k)(embed_docs(train, model), embed_queries(test, model));
    };
}

Pipeline make_embedding_logreg_pipeline(const EmbeddingModel& model, LogRegConfig cfg) {
    return [&model, cfg](const std::vector<LabeledDoc>& train, const std::vector<TokenSeq>& test) {
        return make_vector_logreg_pipeline(cfg)(embed_docs(train, model),
                                                embed_queries(test, model));
    };
}

Pipeline make_bow_knn_pipeline(std::size_t top_k, std::size_t k) {
    return [top_k, k](const std::vector<LabeledDoc>& train, const std::vector<TokenSeq>& test) {
        std::vector<TokenSeq> train_tokens;
        for (const auto& doc : train) train_tokens.push_back(doc.tokens);
        BowModel bow = bow_fit(train_tokens, top_k);
        std::vector<std::pair<Vector, std::string>> rows;
        for (const auto& doc : train) rows.push_back({bow_transform(bow, doc.tokens), doc.label});
        std::vector<Vector> queries;
        for (const auto& doc : test) queries.push_back(bow_transform(bow, doc));
        return classify_vectors(
            rows, queries, [](const auto& r) { return r; },
            [k](const auto& r, const Vector& q) { return knn_predict(r, q, k); });
    };
}

Pipeline make_bow_logreg_pipeline(std::size_t top_k, LogRegConfig cfg) {
    return [top_k, cfg](const std::vector<LabeledDoc>& train, const std::vector<TokenSeq>& test) {
        std::vector<TokenSeq> train_tokens;
        for (const auto& doc : train) train_tokens.push_back(doc.tokens);
        BowModel bow = bow_fit(train_tokens, top_k);
        std::vector<std::pair<Vector, std::string>> rows;
        for (const auto& doc : train) rows.push_back({bow_transform(bow, doc.tokens), doc.label});
        std::vector<Vector> queries;
        for (const auto& doc : test) queries.push_back(bow_transform(bow, doc));
        return classify_vectors(
            rows, queries, [cfg](const auto& r) { return logreg_train(r, cfg); },
            [](const LogRegModel& model, const Vector& q) { return model.predict(q); });
    };
}

}  // namespace lexchain
