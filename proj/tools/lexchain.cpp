// lexchain: command-line front end for the lexical-chain pipeline.
//
// The five processing stages talk through files so any intermediate can be
// inspected or swapped for an externally produced one:
//   annotate -> chain -> train -> vectorize -> evaluate      (+ stats)
// Diagnostics go to stderr; only `stats` writes data to stdout.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "lexchain/annotated.hpp"
#include "lexchain/cbow.hpp"
#include "lexchain/chains.hpp"
#include "lexchain/classify.hpp"
#include "lexchain/embedding_model.hpp"
#include "lexchain/error.hpp"
#include "lexchain/mssa.hpp"
#include "lexchain/pipeline_config.hpp"
#include "lexchain/preprocess.hpp"
#include "lexchain/wordnet.hpp"

namespace {

namespace fs = std::filesystem;
using namespace lexchain;

struct RawDoc {
    std::string label;  // empty when the line had no tab
    std::string text;
};

std::vector<RawDoc> load_raw_corpus(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::vector<RawDoc> docs;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        RawDoc doc;
        if (auto tab = line.find('\t'); tab != std::string::npos) {
            doc.label = line.substr(0, tab);
            doc.text = line.substr(tab + 1);
        } else {
            doc.text = line;
        }
        docs.push_back(std::move(doc));
    }
    return docs;
}

LexicalDatabase load_database(const PipelineConfig& cfg) {
    if (!cfg.portable_db.empty()) return load_portable(cfg.portable_db);
    if (!cfg.wordnet_dir.empty()) return load_wndb(cfg.wordnet_dir);
    throw Error("no lexical database given: pass --portable-db or --wordnet-dir "
                "(or set LEXCHAIN_WORDNET_DIR)");
}

// Referenced inputs are checked up front so a stage never does work before
// discovering a missing file.
void require_paths(std::initializer_list<const std::string*> paths) {
    for (const std::string* path : paths) {
        if (!path->empty() && !fs::exists(*path)) throw Error("no such file: " + *path);
    }
}

TrainConfig train_config(const PipelineConfig& cfg) {
    TrainConfig tc;
    tc.dimension = cfg.dimension;
    tc.window = cfg.window;
    tc.min_count = cfg.min_count;
    tc.epochs = cfg.epochs;
    tc.negative_samples = cfg.negative;
    tc.learning_rate = static_cast<float>(cfg.learning_rate);
    tc.seed = cfg.seed;
    tc.workers = cfg.workers;
    return tc;
}

TokenCorpus corpus_tokens(const AnnotatedCorpus& corpus) {
    TokenCorpus out;
    out.reserve(corpus.size());
    for (const AnnotatedDocument& doc : corpus) {
        std::vector<std::string> tokens;
        tokens.reserve(doc.tokens.size());
        for (const AnnotatedToken& t : doc.tokens) tokens.push_back(t.str());
        out.push_back(std::move(tokens));
    }
    return out;
}

// ---------------------------------------------------------------------------

int cmd_annotate(const PipelineConfig& cfg) {
    require_paths({&cfg.input, &cfg.portable_db, &cfg.wordnet_dir, &cfg.word_model,
                   &cfg.synset_model});
    const LexicalDatabase db = load_database(cfg);
    if (cfg.word_model.empty()) throw Error("annotate needs --word-model");
    const EmbeddingModel words = load_text_model(cfg.word_model);

    const std::vector<RawDoc> raw = load_raw_corpus(cfg.input);
    std::vector<std::vector<std::string>> token_docs;
    token_docs.reserve(raw.size());
    for (const RawDoc& doc : raw) token_docs.push_back(preprocess(doc.text));

    MssaStats stats;
    std::vector<AnnotatedDocument> annotated =
        disambiguate_corpus(token_docs, words, db, cfg.workers, &stats);
    std::cerr << "annotate: pass 0: " << stats.assigned_senses << " senses assigned, "
              << stats.dropped_tokens << " tokens dropped, " << stats.fallback_senses
              << " fallbacks\n";

    std::optional<EmbeddingModel> provided;
    if (!cfg.synset_model.empty()) provided = load_text_model(cfg.synset_model);

    for (int pass = 1; pass <= cfg.passes; ++pass) {
        EmbeddingModel synsets;
        if (pass == 1 && provided) {
            synsets = std::move(*provided);
        } else {
            // Train an intermediate synset model on the previous pass's output.
            synsets = train_cbow(corpus_tokens(annotated), train_config(cfg));
        }
        annotated = refine_corpus(token_docs, synsets, db, cfg.workers, &stats);
        std::cerr << "annotate: pass " << pass << ": " << stats.assigned_senses
                  << " senses assigned, " << stats.dropped_tokens << " tokens dropped, "
                  << stats.fallback_senses << " fallbacks\n";
    }

    AnnotatedCorpus out;
    out.reserve(annotated.size());
    for (std::size_t i = 0; i < annotated.size(); ++i) {
        annotated[i].label = raw[i].label;
        out.push_back(std::move(annotated[i]));
    }
    save_annotated_corpus(out, cfg.output);
    return 0;
}

int cmd_chain(const PipelineConfig& cfg, bool have_chunk_size) {
    require_paths({&cfg.input, &cfg.portable_db, &cfg.wordnet_dir, &cfg.synset_model});
    ChainParams params;
    if (cfg.mode == "flexible") {
        params.mode = ChainMode::flexible;
    } else if (cfg.mode == "fixed") {
        params.mode = ChainMode::fixed;
        if (!have_chunk_size)
            throw CLI::ValidationError("--chunk-size", "fixed mode needs --chunk-size");
        params.chunk_size = cfg.chunk_size;
    } else {
        throw CLI::ValidationError("--mode", "must be 'flexible' or 'fixed'");
    }

    EmbeddingModel synsets;
    if (!cfg.synset_model.empty())
        synsets = load_text_model(cfg.synset_model);
    else
        std::cerr << "chain: no --synset-model; representatives fall back to first members\n";

    std::optional<LexicalDatabase> db;
    if (params.mode == ChainMode::flexible) db = load_database(cfg);

    const AnnotatedCorpus input = load_annotated_corpus(cfg.input);
    const AnnotatedCorpus chained =
        chain_corpus(input, params, synsets, db ? &*db : nullptr);

    std::size_t in_tokens = 0, out_tokens = 0;
    for (const auto& doc : input) in_tokens += doc.tokens.size();
    for (const auto& doc : chained) out_tokens += doc.tokens.size();
    std::fprintf(stderr, "chain: %zu -> %zu tokens (compression %.4f)\n", in_tokens, out_tokens,
                 in_tokens ? static_cast<double>(out_tokens) / in_tokens : 1.0);

    save_annotated_corpus(chained, cfg.output);
    return 0;
}

int cmd_train(const PipelineConfig& cfg) {
    require_paths({&cfg.input});
    std::ifstream in(cfg.input);
    if (!in) throw Error("cannot open " + cfg.input);
    TokenCorpus corpus;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string_view body = line;
        if (auto tab = body.find('\t'); tab != std::string_view::npos) body = body.substr(tab + 1);
        std::vector<std::string> tokens;
        std::size_t i = 0;
        while (i < body.size()) {
            while (i < body.size() && body[i] == ' ') ++i;
            std::size_t start = i;
            while (i < body.size() && body[i] != ' ') ++i;
            if (i > start) tokens.emplace_back(body.substr(start, i - start));
        }
        if (!tokens.empty()) corpus.push_back(std::move(tokens));
    }

    const EmbeddingModel model = train_cbow(corpus, train_config(cfg));
    std::cerr << "train: " << model.size() << " tokens, dimension " << model.dimension() << "\n";
    save_text_model(model, cfg.output);
    return 0;
}

int cmd_vectorize(const PipelineConfig& cfg) {
    require_paths({&cfg.input, &cfg.word_model});
    if (cfg.word_model.empty()) throw Error("vectorize needs --model");
    const EmbeddingModel model = load_text_model(cfg.word_model);
    const LabeledDataset dataset = load_labeled_corpus(cfg.input);

    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) throw Error("cannot write " + cfg.output);
    out << "label";
    for (std::size_t d = 0; d < model.dimension(); ++d) out << ",dim" << d;
    out << '\n';

    char buf[32];
    std::size_t invalid = 0;
    for (const LabeledDoc& doc : dataset.docs) {
        const DocumentVector dv = doc_vector(doc.tokens, model);
        out << doc.label;
        // Fully out-of-vocabulary documents export as all-zero rows, which
        // the evaluator maps back to the invalid-document policy.
        for (std::size_t d = 0; d < model.dimension(); ++d) {
            const double x = dv.valid() ? dv.vector[d] : 0.0;
            std::snprintf(buf, sizeof(buf), "%.6g", x);
            out << ',' << buf;
        }
        out << '\n';
        if (!dv.valid()) ++invalid;
    }
    if (!out) throw Error("write failed: " + cfg.output);
    std::cerr << "vectorize: " << dataset.size() << " documents, " << invalid
              << " without any in-vocabulary token\n";
    return 0;
}

VectorDataset load_vector_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw Error(path.string() + ": empty file");
    if (line.rfind("label", 0) != 0)
        throw Error(path.string() + ":1: expected a 'label,dim0,...' header");

    VectorDataset dataset;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string label;
        if (!std::getline(row, label, ','))
            throw Error(path.string() + ":" + std::to_string(line_no) + ": missing label");
        Vector v;
        std::string cell;
        while (std::getline(row, cell, ',')) {
            try {
                v.push_back(std::stof(cell));
            } catch (const std::exception&) {
                throw Error(path.string() + ":" + std::to_string(line_no) + ": bad float '" +
                            cell + "'");
            }
        }
        if (!dataset.rows.empty() && v.size() != dataset.rows.front().first.size())
            throw Error(path.string() + ":" + std::to_string(line_no) + ": ragged row width");
        dataset.rows.push_back({std::move(v), std::move(label)});
    }
    return dataset;
}

int cmd_evaluate(const PipelineConfig& cfg) {
    require_paths({&cfg.input, &cfg.word_model});
    const fs::path input(cfg.input);

    VectorDataset dataset;
    if (input.extension() == ".csv") {
        dataset = load_vector_csv(input);
    } else {
        if (cfg.word_model.empty())
            throw Error("evaluate on a token corpus needs --model (or pass a .csv export)");
        const EmbeddingModel model = load_text_model(cfg.word_model);
        const LabeledDataset labeled = load_labeled_corpus(input);
        for (const LabeledDoc& doc : labeled.docs) {
            const DocumentVector dv = doc_vector(doc.tokens, model);
            dataset.rows.push_back(
                {dv.valid() ? dv.vector : Vector(model.dimension(), 0.0f), doc.label});
        }
    }

    VectorPipeline pipeline;
    if (cfg.classifier == "knn") {
        pipeline = make_vector_knn_pipeline(cfg.knn_k);
    } else if (cfg.classifier == "logreg") {
        LogRegConfig lr;
        lr.epochs = cfg.logreg_epochs;
        lr.rate = cfg.logreg_rate;
        lr.l2 = cfg.logreg_l2;
        pipeline = make_vector_logreg_pipeline(lr);
    } else {
        throw CLI::ValidationError("--classifier", "must be 'knn' or 'logreg'");
    }

    const KFoldResult result = kfold_eval_vectors(dataset, cfg.folds, pipeline, cfg.seed);
    if (!result.stratified)
        std::cerr << "evaluate: some class has fewer than " << cfg.folds
                  << " members; folds are unstratified\n";
    for (std::size_t f = 0; f < result.fold_f1.size(); ++f)
        std::fprintf(stderr, "evaluate: fold %zu f1_micro %.6f\n", f, result.fold_f1[f]);

    char line[256];
    std::snprintf(line, sizeof(line), "%s %s %.6f %zu %llu\n", input.stem().string().c_str(),
                  cfg.classifier.c_str(), result.mean_f1, static_cast<std::size_t>(cfg.folds),
                  static_cast<unsigned long long>(cfg.seed));
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) throw Error("cannot write " + cfg.output);
    out << line;
    if (!out) throw Error("write failed: " + cfg.output);
    std::cerr << "evaluate: mean f1_micro " << result.mean_f1 << "\n";
    return 0;
}

int cmd_stats(const PipelineConfig& cfg) {
    require_paths({&cfg.input});
    const LabeledDataset dataset = load_labeled_corpus(cfg.input);
    std::set<std::string> tokens;
    for (const LabeledDoc& doc : dataset.docs) tokens.insert(doc.tokens.begin(), doc.tokens.end());
    std::cout << "docs " << dataset.size() << '\n'
              << "classes " << dataset.labels().size() << '\n'
              << "distinct_tokens " << tokens.size() << '\n';
    return 0;
}

// Pre-scan for --config so its values can seed the option defaults before
// the real parse.
std::optional<std::string> find_config_arg(int argc, char** argv) {
    for (int i = 1; i < argc - 1; ++i) {
        if (std::string_view(argv[i]) == "--config") return std::string(argv[i + 1]);
    }
    return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
    PipelineConfig cfg;
    std::string save_config_path;
    bool config_loaded = false;

    try {
        if (auto config_path = find_config_arg(argc, argv)) {
            cfg = load_pipeline_config(*config_path);
            config_loaded = true;
        }
    } catch (const Error& e) {
        std::cerr << "lexchain: " << e.what() << '\n';
        return 1;
    }

    CLI::App app{"lexical-chain document pipeline"};
    app.require_subcommand(1);

    bool have_chunk_size = false;
    std::string config_path_unused;

    auto add_db_options = [&](CLI::App* cmd) {
        cmd->add_option("--wordnet-dir", cfg.wordnet_dir, "WordNet 3.0 database directory")
            ->envname("LEXCHAIN_WORDNET_DIR");
        cmd->add_option("--portable-db", cfg.portable_db, "portable-format lexical database");
    };
    auto add_train_options = [&](CLI::App* cmd) {
        cmd->add_option("--dimension", cfg.dimension, "embedding dimension");
        cmd->add_option("--window", cfg.window, "context window size");
        cmd->add_option("--min-count", cfg.min_count, "minimum token frequency");
        cmd->add_option("--epochs", cfg.epochs, "training epochs");
        cmd->add_option("--negative", cfg.negative, "negative samples per example");
        cmd->add_option("--learning-rate", cfg.learning_rate, "initial learning rate");
    };
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", cfg.seed, "RNG seed; fixes every random choice");
        cmd->add_option("--workers", cfg.workers, "worker threads (1 = fully deterministic)");
    };
    auto add_config = [&](CLI::App* cmd) {
        // the file itself is consumed by the pre-scan before CLI11 runs
        cmd->add_option("--config", config_path_unused, "key-value config file with defaults");
        cmd->add_option("--save-config", save_config_path,
                        "write the effective settings to a file");
    };

    CLI::App* annotate = app.add_subcommand("annotate", "disambiguate a raw corpus into synsets");
    annotate->add_option("--input", cfg.input, "raw corpus, one document per line")->required();
    annotate->add_option("--output", cfg.output, "annotated corpus file")->required();
    annotate->add_option("--word-model", cfg.word_model, "word-level text vector model");
    annotate->add_option("--passes", cfg.passes, "recurrent refinement passes (0 = plain)");
    annotate->add_option("--synset-model", cfg.synset_model,
                         "synset model for the first refinement pass");
    add_db_options(annotate);
    add_train_options(annotate);
    add_common(annotate);

    CLI::App* chain = app.add_subcommand("chain", "build lexical chains over an annotated corpus");
    chain->add_option("--input", cfg.input, "annotated corpus")->required();
    chain->add_option("--output", cfg.output, "chained corpus file")->required();
    chain->add_option("--mode", cfg.mode, "flexible | fixed");
    chain->add_option("--chunk-size", cfg.chunk_size, "synsets per chunk (fixed mode)")
        ->check(CLI::PositiveNumber)
        ->each([&](const std::string&) { have_chunk_size = true; });
    chain->add_option("--synset-model", cfg.synset_model, "synset vectors for representatives");
    add_db_options(chain);
    add_common(chain);

    CLI::App* train = app.add_subcommand("train", "train a CBOW embedding model");
    train->add_option("--input", cfg.input, "token corpus (labels stripped)")->required();
    train->add_option("--output", cfg.output, "text model file")->required();
    add_train_options(train);
    add_common(train);

    CLI::App* vectorize = app.add_subcommand("vectorize", "average documents into vectors");
    vectorize->add_option("--input", cfg.input, "labeled corpus")->required();
    vectorize->add_option("--model", cfg.word_model, "text vector model")->required();
    vectorize->add_option("--output", cfg.output, "CSV of document vectors")->required();
    add_common(vectorize);

    CLI::App* evaluate = app.add_subcommand("evaluate", "cross-validated F1-micro");
    evaluate->add_option("--input", cfg.input, "vector CSV or labeled corpus")->required();
    evaluate->add_option("--model", cfg.word_model, "text model (corpus input only)");
    evaluate->add_option("--classifier", cfg.classifier, "knn | logreg");
    evaluate->add_option("--knn-k", cfg.knn_k, "neighbors for knn");
    evaluate->add_option("--logreg-epochs", cfg.logreg_epochs, "gradient-descent iterations");
    evaluate->add_option("--logreg-rate", cfg.logreg_rate, "gradient-descent step size");
    evaluate->add_option("--logreg-l2", cfg.logreg_l2, "L2 penalty");
    evaluate->add_option("--folds", cfg.folds, "cross-validation folds");
    evaluate->add_option("--output", cfg.output, "report file")->required();
    add_common(evaluate);

    CLI::App* stats = app.add_subcommand("stats", "document/class/token counts of a corpus");
    stats->add_option("--input", cfg.input, "labeled corpus")->required();
    add_common(stats);

    for (CLI::App* cmd : {annotate, chain, train, vectorize, evaluate, stats}) add_config(cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (!save_config_path.empty()) save_pipeline_config(cfg, save_config_path);
        if (annotate->parsed()) return cmd_annotate(cfg);
        if (chain->parsed()) return cmd_chain(cfg, have_chunk_size || config_loaded);
        if (train->parsed()) return cmd_train(cfg);
        if (vectorize->parsed()) return cmd_vectorize(cfg);
        if (evaluate->parsed()) return cmd_evaluate(cfg);
        if (stats->parsed()) return cmd_stats(cfg);
    } catch (const CLI::Error& e) {
        std::cerr << "lexchain: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        std::cerr << "lexchain: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "lexchain: unexpected error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
