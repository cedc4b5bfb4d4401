#include "lexchain/pipeline_config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "lexchain/error.hpp"

namespace lexchain {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct Field {
    std::function<std::string(const PipelineConfig&)> get;
    std::function<void(PipelineConfig&, const std::string&)> set;
};

template <typename T>
void parse_into(T& out, const std::string& text) {
    if constexpr (std::is_same_v<T, std::string>) {
        out = text;
    } else if constexpr (std::is_floating_point_v<T>) {
        try {
            std::size_t used = 0;
            out = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
        } catch (const std::exception&) {
            throw Error("bad number '" + text + "'");
        }
    } else {
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
        if (ec != std::errc() || ptr != text.data() + text.size())
            throw Error("bad integer '" + text + "'");
    }
}

template <typename T>
Field field(T PipelineConfig::* member) {
    return Field{
        [member](const PipelineConfig& c) -> std::string {
            if constexpr (std::is_same_v<T, std::string>) {
                return c.*member;
            } else if constexpr (std::is_floating_point_v<T>) {
                return format_double(c.*member);
            } else {
                return std::to_string(c.*member);
            }
        },
        [member](PipelineConfig& c, const std::string& text) { parse_into(c.*member, text); },
    };
}

// Declaration order is the serialization order.
const std::vector<std::pair<std::string, Field>>& fields() {
    static const std::vector<std::pair<std::string, Field>> table = {
        {"wordnet_dir", field(&PipelineConfig::wordnet_dir)},
        {"portable_db", field(&PipelineConfig::portable_db)},
        {"word_model", field(&PipelineConfig::word_model)},
        {"synset_model", field(&PipelineConfig::synset_model)},
        {"input", field(&PipelineConfig::input)},
        {"output", field(&PipelineConfig::output)},
        {"mode", field(&PipelineConfig::mode)},
        {"chunk_size", field(&PipelineConfig::chunk_size)},
        {"passes", field(&PipelineConfig::passes)},
        {"dimension", field(&PipelineConfig::dimension)},
        {"window", field(&PipelineConfig::window)},
        {"min_count", field(&PipelineConfig::min_count)},
        {"epochs", field(&PipelineConfig::epochs)},
        {"negative", field(&PipelineConfig::negative)},
        {"learning_rate", field(&PipelineConfig::learning_rate)},
        {"classifier", field(&PipelineConfig::classifier)},
        {"knn_k", field(&PipelineConfig::knn_k)},
        {"logreg_epochs", field(&PipelineConfig::logreg_epochs)},
        {"logreg_rate", field(&PipelineConfig::logreg_rate)},
        {"logreg_l2", field(&PipelineConfig::logreg_l2)},
        {"folds", field(&PipelineConfig::folds)},
        {"seed", field(&PipelineConfig::seed)},
        {"workers", field(&PipelineConfig::workers)},
    };
    return table;
}

}  // namespace

std::string to_config_text(const PipelineConfig& config) {
    std::ostringstream out;
    for (const auto& [key, f] : fields()) {
        const std::string value = f.get(config);
        out << key;
        if (!value.empty()) out << ' ' << value;
        out << '\n';
    }
    return std::move(out).str();
}

void save_pipeline_config(const PipelineConfig& config, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << to_config_text(config);
    if (!out) throw Error("write failed: " + path.string());
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());

    std::map<std::string, const Field*> by_key;
    for (const auto& [key, f] : fields()) by_key.emplace(key, &f);

    PipelineConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto space = line.find(' ');
        const std::string key = line.substr(0, space);
        const std::string value = space == std::string::npos ? "" : line.substr(space + 1);
        auto it = by_key.find(key);
        if (it == by_key.end())
            throw Error(path.filename().string() + ":" + std::to_string(line_no) +
                        ": unknown config key '" + key + "'");
        try {
            it->second->set(config, value);
        } catch (const Error& e) {
            throw Error(path.filename().string() + ":" + std::to_string(line_no) + ": key '" + key +
                        "': " + e.what());
        }
    }
    return config;
}

}  // namespace lexchain
