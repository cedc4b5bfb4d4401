#include "lexchain/vectors.hpp"

#include <algorithm>
#include <cmath>

#include "lexchain/error.hpp"

namespace lexchain {

double norm(std::span<const float> v) {
    double sum = 0.0;
    for (float x : v) sum += static_cast<double>(x) * x;
    return std::sqrt(sum);
}

double cosine(std::span<const float> a, std::span<const float> b) {
    if (a.size() != b.size())
        throw Error("cosine: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()) + ")");
    if (a.empty()) throw Error("cosine: empty vectors");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += static_cast<double>(a[i]) * b[i];
        na += static_cast<double>(a[i]) * a[i];
        nb += static_cast<double>(b[i]) * b[i];
    }
    if (na == 0.0 || nb == 0.0) throw Error("cosine: undefined for a zero vector");
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

namespace {

template <typename Access>
Vector centroid_impl(std::size_t count, Access at) {
    if (count == 0) throw Error("centroid: empty input");
    const std::size_t dim = at(0).size();
    std::vector<double> sum(dim, 0.0);
    for (std::size_t i = 0; i < count; ++i) {
        const Vector& v = at(i);
        if (v.size() != dim) throw Error("centroid: ragged dimensions");
        for (std::size_t d = 0; d < dim; ++d) sum[d] += v[d];
    }
    Vector mean(dim);
    for (std::size_t d = 0; d < dim; ++d) mean[d] = static_cast<float>(sum[d] / count);
    return mean;
}

}  // namespace

Vector centroid(const std::vector<Vector>& vs) {
    return centroid_impl(vs.size(), [&](std::size_t i) -> const Vector& { return vs[i]; });
}

Vector centroid(const std::vector<const Vector*>& vs) {
    return centroid_impl(vs.size(), [&](std::size_t i) -> const Vector& { return *vs[i]; });
}

}  // namespace lexchain
