#ifndef LEXCHAIN_VECTORS_HPP
#define LEXCHAIN_VECTORS_HPP

#include <span>
#include <vector>

namespace lexchain {

// Dense single-precision vector. Accumulating math (dot products, means)
// runs in double precision.
using Vector = std::vector<float>;

// dot(a,b) / (|a||b|), clamped to [-1, 1] against rounding.
// Throws Error on dimension mismatch or zero-norm input.
double cosine(std::span<const float> a, std::span<const float> b);

double norm(std::span<const float> v);

// Componentwise arithmetic mean. Throws Error on empty input or ragged
// dimensions.
Vector centroid(const std::vector<Vector>& vs);
Vector centroid(const std::vector<const Vector*>& vs);

}  // namespace lexchain

#endif
