#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace dynstr {

// Online boolean matrix-vector product: an r x r bit matrix fixed up front
// and a stream of r-bit vectors revealed one at a time.
struct OmvInstance {
  size_t r = 0;
  std::vector<uint8_t> matrix;                 // r*r bits, row-major
  std::vector<std::vector<uint8_t>> vectors;   // each of length r

  uint8_t bit(size_t row, size_t col) const { return matrix[row * r + col]; }
};

inline OmvInstance random_omv_instance(size_t r, size_t vector_count, double density,
                                       uint64_t seed) {
  OmvInstance inst;
  inst.r = r;
  inst.matrix.resize(r * r);
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution bit(density);
  for (auto& b : inst.matrix) b = bit(rng) ? 1 : 0;
  inst.vectors.resize(vector_count, std::vector<uint8_t>(r));
  for (auto& v : inst.vectors)
    for (auto& b : v) b = bit(rng) ? 1 : 0;
  return inst;
}

// Weighted points on an r x r grid; coordinates are fixed, weights mutable.
// Queries ask about the dominance quadrant [1,x] x [1,y].
struct GridInstance {
  size_t r = 0;
  std::vector<std::pair<uint32_t, uint32_t>> coords;  // r slots, coords in 1..r
  std::vector<uint32_t> weights;                      // per slot
  uint32_t max_weight = 1;                            // declared upper bound
};

inline GridInstance random_grid_instance(size_t r, uint32_t max_weight, uint64_t seed) {
  GridInstance g;
  g.r = r;
  g.max_weight = max_weight;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<uint32_t> coord(1, static_cast<uint32_t>(r));
  std::uniform_int_distribution<uint32_t> weight(0, max_weight);
  g.coords.resize(r);
  g.weights.resize(r);
  for (size_t i = 0; i < r; ++i) {
    g.coords[i] = {coord(rng), coord(rng)};
    g.weights[i] = weight(rng);
  }
  return g;
}

}  // namespace dynstr
