#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"
#include "nnapprox/ext_real.hpp"
#include "nnapprox/growth.hpp"

namespace nnapprox {

// One sparse matrix entry; zeros are simply not stored, and a stored zero is
// rejected at construction so the nonzero count equals the entry count.
struct CooEntry {
  std::size_t row;
  std::size_t col;
  double value;
};

struct Layer {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<CooEntry> entries;
  std::vector<double> bias;  // dense, length rows
};

// Feedforward ReLU network: affine layers with the rectifier applied after
// every layer except the last.  Immutable after construction; the connectivity
// statistics are computed once and cached.
class Network {
 public:
  explicit Network(std::vector<Layer> layers);

  const std::vector<Layer>& layers() const { return layers_; }
  std::size_t depth() const { return layers_.size(); }
  std::size_t input_dim() const { return layers_.front().cols; }
  std::size_t output_dim() const { return layers_.back().rows; }

  // Number of nonzero matrix entries plus nonzero bias coordinates.
  std::size_t weight_count() const { return weight_count_; }
  // Largest magnitude over all matrix entries and bias coordinates; 0 for a
  // network with no stored entries and zero biases.
  double weight_magnitude() const { return weight_magnitude_; }

  std::vector<double> realize(std::span<const double> x) const;

  nlohmann::json to_json() const;
  static Network from_json(const nlohmann::json& j);

 private:
  std::vector<Layer> layers_;
  std::size_t weight_count_ = 0;
  double weight_magnitude_ = 0.0;
};

// Membership of phi in the budgeted class: scalar output, input dimension d,
// weight count <= n, depth <= depth budget at n, magnitude <= coefficient
// budget at n.
bool in_sigma(const Network& phi, std::uint64_t n, const GrowthPair& growth, std::size_t d);

// Lipschitz bound d * C^L * n^(floor(L/2)) for any realization drawn from the
// class with magnitude bound C, depth L and weight budget n.  Saturates to the
// infinite state instead of overflowing.
ExtReal lipschitz_bound(std::size_t d, double C, std::uint64_t L, std::uint64_t n);

}  // namespace nnapprox
