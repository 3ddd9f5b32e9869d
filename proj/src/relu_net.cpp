#include "nnapprox/relu_net.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace nnapprox {

Network::Network(std::vector<Layer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw precondition_error("Network: at least one layer required");
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& layer = layers_[l];
    if (layer.rows == 0 || layer.cols == 0)
      throw precondition_error("Network: layer " + std::to_string(l) + " has empty shape");
    if (layer.bias.size() != layer.rows)
      throw precondition_error("Network: layer " + std::to_string(l) + " bias length != rows");
    if (l > 0 && layer.cols != layers_[l - 1].rows)
      throw precondition_error("Network: layer " + std::to_string(l) +
                               " input width does not match previous output width");
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const CooEntry& e : layer.entries) {
      if (e.row >= layer.rows || e.col >= layer.cols)
        throw precondition_error("Network: entry out of range in layer " + std::to_string(l));
      if (e.value == 0.0)
        throw precondition_error("Network: explicit zero entry in layer " + std::to_string(l));
      if (!std::isfinite(e.value))
        throw precondition_error("Network: non-finite entry in layer " + std::to_string(l));
      if (!seen.insert({e.row, e.col}).second)
        throw precondition_error("Network: duplicate entry position in layer " + std::to_string(l));
      weight_magnitude_ = std::max(weight_magnitude_, std::fabs(e.value));
    }
    weight_count_ += layer.entries.size();
    for (double b : layer.bias) {
      if (!std::isfinite(b)) throw precondition_error("Network: non-finite bias");
      if (b != 0.0) ++weight_count_;
      weight_magnitude_ = std::max(weight_magnitude_, std::fabs(b));
    }
  }
}

std::vector<double> Network::realize(std::span<const double> x) const {
  if (x.size() != input_dim())
    throw precondition_error("realize: input has dimension " + std::to_string(x.size()) +
                             ", network expects " + std::to_string(input_dim()));
  std::vector<double> cur(x.begin(), x.end());
  std::vector<double> next;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& layer = layers_[l];
    next.assign(layer.bias.begin(), layer.bias.end());
    for (const CooEntry& e : layer.entries) next[e.row] += e.value * cur[e.col];
    if (l + 1 < layers_.size())
      for (double& v : next) v = std::max(0.0, v);
    cur.swap(next);
  }
  return cur;
}

nlohmann::json Network::to_json() const {
  nlohmann::json layers = nlohmann::json::array();
  for (const Layer& layer : layers_) {
    nlohmann::json entries = nlohmann::json::array();
    for (const CooEntry& e : layer.entries) entries.push_back({e.row, e.col, e.value});
    layers.push_back({{"rows", layer.rows},
                      {"cols", layer.cols},
                      {"entries", std::move(entries)},
                      {"bias", layer.bias}});
  }
  return {{"layers", std::move(layers)}};
}

Network Network::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("layers") || !j.at("layers").is_array())
    throw precondition_error("Network: JSON must be an object with a 'layers' array");
  std::vector<Layer> layers;
  for (const nlohmann::json& jl : j.at("layers")) {
    Layer layer;
    layer.rows = jl.at("rows").get<std::size_t>();
    layer.cols = jl.at("cols").get<std::size_t>();
    for (const nlohmann::json& je : jl.at("entries")) {
      if (!je.is_array() || je.size() != 3)
        throw precondition_error("Network: entry must be a [row, col, value] triple");
      layer.entries.push_back(
          {je.at(0).get<std::size_t>(), je.at(1).get<std::size_t>(), je.at(2).get<double>()});
    }
    layer.bias = jl.at("bias").get<std::vector<double>>();
    layers.push_back(std::move(layer));
  }
  return Network(std::move(layers));
}

bool in_sigma(const Network& phi, std::uint64_t n, const GrowthPair& growth, std::size_t d) {
  if (n == 0) throw precondition_error("in_sigma: budget must be >= 1");
  if (phi.input_dim() != d || phi.output_dim() != 1) return false;
  if (phi.weight_count() > n) return false;
  const ExtReal depth_budget = growth.depth(n);
  if (ExtReal(static_cast<double>(phi.depth())) > depth_budget) return false;
  const ExtReal coeff_budget = growth.coeff(n);
  return ExtReal(phi.weight_magnitude()) <= coeff_budget;
}

ExtReal lipschitz_bound(std::size_t d, double C, std::uint64_t L, std::uint64_t n) {
  if (!(C >= 0.0) || !std::isfinite(C)) throw precondition_error("lipschitz_bound: C must be finite and >= 0");
  const double v = static_cast<double>(d) * std::pow(C, static_cast<double>(L)) *
                   std::pow(static_cast<double>(n), static_cast<double>(L / 2));
  // C = 0 with L = 0 cannot occur (depth >= 1), so v is never NaN from 0^0.
  return ext_from_computed(v);
}

}  // namespace nnapprox
