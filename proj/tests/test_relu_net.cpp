#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "nnapprox/relu_net.hpp"

using namespace nnapprox;

namespace {

// f(x) = relu(x) + relu(1 - x); identically 1 on [0, 1].
Network hat_net() {
  Layer l1;
  l1.rows = 2;
  l1.cols = 1;
  l1.entries = {{0, 0, 1.0}, {1, 0, -1.0}};
  l1.bias = {0.0, 1.0};
  Layer l2;
  l2.rows = 1;
  l2.cols = 2;
  l2.entries = {{0, 0, 1.0}, {0, 1, 1.0}};
  l2.bias = {0.0};
  return Network({l1, l2});
}

double eval1(const Network& net, double x) {
  const double in[] = {x};
  return net.realize(in)[0];
}

}  // namespace

TEST_CASE("realization applies the rectifier between layers only") {
  const Network net = hat_net();
  CHECK(net.depth() == 2);
  CHECK(net.input_dim() == 1);
  CHECK(net.output_dim() == 1);
  CHECK(eval1(net, 0.3) == doctest::Approx(1.0));
  CHECK(eval1(net, 0.0) == doctest::Approx(1.0));
  // Outside [0,1] one branch dominates; no rectifier on the output layer, so
  // negative values would pass through if they occurred.
  CHECK(eval1(net, -0.5) == doctest::Approx(1.5));
  CHECK(eval1(net, 2.0) == doctest::Approx(2.0));
}

TEST_CASE("weight count is exact nonzero accounting") {
  const Network net = hat_net();
  // 4 matrix entries plus the single nonzero bias.
  CHECK(net.weight_count() == 5);
  CHECK(net.weight_magnitude() == 1.0);

  Layer l;
  l.rows = 1;
  l.cols = 1;
  l.bias = {0.0};
  const Network empty({l});
  CHECK(empty.weight_count() == 0);
  CHECK(empty.weight_magnitude() == 0.0);
  const double in[] = {0.7};
  CHECK(empty.realize(in)[0] == 0.0);
}

TEST_CASE("construction rejects malformed layer stacks") {
  Layer ok;
  ok.rows = 1;
  ok.cols = 1;
  ok.entries = {{0, 0, 1.0}};
  ok.bias = {0.0};

  CHECK_THROWS_AS(Network({}), precondition_error);

  Layer bad = ok;
  bad.bias = {0.0, 0.0};
  CHECK_THROWS_AS(Network({bad}), precondition_error);

  bad = ok;
  bad.entries = {{0, 0, 0.0}};  // stored zero would break the weight count
  CHECK_THROWS_AS(Network({bad}), precondition_error);

  bad = ok;
  bad.entries = {{0, 0, 1.0}, {0, 0, 2.0}};  // duplicate coordinate
  CHECK_THROWS_AS(Network({bad}), precondition_error);

  bad = ok;
  bad.entries = {{1, 0, 1.0}};  // row out of range
  CHECK_THROWS_AS(Network({bad}), precondition_error);

  bad = ok;
  bad.entries = {{0, 0, std::nan("")}};
  CHECK_THROWS_AS(Network({bad}), precondition_error);

  Layer second = ok;
  second.cols = 3;  // chain mismatch against rows = 1
  second.entries = {{0, 2, 1.0}};
  CHECK_THROWS_AS(Network({ok, second}), precondition_error);
}

TEST_CASE("realize validates the input dimension") {
  const Network net = hat_net();
  const std::vector<double> wrong = {0.1, 0.2};
  CHECK_THROWS_AS(net.realize(wrong), precondition_error);
}

TEST_CASE("network JSON round trip is exact") {
  const Network net = hat_net();
  const Network back = Network::from_json(net.to_json());
  CHECK(back.to_json() == net.to_json());
  CHECK(back.weight_count() == net.weight_count());
  for (double x : {0.0, 0.25, 0.77, 1.0}) CHECK(eval1(back, x) == eval1(net, x));
}

TEST_CASE("scaling the output layer scales the realization") {
  Network net = hat_net();
  std::vector<Layer> layers = net.layers();
  for (CooEntry& e : layers.back().entries) e.value *= 3.75;
  for (double& b : layers.back().bias) b *= 3.75;
  const Network scaled(std::move(layers));
  for (double x : {0.1, 0.5, 0.93}) CHECK(eval1(scaled, x) == doctest::Approx(3.75 * eval1(net, x)));
}

TEST_CASE("permuting a hidden coordinate leaves the realization unchanged") {
  // Swap the two hidden units of the hat network: rows of layer 1, columns of
  // layer 2.
  Network net = hat_net();
  std::vector<Layer> layers = net.layers();
  for (CooEntry& e : layers[0].entries) e.row = 1 - e.row;
  std::swap(layers[0].bias[0], layers[0].bias[1]);
  for (CooEntry& e : layers[1].entries) e.col = 1 - e.col;
  const Network permuted(std::move(layers));
  for (double x : {-0.3, 0.0, 0.41, 1.0, 1.7}) CHECK(eval1(permuted, x) == eval1(net, x));
}

TEST_CASE("class membership checks all three budgets") {
  const Network net = hat_net();  // W = 5, depth 2, magnitude 1
  const GrowthPair roomy(GrowthFn::constant(3.0), GrowthFn::constant(2.0));
  CHECK(in_sigma(net, 5, roomy, 1));
  CHECK_FALSE(in_sigma(net, 4, roomy, 1));  // weight budget
  CHECK_FALSE(in_sigma(net, 5, roomy, 2));  // input dimension

  const GrowthPair tight_mag(GrowthFn::constant(3.0), GrowthFn::constant(0.5));
  CHECK_FALSE(in_sigma(net, 5, tight_mag, 1));

  // Depth budget 2 admits the two-layer network exactly.
  const GrowthPair tight_depth(GrowthFn::constant(2.0), GrowthFn::constant(2.0));
  CHECK(in_sigma(net, 5, tight_depth, 1));

  const GrowthPair infinite_mag(GrowthFn::constant(2.0), GrowthFn::infinite());
  CHECK(in_sigma(net, 5, infinite_mag, 1));
}

TEST_CASE("lipschitz bound closed form and saturation") {
  CHECK(lipschitz_bound(1, 2.0, 4, 32) == ExtReal(16384.0));
  CHECK(lipschitz_bound(3, 1.0, 2, 100) == ExtReal(300.0));
  CHECK(lipschitz_bound(1, 1e200, 4, 2).is_infinite());
}
