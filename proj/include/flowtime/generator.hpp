#pragma once

#include "flowtime/loading.hpp"
#include "flowtime/network.hpp"
#include "flowtime/scenario.hpp"
#include "flowtime/thinflow.hpp"

#include <cstdint>
#include <random>

namespace flowtime {

/// Deterministic random source: identical sequences for identical seeds on
/// every platform (no use of distribution classes).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t below(std::uint64_t n);
  /// Uniform rational k/2 with k in [0, 2*max_halves].
  Rational halves(long max_halves);
  template <typename T>
  const T& pick(const std::vector<T>& options) {
    return options[below(options.size())];
  }

 private:
  std::mt19937_64 gen_;
};

struct GeneratorOptions {
  std::size_t max_nodes = 6;
  std::size_t max_edges = 10;
  std::size_t max_inflow_pieces = 3;
  long max_horizon = 20;
};

/// Connected network with positive latencies; capacities on the half-integer
/// grid [1/2, 3], node v0 is the source and the last node the sink.
Network random_network(Rng& rng, const GeneratorOptions& options = {});

/// Instance whose edge sets satisfy the structural hypothesis by
/// construction; inflow value an integer in [0, 4].
NtfInstance random_instance(Rng& rng, const GeneratorOptions& options = {});

/// Network plus a nonnegative piecewise-constant inflow with a bounded
/// number of pieces.
Scenario random_scenario(Rng& rng, const GeneratorOptions& options = {});

/// Up to three random simple paths starting at the source (full paths to the
/// sink or prefixes ending elsewhere) with random piecewise-constant rates.
PathFlowSet random_path_flows(Rng& rng, const Network& net, const Rational& horizon);

}  // namespace flowtime
