#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "mvge/graph.hpp"

namespace mvge {

// Parameters of a planted-partition graph with Gaussian class-conditional features.
struct SynthSpec {
  std::size_t num_nodes = 1490;
  int num_classes = 5;
  double target_homophily = 0.5;
  double avg_degree = 4.0;
  std::size_t feature_dim = 5;
  double class_separation = 1.5;  // class means are s * e_c, pairwise distance s*sqrt(2)
  double noise_sigma = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
  std::string to_json() const;
};

// Balanced labels, floor(d*N/2) unique undirected edges (intra-class with
// probability h, otherwise between distinct classes), x_v = mean(y_v) + noise.
// Deterministic in the spec.
Dataset generate_synthetic(const SynthSpec& spec);

}  // namespace mvge
