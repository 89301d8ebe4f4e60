#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "hesscov/types.hpp"

namespace hesscov {

/// Time grid for collocation plus the map from measurement instants to mesh
/// node indices. Nodes are strictly increasing; every measurement instant
/// must coincide with a node.
struct CollocationMesh {
  Vector node_times;
  std::vector<Index> measurement_nodes;

  Index node_count() const { return node_times.size(); }
  Index interval_count() const { return node_times.size() - 1; }
  Index measurement_count() const { return static_cast<Index>(measurement_nodes.size()); }
  double step(Index interval) const {
    return node_times(interval + 1) - node_times(interval);
  }
};

inline void validate(const CollocationMesh& mesh) {
  if (mesh.node_count() < 2) throw SpecError("mesh: needs at least two nodes");
  for (Index k = 0; k + 1 < mesh.node_count(); ++k) {
    if (!(mesh.node_times(k + 1) > mesh.node_times(k))) {
      throw SpecError("mesh: node times not strictly increasing at index " + std::to_string(k));
    }
  }
  for (Index node : mesh.measurement_nodes) {
    if (node < 0 || node >= mesh.node_count()) {
      throw SpecError("mesh: measurement node index out of range");
    }
  }
}

/// Uniform mesh over [t0, t1] without measurement instants.
inline CollocationMesh uniform_mesh(double t0, double t1, double spacing) {
  if (!(t1 > t0) || !(spacing > 0.0)) throw SpecError("uniform_mesh: bad interval or spacing");
  const auto intervals = static_cast<Index>(std::llround((t1 - t0) / spacing));
  if (intervals < 1 || std::abs(t0 + intervals * spacing - t1) > 1e-9 * std::max(1.0, t1 - t0)) {
    throw SpecError("uniform_mesh: spacing does not divide the horizon");
  }
  CollocationMesh mesh;
  mesh.node_times.resize(intervals + 1);
  for (Index k = 0; k <= intervals; ++k) mesh.node_times(k) = t0 + k * spacing;
  mesh.node_times(intervals) = t1;
  return mesh;
}

/// Mesh whose nodes subdivide a uniform sampling grid, with every sample
/// instant on a node. `subdivide` = 1 puts the mesh on the sampling grid.
inline CollocationMesh mesh_for_samples(double t0, Index sample_count, double sample_spacing,
                                        Index subdivide) {
  if (sample_count < 2) throw SpecError("mesh_for_samples: needs at least two samples");
  if (subdivide < 1) throw SpecError("mesh_for_samples: subdivide must be >= 1");
  if (!(sample_spacing > 0.0)) throw SpecError("mesh_for_samples: bad sample spacing");
  const Index intervals = (sample_count - 1) * subdivide;
  const double h = sample_spacing / static_cast<double>(subdivide);
  CollocationMesh mesh;
  mesh.node_times.resize(intervals + 1);
  for (Index k = 0; k <= intervals; ++k) mesh.node_times(k) = t0 + k * h;
  mesh.measurement_nodes.resize(static_cast<std::size_t>(sample_count));
  for (Index s = 0; s < sample_count; ++s) {
    mesh.measurement_nodes[static_cast<std::size_t>(s)] = s * subdivide;
  }
  return mesh;
}

/// Mesh on a sampling grid refined by splitting the sample spacing by an
/// integer mesh spacing ratio; throws when the ratio is not an integer.
inline CollocationMesh mesh_for_samples_spacing(double t0, Index sample_count,
                                                double sample_spacing, double mesh_spacing) {
  const double ratio = sample_spacing / mesh_spacing;
  const auto subdivide = static_cast<Index>(std::llround(ratio));
  if (subdivide < 1 || std::abs(ratio - static_cast<double>(subdivide)) > 1e-9) {
    throw SpecError("mesh spacing must divide the sample spacing (measurement instants "
                    "must fall on mesh nodes)");
  }
  return mesh_for_samples(t0, sample_count, sample_spacing, subdivide);
}

/// Time grid with per-node state values; simulators may attach per-interval
/// noise values (one column per noise channel).
struct MeshTrajectory {
  Vector times;
  Matrix states;  ///< node count x state dimension
  Matrix noise;   ///< interval count x channels, empty when noise-free

  Index node_count() const { return times.size(); }
  Index state_dim() const { return states.cols(); }
};

}  // namespace hesscov
