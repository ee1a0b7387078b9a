#pragma once

// Persistence modules of graded vector spaces over a finite grid, their
// barcodes, bottleneck distance and a brute-force interleaving test.

#include "psmm/ratlin.hpp"

#include <limits>
#include <map>
#include <vector>

namespace psmm {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Direction { covariant, contravariant };

/// Stage k (0..m) is constant on (d_k, d_{k+1}] with d_0 = 0, d_{m+1} = inf.
/// Covariant maps go from stage s to s+1, contravariant ones from s+1 to s.
struct PersistentGVec {
  std::vector<double> grid;                    // d_1 < ... < d_m
  int max_degree = 0;
  std::vector<std::vector<std::size_t>> dims;  // [stage][degree]
  std::vector<std::vector<RatMatrix>> maps;    // [s][degree], between s and s+1
  Direction direction = Direction::covariant;

  std::size_t stage_count() const { return grid.size() + 1; }
  std::size_t dim(std::size_t stage, int degree) const;
  double lower(std::size_t stage) const { return stage == 0 ? 0.0 : grid[stage - 1]; }
  double upper(std::size_t stage) const { return stage < grid.size() ? grid[stage] : kInf; }

  /// Throws DimensionError unless every map matches the adjacent dims.
  void validate() const;
};

struct Bar {
  double birth = 0;
  double death = kInf;
  std::size_t mult = 1;
};

/// Per degree, bars (birth, death] sorted by (birth, death).
struct Barcode {
  std::map<int, std::vector<Bar>> bars;

  std::size_t total(int degree) const;
  friend bool operator==(const Barcode& a, const Barcode& b);
};

/// Module that is one-dimensional in `degree` on the stages inside (b, e]
/// and zero elsewhere; b and e must be 0, a grid value or inf.
PersistentGVec interval_module(double b, double e, const std::vector<double>& grid, int degree,
                               int max_degree = -1, Direction dir = Direction::covariant);
PersistentGVec direct_sum(const PersistentGVec& p, const PersistentGVec& q);

Barcode barcode(const PersistentGVec& p);

struct Bottleneck {
  std::map<int, double> per_degree;
  double sup = 0;
};

double bar_distance(const Bar& a, const Bar& b);
double deletion_cost(const Bar& a);
/// Bottleneck distance of one degree's bars.
double bottleneck_degree(const std::vector<Bar>& a, const std::vector<Bar>& b);
/// Per-degree bottleneck over the union of degrees present in either barcode.
Bottleneck bottleneck(const Barcode& a, const Barcode& b);

/// Whether covariant modules on the same grid admit a delta-interleaving,
/// decided by exhausting 0/1 combinations of a basis of natural
/// transformations and solving linearly for the reverse map.
bool interleaving_check(const PersistentGVec& p, const PersistentGVec& q, double delta);

}  // namespace psmm
