#pragma once

// Finite metric spaces, Vietoris-Rips filtrations and a brute-force
// Gromov-Hausdorff distance for small spaces.

#include "psmm/ratlin.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace psmm {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Symmetric dissimilarity matrix on n points. Distances are always available
/// as binary64; `exact` is present when every input entry was rational.
struct MetricSpace {
  std::size_t n = 0;
  std::vector<std::string> names;
  std::vector<double> dist;                   // row-major n*n
  std::optional<std::vector<Rational>> exact;  // row-major n*n
  bool triangle_inequality = true;             // audit result, not a requirement

  double d(std::size_t i, std::size_t j) const { return dist[i * n + j]; }
};

/// Validates and wraps a floating distance matrix.
MetricSpace make_metric(std::vector<std::vector<double>> rows, std::vector<std::string> names = {});
/// Validates and wraps an exact distance matrix.
MetricSpace make_metric_exact(const std::vector<std::vector<Rational>>& rows,
                              std::vector<std::string> names = {});
MetricSpace points_metric(const std::vector<std::vector<double>>& points);
MetricSpace scaled(const MetricSpace& m, const Rational& factor);

MetricSpace load_metric(const nlohmann::json& doc);
MetricSpace load_metric_file(const std::string& path);

using Simplex = std::vector<int>;

struct SimplexHash {
  std::size_t operator()(const Simplex& s) const noexcept;
};

/// Downward-closed family of vertex subsets. Simplices of each dimension are
/// stored in lexicographic order of their (strictly increasing) vertex lists.
class SimplicialComplex {
 public:
  SimplicialComplex() = default;
  explicit SimplicialComplex(int vertex_count);

  /// Closure of the given facets under taking faces.
  static SimplicialComplex from_facets(int vertex_count, const std::vector<Simplex>& facets);
  /// Builds from per-dimension lists; each list is sorted and indexed.
  static SimplicialComplex from_simplices(int vertex_count, std::vector<std::vector<Simplex>> by_dim);

  int vertex_count() const { return vertex_count_; }
  int dimension() const { return static_cast<int>(by_dim_.size()) - 1; }
  std::size_t count(int dim) const;
  std::size_t total_count() const;
  const std::vector<Simplex>& simplices(int dim) const;
  const Simplex& simplex(int dim, std::size_t idx) const { return by_dim_[dim][idx]; }
  std::optional<std::size_t> index_of(const Simplex& s) const;
  bool contains(const Simplex& s) const { return index_of(s).has_value(); }

  bool is_downward_closed() const;
  bool is_subcomplex_of(const SimplicialComplex& other) const;

 private:
  void rebuild_index();

  int vertex_count_ = 0;
  std::vector<std::vector<Simplex>> by_dim_;
  std::vector<std::unordered_map<Simplex, std::size_t, SimplexHash>> index_;
};

/// Stage k holds the simplices of diameter <= critical_values[k-1] (stage 0 is
/// the vertex set). As a persistent object, stage k is VR_t for t in
/// (d_k, d_{k+1}] with d_0 = 0 and d_{m+1} = infinity.
struct FilteredComplex {
  std::vector<double> critical_values;
  std::vector<Rational> exact_critical_values;  // empty for floating inputs
  std::vector<SimplicialComplex> stages;
  int max_dim = 0;

  std::size_t stage_count() const { return stages.size(); }
  double parameter_lower(std::size_t stage) const;  // d_k
  double parameter_upper(std::size_t stage) const;  // d_{k+1}
};

inline constexpr std::size_t kDefaultSimplexCap = 2'000'000;
inline constexpr std::size_t kDefaultGhCap = 30;

/// Sorted distinct positive pairwise distances, merged by exact comparison
/// for rational inputs and by bit equality for floating inputs.
std::vector<double> critical_values(const MetricSpace& m);

FilteredComplex build_filtration(const MetricSpace& m, int max_dim,
                                 std::size_t simplex_cap = kDefaultSimplexCap);

/// Half the minimal distortion over all correspondences, found by
/// branch-and-bound over partner assignments.
double gh_bruteforce(const MetricSpace& x, const MetricSpace& y, std::size_t cap = kDefaultGhCap);

}  // namespace psmm
