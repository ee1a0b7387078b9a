#include "psmm/metric_vr.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace psmm {

namespace {

template <typename T>
void validate_square(const std::vector<std::vector<T>>& rows) {
  const std::size_t n = rows.size();
  if (n == 0) throw InputError("metric space must have at least one point");
  for (const auto& r : rows)
    if (r.size() != n) throw InputError("distance matrix must be square");
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i][i] != 0) throw InputError("distance matrix has a nonzero diagonal entry");
    for (std::size_t j = 0; j < n; ++j) {
      if (rows[i][j] < 0) throw InputError("distance matrix has a negative entry");
      if (rows[i][j] != rows[j][i]) throw InputError("distance matrix is asymmetric");
    }
  }
}

void check_names(const MetricSpace& m) {
  if (!m.names.empty() && m.names.size() != m.n)
    throw InputError("names list length does not match point count");
}

template <typename Get>
bool audit_triangle(std::size_t n, Get get) {
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (get(i, k) > get(i, j) + get(j, k)) return false;
  return true;
}

}  // namespace

MetricSpace make_metric(std::vector<std::vector<double>> rows, std::vector<std::string> names) {
  for (const auto& r : rows)
    for (double v : r)
      if (!std::isfinite(v)) throw InputError("distance matrix has a non-finite entry");
  validate_square(rows);
  MetricSpace m;
  m.n = rows.size();
  m.names = std::move(names);
  check_names(m);
  m.dist.reserve(m.n * m.n);
  for (const auto& r : rows) m.dist.insert(m.dist.end(), r.begin(), r.end());
  // small slack for rounding in coordinate-derived distances
  m.triangle_inequality = audit_triangle(m.n, [&](std::size_t i, std::size_t j) { return m.d(i, j); }) ||
                          audit_triangle(m.n, [&](std::size_t i, std::size_t j) {
                            return m.d(i, j) * (1 - 1e-12);
                          });
  return m;
}

MetricSpace make_metric_exact(const std::vector<std::vector<Rational>>& rows,
                              std::vector<std::string> names) {
  validate_square(rows);
  MetricSpace m;
  m.n = rows.size();
  m.names = std::move(names);
  check_names(m);
  std::vector<Rational> exact;
  exact.reserve(m.n * m.n);
  for (const auto& r : rows)
    for (const auto& q : r) {
      exact.push_back(q);
      m.dist.push_back(q.get_d());
    }
  m.triangle_inequality =
      audit_triangle(m.n, [&](std::size_t i, std::size_t j) { return exact[i * m.n + j]; });
  m.exact = std::move(exact);
  return m;
}

MetricSpace points_metric(const std::vector<std::vector<double>>& points) {
  if (points.empty()) throw InputError("point cloud is empty");
  const std::size_t dim = points.front().size();
  for (const auto& p : points)
    if (p.size() != dim) throw InputError("points have inconsistent dimensions");
  const std::size_t n = points.size();
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = 0;
      for (std::size_t c = 0; c < dim; ++c) {
        const double t = points[i][c] - points[j][c];
        s += t * t;
      }
      rows[i][j] = rows[j][i] = std::sqrt(s);
    }
  return make_metric(std::move(rows));
}

MetricSpace scaled(const MetricSpace& m, const Rational& factor) {
  if (factor <= 0) throw InputError("scale factor must be positive");
  if (m.exact) {
    std::vector<std::vector<Rational>> rows(m.n, std::vector<Rational>(m.n));
    for (std::size_t i = 0; i < m.n; ++i)
      for (std::size_t j = 0; j < m.n; ++j) rows[i][j] = (*m.exact)[i * m.n + j] * factor;
    return make_metric_exact(rows, m.names);
  }
  std::vector<std::vector<double>> rows(m.n, std::vector<double>(m.n));
  const double f = factor.get_d();
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = 0; j < m.n; ++j) rows[i][j] = m.d(i, j) * f;
  return make_metric(std::move(rows), m.names);
}

MetricSpace load_metric(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InputError("metric input must be a JSON object");
  std::vector<std::string> names;
  if (doc.contains("names")) {
    if (!doc["names"].is_array()) throw InputError("\"names\" must be an array");
    for (const auto& s : doc["names"]) {
      if (!s.is_string()) throw InputError("names must be strings");
      names.push_back(s.get<std::string>());
    }
  }
  if (doc.contains("points")) {
    const auto& pts = doc["points"];
    if (!pts.is_array()) throw InputError("\"points\" must be an array");
    std::vector<std::vector<double>> points;
    for (const auto& p : pts) {
      if (!p.is_array()) throw InputError("each point must be an array of numbers");
      std::vector<double> coords;
      for (const auto& c : p) {
        if (!c.is_number()) throw InputError("point coordinates must be numbers");
        coords.push_back(c.get<double>());
      }
      points.push_back(std::move(coords));
    }
    MetricSpace m = points_metric(points);
    m.names = std::move(names);
    check_names(m);
    return m;
  }
  if (!doc.contains("distance_matrix"))
    throw InputError("metric input needs \"points\" or \"distance_matrix\"");
  const auto& dm = doc["distance_matrix"];
  if (!dm.is_array()) throw InputError("\"distance_matrix\" must be an array of rows");
  bool exact = true;
  for (const auto& row : dm) {
    if (!row.is_array()) throw InputError("distance matrix rows must be arrays");
    for (const auto& v : row) {
      if (v.is_number_float()) exact = false;
      else if (!v.is_number() && !v.is_string())
        throw InputError("distance entries must be numbers or \"p/q\" strings");
    }
  }
  auto as_rational = [](const nlohmann::json& v) -> Rational {
    if (v.is_string()) {
      try {
        return parse_rational(v.get<std::string>());
      } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
      }
    }
    if (v.is_number_unsigned()) return Rational(mpz_class(std::to_string(v.get<std::uint64_t>())));
    return Rational(mpz_class(std::to_string(v.get<std::int64_t>())));
  };
  if (exact) {
    std::vector<std::vector<Rational>> rows;
    for (const auto& row : dm) {
      std::vector<Rational> r;
      for (const auto& v : row) r.push_back(as_rational(v));
      rows.push_back(std::move(r));
    }
    return make_metric_exact(rows, std::move(names));
  }
  std::vector<std::vector<double>> rows;
  for (const auto& row : dm) {
    std::vector<double> r;
    for (const auto& v : row) r.push_back(v.is_string() ? as_rational(v).get_d() : v.get<double>());
    rows.push_back(std::move(r));
  }
  return make_metric(std::move(rows), std::move(names));
}

MetricSpace load_metric_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed JSON in ") + path + ": " + e.what());
  }
  return load_metric(doc);
}

// ---------------------------------------------------------------------------

std::size_t SimplexHash::operator()(const Simplex& s) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (int v : s) {
    h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

SimplicialComplex::SimplicialComplex(int vertex_count) : vertex_count_(vertex_count) {
  std::vector<std::vector<Simplex>> by_dim(1);
  for (int v = 0; v < vertex_count; ++v) by_dim[0].push_back({v});
  by_dim_ = std::move(by_dim);
  rebuild_index();
}

SimplicialComplex SimplicialComplex::from_facets(int vertex_count, const std::vector<Simplex>& facets) {
  std::vector<std::vector<Simplex>> by_dim(1);
  for (int v = 0; v < vertex_count; ++v) by_dim[0].push_back({v});
  for (Simplex f : facets) {
    std::sort(f.begin(), f.end());
    if (std::adjacent_find(f.begin(), f.end()) != f.end())
      throw InputError("facet has a repeated vertex");
    for (int v : f)
      if (v < 0 || v >= vertex_count) throw InputError("facet vertex out of range");
    const std::size_t k = f.size();
    if (k == 0) continue;
    if (by_dim.size() < k) by_dim.resize(k);
    // every nonempty subset
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
      Simplex s;
      for (std::size_t i = 0; i < k; ++i)
        if (mask & (std::uint64_t{1} << i)) s.push_back(f[i]);
      by_dim[s.size() - 1].push_back(std::move(s));
    }
  }
  return from_simplices(vertex_count, std::move(by_dim));
}

SimplicialComplex SimplicialComplex::from_simplices(int vertex_count,
                                                    std::vector<std::vector<Simplex>> by_dim) {
  SimplicialComplex k;
  k.vertex_count_ = vertex_count;
  for (auto& list : by_dim) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  while (!by_dim.empty() && by_dim.back().empty()) by_dim.pop_back();
  k.by_dim_ = std::move(by_dim);
  k.rebuild_index();
  return k;
}

void SimplicialComplex::rebuild_index() {
  index_.assign(by_dim_.size(), {});
  for (std::size_t d = 0; d < by_dim_.size(); ++d) {
    index_[d].reserve(by_dim_[d].size());
    for (std::size_t i = 0; i < by_dim_[d].size(); ++i) index_[d].emplace(by_dim_[d][i], i);
  }
}

std::size_t SimplicialComplex::count(int dim) const {
  return dim >= 0 && dim < static_cast<int>(by_dim_.size()) ? by_dim_[dim].size() : 0;
}

std::size_t SimplicialComplex::total_count() const {
  std::size_t t = 0;
  for (const auto& l : by_dim_) t += l.size();
  return t;
}

const std::vector<Simplex>& SimplicialComplex::simplices(int dim) const {
  static const std::vector<Simplex> kEmpty;
  return dim >= 0 && dim < static_cast<int>(by_dim_.size()) ? by_dim_[dim] : kEmpty;
}

std::optional<std::size_t> SimplicialComplex::index_of(const Simplex& s) const {
  const int d = static_cast<int>(s.size()) - 1;
  if (d < 0 || d >= static_cast<int>(index_.size())) return std::nullopt;
  auto it = index_[d].find(s);
  if (it == index_[d].end()) return std::nullopt;
  return it->second;
}

bool SimplicialComplex::is_downward_closed() const {
  for (int d = 1; d <= dimension(); ++d)
    for (const auto& s : by_dim_[d])
      for (std::size_t drop = 0; drop < s.size(); ++drop) {
        Simplex f;
        for (std::size_t i = 0; i < s.size(); ++i)
          if (i != drop) f.push_back(s[i]);
        if (!contains(f)) return false;
      }
  return true;
}

bool SimplicialComplex::is_subcomplex_of(const SimplicialComplex& other) const {
  for (const auto& list : by_dim_)
    for (const auto& s : list)
      if (!other.contains(s)) return false;
  return true;
}

double FilteredComplex::parameter_lower(std::size_t stage) const {
  return stage == 0 ? 0.0 : critical_values[stage - 1];
}

double FilteredComplex::parameter_upper(std::size_t stage) const {
  return stage < critical_values.size() ? critical_values[stage]
                                        : std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------

namespace {

/// Stage index (1-based; 0 for zero distance) of every pair, row-major.
std::vector<std::size_t> edge_stages(const MetricSpace& m, std::vector<double>& values,
                                     std::vector<Rational>* exact_values = nullptr) {
  std::vector<std::size_t> stage(m.n * m.n, 0);
  values.clear();
  if (m.exact) {
    std::map<Rational, std::size_t> order;
    for (const auto& q : *m.exact)
      if (q > 0) order.emplace(q, 0);
    std::size_t k = 0;
    for (auto& [q, idx] : order) {
      idx = ++k;
      values.push_back(q.get_d());
      if (exact_values) exact_values->push_back(q);
    }
    for (std::size_t i = 0; i < m.n * m.n; ++i)
      if ((*m.exact)[i] > 0) stage[i] = order.at((*m.exact)[i]);
  } else {
    for (double v : m.dist)
      if (v > 0) values.push_back(v);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::size_t i = 0; i < m.n * m.n; ++i)
      if (m.dist[i] > 0)
        stage[i] = static_cast<std::size_t>(
                       std::lower_bound(values.begin(), values.end(), m.dist[i]) - values.begin()) +
                   1;
  }
  return stage;
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  double r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

}  // namespace

std::vector<double> critical_values(const MetricSpace& m) {
  std::vector<double> values;
  edge_stages(m, values);
  return values;
}

FilteredComplex build_filtration(const MetricSpace& m, int max_dim, std::size_t simplex_cap) {
  if (max_dim < 0) throw InputError("max_dim must be nonnegative");
  FilteredComplex fc;
  fc.max_dim = max_dim;
  const std::vector<std::size_t> edge = edge_stages(m, fc.critical_values, &fc.exact_critical_values);
  const std::size_t m_stages = fc.critical_values.size() + 1;

  // every pair is an edge in the last stage, so the last stage is the full
  // max_dim-skeleton of the simplex on n vertices
  double total = 0;
  for (int d = 0; d <= max_dim; ++d) total += binomial(m.n, static_cast<std::size_t>(d) + 1);
  if (total > static_cast<double>(simplex_cap))
    throw CapExceeded("filtration would contain " + std::to_string(static_cast<long long>(total)) +
                      " simplices, above the cap of " + std::to_string(simplex_cap));

  // birth stage of each simplex by clique expansion in lexicographic order
  std::vector<std::vector<std::pair<Simplex, std::size_t>>> born(static_cast<std::size_t>(max_dim) + 1);
  Simplex current;
  std::function<void(int, std::size_t)> expand = [&](int next, std::size_t birth) {
    born[current.size() - 1].emplace_back(current, birth);
    if (static_cast<int>(current.size()) > max_dim) return;
    for (int v = next; v < static_cast<int>(m.n); ++v) {
      std::size_t b = birth;
      for (int u : current) b = std::max(b, edge[static_cast<std::size_t>(u) * m.n + v]);
      current.push_back(v);
      expand(v + 1, b);
      current.pop_back();
    }
  };
  for (int v = 0; v < static_cast<int>(m.n); ++v) {
    current = {v};
    expand(v + 1, 0);
  }

  fc.stages.reserve(m_stages);
  for (std::size_t k = 0; k < m_stages; ++k) {
    std::vector<std::vector<Simplex>> by_dim(born.size());
    for (std::size_t d = 0; d < born.size(); ++d)
      for (const auto& [s, b] : born[d])
        if (b <= k) by_dim[d].push_back(s);
    fc.stages.push_back(SimplicialComplex::from_simplices(static_cast<int>(m.n), std::move(by_dim)));
  }
  return fc;
}

// ---------------------------------------------------------------------------

namespace {

template <typename Scalar>
class CorrespondenceSearch {
 public:
  CorrespondenceSearch(std::size_t nx, std::size_t ny, std::vector<Scalar> dx, std::vector<Scalar> dy)
      : nx_(nx), ny_(ny), dx_(std::move(dx)), dy_(std::move(dy)) {}

  Scalar run() {
    // the full product correspondence gives the initial bound
    best_ = Scalar(0);
    for (std::size_t a = 0; a < nx_ * nx_; ++a)
      for (std::size_t b = 0; b < ny_ * ny_; ++b) best_ = std::max(best_, absdiff(dx_[a], dy_[b]));
    covered_y_.assign(ny_, 0);
    assign_x(0, Scalar(0));
    return best_;
  }

 private:
  static Scalar absdiff(const Scalar& a, const Scalar& b) { return a > b ? Scalar(a - b) : Scalar(b - a); }

  Scalar added_distortion(std::size_t x, std::size_t y) const {
    Scalar worst(0);
    for (const auto& [px, py] : pairs_) worst = std::max(worst, absdiff(dx_[x * nx_ + px], dy_[y * ny_ + py]));
    return worst;
  }

  void assign_x(std::size_t x, Scalar cur) {
    if (x == nx_) {
      cover_y(0, cur);
      return;
    }
    for (std::size_t y = 0; y < ny_; ++y) {
      const Scalar next = std::max(cur, added_distortion(x, y));
      if (!(next < best_)) continue;
      pairs_.emplace_back(x, y);
      ++covered_y_[y];
      assign_x(x + 1, next);
      --covered_y_[y];
      pairs_.pop_back();
    }
  }

  void cover_y(std::size_t y, Scalar cur) {
    while (y < ny_ && covered_y_[y] > 0) ++y;
    if (y == ny_) {
      if (cur < best_) best_ = cur;
      return;
    }
    for (std::size_t x = 0; x < nx_; ++x) {
      const Scalar next = std::max(cur, added_distortion(x, y));
      if (!(next < best_)) continue;
      pairs_.emplace_back(x, y);
      cover_y(y + 1, next);
      pairs_.pop_back();
    }
  }

  std::size_t nx_, ny_;
  std::vector<Scalar> dx_, dy_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
  std::vector<int> covered_y_;
  Scalar best_{0};
};

}  // namespace

double gh_bruteforce(const MetricSpace& x, const MetricSpace& y, std::size_t cap) {
  if (x.n * y.n > cap)
    throw CapExceeded("Gromov-Hausdorff brute force needs |X|*|Y| <= " + std::to_string(cap) + ", got " +
                      std::to_string(x.n * y.n));
  if (x.exact && y.exact) {
    CorrespondenceSearch<Rational> search(x.n, y.n, *x.exact, *y.exact);
    const Rational best = search.run();
    return Rational(best / 2).get_d();
  }
  CorrespondenceSearch<double> search(x.n, y.n, x.dist, y.dist);
  return search.run() / 2;
}

}  // namespace psmm
