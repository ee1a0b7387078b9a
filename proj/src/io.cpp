#include "psmm/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace psmm {

namespace {

Rational rational_from_json(const json& j) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  throw InputError("expected a rational as an integer or a \"p/q\" string");
}

const json& field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
  return obj[key];
}

int int_field(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_number_integer()) throw InputError(std::string("field \"") + key + "\" must be an integer");
  return v.get<int>();
}

std::string string_field(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_string()) throw InputError(std::string("field \"") + key + "\" must be a string");
  return v.get<std::string>();
}

std::vector<std::string> word_from_json(const json& j) {
  if (!j.is_array()) throw InputError("a monomial must be an array of names");
  std::vector<std::string> out;
  for (const auto& s : j) {
    if (!s.is_string()) throw InputError("monomial factors must be names");
    out.push_back(s.get<std::string>());
  }
  return out;
}

std::vector<WordTerm> terms_from_json(const json& j) {
  if (!j.is_array()) throw InputError("a polynomial must be an array of terms");
  std::vector<WordTerm> out;
  for (const auto& t : j) out.push_back({rational_from_json(field(t, "coeff")), word_from_json(field(t, "monomial"))});
  return out;
}

std::vector<Generator> generators_from_json(const json& j) {
  if (!j.is_array()) throw InputError("\"generators\" must be an array");
  std::vector<Generator> gens;
  for (const auto& g : j) gens.push_back({string_field(g, "name"), int_field(g, "degree")});
  return gens;
}

json generators_json(const SullivanAlgebra& alg) {
  json gens = json::array();
  json diff = json::object();
  for (std::size_t i = 0; i < alg.generator_count(); ++i) {
    const auto& g = alg.generators()[i];
    gens.push_back({{"name", g.name}, {"degree", g.degree}});
    if (!is_zero(alg.differential(i))) diff[g.name] = polynomial_json(alg, alg.differential(i));
  }
  return {{"generators", gens}, {"differential", diff}};
}

SullivanAlgebra algebra_from_json(const json& doc, int truncation) {
  std::map<std::string, std::vector<WordTerm>> diff;
  if (doc.contains("differential")) {
    const json& d = doc["differential"];
    if (!d.is_object()) throw InputError("\"differential\" must be an object keyed by generator");
    for (const auto& [name, terms] : d.items()) diff[name] = terms_from_json(terms);
  }
  return SullivanAlgebra::make(generators_from_json(field(doc, "generators")), diff, truncation);
}

json vector_json(const RatVector& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(format_rational(x));
  return out;
}

json dims_json(const std::vector<std::size_t>& d) { return json(d); }

std::vector<std::size_t> dims_from_json(const json& j) {
  if (!j.is_array()) throw InputError("dims must be an array");
  std::vector<std::size_t> out;
  for (const auto& x : j) {
    if (!x.is_number_unsigned()) throw InputError("dims must be nonnegative integers");
    out.push_back(x.get<std::size_t>());
  }
  return out;
}

bool bool_field(const json& obj, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_boolean()) throw InputError(std::string("field \"") + key + "\" must be a boolean");
  return obj[key].get<bool>();
}

// ---------------------------------------------------------------------------
// Rings

CohomologyRing ring_from_json(const json& doc) {
  const json& classes = field(doc, "classes");
  if (!classes.is_array()) throw InputError("\"classes\" must be an array");
  int top = doc.contains("max_degree") ? int_field(doc, "max_degree") : 0;
  std::vector<std::pair<std::string, int>> cls;
  for (const auto& c : classes) {
    const int deg = int_field(c, "degree");
    if (deg < 1) throw InputError("ring classes must have positive degree; the unit is implicit");
    cls.emplace_back(string_field(c, "name"), deg);
    top = std::max(top, deg);
  }
  std::vector<std::size_t> dims(static_cast<std::size_t>(top) + 1, 0);
  dims[0] = 1;
  std::map<std::string, std::pair<int, std::size_t>> where;
  CohomologyRing r;
  std::vector<std::vector<std::string>> labels(dims.size());
  labels[0] = {"1"};
  for (const auto& [name, deg] : cls) {
    if (name == "1" || where.count(name)) throw InputError("duplicate or reserved class name " + name);
    where[name] = {deg, dims[deg]++};
    labels[deg].push_back(name);
  }
  r = CohomologyRing::empty(top, dims);
  r.labels = labels;
  r.unit = RatVector{Rational(1)};
  for (int p = 0; p <= top; ++p)
    for (int q = 0; p + q <= top; ++q)
      if (p == 0 || q == 0)
        for (std::size_t i = 0; i < dims[p + q]; ++i) r.table[p][q](i, i) = 1;

  auto lookup = [&](const std::string& name) {
    auto it = where.find(name);
    if (it == where.end()) throw InputError("unknown class " + name);
    return it->second;
  };
  std::set<std::tuple<int, std::size_t, int, std::size_t>> given;
  auto set_product = [&](int p, std::size_t i, int q, std::size_t j, const RatVector& v) {
    RatMatrix& t = r.table[p][q];
    for (std::size_t row = 0; row < v.size(); ++row) t(row, i * dims[q] + j) = v[row];
  };
  if (doc.contains("products")) {
    const json& products = doc["products"];
    if (!products.is_array()) throw InputError("\"products\" must be an array");
    for (const auto& pr : products) {
      const auto [p, i] = lookup(string_field(pr, "left"));
      const auto [q, j] = lookup(string_field(pr, "right"));
      if (p + q > top) continue;
      RatVector v(dims[p + q]);
      const json& result = field(pr, "result");
      if (!result.is_array()) throw InputError("a product result must be an array of terms");
      for (const auto& t : result) {
        const auto [d, k] = lookup(string_field(t, "class"));
        if (d != p + q) throw InputError("product result has the wrong degree");
        v[k] += rational_from_json(field(t, "coeff"));
      }
      set_product(p, i, q, j, v);
      given.emplace(p, i, q, j);
    }
    for (const auto& [p, i, q, j] : std::set(given)) {
      if (given.count({q, j, p, i})) continue;
      RatVector v = r.product(p, i, q, j);
      if ((p * q) % 2 != 0)
        for (auto& x : v) x = -x;
      set_product(q, j, p, i, v);
    }
  }
  if (!is_graded_commutative(r)) throw InputError("ring products are not graded commutative");
  if (!is_associative(r)) throw InputError("ring products are not associative");
  return r;
}

}  // namespace

CohomologyRing ring_with_top(const CohomologyRing& r, int top) {
  std::vector<std::size_t> dims(static_cast<std::size_t>(top) + 1, 0);
  for (int k = 0; k <= top; ++k) dims[k] = r.dim(k);
  CohomologyRing out = CohomologyRing::empty(top, dims);
  for (int k = 0; k <= std::min(top, r.max_deg); ++k) out.labels[k] = r.labels[k];
  out.unit = r.unit;
  for (int p = 0; p <= top; ++p)
    for (int q = 0; p + q <= top; ++q)
      if (p + q <= r.max_deg) out.table[p][q] = r.table[p][q];
  return out;
}

json number_json(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    return rational_from_json(j).get_d();
  }
  throw InputError("expected a number, \"inf\" or a \"p/q\" string");
}

json matrix_json(const RatMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(format_rational(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

RatMatrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols) {
  if (!j.is_array() || j.size() != rows) throw InputError("matrix has the wrong number of rows");
  RatMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw InputError("matrix has the wrong number of columns");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = rational_from_json(j[i][c]);
  }
  return m;
}

json polynomial_json(const SullivanAlgebra& alg, const Polynomial& p) {
  json terms = json::array();
  for (const auto& [mono, c] : p) {
    if (sgn(c) == 0) continue;
    json word = json::array();
    for (std::size_t g = 0; g < mono.size(); ++g)
      for (int e = 0; e < mono[g]; ++e) word.push_back(alg.generators()[g].name);
    terms.push_back({{"coeff", format_rational(c)}, {"monomial", word}});
  }
  return terms;
}

Polynomial polynomial_from_json(const SullivanAlgebra& alg, const json& j) {
  Polynomial out;
  for (const auto& term : terms_from_json(j)) {
    Polynomial prod{{Monomial{}, term.coeff}};
    for (const auto& name : term.word) {
      const auto g = alg.generator_index(name);
      if (!g) throw InputError("unknown generator " + name);
      prod = alg.multiply(prod, alg.generator_poly(*g));
    }
    add_to(out, prod);
  }
  return out;
}

std::shared_ptr<const FiniteCdga> AlgebraFile::finite(int top) const {
  if (kind == Kind::sullivan) return std::make_shared<const FiniteCdga>(SullivanTruncation(sullivan, top).cdga());
  return std::make_shared<const FiniteCdga>(formal_cdga(ring_with_top(ring, top)));
}

AlgebraFile load_algebra(const json& doc) {
  if (!doc.is_object()) throw InputError("an algebra file must be a JSON object");
  AlgebraFile a;
  if (doc.contains("generators")) {
    a.kind = AlgebraFile::Kind::sullivan;
    const int trunc = doc.contains("truncation") ? int_field(doc, "truncation") : 0;
    a.sullivan = algebra_from_json(doc, trunc);
  } else if (doc.contains("classes")) {
    a.kind = AlgebraFile::Kind::ring;
    a.ring = ring_from_json(doc);
  } else {
    throw InputError("algebra file needs \"generators\" or \"classes\"");
  }
  return a;
}

// ---------------------------------------------------------------------------
// Persistent CDGA files

namespace {

struct Stage {
  AlgebraFile file;
  json doc;
  std::shared_ptr<const FiniteCdga> cdga;
  std::optional<SullivanTruncation> trunc;
  std::map<std::string, std::pair<int, std::size_t>> ring_index;
};

// Element of the stage algebra named by a generator or class.
std::pair<int, RatVector> named_element(const Stage& st, const std::string& name) {
  const FiniteCdga& a = *st.cdga;
  if (st.trunc) {
    const auto g = st.file.sullivan.generator_index(name);
    if (!g) throw InputError("unknown generator " + name);
    const int deg = st.file.sullivan.generators()[*g].degree;
    if (deg > a.top) return {deg, {}};
    return {deg, st.trunc->to_vector(deg, st.file.sullivan.generator_poly(*g))};
  }
  const auto it = st.ring_index.find(name);
  if (it == st.ring_index.end()) throw InputError("unknown class " + name);
  const auto [deg, idx] = it->second;
  RatVector v(a.dim(deg));
  if (deg <= a.top) v[idx] = 1;
  return {deg, v};
}

RatVector evaluate_terms(const Stage& st, const std::vector<WordTerm>& terms, int degree) {
  const FiniteCdga& a = *st.cdga;
  RatVector out(a.dim(degree));
  for (const auto& t : terms) {
    int deg = 0;
    RatVector v = a.unit;
    for (const auto& name : t.word) {
      auto [d, x] = named_element(st, name);
      if (deg + d > a.top) {
        v.clear();
        deg += d;
        break;
      }
      v = a.multiply(deg, v, d, x);
      deg += d;
    }
    if (deg != degree) throw InputError("map image has the wrong degree");
    if (v.empty()) continue;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += t.coeff * v[i];
  }
  return out;
}

std::vector<RatMatrix> map_matrices(const Stage& src, const Stage& tgt, const json& spec) {
  const FiniteCdga& S = *src.cdga;
  const FiniteCdga& T = *tgt.cdga;
  const int top = std::min(S.top, T.top);
  std::vector<RatMatrix> f;
  if (spec.is_string()) {
    if (spec.get<std::string>() != "identity") throw InputError("unknown map shorthand " + spec.dump());
    if (src.doc != tgt.doc) throw InputError("\"identity\" needs identical consecutive stages");
    for (int k = 0; k <= top; ++k) f.push_back(RatMatrix::identity(S.dim(k)));
    return f;
  }
  const json& images = field(spec, "images");
  if (!images.is_object()) throw InputError("\"images\" must be an object keyed by name");
  std::map<std::string, std::vector<WordTerm>> img;
  for (const auto& [name, terms] : images.items()) img[name] = terms_from_json(terms);
  for (int k = 0; k <= top; ++k) f.emplace_back(T.dim(k), S.dim(k));
  f[0].set_column(0, T.unit);

  if (src.trunc) {
    const SullivanAlgebra& alg = src.file.sullivan;
    std::vector<std::pair<int, RatVector>> gen_img;
    for (const auto& g : alg.generators()) {
      const auto it = img.find(g.name);
      if (it == img.end()) throw InputError("map has no image for generator " + g.name);
      gen_img.emplace_back(g.degree, g.degree <= T.top ? evaluate_terms(tgt, it->second, g.degree) : RatVector{});
    }
    for (int k = 1; k <= top; ++k)
      for (std::size_t c = 0; c < S.dim(k); ++c) {
        const Monomial& m = src.trunc->basis(k)[c];
        int deg = 0;
        RatVector v = T.unit;
        for (std::size_t g = 0; g < m.size(); ++g)
          for (int e = 0; e < m[g]; ++e) {
            v = T.multiply(deg, v, gen_img[g].first, gen_img[g].second);
            deg += gen_img[g].first;
          }
        f[k].set_column(c, v);
      }
  } else {
    for (const auto& [name, where] : src.ring_index) {
      const auto [deg, idx] = where;
      if (deg > top) continue;
      const auto it = img.find(name);
      if (it == img.end()) throw InputError("map has no image for class " + name);
      f[deg].set_column(idx, evaluate_terms(tgt, it->second, deg));
    }
    for (int p = 0; p <= top; ++p)
      for (int q = 0; p + q <= top; ++q)
        for (std::size_t i = 0; i < S.dim(p); ++i)
          for (std::size_t j = 0; j < S.dim(q); ++j)
            if (f[p + q].apply(S.basis_product(p, i, q, j)) != T.multiply(p, f[p].column(i), q, f[q].column(j)))
              throw InputError("ring map is not multiplicative");
  }
  for (int k = 0; k < top; ++k)
    if (f[k + 1] * S.d[k] != T.d[k] * f[k]) throw InputError("map does not commute with the differential");
  return f;
}

}  // namespace

PersistentCdga load_persistent_cdga(const json& doc, const std::string& base_dir, int max_degree) {
  if (!doc.is_object()) throw InputError("persistent CDGA input must be a JSON object");
  PersistentCdga out;
  const json& grid = field(doc, "grid");
  if (!grid.is_array()) throw InputError("\"grid\" must be an array");
  for (const auto& g : grid) out.grid.push_back(number_from_json(g));
  for (std::size_t i = 0; i < out.grid.size(); ++i)
    if (!(out.grid[i] > 0) || std::isinf(out.grid[i]) || (i > 0 && !(out.grid[i - 1] < out.grid[i])))
      throw InputError("grid must be positive, finite and strictly increasing");

  const json& stage_docs = field(doc, "stages");
  if (!stage_docs.is_array()) throw InputError("\"stages\" must be an array");
  std::vector<Stage> stages;
  for (const auto& sd : stage_docs) {
    Stage st;
    if (sd.is_string()) {
      std::filesystem::path p(sd.get<std::string>());
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      st.doc = read_json_file(p.string());
    } else {
      st.doc = sd;
    }
    st.file = load_algebra(st.doc);
    if (st.file.kind == AlgebraFile::Kind::sullivan) {
      st.trunc.emplace(st.file.sullivan, max_degree + 2);
      st.cdga = std::make_shared<const FiniteCdga>(st.trunc->cdga());
    } else {
      const CohomologyRing& r = st.file.ring;
      st.cdga = st.file.finite(std::max(r.max_deg, max_degree + 1));
      for (int k = 1; k <= r.max_deg; ++k)
        for (std::size_t i = 0; i < r.dims[k]; ++i) st.ring_index[r.labels[k][i]] = {k, i};
    }
    out.stages.push_back(st.cdga);
    stages.push_back(std::move(st));
  }
  if (stages.size() != out.grid.size() + 1) throw InputError("need one stage per grid cell (grid size + 1)");

  const json& maps = field(doc, "maps");
  if (!maps.is_array() || maps.size() + 1 != stages.size())
    throw InputError("need one map per consecutive pair of stages");
  for (std::size_t s = 0; s + 1 < stages.size(); ++s) out.maps.push_back(map_matrices(stages[s], stages[s + 1], maps[s]));
  return out;
}

// ---------------------------------------------------------------------------
// Barcodes

json barcode_json(const Barcode& b, int max_degree, const std::string& invariant) {
  json list = json::array();
  for (int k = 0; k <= max_degree; ++k) {
    json bars = json::array();
    auto it = b.bars.find(k);
    if (it != b.bars.end())
      for (const Bar& bar : it->second)
        bars.push_back({{"birth", number_json(bar.birth)}, {"death", number_json(bar.death)}, {"mult", bar.mult}});
    list.push_back({{"degree", k}, {"bars", bars}});
  }
  return {{"invariant", invariant}, {"barcodes", list}};
}

Barcode barcode_from_json(const json& j) {
  Barcode b;
  const json& list = j.is_array() ? j : field(j, "barcodes");
  if (!list.is_array()) throw InputError("barcodes must be an array");
  for (const auto& entry : list) {
    const int k = int_field(entry, "degree");
    const json& bars = field(entry, "bars");
    if (!bars.is_array()) throw InputError("\"bars\" must be an array");
    for (const auto& bar : bars) {
      Bar x{number_from_json(field(bar, "birth")), number_from_json(field(bar, "death")), 1};
      if (bar.contains("mult")) x.mult = field(bar, "mult").get<std::size_t>();
      if (!(x.birth < x.death) || x.mult == 0) throw InputError("bars need birth < death and positive mult");
      b.bars[k].push_back(x);
    }
  }
  return b;
}

// ---------------------------------------------------------------------------
// Model dumps

json minimal_model_json(const MinimalModel& mm, const std::vector<std::size_t>& input_h_dims) {
  json out = generators_json(*mm.model);
  out["truncation"] = mm.model->truncation();
  json rho = json::object();
  if (!mm.rho.empty())
    for (std::size_t g = 0; g < mm.model->generator_count(); ++g) rho[mm.model->generators()[g].name] = vector_json(mm.rho[g]);
  out["rho"] = rho;
  out["degree"] = mm.degree;
  out["is_minimal"] = is_minimal(*mm.model);
  out["h1_nonzero"] = mm.h1_nonzero;
  out["deg1_converged"] = mm.deg1_converged;
  out["deg1_iterations"] = mm.deg1_iterations;
  out["complete"] = mm.complete;
  out["input_cohomology_dims"] = dims_json(input_h_dims);
  out["report"] = {{"model_dims", dims_json(mm.report.model_dims)},
                   {"input_dims", dims_json(mm.report.input_dims)},
                   {"ranks", dims_json(mm.report.ranks)},
                   {"verified_degree", mm.report.verified_degree}};
  return out;
}

bool is_model_dump(const json& j) { return j.is_object() && j.value("format", "") == "psmm-model"; }

json model_json(const PersistentSullivanModel& psm) {
  json out;
  out["format"] = "psmm-model";
  out["direction"] = psm.direction == Direction::covariant ? "covariant" : "contravariant";
  out["max_degree"] = psm.max_degree;
  json grid = json::array();
  for (double g : psm.grid) grid.push_back(g);
  out["grid"] = grid;
  json stages = json::array();
  for (std::size_t s = 0; s < psm.stages.size(); ++s) {
    const StageModel& st = psm.stages[s];
    json j = generators_json(*st.model);
    j["lower"] = number_json(s == 0 ? 0.0 : psm.grid[s - 1]);
    j["upper"] = number_json(s < psm.grid.size() ? psm.grid[s] : kInf);
    j["h_dims"] = dims_json(st.h_dims);
    j["wedge_reduced"] = st.wedge_reduced;
    j["h1_nonzero"] = st.h1_nonzero;
    j["deg1_converged"] = st.deg1_converged;
    j["complete"] = st.complete;
    j["verified_degree"] = st.verified_degree;
    json rho = json::object();
    if (!st.minimal.rho.empty())
      for (std::size_t g = 0; g < st.model->generator_count(); ++g)
        rho[st.model->generators()[g].name] = vector_json(st.minimal.rho[g]);
    j["rho"] = rho;
    stages.push_back(std::move(j));
  }
  out["stages"] = stages;
  json reps = json::array();
  for (const auto& r : psm.representatives) {
    if (!r) {
      reps.push_back(nullptr);
      continue;
    }
    json images = json::object();
    for (std::size_t g = 0; g < r->source->generator_count(); ++g)
      images[r->source->generators()[g].name] = polynomial_json(*r->target, r->images[g]);
    reps.push_back(images);
  }
  out["representatives"] = reps;
  json hm = json::array();
  for (const auto& per_degree : psm.h_maps) {
    json row = json::array();
    for (const auto& m : per_degree) row.push_back(matrix_json(m));
    hm.push_back(std::move(row));
  }
  out["h_maps"] = hm;
  out["functorial"] = psm.functorial;
  out["caveats"] = psm.caveats();
  return out;
}

PersistentSullivanModel model_from_json(const json& j) {
  if (!is_model_dump(j)) throw InputError("not a psmm model dump");
  PersistentSullivanModel psm;
  const std::string dir = string_field(j, "direction");
  if (dir != "covariant" && dir != "contravariant") throw InputError("unknown direction " + dir);
  psm.direction = dir == "covariant" ? Direction::covariant : Direction::contravariant;
  psm.max_degree = int_field(j, "max_degree");
  for (const auto& g : field(j, "grid")) psm.grid.push_back(number_from_json(g));
  const json& stages = field(j, "stages");
  if (!stages.is_array() || stages.size() != psm.grid.size() + 1) throw InputError("model dump needs grid size + 1 stages");
  for (const auto& sj : stages) {
    StageModel st;
    st.model = std::make_shared<const SullivanAlgebra>(algebra_from_json(sj, psm.max_degree + 2));
    st.h_dims = dims_from_json(field(sj, "h_dims"));
    if (st.h_dims.size() != static_cast<std::size_t>(psm.max_degree) + 1)
      throw InputError("h_dims must cover degrees 0..max_degree");
    st.wedge_reduced = bool_field(sj, "wedge_reduced", false);
    st.h1_nonzero = bool_field(sj, "h1_nonzero", false);
    st.deg1_converged = bool_field(sj, "deg1_converged", true);
    st.complete = bool_field(sj, "complete", true);
    st.verified_degree = sj.value("verified_degree", -1);
    st.minimal.model = st.model;
    // rho is kept verbatim so a reloaded dump serializes identically
    if (sj.contains("rho") && !sj["rho"].empty()) {
      for (const auto& g : st.model->generators()) {
        const json& v = field(sj["rho"], g.name.c_str());
        if (!v.is_array()) throw InputError("rho of " + g.name + " must be an array");
        RatVector coords;
        for (const auto& x : v) coords.push_back(rational_from_json(x));
        st.minimal.rho.push_back(std::move(coords));
      }
    }
    psm.stages.push_back(std::move(st));
  }
  const json& reps = field(j, "representatives");
  const json& hm = field(j, "h_maps");
  if (!reps.is_array() || reps.size() + 1 != psm.stages.size() || !hm.is_array() || hm.size() != reps.size())
    throw InputError("model dump needs one representative and one h map per consecutive pair");
  const bool co = psm.direction == Direction::covariant;
  for (std::size_t s = 0; s < reps.size(); ++s) {
    const StageModel& src = psm.stages[co ? s : s + 1];
    const StageModel& dst = psm.stages[co ? s + 1 : s];
    if (reps[s].is_null()) {
      psm.representatives.emplace_back();
    } else {
      CdgaMorphism f;
      f.source = src.model;
      f.target = dst.model;
      for (const auto& g : src.model->generators()) f.images.push_back(polynomial_from_json(*dst.model, field(reps[s], g.name.c_str())));
      validate_morphism(f);
      psm.representatives.push_back(std::move(f));
    }
    std::vector<RatMatrix> per_degree;
    if (!hm[s].is_array() || hm[s].size() != static_cast<std::size_t>(psm.max_degree) + 1)
      throw InputError("h map must cover degrees 0..max_degree");
    for (int k = 0; k <= psm.max_degree; ++k)
      per_degree.push_back(matrix_from_json(hm[s][k], dst.h_dims[k], src.h_dims[k]));
    psm.h_maps.push_back(std::move(per_degree));
  }
  psm.functorial = bool_field(j, "functorial", true);
  return psm;
}

// ---------------------------------------------------------------------------
// Reports

namespace {

json bottleneck_json(const Bottleneck& b) {
  json out = json::object();
  for (const auto& [k, d] : b.per_degree) out[std::to_string(k)] = number_json(d);
  out["sup"] = number_json(b.sup);
  return out;
}

std::string fmt(double x) {
  if (std::isinf(x)) return "inf";
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

}  // namespace

json report_json(const BoundsReport& r) {
  json out;
  out["dB_H"] = bottleneck_json(r.dB_H);
  out["dB_V"] = bottleneck_json(r.dB_V);
  out["dB_V_reliable"] = number_json(r.dB_V_reliable);
  out["gh2"] = r.gh2 ? number_json(*r.gh2) : json(nullptr);
  out["bracket"] = {{"lower", number_json(r.lower_bound())},
                    {"upper", r.gh2 ? number_json(*r.gh2) : json(nullptr)},
                    {"note", "the homotopy interleaving distance of the persistent CDGAs lies in this bracket; "
                             "it is bounded, not computed"}};
  json verdicts = json::array();
  for (const auto& v : r.verdicts)
    verdicts.push_back({{"name", v.name},
                        {"lhs", number_json(v.lhs)},
                        {"rhs", v.rhs ? number_json(*v.rhs) : json(nullptr)},
                        {"holds", v.holds ? json(*v.holds) : json(nullptr)}});
  out["verdicts"] = verdicts;
  out["caveats"] = r.caveats;
  return out;
}

std::string report_table(const BoundsReport& r) {
  std::ostringstream os;
  std::set<int> degrees;
  for (const auto& [k, d] : r.dB_H.per_degree) degrees.insert(k);
  for (const auto& [k, d] : r.dB_V.per_degree) degrees.insert(k);
  auto at = [](const Bottleneck& b, int k) {
    auto it = b.per_degree.find(k);
    return it == b.per_degree.end() ? 0.0 : it->second;
  };
  os << std::left << std::setw(8) << "degree" << std::setw(12) << "dB_H" << "dB_V\n";
  for (int k : degrees) os << std::setw(8) << k << std::setw(12) << fmt(at(r.dB_H, k)) << fmt(at(r.dB_V, k)) << '\n';
  os << std::setw(8) << "sup" << std::setw(12) << fmt(r.dB_H.sup) << fmt(r.dB_V.sup) << '\n';
  os << "2 d_GH: " << (r.gh2 ? fmt(*r.gh2) : "not computed") << '\n';
  os << "bracket: [" << fmt(r.lower_bound()) << ", " << (r.gh2 ? fmt(*r.gh2) : "?") << "]\n";
  for (const auto& v : r.verdicts)
    os << (v.holds ? (*v.holds ? "PASS  " : "FAIL  ") : "n/a   ") << v.name << "  (" << fmt(v.lhs) << " vs "
       << (v.rhs ? fmt(*v.rhs) : "?") << ")\n";
  for (const auto& c : r.caveats) os << "caveat: " << c << '\n';
  return os.str();
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    json doc;
    in >> doc;
    return doc;
  } catch (const json::exception& e) {
    throw InputError("malformed JSON in " + path + ": " + e.what());
  }
}

}  // namespace psmm
