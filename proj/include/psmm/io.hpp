#pragma once

// JSON schemas: algebra files, persistent CDGA files, model dumps, barcodes
// and distance reports. Infinite values are written as the string "inf" and
// rationals as "p/q" strings.

#include "psmm/pipeline.hpp"

#include <json.hpp>

#include <string>

namespace psmm {

using nlohmann::json;

json number_json(double x);
double number_from_json(const json& j);  // accepts numbers, "inf" and "p/q"

json matrix_json(const RatMatrix& m);
RatMatrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols);

json polynomial_json(const SullivanAlgebra& alg, const Polynomial& p);
Polynomial polynomial_from_json(const SullivanAlgebra& alg, const json& j);

/// An algebra file: a Sullivan algebra {"generators", "differential",
/// "truncation"} or a connected graded ring {"classes", "products",
/// "max_degree"} whose unit is implicit.
struct AlgebraFile {
  enum class Kind { sullivan, ring } kind = Kind::sullivan;
  SullivanAlgebra sullivan;
  CohomologyRing ring;  // positive-degree classes in declaration order

  /// Finite algebra known through degree `top`; rings are zero-padded or
  /// truncated.
  std::shared_ptr<const FiniteCdga> finite(int top) const;
};

AlgebraFile load_algebra(const json& doc);
CohomologyRing ring_with_top(const CohomologyRing& r, int top);

/// {"grid": [...], "stages": [file path or inline algebra], "maps":
/// ["identity" | {"images": {name: terms}}]}; relative paths resolve against
/// base_dir. Stages are truncated so that models through max_degree exist.
PersistentCdga load_persistent_cdga(const json& doc, const std::string& base_dir, int max_degree);

json barcode_json(const Barcode& b, int max_degree, const std::string& invariant);
Barcode barcode_from_json(const json& j);

json model_json(const PersistentSullivanModel& psm);
PersistentSullivanModel model_from_json(const json& j);
bool is_model_dump(const json& j);

json minimal_model_json(const MinimalModel& mm, const std::vector<std::size_t>& input_h_dims);

json report_json(const BoundsReport& r);
std::string report_table(const BoundsReport& r);

json read_json_file(const std::string& path);  // InputError on I/O or parse failure

}  // namespace psmm
