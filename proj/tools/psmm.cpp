// psmm: persistent Sullivan minimal models of metric spaces and persistent
// CDGAs. Exit codes: 0 ok, 1 internal error, 2 invalid input, 3 cap
// exceeded, 4 degree-1 construction did not converge (output still written).

#include "psmm/io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace psmm;

constexpr int kOk = 0;
constexpr int kInternal = 1;
constexpr int kInvalid = 2;
constexpr int kCap = 3;
constexpr int kNonConvergent = 4;

struct Config {
  int max_degree = 4;
  int max_dim = -1;
  int deg1_cap = 8;
  std::size_t simplex_cap = kDefaultSimplexCap;
  std::size_t gh_cap = kDefaultGhCap;
  double tolerance = 1e-9;
  std::string output;

  PipelineOptions pipeline() const {
    PipelineOptions o;
    o.max_degree = max_degree;
    o.max_dim = max_dim;
    o.simplex_cap = simplex_cap;
    o.gh_cap = gh_cap;
    o.model.deg1_cap = deg1_cap;
    return o;
  }
};

void add_config(CLI::App* cmd, Config& cfg, bool metric_flags) {
  cmd->add_option("--max-degree", cfg.max_degree, "Highest degree of models and barcodes")->check(CLI::NonNegativeNumber);
  cmd->add_option("--deg1-cap", cfg.deg1_cap, "Iteration cap of the degree-1 construction")->check(CLI::PositiveNumber);
  if (metric_flags) {
    cmd->add_option("--max-dim", cfg.max_dim, "Vietoris-Rips skeleton dimension (default max-degree + 1)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--simplex-cap", cfg.simplex_cap, "Largest complex to build")->check(CLI::PositiveNumber);
  }
  cmd->add_option("-o,--output", cfg.output, "Output file (default standard output)");
}

void emit(const Config& cfg, const json& doc) {
  const std::string text = doc.dump(2) + "\n";
  if (cfg.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output);
  if (!out) throw InputError("cannot write " + cfg.output);
  out << text;
}

bool is_persistent_cdga(const json& doc) { return doc.is_object() && doc.contains("stages") && !is_model_dump(doc); }

std::string parent_dir(const std::string& path) {
  const auto p = std::filesystem::path(path).parent_path();
  return p.empty() ? "." : p.string();
}

void warn_dims(const Config& cfg) {
  if (cfg.max_dim >= 0 && cfg.max_dim < cfg.max_degree + 1)
    std::cerr << "warning: --max-dim " << cfg.max_dim << " only supports models through degree "
              << cfg.max_dim - 1 << "\n";
}

PersistentSullivanModel model_of(const std::string& path, const Config& cfg) {
  const json doc = read_json_file(path);
  if (is_model_dump(doc)) return model_from_json(doc);
  if (is_persistent_cdga(doc))
    return persistent_model(load_persistent_cdga(doc, parent_dir(path), cfg.max_degree), cfg.pipeline());
  return persistent_model(load_metric(doc), cfg.pipeline());
}

int convergence_code(const PersistentSullivanModel& psm) {
  if (psm.all_converged()) return kOk;
  std::cerr << "degree-1 construction did not converge; output is partial\n";
  return kNonConvergent;
}

int cmd_model(const Config& cfg, const std::string& input) {
  warn_dims(cfg);
  const PersistentSullivanModel psm = model_of(input, cfg);
  emit(cfg, model_json(psm));
  for (const auto& c : psm.caveats()) std::cerr << "note: " << c << "\n";
  return convergence_code(psm);
}

int cmd_barcode(const Config& cfg, const std::string& input, const std::string& invariant) {
  warn_dims(cfg);
  const json doc = read_json_file(input);
  if (invariant == "H" && !is_model_dump(doc) && !is_persistent_cdga(doc)) {
    const Barcode b = h_barcode(load_metric(doc), cfg.pipeline());
    emit(cfg, barcode_json(b, cfg.max_degree, "H"));
    return kOk;
  }
  const PersistentSullivanModel psm = model_of(input, cfg);
  const Barcode b = invariant == "V" ? v_barcode(psm) : h_barcode(psm);
  emit(cfg, barcode_json(b, psm.max_degree, invariant));
  return invariant == "V" ? convergence_code(psm) : kOk;
}

int cmd_compare(const Config& cfg, const std::string& left, const std::string& right, bool with_gh) {
  warn_dims(cfg);
  const json l = read_json_file(left);
  const json r = read_json_file(right);
  BoundsReport report;
  bool converged = true;
  if (is_persistent_cdga(l) || is_persistent_cdga(r) || is_model_dump(l) || is_model_dump(r)) {
    if (with_gh) std::cerr << "warning: --gh needs two metric inputs; 2 d_GH omitted\n";
    const PersistentSullivanModel a = model_of(left, cfg);
    const PersistentSullivanModel b = model_of(right, cfg);
    converged = a.all_converged() && b.all_converged();
    report = bounds_report(a, b, std::nullopt, cfg.tolerance);
  } else {
    const MetricSpace x = load_metric(l);
    const MetricSpace y = load_metric(r);
    std::optional<double> gh2;
    if (with_gh) {
      if (x.n * y.n <= cfg.gh_cap)
        gh2 = 2 * gh_bruteforce(x, y, cfg.gh_cap);
      else
        std::cerr << "warning: |X|*|Y| = " << x.n * y.n << " exceeds --gh-cap " << cfg.gh_cap
                  << "; 2 d_GH omitted\n";
    }
    const PersistentSullivanModel a = persistent_model(x, cfg.pipeline());
    const PersistentSullivanModel b = persistent_model(y, cfg.pipeline());
    converged = a.all_converged() && b.all_converged();
    report = bounds_report(a, b, gh2, cfg.tolerance);
  }
  emit(cfg, report_json(report));
  (cfg.output.empty() ? std::cerr : std::cout) << report_table(report);
  return converged ? kOk : kNonConvergent;
}

int cmd_minimal_model(const Config& cfg, const std::string& input) {
  const AlgebraFile file = load_algebra(read_json_file(input));
  const int top = file.kind == AlgebraFile::Kind::sullivan ? cfg.max_degree + 2
                                                           : std::max(file.ring.max_deg, cfg.max_degree + 1);
  const auto a = file.finite(top);
  ModelOptions opts;
  opts.deg1_cap = cfg.deg1_cap;
  const MinimalModel mm = minimal_model(a, cfg.max_degree, opts);
  const FiniteCohomology h(*a, cfg.max_degree);
  std::vector<std::size_t> dims;
  for (int k = 0; k <= cfg.max_degree; ++k) dims.push_back(h.dim(k));
  json out = minimal_model_json(mm, dims);
  if (file.kind == AlgebraFile::Kind::sullivan) out["input_is_minimal"] = is_minimal(file.sullivan);
  emit(cfg, out);
  if (!mm.deg1_converged) {
    std::cerr << "degree-1 construction did not converge; output is partial\n";
    return kNonConvergent;
  }
  return kOk;
}

int cmd_gh(const Config& cfg, const std::string& left, const std::string& right) {
  const MetricSpace x = load_metric(read_json_file(left));
  const MetricSpace y = load_metric(read_json_file(right));
  const double d = gh_bruteforce(x, y, cfg.gh_cap);
  emit(cfg, {{"gh", number_json(d)}, {"gh2", number_json(2 * d)}});
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Persistent Sullivan minimal models, barcodes and distance bounds"};
  app.require_subcommand(1);
  Config cfg;
  std::string input, left, right, invariant = "H";
  bool with_gh = false;

  auto* model = app.add_subcommand("model", "Build the persistent minimal model of a metric space or persistent CDGA");
  model->add_option("-i,--input", input, "Metric or persistent CDGA JSON")->required();
  add_config(model, cfg, true);

  auto* bar = app.add_subcommand("barcode", "Barcode of V (homotopy) or H (cohomology)");
  bar->add_option("-i,--input", input, "Metric, persistent CDGA or model dump JSON")->required();
  bar->add_option("--invariant", invariant, "V or H")->check(CLI::IsMember({"V", "H"}));
  add_config(bar, cfg, true);

  auto* cmp = app.add_subcommand("compare", "Bottleneck distances and the distance bracket of two inputs");
  cmp->add_option("--left", left, "First input")->required();
  cmp->add_option("--right", right, "Second input")->required();
  cmp->add_flag("--gh", with_gh, "Also compute 2 d_GH by brute force");
  cmp->add_option("--gh-cap", cfg.gh_cap, "Largest |X|*|Y| for the brute force")->check(CLI::PositiveNumber);
  cmp->add_option("--tolerance", cfg.tolerance, "Slack of the inequality verdicts")->check(CLI::NonNegativeNumber);
  add_config(cmp, cfg, true);

  auto* mm = app.add_subcommand("minimal-model", "Minimal model of an algebra file");
  mm->add_option("-i,--input", input, "Sullivan algebra or ring JSON")->required();
  add_config(mm, cfg, false);

  auto* gh = app.add_subcommand("gh", "Brute-force Gromov-Hausdorff distance");
  gh->add_option("--left", left, "First metric")->required();
  gh->add_option("--right", right, "Second metric")->required();
  gh->add_option("--gh-cap", cfg.gh_cap, "Largest |X|*|Y| for the brute force")->check(CLI::PositiveNumber);
  gh->add_option("-o,--output", cfg.output, "Output file (default standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*model) return cmd_model(cfg, input);
    if (*bar) return cmd_barcode(cfg, input, invariant);
    if (*cmp) return cmd_compare(cfg, left, right, with_gh);
    if (*mm) return cmd_minimal_model(cfg, input);
    if (*gh) return cmd_gh(cfg, left, right);
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return kCap;
  } catch (const InputError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const DimensionError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
