#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "chmetric/transform.hpp"

namespace chm {

// Flat key=value settings; '#' starts a comment. Unknown keys are kept and ignored.
class Config {
 public:
  static Config defaults();
  // "default" yields defaults(); anything else is a file whose keys override them.
  static Config load(const std::string& path_or_default);
  static Config parse(std::istream& is);

  void set(const std::string& key, const std::string& value) { kv_[key] = value; }
  bool has(const std::string& key) const { return kv_.count(key) != 0; }
  std::string str(const std::string& key) const;
  double num(const std::string& key) const;
  std::size_t count(const std::string& key) const;
  std::vector<double> list(const std::string& key) const;  // comma or space separated
  void merge(const Config& other);

 private:
  std::map<std::string, std::string> kv_;
};

struct ReportRow {
  std::string tag;
  std::string context;
  double value = 0.0;
  std::string relation;  // "<=" or ">="
  double threshold = 0.0;
  bool pass = true;
};

struct Report {
  std::string name;
  std::vector<ReportRow> rows;
  bool pass() const;
  std::size_t failures() const;
};

void write_json(std::ostream& os, const Report& r);
void write_text(std::ostream& os, const Report& r);

// One row per inequality. value = worst (bound - lhs) / A^p over the grid, which
// must be >= -tol. Q, R, D, E come from compute_operators; the energy density
// H_eta is the remainder A^5 - 2 P Y_eta + U^2 Y_eta.
std::vector<ReportRow> check_inequalities(const ScaledSnapshot& ss, double tol, const std::string& context);

Report run_invariants(const Config& cfg);
Report run_residual(const Config& cfg);
Report run_lipschitz(const Config& cfg);

// Writes CSV files (x-or-eta, value, branch) into out_dir and returns their paths.
std::vector<std::filesystem::path> emit_figures(const std::string& id, const Config& cfg,
                                                const std::filesystem::path& out_dir);
const std::vector<std::string>& figure_ids();

}  // namespace chm
