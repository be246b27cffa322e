#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "geoclust/dissim.hpp"
#include "geoclust/hclust.hpp"
#include "geoclust/inertia.hpp"
#include "geoclust/panel_io.hpp"
#include "geoclust/search.hpp"

namespace geoclust::cli {

inline constexpr const char* kVersion = "0.1.0";

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t x);

/// Rounds to 10 significant digits, the precision used in every JSON report.
double round10(double x);

struct RunConfig {
  std::filesystem::path panel;
  io::PanelLayout layout = io::PanelLayout::long_format;
  std::optional<std::filesystem::path> coords;
  std::vector<std::string> variables;  // empty: all panel variables
  bool include_spatial = true;
  double delta_alpha = 0.05;
  std::optional<std::size_t> k;  // fixed K; otherwise the elbow over 2..k_max
  std::size_t k_max = 10;
  std::string criterion = "morelli";
  std::uint64_t seed = 0;
  bool normalize = true;
  bool standardize = false;

  /// key = value lines, '#' comments, optional quotes, list values as
  /// `a, b` or `["a", "b"]`. Relative paths resolve against base_dir.
  static RunConfig parse(const std::string& text, const std::filesystem::path& base_dir = {});
  static RunConfig load(const std::filesystem::path& path);

  /// Sorted key=value form used for hashing.
  std::string canonical() const;
};

struct ClusterOutcome {
  std::vector<std::string> unit_ids;
  std::vector<DissimMatrix> matrices;
  Partition partition = Partition::single(1);
  InertiaReport report;
  std::vector<AlphaChoice> restricted;
  std::string report_json;
};

/// Runs the full pipeline and writes assignments.csv, report.json,
/// elbow.csv, grid.csv, matrices/ and cache/ under out_dir.
ClusterOutcome cmd_cluster(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// Writes one raw dissimilarity CSV per variable (plus spatial) to out_dir.
std::vector<std::filesystem::path> cmd_dissim(const std::filesystem::path& panel, io::PanelLayout layout,
                                              const std::optional<std::filesystem::path>& coords,
                                              const std::filesystem::path& out_dir, bool standardize = false);

struct SimulateOptions {
  std::string mode = "sweep";
  std::size_t reps = 100;
  std::uint64_t seed = 1;
  std::string reading = "variance";
  double delta_alpha = 0.05;
  std::size_t n = 100;
};

void cmd_simulate(const SimulateOptions& opt, const std::filesystem::path& out_dir);

struct JointInertiaBreakdown {
  std::string label;
  std::size_t k = 0;
  std::vector<double> alpha;
  std::vector<double> restricted_alpha;
  double q = 0.0;
  double q_tilde = 0.0;
  double q_tilde_complement = 0.0;
  double joint_inertia = 0.0;
};

/// Recomputes the breakdown for one matrix from the persisted matrices of a
/// cluster run.
JointInertiaBreakdown cmd_joint_inertia(const std::filesystem::path& run_dir, const std::string& matrix);

/// Full command-line entry point. Exit codes: 0 ok, 2 invalid input,
/// 3 degenerate data, 1 anything else.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace geoclust::cli
