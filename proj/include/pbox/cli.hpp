#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pbox/serialize.hpp"
#include "pbox/statespec.hpp"

namespace pbox::cli {

struct ReplicationRow {
  std::string id;
  double closed = 0.0;
  double computed = 0.0;
  double abs_diff = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

inline constexpr double kAnalyticTolerance = 1e-8;
inline constexpr double kQuadratureTolerance = 1e-6;

std::vector<ReplicationRow> replication_table();
void write_replication_csv(std::ostream& out, const std::vector<ReplicationRow>& rows);

struct Overrides {
  std::optional<int> panels;      ///< quadrature panels per box length
  std::optional<int> truncation;  ///< sine modes for profile states
};

StateSpec apply_overrides(StateSpec spec, const Overrides& o);
QuadratureConfig quadrature_for(const Overrides& o);

/// Window rule that belongs to a prescription: the min cut for the density based
/// bounds, the reference window (base or moving node) otherwise.
WindowRule natural_rule(const State& s, BoundKind kind);

struct ReportConfig {
  double t = 0.0;
  std::optional<double> cut;  ///< cut position; default is the reference window start
  Overrides overrides;
};

/// One row per prescription: the report columns followed by witness, lhs_product, satisfied, degenerate.
std::vector<Fields> report_rows(const StateSpec& spec, const ReportConfig& cfg);
void write_report_text(std::ostream& out, const StateSpec& spec, const ReportConfig& cfg);

enum class Axis { L, b, k, t, K };
Axis parse_axis(const std::string& s);
std::string to_string(Axis a);

enum class Sampling { grid, random };

struct ScanConfig {
  Axis axis = Axis::t;
  double from = 0.0;
  double to = 1.0;
  int steps = 2;
  double t = 0.0;
  Sampling sampling = Sampling::grid;
  std::uint64_t seed = 0;
  int threads = 0;  ///< 0: hardware concurrency
  Overrides overrides;
};

/// Sweep values in output order. Random sampling draws from the seeded generator and sorts.
std::vector<double> sweep_values(const ScanConfig& cfg);
std::vector<Fields> scan_rows(const StateSpec& spec, const ScanConfig& cfg);

struct EvolveConfig {
  int frames = 16;
  int grid = 257;
  std::optional<double> t_end;  ///< default: one recurrence period
  Overrides overrides;
};

/// Frame times are t_end * i / frames for i = 0 .. frames - 1.
void write_evolve_csv(std::ostream& out, const StateSpec& spec, const EvolveConfig& cfg);

/// Relative paths are placed under $PBOX_OUTPUT_DIR when it is set.
std::string resolve_output_path(const std::string& path);

int run(int argc, char** argv);

}  // namespace pbox::cli
