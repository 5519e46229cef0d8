#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <thread>

#include <CLI11.hpp>

#include "pbox/bounds.hpp"
#include "pbox/catalog.hpp"
#include "pbox/cli.hpp"
#include "pbox/moments.hpp"

namespace pbox::cli {

namespace {

struct IoError : Error {
  using Error::Error;
};

bool is_bloch(const State& s) { return std::holds_alternative<BlochSineState>(s); }

WindowRule reference_rule(const State& s) { return is_bloch(s) ? WindowRule::moving_node : WindowRule::base; }

Fields with_bound_extras(Fields f, const BoundResult& b) {
  f.emplace_back("witness", b.witness ? format_double(*b.witness) : std::string());
  f.emplace_back("lhs_product", format_double(b.lhs_product));
  f.emplace_back("satisfied", format_bool(b.satisfied));
  f.emplace_back("degenerate", format_bool(b.degenerate));
  return f;
}

struct Prescriptions {
  BoundResult cut;
  BoundResult min_density;
  BoundResult maxmin;
  JudgeResult judge;
  BoundResult trig;
};

Prescriptions evaluate_prescriptions(const State& s, double t, double cut_x, const Constants& c,
                                     const QuadratureConfig& quad) {
  MaxminOptions mo;
  mo.quadrature = quad;
  return {cut_bound(s, t, cut_x, c, quad), min_density_cut(s, t, c, quad), maxmin_bound(s, c, mo),
          judge_minimize(s, t, c), trig_relation(s, t, c, quad)};
}

class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (path.empty()) return;
    resolved_ = resolve_output_path(path);
    file_.open(resolved_, std::ios::binary);
    if (!file_) throw IoError("cannot open output file '" + resolved_ + "'");
  }

  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

  void finish() {
    stream().flush();
    if (!stream()) throw IoError("write failed for '" + (resolved_.empty() ? std::string("stdout") : resolved_) + "'");
  }

 private:
  std::string resolved_;
  std::ofstream file_;
};

void require_axis_fits(const StateSpec& spec, Axis axis) {
  const auto& k = spec.kind;
  const bool ok = axis == Axis::L || axis == Axis::t || (axis == Axis::b && k == "three_wave_packet") ||
                  (axis == Axis::k && (k == "bloch_pair" || k == "half_box" || k == "elementary")) ||
                  (axis == Axis::K && k == "profile");
  if (!ok) throw CLI::ValidationError("--axis", "axis " + to_string(axis) + " does not apply to kind " + k);
}

StateSpec spec_at(StateSpec spec, Axis axis, double v) {
  switch (axis) {
    case Axis::L: spec.length = v; break;
    case Axis::b: spec.b = v; break;
    case Axis::k: spec.k = static_cast<int>(std::lround(v)); break;
    case Axis::K: spec.truncation = static_cast<int>(std::lround(v)); break;
    case Axis::t: break;
  }
  return spec;
}

Fields scan_point(const StateSpec& base, const ScanConfig& cfg, double v, const std::optional<BoundResult>& maxmin) {
  const StateSpec spec = spec_at(base, cfg.axis, v);
  const auto built = build_state(spec);
  const State& s = built.state;
  const Constants& c = built.constants;
  const double t = cfg.axis == Axis::t ? v : cfg.t;
  const auto quad = quadrature_for(cfg.overrides);
  ReportOptions ro;
  ro.quadrature = quad;

  Fields f{{to_string(cfg.axis), format_double(v)}};
  const auto report = uncertainty_report(s, t, natural_rule(s, BoundKind::min_density), BoundKind::min_density, c, ro);
  for (auto& field : report_fields(report)) f.push_back(std::move(field));
  const auto minimum = density_minimum(s, t, c);
  MaxminOptions mo;
  mo.quadrature = quad;
  const auto mm = maxmin ? *maxmin : maxmin_bound(s, c, mo);
  f.emplace_back("L_min_density", format_double(minimum.scaled));
  f.emplace_back("cut_bound", format_double(cut_bound(s, t, reference_window_start(s, t, c), c, quad).value));
  f.emplace_back("min_density_bound", format_double(0.5 * c.hbar * (1.0 - minimum.scaled)));
  f.emplace_back("maxmin_bound", format_double(mm.value));
  f.emplace_back("judge_bound", format_double(judge_minimize(s, t, c).bound));
  f.emplace_back("trig_bound", format_double(trig_relation(s, t, c, quad).value));
  const auto* bloch = std::get_if<BlochSineState>(&s);
  f.emplace_back("boundary_force", bloch ? format_double(boundary_force(*bloch, t, c)) : std::string());
  f.emplace_back("projection_residual", format_double(built.projection_residual));
  return f;
}

}  // namespace

StateSpec apply_overrides(StateSpec spec, const Overrides& o) {
  if (o.truncation) {
    if (spec.kind != "profile") throw CLI::ValidationError("--K", "truncation applies to profile states only");
    spec.truncation = o.truncation;
  }
  return spec;
}

QuadratureConfig quadrature_for(const Overrides& o) {
  QuadratureConfig q;
  if (o.panels) {
    if (*o.panels < 1) throw CLI::ValidationError("--panels", "must be positive");
    q.panels = *o.panels;
  }
  return q;
}

WindowRule natural_rule(const State& s, BoundKind kind) {
  switch (kind) {
    case BoundKind::min_density:
    case BoundKind::maxmin:
    case BoundKind::judge: return WindowRule::min_cut;
    default: return reference_rule(s);
  }
}

std::vector<Fields> report_rows(const StateSpec& spec_in, const ReportConfig& cfg) {
  const auto built = build_state(apply_overrides(spec_in, cfg.overrides));
  const State& s = built.state;
  const Constants& c = built.constants;
  const auto quad = quadrature_for(cfg.overrides);
  const double cut_x = cfg.cut.value_or(reference_window_start(s, cfg.t, c));
  const auto p = evaluate_prescriptions(s, cfg.t, cut_x, c, quad);

  ReportOptions ro;
  ro.quadrature = quad;
  std::vector<Fields> rows;
  auto add = [&](const BoundResult& b, double t, const Window& w) {
    UncertaintyReport r = uncertainty_report(s, t, reference_rule(s), BoundKind::none, c, ro);
    if (w.start != r.window.start) {
      const auto xm = x_moments(s, t, w, quad, c);
      r.window = w;
      r.mean_x = xm.mean_x;
      r.mean_x2 = xm.mean_x2;
      r.dx = clamped_sqrt(xm.variance());
      r.product = r.dx * r.dp;
    }
    r.bound_kind = b.kind;
    r.bound_value = b.value;
    rows.push_back(with_bound_extras(report_fields(r), b));
  };
  const double l = state_length(s);
  add(p.cut, cfg.t, {cut_x, l});
  add(p.min_density, cfg.t, {*p.min_density.witness, l});
  const double t_star = p.maxmin.witness.value_or(cfg.t);
  add(p.maxmin, t_star, select_window(s, t_star, WindowRule::min_cut, c));
  add(to_bound_result(p.judge), cfg.t, select_window(s, cfg.t, WindowRule::min_cut, c));
  add(p.trig, cfg.t, select_window(s, cfg.t, reference_rule(s), c));
  return rows;
}

void write_report_text(std::ostream& out, const StateSpec& spec_in, const ReportConfig& cfg) {
  const auto spec = apply_overrides(spec_in, cfg.overrides);
  const auto built = build_state(spec);
  const State& s = built.state;
  const Constants& c = built.constants;
  const auto quad = quadrature_for(cfg.overrides);
  const double cut_x = cfg.cut.value_or(reference_window_start(s, cfg.t, c));
  const auto p = evaluate_prescriptions(s, cfg.t, cut_x, c, quad);

  out << "# units: hbar = " << format_double(c.hbar) << ", m = " << format_double(c.mass) << "\n\n";
  write_text_section(out, "state",
                     {{"kind", spec.kind},
                      {"L", format_double(state_length(s))},
                      {"variant", is_bloch(s) ? "bloch_sine" : "plane_waves"},
                      {"recurrence_period", format_double(recurrence_period(s, c))},
                      {"projection_residual", format_double(built.projection_residual)}});
  ReportOptions ro;
  ro.quadrature = quad;
  write_text_section(out, "report",
                     report_fields(uncertainty_report(s, cfg.t, natural_rule(s, BoundKind::min_density),
                                                      BoundKind::min_density, c, ro)));
  write_text_section(out, "bound.cut", bound_fields(p.cut));
  write_text_section(out, "bound.min_density", bound_fields(p.min_density));
  write_text_section(out, "bound.maxmin", bound_fields(p.maxmin));
  write_text_section(out, "bound.judge", bound_fields(to_bound_result(p.judge)));
  write_text_section(out, "bound.trig", bound_fields(p.trig));
  write_text_section(out, "judge", judge_fields(p.judge));
  const auto chain = chain_check(s, cfg.t, c, quad);
  write_text_section(out, "chain",
                     {{"min_density_bound", format_double(chain.min_density_bound)},
                      {"judge_bound", format_double(chain.judge_bound)},
                      {"min_cut_product", format_double(chain.min_cut_product)},
                      {"judge_product", format_double(chain.judge_product)},
                      {"ok", format_bool(chain.ok)}});
  if (const auto* b = std::get_if<BlochSineState>(&s)) {
    const auto norm = convergence_norm(*b, c);
    write_text_section(out, "boundary",
                       {{"boundary_force", format_double(boundary_force(*b, cfg.t, c))},
                        {"sum_abs_ck_pk", format_double(norm.sum_abs)},
                        {"sum_sq_ck_pk", format_double(norm.sum_sq)},
                        {"cap", format_double(norm.cap)},
                        {"violation", format_bool(norm.violation)}});
  }
}

Axis parse_axis(const std::string& s) {
  if (s == "L") return Axis::L;
  if (s == "b") return Axis::b;
  if (s == "k") return Axis::k;
  if (s == "t") return Axis::t;
  if (s == "K") return Axis::K;
  throw CLI::ValidationError("--axis", "unknown axis '" + s + "' (expected L, b, k, t or K)");
}

std::string to_string(Axis a) {
  switch (a) {
    case Axis::L: return "L";
    case Axis::b: return "b";
    case Axis::k: return "k";
    case Axis::t: return "t";
    case Axis::K: return "K";
  }
  return "?";
}

std::vector<double> sweep_values(const ScanConfig& cfg) {
  if (cfg.steps < 2) throw CLI::ValidationError("--steps", "scan needs at least 2 steps");
  std::vector<double> v(static_cast<std::size_t>(cfg.steps));
  if (cfg.sampling == Sampling::random) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(cfg.from, cfg.to);
    for (auto& x : v) x = u(rng);
    std::sort(v.begin(), v.end());
    return v;
  }
  for (int i = 0; i < cfg.steps; ++i)
    v[static_cast<std::size_t>(i)] = cfg.from + (cfg.to - cfg.from) * i / (cfg.steps - 1);
  return v;
}

std::vector<Fields> scan_rows(const StateSpec& spec_in, const ScanConfig& cfg) {
  const auto spec = apply_overrides(spec_in, cfg.overrides);
  require_axis_fits(spec, cfg.axis);
  const auto values = sweep_values(cfg);

  std::optional<BoundResult> shared_maxmin;
  if (cfg.axis == Axis::t) {
    const auto built = build_state(spec);
    MaxminOptions mo;
    mo.quadrature = quadrature_for(cfg.overrides);
    shared_maxmin = maxmin_bound(built.state, built.constants, mo);
  }

  std::vector<Fields> rows(values.size());
  std::vector<std::exception_ptr> errors(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      try {
        rows[i] = scan_point(spec, cfg, values[i], shared_maxmin);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const int n_threads = std::clamp(cfg.threads > 0 ? cfg.threads : hw, 1, static_cast<int>(values.size()));
  std::vector<std::thread> pool;
  for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

void write_evolve_csv(std::ostream& out, const StateSpec& spec_in, const EvolveConfig& cfg) {
  if (cfg.frames < 1) throw CLI::ValidationError("--frames", "need at least one frame");
  if (cfg.grid < 2) throw CLI::ValidationError("--grid", "need at least two grid points");
  const auto built = build_state(apply_overrides(spec_in, cfg.overrides));
  const State& s = built.state;
  const Constants& c = built.constants;
  const double t_end = cfg.t_end.value_or(recurrence_period(s, c));
  out << "t,x,density\n";
  for (int i = 0; i < cfg.frames; ++i) {
    const double t = t_end * i / cfg.frames;
    write_grid_density_rows(out, sample_grid_density(s, t, reference_window_start(s, t, c), cfg.grid, c));
  }
}

std::string resolve_output_path(const std::string& path) {
  const std::filesystem::path p(path);
  const char* dir = std::getenv("PBOX_OUTPUT_DIR");
  if (p.is_absolute() || dir == nullptr || *dir == '\0') return path;
  return (std::filesystem::path(dir) / p).string();
}

int run(int argc, char** argv) {
  CLI::App app{"Uncertainty relations for a free particle on a periodic box"};
  app.require_subcommand(1);
  app.footer("Relative --out/--csv paths are placed under $PBOX_OUTPUT_DIR when it is set.");

  Overrides overrides;
  auto add_overrides = [&](CLI::App* sub) {
    sub->add_option("--panels", overrides.panels, "Quadrature panels per box length (default 64)");
    sub->add_option("--K", overrides.truncation, "Sine-mode truncation for profile states (default 256)");
  };

  std::string out_path;
  std::string csv_path;
  std::string spec_path;

  auto* replicate = app.add_subcommand("replicate", "Compare computed values with closed forms");
  replicate->add_option("--out", out_path, "CSV table file (default: stdout)");

  ReportConfig report_cfg;
  auto* report = app.add_subcommand("report", "All bound prescriptions and the uncertainty report at one time");
  report->add_option("--spec", spec_path, "State description file")->required();
  report->add_option("--t", report_cfg.t, "Time (default 0)")->capture_default_str();
  report->add_option("--cut", report_cfg.cut, "Cut position for the cut bound (default: reference window start)");
  report->add_option("--out", out_path, "Structured text file (default: stdout)");
  report->add_option("--csv", csv_path, "CSV file with one row per prescription (default: none)");
  add_overrides(report);

  ScanConfig scan_cfg;
  std::string axis_name;
  std::string sampling = "grid";
  auto* scan = app.add_subcommand("scan", "Sweep one parameter and write a CSV row per point");
  scan->add_option("--spec", spec_path, "State description file")->required();
  scan->add_option("--axis", axis_name, "Sweep axis: L, b, k, t or K")->required();
  scan->add_option("--from", scan_cfg.from, "First sweep value")->required();
  scan->add_option("--to", scan_cfg.to, "Last sweep value")->required();
  scan->add_option("--steps", scan_cfg.steps, "Number of sweep points, at least 2")->required();
  scan->add_option("--t", scan_cfg.t, "Time when the axis is not t (default 0)")->capture_default_str();
  scan->add_option("--sampling", sampling, "grid (evenly spaced) or random (seeded uniform draws)")
      ->check(CLI::IsMember({"grid", "random"}))
      ->capture_default_str();
  scan->add_option("--seed", scan_cfg.seed, "Seed for random sampling (default 0)")->capture_default_str();
  scan->add_option("--threads", scan_cfg.threads, "Worker threads, 0 for all cores (default 0)")->capture_default_str();
  scan->add_option("--out", out_path, "CSV file (default: stdout)");
  add_overrides(scan);

  EvolveConfig evolve_cfg;
  auto* evolve = app.add_subcommand("evolve", "Write density frames as t,x,density rows");
  evolve->add_option("--spec", spec_path, "State description file")->required();
  evolve->add_option("--frames", evolve_cfg.frames, "Number of frames (default 16)")->capture_default_str();
  evolve->add_option("--grid", evolve_cfg.grid, "Grid points per frame, endpoints included (default 257)")
      ->capture_default_str();
  evolve->add_option("--t-end", evolve_cfg.t_end, "Time span of the frames (default: one recurrence period)");
  evolve->add_option("--out", out_path, "CSV file (default: stdout)");
  add_overrides(evolve);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*replicate) {
      const auto rows = replication_table();
      OutputTarget target(out_path);
      write_replication_csv(target.stream(), rows);
      target.finish();
      const auto failed = std::count_if(rows.begin(), rows.end(), [](const ReplicationRow& r) { return !r.pass; });
      if (!out_path.empty()) std::cout << rows.size() - failed << " of " << rows.size() << " rows pass\n";
      return failed == 0 ? 0 : 1;
    }
    const auto spec = load_state_spec(spec_path);
    if (*report) {
      report_cfg.overrides = overrides;
      OutputTarget target(out_path);
      write_report_text(target.stream(), spec, report_cfg);
      target.finish();
      if (!csv_path.empty()) {
        OutputTarget csv(csv_path);
        write_csv(csv.stream(), report_rows(spec, report_cfg));
        csv.finish();
      }
    } else if (*scan) {
      scan_cfg.axis = parse_axis(axis_name);
      scan_cfg.sampling = sampling == "random" ? Sampling::random : Sampling::grid;
      scan_cfg.overrides = overrides;
      const auto rows = scan_rows(spec, scan_cfg);
      OutputTarget target(out_path);
      write_csv(target.stream(), rows);
      target.finish();
    } else if (*evolve) {
      evolve_cfg.overrides = overrides;
      OutputTarget target(out_path);
      write_evolve_csv(target.stream(), spec, evolve_cfg);
      target.finish();
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const ParseError& e) {
    std::cerr << "spec error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace pbox::cli
