#include "pbox/serialize.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace pbox {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_bool(bool v) { return v ? "true" : "false"; }

Fields report_fields(const UncertaintyReport& r) {
  return {{"t", format_double(r.t)},
          {"window_start", format_double(r.window.start)},
          {"window_width", format_double(r.window.width)},
          {"mean_x", format_double(r.mean_x)},
          {"mean_x2", format_double(r.mean_x2)},
          {"mean_p", format_double(r.mean_p)},
          {"mean_p2", format_double(r.mean_p2)},
          {"dx", format_double(r.dx)},
          {"dp", format_double(r.dp)},
          {"product", format_double(r.product)},
          {"bound_kind", to_string(r.bound_kind)},
          {"bound_value", format_double(r.bound_value)}};
}

Fields bound_fields(const BoundResult& b) {
  return {{"kind", to_string(b.kind)},
          {"value", format_double(b.value)},
          {"witness", b.witness ? format_double(*b.witness) : std::string()},
          {"lhs_product", format_double(b.lhs_product)},
          {"satisfied", format_bool(b.satisfied)},
          {"degenerate", format_bool(b.degenerate)}};
}

Fields judge_fields(const JudgeResult& j) {
  return {{"gamma", format_double(j.gamma)},
          {"dx_gamma", format_double(j.dx_gamma)},
          {"mean_x_at_gamma", format_double(j.mean_x_at_gamma)},
          {"curvature", format_double(j.curvature)},
          {"curvature_ok", format_bool(j.curvature_ok)},
          {"bound", format_double(j.bound)},
          {"dp", format_double(j.dp)},
          {"lhs_product", format_double(j.lhs_product)},
          {"degenerate", format_bool(j.degenerate)}};
}

Fields prefixed(const Fields& f, const std::string& prefix) {
  Fields out;
  out.reserve(f.size());
  for (const auto& [k, v] : f) out.emplace_back(prefix + k, v);
  return out;
}

void write_csv_header(std::ostream& out, const Fields& f) {
  for (std::size_t i = 0; i < f.size(); ++i) out << (i ? "," : "") << f[i].first;
  out << '\n';
}

void write_csv_row(std::ostream& out, const Fields& f) {
  for (std::size_t i = 0; i < f.size(); ++i) out << (i ? "," : "") << f[i].second;
  out << '\n';
}

void write_csv(std::ostream& out, const std::vector<Fields>& rows) {
  if (rows.empty()) return;
  write_csv_header(out, rows.front());
  for (const auto& r : rows) {
    if (r.size() != rows.front().size()) throw std::invalid_argument("csv rows have different column counts");
    write_csv_row(out, r);
  }
}

void write_text_section(std::ostream& out, const std::string& name, const Fields& f) {
  out << '[' << name << "]\n";
  for (const auto& [k, v] : f) out << k << " = " << v << '\n';
  out << '\n';
}

void write_grid_density_rows(std::ostream& out, const GridDensity& g) {
  for (std::size_t i = 0; i < g.samples.size(); ++i)
    out << format_double(g.t) << ',' << format_double(g.x(i)) << ','
        << format_double(g.samples[i]) << '\n';
}

}  // namespace pbox
