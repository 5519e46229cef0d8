#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "pbox/bounds.hpp"
#include "pbox/moments.hpp"
#include "pbox/state.hpp"

namespace pbox {

using Field = std::pair<std::string, std::string>;
using Fields = std::vector<Field>;

/// 17 significant digits, "." decimal separator, locale independent.
std::string format_double(double v);
std::string format_bool(bool v);

/// Column order: t, window_start, window_width, mean_x, mean_x2, mean_p, mean_p2, dx, dp, product,
/// bound_kind, bound_value.
Fields report_fields(const UncertaintyReport& r);
/// Column order: kind, value, witness, lhs_product, satisfied, degenerate. A missing witness is empty.
Fields bound_fields(const BoundResult& b);
/// Column order: gamma, dx_gamma, mean_x_at_gamma, curvature, curvature_ok, bound, dp, lhs_product, degenerate.
Fields judge_fields(const JudgeResult& j);

/// Prefixes every key, e.g. "judge_" + "gamma".
Fields prefixed(const Fields& f, const std::string& prefix);

void write_csv_header(std::ostream& out, const Fields& f);
void write_csv_row(std::ostream& out, const Fields& f);
/// Header row followed by one row per entry; all entries must share the same keys.
void write_csv(std::ostream& out, const std::vector<Fields>& rows);

/// `[name]` followed by `key = value` lines and a blank line.
void write_text_section(std::ostream& out, const std::string& name, const Fields& f);

/// One `t,x,density` row per sample, without a header.
void write_grid_density_rows(std::ostream& out, const GridDensity& g);

}  // namespace pbox
