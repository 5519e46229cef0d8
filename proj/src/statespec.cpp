#include "pbox/statespec.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace pbox {

namespace {

const std::vector<std::string> kCommonKeys{"kind", "L", "hbar", "mass"};

const std::map<std::string, std::vector<std::string>>& kind_keys() {
  static const std::map<std::string, std::vector<std::string>> keys{
      {"plane_waves", {"x_lo", "modes", "normalize"}},
      {"plane_wave", {"x_lo", "n"}},
      {"sine_test", {}},
      {"three_wave_packet", {"x_lo", "n", "b"}},
      {"bloch_pair", {"n", "k", "sign"}},
      {"half_box", {"n", "k"}},
      {"elementary", {"n", "k"}},
      {"bloch_sine", {"p_bar", "coeffs", "normalize"}},
      {"profile",
       {"profile", "p_bar", "K", "threshold", "center", "width", "momentum", "w_left", "w_right", "mode"}},
  };
  return keys;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double parse_real(const std::string& text, int line, const std::string& key) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v))
    throw ParseError("expected a finite number, got '" + text + "'", line, key);
  return v;
}

int parse_int(const std::string& text, int line, const std::string& key) {
  int v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw ParseError("expected an integer, got '" + text + "'", line, key);
  return v;
}

bool parse_bool(const std::string& text, int line, const std::string& key) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw ParseError("expected true or false, got '" + text + "'", line, key);
}

// "idx:re[:im], idx:re[:im], ..."
std::vector<std::pair<int, Complex>> parse_mode_list(const std::string& text, int line, const std::string& key) {
  std::vector<std::pair<int, Complex>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ParseError("empty entry in mode list", line, key);
    std::vector<std::string> parts;
    std::stringstream is(item);
    std::string part;
    while (std::getline(is, part, ':')) parts.push_back(trim(part));
    if (parts.size() < 2 || parts.size() > 3)
      throw ParseError("mode entries are index:re or index:re:im, got '" + item + "'", line, key);
    const int idx = parse_int(parts[0], line, key);
    const double re = parse_real(parts[1], line, key);
    const double im = parts.size() == 3 ? parse_real(parts[2], line, key) : 0.0;
    out.emplace_back(idx, Complex(re, im));
  }
  if (out.empty()) throw ParseError("mode list is empty", line, key);
  return out;
}

}  // namespace

std::vector<std::string> allowed_keys(const std::string& kind) {
  const auto it = kind_keys().find(kind);
  if (it == kind_keys().end()) return {};
  std::vector<std::string> out = kCommonKeys;
  out.insert(out.end(), it->second.begin(), it->second.end());
  return out;
}

StateSpec parse_state_spec(std::istream& in) {
  struct Entry {
    std::string value;
    int line;
  };
  std::map<std::string, Entry> entries;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line, "");
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    if (key.empty()) throw ParseError("missing key", line, "");
    if (value.empty()) throw ParseError("missing value", line, key);
    if (entries.count(key)) throw ParseError("duplicate key", line, key);
    entries[key] = {value, line};
  }

  const auto kind_it = entries.find("kind");
  if (kind_it == entries.end()) throw ParseError("missing required key", line, "kind");
  StateSpec spec;
  spec.kind = kind_it->second.value;
  const auto allowed = allowed_keys(spec.kind);
  if (allowed.empty()) throw ParseError("unknown kind '" + spec.kind + "'", kind_it->second.line, "kind");

  for (const auto& [key, entry] : entries) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      bool known = false;
      for (const auto& [k, extra] : kind_keys())
        known = known || std::find(extra.begin(), extra.end(), key) != extra.end();
      throw ParseError(known ? "key does not apply to kind '" + spec.kind + "'" : "unknown key", entry.line, key);
    }
    const std::string& v = entry.value;
    const int ln = entry.line;
    if (key == "kind") continue;
    if (key == "L") spec.length = parse_real(v, ln, key);
    else if (key == "x_lo") spec.x_lo = parse_real(v, ln, key);
    else if (key == "hbar") spec.hbar = parse_real(v, ln, key);
    else if (key == "mass") spec.mass = parse_real(v, ln, key);
    else if (key == "normalize") spec.normalize = parse_bool(v, ln, key);
    else if (key == "b") spec.b = parse_real(v, ln, key);
    else if (key == "n") spec.n = parse_int(v, ln, key);
    else if (key == "k") spec.k = parse_int(v, ln, key);
    else if (key == "mode") spec.mode = parse_int(v, ln, key);
    else if (key == "K") spec.truncation = parse_int(v, ln, key);
    else if (key == "threshold") spec.threshold = parse_real(v, ln, key);
    else if (key == "center") spec.center = parse_real(v, ln, key);
    else if (key == "width") spec.width = parse_real(v, ln, key);
    else if (key == "momentum") spec.momentum = parse_real(v, ln, key);
    else if (key == "w_left") spec.w_left = parse_real(v, ln, key);
    else if (key == "w_right") spec.w_right = parse_real(v, ln, key);
    else if (key == "profile") {
      if (v != "triangle" && v != "sine" && v != "gaussian" && v != "ramp")
        throw ParseError("unknown profile '" + v + "'", ln, key);
      spec.profile = v;
    } else if (key == "sign") {
      if (v == "plus") spec.sign = PairSign::plus;
      else if (v == "minus") spec.sign = PairSign::minus;
      else if (v == "none") spec.sign = PairSign::none;
      else throw ParseError("sign must be plus, minus or none", ln, key);
    } else if (key == "p_bar") {
      if (v == "auto") {
        if (spec.kind != "profile") throw ParseError("p_bar = auto is only valid for profile states", ln, key);
        spec.p_bar_auto = true;
      } else {
        spec.p_bar = parse_real(v, ln, key);
      }
    } else if (key == "modes") {
      for (const auto& [idx, amp] : parse_mode_list(v, ln, key)) spec.modes.push_back({idx, amp});
    } else if (key == "coeffs") {
      for (const auto& [idx, amp] : parse_mode_list(v, ln, key)) {
        if (idx < 1) throw ParseError("sine mode indices must be positive", ln, key);
        spec.coeffs.push_back({idx, amp});
      }
    }
  }
  if (spec.kind == "profile" && spec.profile.empty()) throw ParseError("missing required key", line, "profile");
  if (spec.kind == "plane_waves" && spec.modes.empty()) throw ParseError("missing required key", line, "modes");
  if (spec.kind == "bloch_sine" && spec.coeffs.empty()) throw ParseError("missing required key", line, "coeffs");
  return spec;
}

StateSpec parse_state_spec_text(const std::string& text) {
  std::istringstream in(text);
  return parse_state_spec(in);
}

StateSpec load_state_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open state spec '" + path + "'");
  return parse_state_spec(in);
}

Profile build_profile(const StateSpec& spec, const Constants& c) {
  const double l = spec.length.value_or(1.0);
  const double hbar = c.hbar;
  const double momentum = spec.momentum.value_or(0.0);
  Profile raw;
  if (spec.profile == "triangle") {
    raw = [l](double x) { return Complex(std::min(x, l - x)); };
  } else if (spec.profile == "sine") {
    const int j = spec.mode.value_or(1);
    if (j < 1) throw PreconditionError("sine profile mode must be positive");
    raw = [l, j](double x) { return Complex(std::sin(j * kPi * x / l)); };
  } else if (spec.profile == "gaussian") {
    const double center = spec.center.value_or(l / 2.0);
    const double width = spec.width.value_or(l / 20.0);
    if (!(width > 0.0)) throw DomainError("gaussian width must be positive");
    raw = [center, width](double x) {
      const double d = x - center;
      return Complex(std::exp(-d * d / (4.0 * width * width)));
    };
  } else if (spec.profile == "ramp") {
    const double wl = spec.w_left.value_or(l / 40.0);
    const double wr = spec.w_right.value_or(l / 20.0);
    if (!(wl > 0.0 && wr > 0.0)) throw DomainError("ramp widths must be positive");
    raw = [l, wl, wr](double x) { return Complex((1.0 - std::exp(-x / wl)) * (1.0 - std::exp(-(l - x) / wr))); };
  } else {
    throw PreconditionError("unknown profile '" + spec.profile + "'");
  }
  const double n2 = integrate([&](double x) { return std::norm(raw(x)); }, 0.0, l, 512);
  const double scale = 1.0 / std::sqrt(n2);
  return [raw, scale, momentum, hbar](double x) { return scale * std::polar(1.0, momentum * x / hbar) * raw(x); };
}

BuiltState build_state(const StateSpec& spec) {
  Constants c{spec.hbar.value_or(1.0), spec.mass.value_or(1.0)};
  c.validate();
  const double l = spec.length.value_or(spec.kind == "profile" || spec.kind == "bloch_sine" ? 1.0 : 2.0 * kPi);
  const double origin = spec.x_lo.value_or(0.0);
  const BoxDomain domain{l, origin};

  auto need_int = [&](const std::optional<int>& v, const char* key) {
    if (!v) throw PreconditionError(std::string("state kind '") + spec.kind + "' needs key '" + key + "'");
    return *v;
  };

  if (spec.kind == "plane_waves") {
    return {spec.normalize ? PlaneWaveState::normalized(domain, spec.modes) : PlaneWaveState(domain, spec.modes), c};
  }
  if (spec.kind == "plane_wave") return {plane_wave(spec.n.value_or(0), domain), c};
  if (spec.kind == "sine_test") return {sine_test_state(l), c};
  if (spec.kind == "three_wave_packet") {
    return {three_wave_packet({spec.n.value_or(1), spec.b.value_or(0.5), l, origin}), c};
  }
  if (spec.kind == "bloch_pair") {
    return {bloch_pair_state({spec.n.value_or(0), need_int(spec.k, "k"), spec.sign.value_or(PairSign::none), l}), c};
  }
  if (spec.kind == "half_box" || spec.kind == "elementary") {
    return {half_box_state({spec.n.value_or(0), spec.k.value_or(1), PairSign::none, l}, c), c};
  }
  if (spec.kind == "bloch_sine") {
    const double pbar = spec.p_bar.value_or(0.0);
    return {spec.normalize ? BlochSineState::normalized(l, pbar, spec.coeffs) : BlochSineState(l, pbar, spec.coeffs),
            c};
  }
  if (spec.kind == "profile") {
    StateSpec sized = spec;
    sized.length = l;
    const auto profile = build_profile(sized, c);
    SineProjectionOptions opt;
    if (!spec.p_bar_auto) opt.bloch_momentum = spec.p_bar.value_or(0.0);
    opt.modes = spec.truncation.value_or(opt.modes);
    opt.residual_threshold = spec.threshold.value_or(opt.residual_threshold);
    auto projection = project_to_sine(profile, l, c, opt);
    return {std::move(projection.state), c, projection.residual};
  }
  throw PreconditionError("unknown state kind '" + spec.kind + "'");
}

}  // namespace pbox
