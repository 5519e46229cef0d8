#include "pbox/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace pbox {

namespace {

template <class Mode>
double norm_squared(const std::vector<Mode>& modes) {
  double sum = 0.0;
  for (const auto& m : modes) sum += std::norm(m.amplitude);
  return sum;
}

void require_finite(double x, double t) {
  if (!std::isfinite(x) || !std::isfinite(t)) throw DomainError("x and t must be finite");
}

void require_unit_norm(double n2) {
  if (std::abs(n2 - 1.0) > kNormTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "state is not normalized: sum |c|^2 = " << n2;
    throw PreconditionError(os.str(), n2);
  }
}

// Free-particle phase hbar kappa^2 t / (2m) for wavenumber kappa.
double kinetic_phase(double kappa, double t, const Constants& c) { return c.hbar * kappa * kappa * t / (2.0 * c.mass); }

}  // namespace

PlaneWaveState::PlaneWaveState(BoxDomain domain, std::vector<PlaneWaveMode> modes)
    : domain_(domain), modes_(std::move(modes)) {
  domain_.validate();
  if (modes_.empty()) throw PreconditionError("plane-wave state needs at least one mode", 0.0);
  std::set<int> seen;
  for (const auto& m : modes_) {
    if (!seen.insert(m.n).second) throw PreconditionError("duplicate plane-wave mode index " + std::to_string(m.n));
    if (!std::isfinite(m.amplitude.real()) || !std::isfinite(m.amplitude.imag()))
      throw DomainError("non-finite mode amplitude");
  }
  require_unit_norm(norm_squared(modes_));
}

PlaneWaveState PlaneWaveState::normalized(BoxDomain domain, std::vector<PlaneWaveMode> modes) {
  std::erase_if(modes, [](const PlaneWaveMode& m) { return m.amplitude == Complex{}; });
  const double n2 = norm_squared(modes);
  if (!(n2 > 0.0)) throw PreconditionError("cannot normalize a state with zero norm", n2);
  const double s = 1.0 / std::sqrt(n2);
  for (auto& m : modes) m.amplitude *= s;
  return PlaneWaveState(domain, std::move(modes));
}

BlochSineState::BlochSineState(double length, double bloch_momentum, std::vector<SineMode> coeffs)
    : length_(length), bloch_momentum_(bloch_momentum), coeffs_(std::move(coeffs)) {
  BoxDomain{length_, 0.0}.validate();
  if (!std::isfinite(bloch_momentum_)) throw DomainError("Bloch momentum must be finite");
  if (coeffs_.empty()) throw PreconditionError("Bloch-sine state needs at least one mode", 0.0);
  std::set<int> seen;
  for (const auto& m : coeffs_) {
    if (m.k < 1) throw PreconditionError("sine mode index must be positive, got " + std::to_string(m.k));
    if (!seen.insert(m.k).second) throw PreconditionError("duplicate sine mode index " + std::to_string(m.k));
  }
  require_unit_norm(norm_squared(coeffs_));
}

BlochSineState BlochSineState::normalized(double length, double bloch_momentum, std::vector<SineMode> coeffs) {
  std::erase_if(coeffs, [](const SineMode& m) { return m.amplitude == Complex{}; });
  const double n2 = norm_squared(coeffs);
  if (!(n2 > 0.0)) throw PreconditionError("cannot normalize a state with zero norm", n2);
  const double s = 1.0 / std::sqrt(n2);
  for (auto& m : coeffs) m.amplitude *= s;
  return BlochSineState(length, bloch_momentum, std::move(coeffs));
}

int BlochSineState::max_mode() const {
  int k = 0;
  for (const auto& m : coeffs_) k = std::max(k, m.k);
  return k;
}

double state_length(const State& s) {
  return std::visit([](const auto& st) { return st.length(); }, s);
}

// --- evaluation --------------------------------------------------------------

Complex evaluate(const PlaneWaveState& s, double x, double t, const Constants& c) {
  require_finite(x, t);
  const double inv_sqrt_l = 1.0 / std::sqrt(s.length());
  Complex sum{};
  for (const auto& m : s.modes()) {
    const double kappa = s.wavenumber(m.n);
    sum += m.amplitude * std::polar(inv_sqrt_l, kappa * x - kinetic_phase(kappa, t, c));
  }
  return sum;
}

Complex evaluate_gradient(const PlaneWaveState& s, double x, double t, const Constants& c) {
  require_finite(x, t);
  const double inv_sqrt_l = 1.0 / std::sqrt(s.length());
  Complex sum{};
  for (const auto& m : s.modes()) {
    const double kappa = s.wavenumber(m.n);
    sum += m.amplitude * Complex(0.0, kappa) * std::polar(inv_sqrt_l, kappa * x - kinetic_phase(kappa, t, c));
  }
  return sum;
}

Complex envelope(const BlochSineState& s, double y, double t, const Constants& c) {
  require_finite(y, t);
  const double l = s.length();
  const double norm = std::sqrt(2.0 / l);
  Complex sum{};
  for (const auto& m : s.coeffs()) {
    const double kappa = m.k * kPi / l;
    sum += m.amplitude * std::polar(norm * std::sin(kappa * y), -kinetic_phase(kappa, t, c));
  }
  return sum;
}

Complex envelope_gradient(const BlochSineState& s, double y, double t, const Constants& c) {
  require_finite(y, t);
  const double l = s.length();
  const double norm = std::sqrt(2.0 / l);
  Complex sum{};
  for (const auto& m : s.coeffs()) {
    const double kappa = m.k * kPi / l;
    sum += m.amplitude * std::polar(norm * kappa * std::cos(kappa * y), -kinetic_phase(kappa, t, c));
  }
  return sum;
}

namespace {

Complex bloch_phase(const BlochSineState& s, double x, double t, const Constants& c) {
  const double p = s.bloch_momentum();
  return std::polar(1.0, p * x / c.hbar - p * p * t / (2.0 * c.mass * c.hbar));
}

}  // namespace

Complex evaluate(const BlochSineState& s, double x, double t, const Constants& c) {
  require_finite(x, t);
  return bloch_phase(s, x, t, c) * envelope(s, x - s.node_position(t, c), t, c);
}

Complex evaluate_gradient(const BlochSineState& s, double x, double t, const Constants& c) {
  require_finite(x, t);
  const double y = x - s.node_position(t, c);
  const Complex ik(0.0, s.bloch_momentum() / c.hbar);
  return bloch_phase(s, x, t, c) * (ik * envelope(s, y, t, c) + envelope_gradient(s, y, t, c));
}

Complex evaluate(const State& s, double x, double t, const Constants& c) {
  return std::visit([&](const auto& st) { return evaluate(st, x, t, c); }, s);
}

Complex evaluate_gradient(const State& s, double x, double t, const Constants& c) {
  return std::visit([&](const auto& st) { return evaluate_gradient(st, x, t, c); }, s);
}

double density(const State& s, double x, double t, const Constants& c) { return std::norm(evaluate(s, x, t, c)); }

double reference_window_start(const State& s, double t, const Constants& c) {
  if (const auto* b = std::get_if<BlochSineState>(&s)) return b->node_position(t, c);
  return std::get<PlaneWaveState>(s).domain().origin;
}

double circle_density(const State& s, double x, double t, const Constants& c) {
  if (const auto* b = std::get_if<BlochSineState>(&s)) {
    const double node = b->node_position(t, c);
    return std::norm(envelope(*b, wrap_into(x, node, b->length()) - node, t, c));
  }
  return std::norm(evaluate(std::get<PlaneWaveState>(s), x, t, c));
}

double circle_density_gradient(const State& s, double x, double t, const Constants& c) {
  if (const auto* b = std::get_if<BlochSineState>(&s)) {
    const double node = b->node_position(t, c);
    const double y = wrap_into(x, node, b->length()) - node;
    return 2.0 * std::real(std::conj(envelope(*b, y, t, c)) * envelope_gradient(*b, y, t, c));
  }
  const auto& p = std::get<PlaneWaveState>(s);
  return 2.0 * std::real(std::conj(evaluate(p, x, t, c)) * evaluate_gradient(p, x, t, c));
}

std::vector<double> sample_circle_density(const State& s, double t, double start, double step, int count,
                                          const Constants& c) {
  std::vector<double> out(static_cast<std::size_t>(std::max(count, 0)));
  if (const auto* p = std::get_if<PlaneWaveState>(&s)) {
    // Phase recurrence per mode, re-anchored periodically to bound drift.
    require_finite(start, t);
    const double inv_sqrt_l = 1.0 / std::sqrt(p->length());
    const auto modes = p->modes();
    std::vector<Complex> term(modes.size());
    std::vector<Complex> advance(modes.size());
    for (std::size_t j = 0; j < modes.size(); ++j) advance[j] = std::polar(1.0, p->wavenumber(modes[j].n) * step);
    constexpr int kAnchor = 64;
    for (int i = 0; i < count; ++i) {
      if (i % kAnchor == 0) {
        const double x = start + i * step;
        for (std::size_t j = 0; j < modes.size(); ++j) {
          const double kappa = p->wavenumber(modes[j].n);
          term[j] = modes[j].amplitude * std::polar(inv_sqrt_l, kappa * x - kinetic_phase(kappa, t, c));
        }
      }
      Complex sum{};
      for (std::size_t j = 0; j < modes.size(); ++j) {
        sum += term[j];
        term[j] *= advance[j];
      }
      out[static_cast<std::size_t>(i)] = std::norm(sum);
    }
    return out;
  }
  const Snapshot snap(s, t, c);
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = snap.circle_density(start + i * step);
  return out;
}

Snapshot::Snapshot(const State& s, double t, const Constants& c) : t_(t) {
  if (!std::isfinite(t)) throw DomainError("t must be finite");
  length_ = state_length(s);
  if (const auto* b = std::get_if<BlochSineState>(&s)) {
    bloch_ = true;
    start_ = b->node_position(t, c);
    base_wavenumber_ = kPi / length_;
    const double norm = std::sqrt(2.0 / length_);
    for (const auto& m : b->coeffs()) {
      const double kappa = m.k * base_wavenumber_;
      index_.push_back(m.k);
      amp_.push_back(m.amplitude * std::polar(norm, -kinetic_phase(kappa, t, c)));
    }
  } else {
    const auto& p = std::get<PlaneWaveState>(s);
    start_ = p.domain().origin;
    base_wavenumber_ = 2.0 * kPi / length_;
    const double norm = 1.0 / std::sqrt(length_);
    for (const auto& m : p.modes()) {
      index_.push_back(m.n);
      amp_.push_back(m.amplitude * std::polar(norm, -kinetic_phase(p.wavenumber(m.n), t, c)));
    }
  }
  const auto [lo, hi] = std::minmax_element(index_.begin(), index_.end());
  min_index_ = *lo;
  const auto span = static_cast<std::size_t>(*hi - *lo + 1);
  if (index_.size() >= 8 && span <= 4 * index_.size()) {
    dense_.assign(span, Complex{});
    for (std::size_t j = 0; j < index_.size(); ++j) dense_[static_cast<std::size_t>(index_[j] - min_index_)] = amp_[j];
  }
}

// Plane waves: value = sum a_n e^{i kappa_n x}. Sine modes: value = sum a_k sin(kappa_k x),
// and the second slot of each pair carries the cosine sum for the gradient.
void Snapshot::sums(double x, Complex* value, Complex* gradient) const {
  Complex v{};
  Complex g{};
  const double theta = base_wavenumber_ * x;
  if (!dense_.empty()) {
    const Complex step = std::polar(1.0, theta);
    Complex w = std::polar(1.0, min_index_ * theta);
    for (std::size_t j = 0; j < dense_.size(); ++j) {
      const double kappa = (min_index_ + static_cast<int>(j)) * base_wavenumber_;
      if (bloch_) {
        v += dense_[j] * w.imag();
        g += dense_[j] * (kappa * w.real());
      } else {
        const Complex term = dense_[j] * w;
        v += term;
        g += Complex(0.0, kappa) * term;
      }
      w *= step;
    }
  } else {
    for (std::size_t j = 0; j < index_.size(); ++j) {
      const double kappa = index_[j] * base_wavenumber_;
      if (bloch_) {
        v += amp_[j] * std::sin(kappa * x);
        g += amp_[j] * (kappa * std::cos(kappa * x));
      } else {
        const Complex term = amp_[j] * std::polar(1.0, kappa * x);
        v += term;
        g += Complex(0.0, kappa) * term;
      }
    }
  }
  if (value) *value = v;
  if (gradient) *gradient = g;
}

Complex Snapshot::envelope(double y) const {
  Complex v;
  sums(y, &v, nullptr);
  return v;
}

Complex Snapshot::envelope_gradient(double y) const {
  Complex g;
  sums(y, nullptr, &g);
  return g;
}

double Snapshot::circle_density(double x) const {
  Complex v;
  sums(bloch_ ? wrap_into(x, start_, length_) - start_ : x, &v, nullptr);
  return std::norm(v);
}

double Snapshot::circle_density_gradient(double x) const {
  Complex v;
  Complex g;
  sums(bloch_ ? wrap_into(x, start_, length_) - start_ : x, &v, &g);
  return 2.0 * std::real(std::conj(v) * g);
}

// --- momentum functional -------------------------------------------------------

double mean_momentum(const Profile& profile, double length, const Constants& c, const ProfileOptions& opt) {
  c.validate();
  BoxDomain{length, 0.0}.validate();
  const double n2 = integrate([&](double x) { return std::norm(profile(x)); }, 0.0, length, opt.quadrature);
  if (std::abs(n2 - 1.0) > opt.norm_tolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "profile is not normalized on [0, L]: measured norm " << n2;
    throw PreconditionError(os.str(), n2);
  }
  if (std::abs(profile(0.0)) > opt.edge_tolerance || std::abs(profile(length)) > opt.edge_tolerance)
    throw PreconditionError("profile does not vanish at the ends of [0, L]", n2);

  const double h = length / opt.fd_grid_points;
  auto derivative = [&](double x) {
    return (-profile(x + 2 * h) + 8.0 * profile(x + h) - 8.0 * profile(x - h) + profile(x - 2 * h)) / (12.0 * h);
  };
  return c.hbar * integrate([&](double x) { return std::imag(std::conj(profile(x)) * derivative(x)); }, 0.0, length,
                            opt.quadrature);
}

double mean_momentum(const State& s, double t, const Constants& c) {
  if (const auto* p = std::get_if<PlaneWaveState>(&s)) {
    double sum = 0.0;
    for (const auto& m : p->modes()) sum += std::norm(m.amplitude) * c.hbar * p->wavenumber(m.n);
    return sum;
  }
  // <p> = pbar + <phi| (hbar/i) d/dy |phi>; the analytic matrix element
  // <s_j| d/dy |s_k> = 4 j k / (L (j^2 - k^2)) when j + k is odd, else 0.
  const auto& b = std::get<BlochSineState>(s);
  const double l = b.length();
  const auto coeffs = b.coeffs();
  Complex acc{};
  for (const auto& mj : coeffs) {
    for (const auto& mk : coeffs) {
      if ((mj.k + mk.k) % 2 == 0) continue;
      const double elem = 4.0 * mj.k * mk.k / (l * (double(mj.k) * mj.k - double(mk.k) * mk.k));
      const double ej = kinetic_phase(mj.k * kPi / l, t, c);
      const double ek = kinetic_phase(mk.k * kPi / l, t, c);
      acc += std::conj(mj.amplitude) * mk.amplitude * std::polar(elem, ej - ek);
    }
  }
  // (hbar / i) * acc; acc is purely imaginary up to roundoff.
  return b.bloch_momentum() + c.hbar * acc.imag();
}

SineProjection project_to_sine(const Profile& profile, double length, const Constants& c,
                               const SineProjectionOptions& opt) {
  c.validate();
  BoxDomain{length, 0.0}.validate();
  if (opt.modes < 1) throw PreconditionError("sine projection needs at least one mode");

  const double pbar = opt.bloch_momentum ? *opt.bloch_momentum : mean_momentum(profile, length, c, opt.profile);
  const int panels = std::max(opt.profile.quadrature.panels, opt.modes + (opt.modes % 2));
  const auto rule = composite_rule(0.0, length, panels);

  std::vector<Complex> stripped(rule.nodes.size());
  double n2 = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i];
    const Complex g = profile(x);
    n2 += rule.weights[i] * std::norm(g);
    stripped[i] = std::polar(1.0, -pbar * x / c.hbar) * g;
  }
  if (!(n2 > 0.0)) throw PreconditionError("profile has zero norm", n2);
  const double amp_scale = 1.0 / std::sqrt(n2);
  if (std::abs(profile(0.0)) * amp_scale > opt.profile.edge_tolerance ||
      std::abs(profile(length)) * amp_scale > opt.profile.edge_tolerance)
    throw PreconditionError("profile does not vanish at the ends of [0, L]", n2);

  const double basis_norm = std::sqrt(2.0 / length);
  std::vector<SineMode> coeffs;
  coeffs.reserve(static_cast<std::size_t>(opt.modes));
  double captured = 0.0;
  for (int k = 1; k <= opt.modes; ++k) {
    const double kappa = k * kPi / length;
    Complex ck{};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      ck += rule.weights[i] * basis_norm * std::sin(kappa * rule.nodes[i]) * stripped[i];
    captured += std::norm(ck);
    coeffs.push_back({k, ck});
  }
  const double residual = 1.0 - captured / n2;
  if (residual > opt.residual_threshold) {
    std::ostringstream os;
    os << "sine projection truncation residual " << residual << " exceeds " << opt.residual_threshold;
    throw TruncationError(os.str(), residual);
  }
  return {BlochSineState::normalized(length, pbar, std::move(coeffs)), residual};
}

// --- recurrence -----------------------------------------------------------------

double recurrence_period(const State& s, const Constants& c) {
  c.validate();
  const double l = state_length(s);
  long long g = 0;
  double base = 0.0;
  auto accumulate = [&](auto indices) {
    const long long first = static_cast<long long>(indices.front()) * indices.front();
    for (auto n : indices) g = std::gcd(g, std::llabs(static_cast<long long>(n) * n - first));
  };
  if (const auto* p = std::get_if<PlaneWaveState>(&s)) {
    std::vector<int> idx;
    for (const auto& m : p->modes()) idx.push_back(m.n);
    accumulate(idx);
    base = c.mass * l * l / (kPi * c.hbar);
  } else {
    std::vector<int> idx;
    for (const auto& m : std::get<BlochSineState>(s).coeffs()) idx.push_back(m.k);
    accumulate(idx);
    base = 4.0 * c.mass * l * l / (kPi * c.hbar);
  }
  return g == 0 ? base : base / static_cast<double>(g);
}

double GridDensity::trapezoid_integral() const {
  if (samples.size() < 2) return 0.0;
  const double h = width / static_cast<double>(samples.size() - 1);
  double sum = 0.5 * (samples.front() + samples.back());
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) sum += samples[i];
  return sum * h;
}

GridDensity sample_grid_density(const State& s, double t, double start, int points, const Constants& c) {
  if (points < 2) throw PreconditionError("grid density needs at least two points");
  const double l = state_length(s);
  GridDensity g{start, l, t, {}};
  g.samples = sample_circle_density(s, t, start, l / (points - 1), points, c);
  return g;
}

}  // namespace pbox
