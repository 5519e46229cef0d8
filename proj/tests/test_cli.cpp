#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "pbox/catalog.hpp"
#include "pbox/cli.hpp"

using namespace pbox;
using namespace pbox::cli;

namespace {

const Constants kUnit{};

std::map<std::string, std::string> as_map(const Fields& f) { return {f.begin(), f.end()}; }

double num(const Fields& f, const std::string& key) { return std::stod(as_map(f).at(key)); }

std::string csv_text(const std::vector<Fields>& rows) {
  std::ostringstream os;
  write_csv(os, rows);
  return os.str();
}

int run_args(std::vector<std::string> args) {
  args.insert(args.begin(), "pbox");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run(static_cast<int>(argv.size()), argv.data());
}

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "pbox_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write_spec(const std::string& name, const std::string& text) {
  const auto path = scratch_dir() / name;
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("replication table passes") {
  const auto rows = replication_table();
  REQUIRE(rows.size() > 20);
  std::set<std::string> ids;
  for (const auto& r : rows) {
    CHECK_MESSAGE(r.pass, r.id);
    CHECK(ids.insert(r.id).second);
    CHECK((r.tolerance == kAnalyticTolerance || r.tolerance == kQuadratureTolerance || r.tolerance <= 1e-6));
  }
  for (const char* id : {"packet-maxmin-bound-b0.5", "elementary-product-k1-value", "planewave-dx"})
    CHECK(ids.count(id) == 1);
  std::ostringstream os;
  write_replication_csv(os, rows);
  CHECK(os.str().rfind("id,closed,computed,abs_diff,tolerance,result\n", 0) == 0);
}

TEST_CASE("report rows") {
  ReportConfig cfg;
  const auto packet = report_rows(parse_state_spec_text("kind = three_wave_packet\nb = 0.5\n"), cfg);
  REQUIRE(packet.size() == 5);
  std::set<std::string> kinds;
  for (const auto& r : packet) {
    CHECK(as_map(r).at("satisfied") == "true");
    kinds.insert(as_map(r).at("bound_kind"));
  }
  CHECK(kinds == std::set<std::string>{"cut", "min_density", "maxmin", "judge", "trig"});

  const auto pw = report_rows(parse_state_spec_text("kind = plane_wave\nn = 2\n"), cfg);
  for (const auto& r : pw) {
    const auto kind = as_map(r).at("bound_kind");
    if (kind == "min_density" || kind == "judge") CHECK(std::abs(num(r, "bound_value")) < 1e-12);
  }

  cfg.t = 1.0;
  const auto hb = report_rows(parse_state_spec_text("kind = half_box\nn = 4\nk = 1\n"), cfg);
  for (const auto& r : hb) {
    if (as_map(r).at("bound_kind") != "min_density") continue;
    CHECK(num(r, "bound_value") == doctest::Approx(0.5));
    CHECK(num(r, "product") == doctest::Approx(0.567862).epsilon(1e-6));
  }

  std::ostringstream text;
  write_report_text(text, parse_state_spec_text("kind = half_box\nn = 4\nk = 1\n"), cfg);
  for (const char* section : {"[state]", "[report]", "[bound.cut]", "[bound.min_density]", "[bound.maxmin]",
                              "[bound.judge]", "[bound.trig]", "[judge]", "[chain]", "[boundary]"})
    CHECK(text.str().find(section) != std::string::npos);
}

TEST_CASE("scan over b follows the closed-form bound") {
  ScanConfig cfg;
  cfg.axis = Axis::b;
  cfg.from = 0.1;
  cfg.to = 4.0;
  cfg.steps = 12;
  const auto rows = scan_rows(parse_state_spec_text("kind = three_wave_packet\n"), cfg);
  REQUIRE(rows.size() == 12);
  for (const auto& r : rows) {
    const double b = num(r, "b");
    CHECK(num(r, "maxmin_bound") == doctest::Approx(0.5 * (1.0 - 1.0 / (1.0 + 2.0 * b * b))).epsilon(1e-9));
  }
}

TEST_CASE("scan over t traces the piecewise minimum") {
  const ThreeWavePacketParams p{1, 0.3, 2.0 * kPi, 0.0};
  ScanConfig cfg;
  cfg.axis = Axis::t;
  cfg.from = 0.0;
  cfg.to = recurrence_period(three_wave_packet(p), kUnit);
  cfg.steps = 65;
  const auto rows = scan_rows(parse_state_spec_text("kind = three_wave_packet\nb = 0.3\n"), cfg);
  std::set<int> branches;
  for (const auto& r : rows) {
    const auto closed = packet_min_and_maxmin(p, num(r, "t"), kUnit);
    branches.insert(closed.branch);
    CHECK(num(r, "L_min_density") == doctest::Approx(*closed.scaled_min_density).epsilon(1e-9));
  }
  CHECK(branches.size() == 2);
}

TEST_CASE("boundary force halves when the box doubles") {
  const auto spec = parse_state_spec_text(
      "kind = profile\nprofile = ramp\nw_left = 0.25\nw_right = 0.5\np_bar = 0\n");
  double previous = 0.0;
  for (double l : {12.5, 25.0, 50.0}) {
    ScanConfig cfg;
    cfg.axis = Axis::L;
    cfg.from = l;
    cfg.to = l;
    cfg.steps = 2;
    auto s = spec;
    s.truncation = static_cast<int>(std::lround(16 * l));
    const double force = std::abs(num(scan_rows(s, cfg).front(), "boundary_force"));
    if (previous > 0.0) CHECK(previous / force == doctest::Approx(2.0).epsilon(0.05));
    previous = force;
  }
}

TEST_CASE("scan output is deterministic") {
  const auto spec = parse_state_spec_text("kind = three_wave_packet\nb = 0.7\n");
  ScanConfig cfg;
  cfg.axis = Axis::t;
  cfg.from = 0.0;
  cfg.to = 3.0;
  cfg.steps = 9;
  cfg.threads = 1;
  const auto one = csv_text(scan_rows(spec, cfg));
  cfg.threads = 4;
  CHECK(csv_text(scan_rows(spec, cfg)) == one);

  cfg.sampling = Sampling::random;
  cfg.seed = 42;
  const auto a = csv_text(scan_rows(spec, cfg));
  CHECK(csv_text(scan_rows(spec, cfg)) == a);
  cfg.seed = 43;
  CHECK(csv_text(scan_rows(spec, cfg)) != a);
  const auto values = sweep_values(cfg);
  CHECK(std::is_sorted(values.begin(), values.end()));

  CHECK(one.find('\r') == std::string::npos);
  CHECK(one.substr(0, one.find('\n')).find("t,") == 0);
}

TEST_CASE("scan rejects bad configurations") {
  const auto spec = parse_state_spec_text("kind = half_box\nn = 1\nk = 1\n");
  ScanConfig cfg;
  cfg.axis = Axis::b;
  CHECK_THROWS(scan_rows(spec, cfg));
  cfg.axis = Axis::k;
  cfg.steps = 1;
  CHECK_THROWS(scan_rows(spec, cfg));
  CHECK_THROWS(parse_axis("z"));
  CHECK(parse_axis("K") == Axis::K);
}

TEST_CASE("evolve frames") {
  auto frames = [](const std::string& spec_text, int n_frames, std::optional<double> t_end) {
    std::ostringstream os;
    EvolveConfig cfg;
    cfg.frames = n_frames;
    cfg.grid = 513;
    cfg.t_end = t_end;
    write_evolve_csv(os, parse_state_spec_text(spec_text), cfg);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,x,density");
    std::map<double, std::vector<std::pair<double, double>>> out;
    while (std::getline(in, line)) {
      double t, x, d;
      char c1, c2;
      std::istringstream(line) >> t >> c1 >> x >> c2 >> d;
      out[t].emplace_back(x, d);
    }
    return out;
  };
  auto norm = [](const std::vector<std::pair<double, double>>& f) {
    double s = 0.0;
    for (std::size_t i = 1; i < f.size(); ++i) s += 0.5 * (f[i].second + f[i - 1].second) * (f[i].first - f[i - 1].first);
    return s;
  };

  const auto hb = frames("kind = half_box\nn = 4\nk = 1\n", 16, std::nullopt);
  REQUIRE(hb.size() == 16);
  for (const auto& [t, f] : hb) {
    CHECK(norm(f) == doctest::Approx(1.0).epsilon(1e-8));
    const auto it = std::min_element(f.begin(), f.end(), [](auto& a, auto& b) { return a.second < b.second; });
    const double node = 2.0 * t;
    CHECK(it->first == doctest::Approx(it == f.begin() ? node : node + 2.0 * kPi).epsilon(1e-12));
  }

  const auto pw = frames("kind = plane_wave\nn = 3\n", 4, 5.0);
  for (const auto& [t, f] : pw)
    for (const auto& [x, d] : f) CHECK(d == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-13));

  const ThreeWavePacketParams p{1, 0.5, 2.0 * kPi, 0.0};
  const double period = recurrence_period(three_wave_packet(p), kUnit);
  const auto pk = frames("kind = three_wave_packet\nb = 0.5\n", 16, period);
  const auto& at_alpha_one = std::next(pk.begin(), 8);
  CHECK(packet_alpha(p, at_alpha_one->first, kUnit) == doctest::Approx(1.0));
  const auto it = std::min_element(at_alpha_one->second.begin(), at_alpha_one->second.end(),
                                   [](auto& a, auto& b) { return a.second < b.second; });
  CHECK(it->second < 1e-12);
  const double zero = std::fmod(p.n * 1.0 * p.length, p.length);
  CHECK(std::min(std::abs(it->first - zero), std::abs(it->first - zero - p.length)) < 1e-12);
}

TEST_CASE("output directory from the environment") {
  ::setenv("PBOX_OUTPUT_DIR", "/tmp/pbox-out", 1);
  CHECK(resolve_output_path("a.csv") == "/tmp/pbox-out/a.csv");
  CHECK(resolve_output_path("/abs/b.csv") == "/abs/b.csv");
  ::unsetenv("PBOX_OUTPUT_DIR");
  CHECK(resolve_output_path("a.csv") == "a.csv");
}

TEST_CASE("command line runs") {
  const auto dir = scratch_dir();
  const auto good = write_spec("packet.state", "kind = three_wave_packet\nb = 0.5\n");
  const auto bad = write_spec("bad.state", "kind = three_wave_packet\nb = 0.5\nwidth = 3\n");

  CHECK(run_args({"replicate", "--out", (dir / "rep.csv").string()}) == 0);
  CHECK(std::filesystem::file_size(dir / "rep.csv") > 100);
  CHECK(run_args({"report", "--spec", good, "--t", "0", "--out", (dir / "r.txt").string(), "--csv",
                  (dir / "r.csv").string()}) == 0);
  CHECK(run_args({"report", "--spec", bad}) == 2);
  CHECK(run_args({"scan", "--spec", good, "--axis", "q", "--from", "0", "--to", "1", "--steps", "3"}) != 0);
  CHECK(run_args({"scan", "--spec", good, "--axis", "b", "--from", "0.5", "--to", "1", "--steps", "1"}) != 0);
  CHECK(run_args({"evolve", "--spec", good, "--frames", "2", "--grid", "9", "--out", "/nonexistent/dir/x.csv"}) == 4);
  CHECK(run_args({"evolve", "--spec", (dir / "missing.state").string()}) != 0);

  ::setenv("PBOX_OUTPUT_DIR", dir.string().c_str(), 1);
  CHECK(run_args({"scan", "--spec", good, "--axis", "t", "--from", "0", "--to", "1", "--steps", "3", "--out",
                  "scan.csv"}) == 0);
  ::unsetenv("PBOX_OUTPUT_DIR");
  CHECK(std::filesystem::exists(dir / "scan.csv"));
}

TEST_CASE("installed tool with the shipped state files") {
  const char* tool = std::getenv("PBOX_TOOL");
  const char* states = std::getenv("PBOX_STATES");
  if (tool == nullptr || states == nullptr) return;
  const auto out = scratch_dir() / "tool_report.txt";
  for (const char* name : {"packet.state", "half_box.state", "plane_wave.state"}) {
    const std::string cmd = std::string(tool) + " report --spec " + states + "/" + name + " --t 0.5 --out " +
                            out.string() + " > /dev/null";
    CHECK_MESSAGE(std::system(cmd.c_str()) == 0, name);
  }
}
