#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "expr.hpp"
#include "knotflow/beltrami.hpp"
#include "knotflow/contactgeom.hpp"
#include "knotflow/errors.hpp"
#include "knotflow/flowdyn.hpp"
#include "knotflow/knotinv.hpp"
#include "knotflow/lorenz_template.hpp"

namespace knotflow::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Input errors raised by the front end itself.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Output {
  std::string stdout_text;
  std::optional<fs::path> file;
  std::string file_text;
  int code = kOk;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json complex_json(std::complex<double> c) { return {{"re", c.real()}, {"im", c.imag()}}; }

json point_json(const Point3& q) { return json::array({q.x(), q.y(), q.z()}); }

fs::path resolve_out(const std::string& path) {
  fs::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("KNOTFLOW_OUT_DIR"); dir != nullptr && *dir != '\0')
      p = fs::path(dir) / p;
  }
  return p;
}

void write_atomically(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    f << text;
    f.close();
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw UsageError("cannot write " + path.string());
    }
  }
  fs::rename(tmp, path);
}

// Tiny RNG helper: uniform doubles in [0, 1) from the top 53 bits.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : gen_(seed) {}
  double operator()() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

beltrami::AbcParams parse_params(const std::string& a, const std::string& b, const std::string& c) {
  return {eval_expr(a), eval_expr(b), eval_expr(c)};
}

json params_json(const beltrami::AbcParams& p) { return {{"A", p.A()}, {"B", p.B()}, {"C", p.C()}}; }

flow::Axis parse_axis(std::string_view s) {
  if (s == "x") return flow::Axis::X;
  if (s == "y") return flow::Axis::Y;
  if (s == "z") return flow::Axis::Z;
  throw UsageError("section coordinate must be x, y or z, got \"" + std::string(s) + "\"");
}

const char* axis_name(flow::Axis a) {
  switch (a) {
    case flow::Axis::X: return "x";
    case flow::Axis::Y: return "y";
    case flow::Axis::Z: return "z";
  }
  return "?";
}

contact::CircleMap parse_monodromy(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw UsageError("monodromy must be rot:DELTA or sin:a,b");
  const std::string kind = s.substr(0, colon), args = s.substr(colon + 1);
  const std::vector<double> v = eval_list(args);
  if (kind == "rot" && v.size() == 1) return contact::CircleMap::rotation(v[0]);
  if (kind == "sin" && v.size() == 2) return contact::CircleMap::sine(v[0], v[1]);
  throw UsageError("monodromy must be rot:DELTA or sin:a,b, got \"" + s + "\"");
}

contact::GridSize parse_grid(const std::string& s) {
  const auto x = s.find('x');
  if (x == std::string::npos) throw UsageError("grid must look like 256x257");
  try {
    return {std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
  } catch (const std::exception&) {
    throw UsageError("grid must look like 256x257");
  }
}

lorenz::CyclicWord parse_word(const std::string& s) {
  lorenz::CyclicWord w(s);
  if (!w.aperiodic()) throw PeriodicWord("\"" + s + "\" is a proper power");
  return w;
}

// ---------------------------------------------------------------- commands

struct BeltramiCheck {
  std::string A, B, C;
  int samples = 1000;
  std::uint64_t seed = 1;
  int grid = 64;
  double h = 1e-4;
  double curl_tol = 1e-6, div_tol = 1e-7, reeb_r1_tol = 1e-12, reeb_r2_tol = 1e-5;

  Output operator()() const {
    if (samples < 1) throw UsageError("--samples must be positive");
    if (!(h > 0.0)) throw UsageError("--fd-step must be positive");
    const beltrami::AbcParams raw = parse_params(A, B, C);
    const beltrami::AbcParams p = beltrami::normalize(raw).params;

    Uniform rng(seed);
    double curl = 0.0, curl_half = 0.0, div = 0.0, r1 = 0.0, r2 = 0.0, density = 0.0;
    int skipped = 0;
    for (int k = 0; k < samples; ++k) {
      const Point3 q(kTwoPi * rng(), kTwoPi * rng(), kTwoPi * rng());
      const Vec3 u = beltrami::abc_velocity(p, q);
      curl = std::fmax(curl, sup_norm(beltrami::abc_curl(p, q, beltrami::FiniteDifference{h}) - u));
      curl_half = std::fmax(curl_half, sup_norm(beltrami::abc_curl(p, q, beltrami::FiniteDifference{h / 2}) - u));
      div = std::fmax(div, std::fabs(beltrami::abc_divergence(p, q, h)));
      density = std::fmax(density, std::fabs(beltrami::contact_volume_density(p, q, h) - dot(u, u)));
      if (norm(u) < 1e-6) {
        ++skipped;
        continue;
      }
      const beltrami::ReebResidual r = beltrami::reeb_residual(p, q, h);
      r1 = std::fmax(r1, r.r1);
      r2 = std::fmax(r2, r.r2);
    }

    const beltrami::SingularityReport s = beltrami::abc_singular_points(p, grid);
    json zeros = json::array();
    for (const Point3& z : s.zeros) zeros.push_back(point_json(z));

    const bool residuals_ok = curl < curl_tol && div < div_tol && r1 < reeb_r1_tol && r2 < reeb_r2_tol;
    json report = {
        {"params", params_json(raw)},
        {"normalized", params_json(p)},
        {"samples", samples},
        {"seed", seed},
        {"h", h},
        {"curl_residual", curl},
        {"curl_order_ratio", curl_half > 0.0 ? curl / curl_half : 0.0},
        {"divergence_residual", div},
        {"contact_density_residual", density},
        {"reeb_residual", {{"r1", r1}, {"r2", r2}, {"skipped", skipped}}},
        {"singularity",
         {{"nonsingular", s.nonsingular},
          {"analytic_nonsingular", p.is_nonsingular()},
          {"min_speed", s.min_speed},
          {"argmin", point_json(s.argmin)},
          {"lower_bound", s.lower_bound},
          {"zeros", zeros}}},
        {"ok", residuals_ok && s.nonsingular},
    };
    Output o;
    o.stdout_text = report.dump(2) + "\n";
    o.code = residuals_ok && s.nonsingular ? kOk : kPropertyViolation;
    return o;
  }
};

struct FlowIntegrate {
  std::string A, B, C, x0;
  std::string t_end;
  double tol = 1e-10;
  std::string out;

  Output operator()() const {
    const beltrami::AbcParams p = parse_params(A, B, C);
    const std::vector<double> q = eval_list(x0);
    if (q.size() != 3) throw UsageError("--x0 needs three coordinates x,y,z");
    const double t1 = eval_expr(t_end);
    if (!(t1 >= 0.0)) throw UsageError("--t-end must be non-negative");
    if (!(tol > 0.0)) throw UsageError("--tol must be positive");
    const flow::Trajectory tr = flow::integrate(p, Point3(q[0], q[1], q[2]), t1, tol);
    std::string csv = "t,x,y,z\n";
    for (const flow::Sample& s : tr.samples)
      csv += num(s.t) + "," + num(s.q.x()) + "," + num(s.q.y()) + "," + num(s.q.z()) + "\n";
    Output o;
    if (out.empty()) {
      o.stdout_text = std::move(csv);
    } else {
      o.file = resolve_out(out);
      o.file_text = std::move(csv);
    }
    return o;
  }
};

struct FlowOrbit {
  std::string A, B, C, section, guess;
  std::optional<int> direction;
  double tol = 1e-10;
  int max_iter = 50;
  double max_time = 100.0;
  double product_tol = 1e-6;

  Output operator()() const {
    const beltrami::AbcParams p = parse_params(A, B, C);
    const auto eq = section.find('=');
    if (eq == std::string::npos) throw UsageError("--section must look like y=0");
    const flow::Axis axis = parse_axis(section.substr(0, eq));
    const double value = eval_expr(section.substr(eq + 1));
    const int c = static_cast<int>(axis);

    const std::vector<double> g = eval_list(guess);
    std::array<double, 3> q{};
    if (g.size() == 2) {
      for (int i = 0, k = 0; i < 3; ++i) q[i] = i == c ? value : g[k++];
    } else if (g.size() == 3) {
      q = {g[0], g[1], g[2]};
      q[c] = value;
    } else {
      throw UsageError("--guess needs the two off-section coordinates (or all three)");
    }

    int dir = 0;
    if (direction) {
      dir = *direction;
    } else {
      const double uc = beltrami::abc_velocity(p, q[0], q[1], q[2])[c];
      if (uc == 0.0) throw UsageError("flow is tangent to the section at the guess; pass --direction");
      dir = uc > 0.0 ? 1 : -1;
    }
    if (dir != 1 && dir != -1) throw UsageError("--direction must be 1 or -1");

    flow::ShootingOptions opts;
    opts.tol = tol;
    opts.max_iter = max_iter;
    opts.max_time = max_time;
    const flow::PeriodicOrbit orbit =
        flow::find_periodic_orbit(p, flow::SectionSpec(axis, value, dir), Point3(q[0], q[1], q[2]), opts);
    const flow::Multipliers& m = orbit.multipliers;
    const double product_error = std::abs(m.product() - 1.0);

    json report = {
        {"params", params_json(p)},
        {"section", {{"coordinate", axis_name(axis)}, {"value", orbit.section.value}, {"direction", dir}}},
        {"base", point_json(orbit.base)},
        {"period", orbit.period},
        {"residual", orbit.residual},
        {"multipliers",
         {{"first", complex_json(m.first)},
          {"second", complex_json(m.second)},
          {"kind", flow::to_string(m.kind)},
          {"product_error", product_error}}},
    };
    Output o;
    o.stdout_text = report.dump(2) + "\n";
    o.code = product_error <= product_tol ? kOk : kPropertyViolation;
    return o;
  }
};

struct FlowSplitting {
  std::string B = "0.5", C;
  int samples = 128;
  double offset = 1e-7;
  std::string out;

  Output operator()() const {
    const double b = eval_expr(B), c = eval_expr(C);
    if (samples < 4) throw UsageError("--samples must be at least 4");
    flow::SplittingOptions opts;
    opts.offset = offset;
    const flow::SplittingProfile prof = flow::separatrix_splitting({1.0, b, 0.0}, c, samples, opts);
    std::string csv = "section_param,signed_distance\n";
    for (std::size_t i = 0; i < prof.section_param.size(); ++i)
      csv += num(prof.section_param[i]) + "," + num(prof.signed_distance[i]) + "\n";
    Output o;
    if (out.empty()) {
      o.stdout_text = std::move(csv);
    } else {
      o.file = resolve_out(out);
      o.file_text = std::move(csv);
    }
    return o;
  }
};

struct ContactAnnulus {
  std::string monodromy, eps = "1", out, grid = "256x257";
  std::optional<int> winding;
  double tol = 1e-4;
  double transversality_tol = 1e-6;

  Output operator()() const {
    const contact::CircleMap f = parse_monodromy(monodromy);
    const double e = eval_expr(eps);
    if (!(e > 0.0)) throw UsageError("--eps must be positive");
    const contact::GridSize gs = parse_grid(grid);
    if (gs.n_theta < 8 || gs.n_z < 3) throw UsageError("grid too small (need at least 8x3)");

    const contact::AnnulusSurface a = contact::annulus_from_monodromy(f, e, gs, winding);
    const contact::CircleMap back = contact::annulus_monodromy(a);
    const double err = back.distance(f);
    const contact::TransversalityReport tr = contact::transversality_check(a, transversality_tol);
    double g_min = a.values().front();
    for (double v : a.values()) g_min = std::fmin(g_min, v);

    std::ostringstream csv;
    contact::write_surface_csv(csv, a);

    const bool ok = err <= tol && tr.transverse;
    json report = {
        {"monodromy", monodromy},
        {"eps", e},
        {"grid", json::array({gs.n_theta, gs.n_z})},
        {"winding", a.winding()},
        {"g_min", g_min},
        {"roundtrip_error", err},
        {"transverse", tr.transverse},
        {"tangencies", tr.tangencies.size()},
        {"min_sine", tr.min_sine},
        {"ok", ok},
    };
    Output o;
    o.file = resolve_out(out);
    o.file_text = csv.str();
    o.stdout_text = report.dump(2) + "\n";
    o.code = ok ? kOk : kPropertyViolation;
    return o;
  }
};

struct TemplateOptions {
  int m = 0, n = 0;
  bool star = false;
  lorenz::TemplateSpec spec() const { return lorenz::lorenz_like(m, n, star); }
};

struct TemplateWords {
  int max_len = 0;
  Output operator()() const {
    if (max_len < 1) throw UsageError("--max-len must be positive");
    Output o;
    for (const lorenz::CyclicWord& w : lorenz::enumerate_words(max_len)) o.stdout_text += w.symbols() + "\n";
    return o;
  }
};

struct TemplateKnots {
  TemplateOptions t;
  int max_len = 0;
  Output operator()() const {
    if (max_len < 1) throw UsageError("--max-len must be positive");
    const lorenz::TemplateSpec spec = t.spec();
    Output o;
    for (const lorenz::CyclicWord& w : lorenz::enumerate_words(max_len)) {
      const knots::KnotReport r = knots::knot_report(w.symbols(), lorenz::word_to_braid(spec, w));
      o.stdout_text += knots::to_json(r).dump() + "\n";
    }
    return o;
  }
};

struct TemplateLink {
  TemplateOptions t;
  std::string w1, w2, method = "combinatorial";
  Output operator()() const {
    const lorenz::TemplateSpec spec = t.spec();
    const lorenz::CyclicWord a = parse_word(w1), b = parse_word(w2);
    long lk = 0;
    if (method == "combinatorial") {
      lk = lorenz::pair_linking(spec, a, b);
    } else {
      if (a == b) throw SameOrbit("the two words describe the same orbit");
      const std::vector<PLCurve> c = lorenz::words_to_curves(spec, {a, b});
      const knots::LinkingMethod lm =
          method == "crossings" ? knots::LinkingMethod::SignedCrossings : knots::LinkingMethod::Quadrature;
      lk = std::lround(knots::gauss_linking(c[0], c[1], lm));
    }
    Output o;
    o.stdout_text = std::to_string(lk) + "\n";
    return o;
  }
};

struct TemplateUniversal {
  TemplateOptions t;
  Output operator()() const {
    Output o;
    o.stdout_text = std::string(lorenz::to_string(lorenz::universal_predicate(t.m, t.n, t.star))) + "\n";
    return o;
  }
};

struct TemplateCurve {
  TemplateOptions t;
  std::string word, out;
  Output operator()() const {
    const PLCurve c = lorenz::word_to_curve(t.spec(), parse_word(word));
    std::string csv = "x,y,z\n";
    for (const Vec3& v : c.vertices()) csv += num(v.vx) + "," + num(v.vy) + "," + num(v.vz) + "\n";
    Output o;
    if (out.empty()) {
      o.stdout_text = std::move(csv);
    } else {
      o.file = resolve_out(out);
      o.file_text = std::move(csv);
    }
    return o;
  }
};

struct TightReebCmd {
  std::string point;
  double tol = 1e-12;
  Output operator()() const {
    const std::vector<double> x = eval_list(point);
    if (x.size() != 4) throw UsageError("--point needs four coordinates");
    const beltrami::TightReeb r = beltrami::std_tight_eval(beltrami::Point4(x[0], x[1], x[2], x[3]));
    const bool ok = std::fabs(r.alpha_on_reeb - 1.0) <= tol;
    json report = {
        {"point", x},
        {"reeb", {r.reeb[0] + 0.0, r.reeb[1] + 0.0, r.reeb[2] + 0.0, r.reeb[3] + 0.0}},
        {"alpha_on_reeb", r.alpha_on_reeb},
        {"dalpha_residual", r.dalpha_residual},
        {"ok", ok},
    };
    Output o;
    o.stdout_text = report.dump(2) + "\n";
    o.code = ok ? kOk : kPropertyViolation;
    return o;
  }
};

// ------------------------------------------------------------ config files

// Flags that take no value on the command line.
bool is_flag(const std::string& key) { return key == "star"; }

// Replaces `--config FILE` by the flags it lists. Command-line flags win
// over the file; keys are validated by the parser like any other flag.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::optional<std::string> file;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file");
      file = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      file = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (!file) return args;

  std::ifstream in(*file);
  if (!in) throw UsageError("cannot read config file " + *file);
  auto given = [&](const std::string& key) {
    for (const std::string& a : args)
      if (a == "--" + key || a.rfind("--" + key + "=", 0) == 0) return true;
    return false;
  };
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(*file + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty() || key == "config")
      throw UsageError(*file + ":" + std::to_string(lineno) + ": bad key");
    if (given(key)) continue;
    if (is_flag(key)) {
      if (value == "true" || value == "1") args.push_back("--" + key);
      else if (value != "false" && value != "0")
        throw UsageError(*file + ":" + std::to_string(lineno) + ": " + key + " takes true or false");
    } else {
      args.push_back("--" + key + "=" + value);
    }
  }
  return args;
}

int exit_code_for(const Error& e) {
  const std::string& k = e.kind();
  if (k == "NoConvergence" || k == "NoReturn" || k == "StepUnderflow" || k == "SingularPoint")
    return kPropertyViolation;
  return kInvalidInput;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"knotflow: ABC flows, contact annuli and knotted orbits on Lorenz-like templates"};
  app.name("knotflow");
  app.require_subcommand(1);
  std::string config_help;
  app.add_option("--config", config_help,
                 "File of key=value lines (# comments) supplying flags of the chosen command");

  auto abc = [](CLI::App* s, std::string& A, std::string& B, std::string& C) {
    s->add_option("--A", A, "ABC parameter A")->required();
    s->add_option("--B", B, "ABC parameter B")->required();
    s->add_option("--C", C, "ABC parameter C")->required();
  };
  auto template_opts = [](CLI::App* s, TemplateOptions& t) {
    s->add_option("--m", t.m, "full twists of the x ear")->capture_default_str();
    s->add_option("--n", t.n, "full twists of the y ear")->capture_default_str();
    s->add_flag("--star", t.star, "reverse the branch line crossing (L*)");
  };

  // beltrami
  CLI::App* beltrami_cmd = app.add_subcommand("beltrami", "ABC field identities");
  beltrami_cmd->require_subcommand(1);
  BeltramiCheck bc;
  CLI::App* check = beltrami_cmd->add_subcommand(
      "check", "Sample curl, divergence and Reeb residuals and certify nonsingularity (JSON)");
  abc(check, bc.A, bc.B, bc.C);
  check->add_option("--samples", bc.samples, "random sample points")->capture_default_str();
  check->add_option("--seed", bc.seed, "seed of the sampler")->capture_default_str();
  check->add_option("--grid", bc.grid, "grid size per axis of the singularity scan")->capture_default_str();
  check->add_option("--fd-step", bc.h, "finite-difference step")->capture_default_str();
  check->add_option("--curl-tol", bc.curl_tol, "bound on the curl residual")->capture_default_str();
  check->add_option("--div-tol", bc.div_tol, "bound on the divergence residual")->capture_default_str();
  check->add_option("--reeb-r1-tol", bc.reeb_r1_tol, "bound on |alpha(X) - 1|")->capture_default_str();
  check->add_option("--reeb-r2-tol", bc.reeb_r2_tol, "bound on |i_X d alpha|")->capture_default_str();

  // flow
  CLI::App* flow_cmd = app.add_subcommand("flow", "Trajectories, periodic orbits, separatrix splitting");
  flow_cmd->require_subcommand(1);
  FlowIntegrate fi;
  CLI::App* integ = flow_cmd->add_subcommand("integrate", "Integrate a trajectory");
  integ->footer("Output CSV columns: t,x,y,z (one row per accepted step, coordinates reduced to [0, 2pi)).");
  abc(integ, fi.A, fi.B, fi.C);
  integ->add_option("--x0", fi.x0, "initial point x,y,z")->required();
  integ->add_option("--t-end", fi.t_end, "final time")->required();
  integ->add_option("--tol", fi.tol, "integration tolerance")->capture_default_str();
  integ->add_option("--out", fi.out, "CSV file (default: standard output)");

  FlowOrbit fo;
  CLI::App* orbit = flow_cmd->add_subcommand("orbit", "Find a periodic orbit by shooting (JSON)");
  abc(orbit, fo.A, fo.B, fo.C);
  orbit->add_option("--section", fo.section, "section c=v, e.g. y=0")->required();
  orbit->add_option("--guess", fo.guess, "off-section coordinates of the initial guess, e.g. 1.5,3.0")->required();
  orbit->add_option("--direction", fo.direction, "crossing direction +1/-1 (default: sign of the flow at the guess)");
  orbit->add_option("--tol", fo.tol, "Newton tolerance")->capture_default_str();
  orbit->add_option("--max-iter", fo.max_iter, "Newton iterations")->capture_default_str();
  orbit->add_option("--max-time", fo.max_time, "return-time budget")->capture_default_str();
  orbit->add_option("--product-tol", fo.product_tol, "bound on |multiplier product - 1|")->capture_default_str();

  FlowSplitting fs_;
  CLI::App* split = flow_cmd->add_subcommand("splitting", "Separatrix splitting profile at (1, B, C)");
  split->footer("Output CSV columns: section_param,signed_distance (y in [0, 2pi) and z_unstable - z_stable).");
  split->add_option("--B", fs_.B, "parameter B of the integrable limit")->capture_default_str();
  split->add_option("--C", fs_.C, "perturbation C")->required();
  split->add_option("--samples", fs_.samples, "samples over one period")->capture_default_str();
  split->add_option("--offset", fs_.offset, "initial offset along the Floquet vectors")->capture_default_str();
  split->add_option("--out", fs_.out, "CSV file (default: standard output)");

  // contact
  CLI::App* contact_cmd = app.add_subcommand("contact", "Characteristic foliations");
  contact_cmd->require_subcommand(1);
  ContactAnnulus ca;
  CLI::App* ann = contact_cmd->add_subcommand("annulus", "Annulus with prescribed monodromy");
  ann->footer(
      "Writes the surface to --out as CSV with columns theta,z,r and prints a JSON report\n"
      "with the roundtrip error and the transversality result. Monodromy: rot:DELTA is\n"
      "theta -> theta + DELTA, sin:a,b is theta -> theta + a + b sin(theta).");
  ann->add_option("--monodromy", ca.monodromy, "rot:DELTA or sin:a,b")->required();
  ann->add_option("--eps", ca.eps, "boundary radius")->capture_default_str();
  ann->add_option("--out", ca.out, "CSV surface file")->required();
  ann->add_option("--grid", ca.grid, "grid NTHETAxNZ")->capture_default_str();
  ann->add_option("--winding", ca.winding, "turns added to the leaves (default: least possible)");
  ann->add_option("--tol", ca.tol, "bound on the roundtrip error")->capture_default_str();
  ann->add_option("--transversality-tol", ca.transversality_tol, "sine threshold for tangencies")
      ->capture_default_str();

  // template
  CLI::App* template_cmd = app.add_subcommand("template", "Lorenz-like templates L(m,n)");
  template_cmd->require_subcommand(1);
  TemplateWords tw;
  CLI::App* words = template_cmd->add_subcommand("words", "List aperiodic necklaces over {x,y}");
  words->add_option("--max-len", tw.max_len, "longest word")->required();

  TemplateKnots tk;
  CLI::App* knots_cmd = template_cmd->add_subcommand("knots", "Knot report per orbit (JSON lines)");
  template_opts(knots_cmd, tk.t);
  knots_cmd->add_option("--max-len", tk.max_len, "longest word")->required();

  TemplateLink tl;
  CLI::App* link = template_cmd->add_subcommand("link", "Linking number of two orbits");
  template_opts(link, tl.t);
  link->add_option("--w1", tl.w1, "first orbit word")->required();
  link->add_option("--w2", tl.w2, "second orbit word")->required();
  link->add_option("--method", tl.method, "combinatorial, crossings or quadrature")
      ->check(CLI::IsMember({"combinatorial", "crossings", "quadrature"}))
      ->capture_default_str();

  TemplateUniversal tu;
  CLI::App* univ = template_cmd->add_subcommand("universal", "Universality of L(m,n)");
  template_opts(univ, tu.t);

  TemplateCurve tc;
  CLI::App* curve = template_cmd->add_subcommand("curve", "Embedded closed-braid curve of an orbit");
  curve->footer("Output CSV columns: x,y,z (polygon vertices, closing back to the first).");
  template_opts(curve, tc.t);
  curve->add_option("--word", tc.word, "orbit word")->required();
  curve->add_option("--out", tc.out, "CSV file (default: standard output)");

  // tight
  CLI::App* tight_cmd = app.add_subcommand("tight", "Standard tight form on S^3");
  tight_cmd->require_subcommand(1);
  TightReebCmd tr;
  CLI::App* reeb = tight_cmd->add_subcommand("reeb", "Reeb field of the standard form at a point (JSON)");
  reeb->add_option("--point", tr.point, "unit point x1,x2,x3,x4")->required();
  reeb->add_option("--tol", tr.tol, "bound on |alpha0(X0) - 1|")->capture_default_str();

  try {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    args = expand_config(std::move(args));
    std::reverse(args.begin(), args.end());
    try {
      app.parse(args);
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) {
        std::ostringstream o, er;
        app.exit(e, o, er);
        out << o.str() << er.str();
        return kOk;
      }
      err << "error: " << e.what() << "\n";
      return kInvalidInput;
    }

    Output result;
    if (check->parsed()) result = bc();
    else if (integ->parsed()) result = fi();
    else if (orbit->parsed()) result = fo();
    else if (split->parsed()) result = fs_();
    else if (ann->parsed()) result = ca();
    else if (words->parsed()) result = tw();
    else if (knots_cmd->parsed()) result = tk();
    else if (link->parsed()) result = tl();
    else if (univ->parsed()) result = tu();
    else if (curve->parsed()) result = tc();
    else if (reeb->parsed()) result = tr();
    else throw UsageError("no command given");

    if (result.file) write_atomically(*result.file, result.file_text);
    out << result.stdout_text;
    if (result.code == kPropertyViolation) err << "error: property check failed\n";
    return result.code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kPropertyViolation;
  }
}

}  // namespace knotflow::cli
