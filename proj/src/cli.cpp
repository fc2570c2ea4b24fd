#include "milnor/cli.hpp"

#include <cmath>
#include <filesystem>
#include <functional>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "milnor/connectivity.hpp"
#include "milnor/errors.hpp"
#include "milnor/expression.hpp"
#include "milnor/fibration.hpp"
#include "milnor/json_io.hpp"
#include "milnor/lens.hpp"
#include "milnor/newton_polyhedron.hpp"

namespace milnor::cli {
namespace {

// JSON config files: top-level keys are global options, nested objects hold
// the options of the subcommand of the same name.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    Json j;
    try {
      j = Json::parse(input);
    } catch (const Json::parse_error& e) {
      throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
    std::vector<CLI::ConfigItem> items;
    collect(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw CLI::ConversionError("unsupported config value " + v.dump());
  }

  static void collect(const Json& j, const std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& items) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it->is_object()) {
        auto nested = parents;
        nested.push_back(it.key());
        collect(*it, nested, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = it.key();
      if (it->is_array()) {
        for (const auto& v : *it) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(*it));
      }
      items.push_back(std::move(item));
    }
  }
};

struct Globals {
  Seed seed = 1;
  double tol_fiber = 1e-9;
  double tol_angle = 1e-6;
  double delta = 0.0;  // 0: 1e-3 * r0^d
  double r0 = 1.0;
  double r1 = 0.0;  // 0: r0 / 2
  double ode_step = 0.0031415;
  bool json = false;
  std::string output;
  std::string plot;
};

struct Args {
  std::string input;
  // analyze
  std::vector<int> face;
  int bound = 5;
  double tameness_eps = 1e-2;
  std::size_t trials = 100;
  double tol = 1e-8;
  bool probe_transversality = false;
  std::string expect_verdict;
  // sample-fiber, components, gcd-check
  std::size_t count = 200;
  std::size_t budget = 800;
  std::size_t neighbors = 6;
  double dedup = 1e-4;
  int expect = -1;
  // monodromy
  double theta = 2.0 * std::numbers::pi;
  std::vector<double> point;
  // gcd-check
  std::vector<int> mult;
  std::string factors;
  // lens-roots
  int lens_n = 2;
  double lens_a = 0.3;
  double lens_eps = 0.0;  // 0: per-n default
  int grid = 96;
  double half_width = 2.0;
  double lens_dedup = 1e-7;
  bool homogenize = false;
  bool bisect_eps = false;
  bool check_doubling = false;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

MixedPolynomial load_polynomial(const std::string& input) {
  std::string text = input;
  std::error_code ec;
  if (std::filesystem::is_regular_file(input, ec)) {
    std::ifstream in(input);
    if (!in) throw InputError("cannot read " + input);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  text = trim(text);
  if (text.empty()) throw InputError("empty polynomial input");
  if (text.front() == '{') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw InputError(std::string("invalid polynomial JSON: ") + e.what());
    }
    return polynomial_from_json(j);
  }
  return parse_mixed_expression(text);
}

FibrationConfig make_config(const Globals& g, const MixedPolynomial& f) {
  FibrationConfig cfg;
  cfg.r0 = g.r0;
  cfg.r1 = g.r1 > 0.0 ? g.r1 : 0.5 * g.r0;
  cfg.delta = g.delta > 0.0 ? g.delta : default_delta(f, g.r0);
  cfg.tol_fiber = g.tol_fiber;
  cfg.tol_angle = g.tol_angle;
  cfg.ode_step = g.ode_step;
  cfg.validate();
  return cfg;
}

Json point_row(const Point& z) {
  Json row = Json::array();
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    row.push_back(z[j].real());
    row.push_back(z[j].imag());
  }
  return row;
}

void write_text(std::ostream& out, const Json& j) {
  for (auto it = j.begin(); it != j.end(); ++it)
    out << it.key() << ": " << (it->is_string() ? it->get<std::string>() : it->dump()) << '\n';
}

void write_plot(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  body(out);
}

class Runner {
 public:
  Runner(const Globals& g, const Args& a, std::ostream& out) : g_(g), a_(a), out_(out) {}

  int analyze() {
    const MixedPolynomial f = load_polynomial(a_.input);
    Json report = {{"polynomial", to_expression(f)}, {"n", f.num_vars()}};
    report.update(to_json(newton_data(f)));

    std::vector<WeightVector> faces;
    if (!a_.face.empty()) {
      if (static_cast<int>(a_.face.size()) != f.num_vars())
        throw InputError("--face needs one weight per variable");
      faces.emplace_back(a_.face);
    } else {
      faces = tameness_weights(f.num_vars(), {}, a_.bound);
    }
    Json face_reports = Json::array();
    bool any_witness = false;
    for (std::size_t k = 0; k < faces.size(); ++k) {
      const auto r = nondegeneracy_search(f, faces[k], a_.trials, mix_seed(g_.seed, k), a_.tol);
      any_witness = any_witness || r.verdict == Verdict::witness_found;
      face_reports.push_back(to_json(r));
    }
    report["faces"] = face_reports;

    // Uniform local tameness on every vanishing coordinate subspace.
    Json tameness = Json::array();
    const NewtonData data = newton_data(f);
    for (std::size_t k = 0; k < data.vanishing_subspaces.size(); ++k) {
      const Subset& subset = data.vanishing_subspaces[k];
      TamenessOptions topt;
      topt.weight_bound = a_.bound;
      topt.tol = a_.tol;
      Json reports = Json::array();
      for (const auto& r : tameness_search(f, subset, a_.tameness_eps, a_.trials,
                                           mix_seed(g_.seed, faces.size() + k), topt)) {
        any_witness = any_witness || r.verdict == Verdict::witness_found;
        reports.push_back(to_json(r));
      }
      Json subset_json = Json::array();
      for (int i : subset) subset_json.push_back(i + 1);
      tameness.push_back({{"subspace", subset_json}, {"reports", reports}});
    }
    report["tameness"] = tameness;
    report["degenerate_face_found"] = any_witness;

    if (a_.probe_transversality) {
      const FibrationConfig cfg = make_config(g_, f);
      const auto probe = probe_transversality(f, cfg, a_.trials, g_.seed);
      report["transversality"] = {{"attempted", probe.attempted},
                                  {"located", probe.located},
                                  {"transverse", probe.transverse},
                                  {"min_singular_value", probe.min_singular_value},
                                  {"note", "diagnostic only"}};
    }
    emit(report);
    if (a_.expect_verdict.empty()) return kExitOk;
    const bool want_witness = a_.expect_verdict == "witness_found";
    return want_witness == any_witness ? kExitOk : kExitMismatch;
  }

  int sample() {
    const MixedPolynomial f = load_polynomial(a_.input);
    const FibrationConfig cfg = make_config(g_, f);
    SampleOptions opt;
    opt.dedup_radius = a_.dedup * cfg.r0;
    const auto points = sample_fiber(f, cfg, a_.count, g_.seed, opt);
    write_plot(g_.plot, [&](std::ostream& o) { write_fiber_csv(o, points); });
    if (!g_.json) {
      write_fiber_csv(out_, points);
      return kExitOk;
    }
    Json rows = Json::array();
    for (const auto& p : points) {
      Json row = point_row(p.z);
      row.push_back(p.residual);
      rows.push_back(std::move(row));
    }
    emit({{"n", f.num_vars()},
          {"delta", cfg.delta},
          {"requested", a_.count},
          {"count", points.size()},
          {"points", rows}});
    return kExitOk;
  }

  int monodromy() {
    const MixedPolynomial f = load_polynomial(a_.input);
    const FibrationConfig cfg = make_config(g_, f);
    FiberPoint start;
    if (!a_.point.empty()) {
      if (static_cast<int>(a_.point.size()) != 2 * f.num_vars())
        throw InputError("--point needs 2n real numbers");
      Point z(f.num_vars());
      for (int j = 0; j < f.num_vars(); ++j) z[j] = Complex(a_.point[2 * j], a_.point[2 * j + 1]);
      start = find_fiber_point(f, cfg.delta, cfg, z);
    } else {
      start = sample_fiber(f, cfg, 2, g_.seed).front();
    }
    const auto trajectory = flow_trajectory(f, start, a_.theta, cfg);
    const FiberPoint& end = trajectory.back();
    double drift = 0.0;
    for (const auto& p : trajectory)
      drift = std::max(drift, std::abs(std::abs(evaluate(f, p.z)) - cfg.delta));
    const double turned = std::arg(evaluate(f, end.z) / evaluate(f, start.z));
    const double wanted = std::remainder(a_.theta, 2.0 * std::numbers::pi);
    write_plot(g_.plot, [&](std::ostream& o) {
      std::vector<FiberPoint> pts(trajectory.begin(), trajectory.end());
      write_fiber_csv(o, pts);
    });
    emit({{"theta", a_.theta},
          {"delta", cfg.delta},
          {"steps", trajectory.size() - 1},
          {"start", point_row(start.z)},
          {"end", point_row(end.z)},
          {"return_distance", (end.z - start.z).norm()},
          {"angle_error", std::abs(std::remainder(turned - wanted, 2.0 * std::numbers::pi))},
          {"max_modulus_drift", drift}});
    return kExitOk;
  }

  int components() {
    const MixedPolynomial f = load_polynomial(a_.input);
    const FibrationConfig cfg = make_config(g_, f);
    const auto report = component_report(f, cfg, a_.count, a_.budget, g_.seed, component_options(cfg));
    write_plot(g_.plot, [&](std::ostream& o) { write_fiber_csv(o, report.points); });
    Json j = to_json(report, g_.plot);
    j["points"] = report.points.size();
    j["attempted"] = report.attempted;
    j["failed"] = report.failed;
    j["evidence_valid"] = validate_evidence(f, cfg, report);
    emit(j);
    if (a_.expect >= 0 && static_cast<int>(report.component_count) != a_.expect) return kExitMismatch;
    return kExitOk;
  }

  int gcd_check() {
    if (a_.mult.empty()) throw InputError("--mult is required");
    const int predicted = gcd_of(a_.mult);
    const int cover = cyclic_cover_components(a_.mult);
    bool match = predicted == cover;
    Json j = {{"multiplicities", a_.mult}, {"gcd", predicted}, {"cyclic_cover_components", cover}};
    if (!a_.factors.empty()) {
      FactoredGerm germ;
      std::stringstream ss(a_.factors);
      std::string part;
      int n = 0;
      std::vector<std::string> texts;
      while (std::getline(ss, part, ';')) {
        texts.push_back(trim(part));
        n = std::max(n, parse_mixed_expression(texts.back()).num_vars());
      }
      for (const auto& t : texts) germ.factors.push_back(parse_mixed_expression(t, n));
      germ.multiplicities = a_.mult;
      const MixedPolynomial f = germ.expand();
      const FibrationConfig cfg = make_config(g_, f);
      const auto report = component_report(f, cfg, a_.count, a_.budget, g_.seed, component_options(cfg));
      j["polynomial"] = to_expression(f);
      j["numeric_component_count"] = report.component_count;
      j["caveat"] = ComponentReport::caveat;
      match = match && static_cast<int>(report.component_count) == predicted;
    }
    if (a_.expect >= 0) match = match && predicted == a_.expect;
    j["match"] = match;
    emit(j);
    return match ? kExitOk : kExitMismatch;
  }

  int lens() {
    LensConfig cfg;
    cfg.n = a_.lens_n;
    cfg.a = a_.lens_a;
    if (cfg.n < 2) throw InputError("--n must be >= 2");
    cfg.epsilon = a_.lens_eps > 0.0 ? a_.lens_eps : default_lens_epsilon(cfg.n);
    cfg.grid = a_.grid;
    cfg.half_width = a_.half_width;
    cfg.dedup_radius = a_.lens_dedup;
    cfg.validate();

    const auto roots = lens_roots(cfg);
    write_plot(g_.plot, [&](std::ostream& o) { write_roots_csv(o, roots); });
    Json j = lens_summary(cfg.n, roots.size());
    j["a"] = cfg.a;
    j["epsilon"] = cfg.epsilon;
    j["grid"] = cfg.grid;
    if (a_.check_doubling) {
      LensConfig twice = cfg;
      twice.grid *= 2;
      j["count_at_double_grid"] = lens_roots(twice).size();
    }
    if (a_.bisect_eps) {
      const auto t = epsilon_threshold(cfg);
      Json evals = Json::array();
      for (const auto& [eps, k] : t.evaluations) evals.push_back(Json::array({eps, k}));
      j["epsilon_threshold"] = {{"matching", t.matching ? Json(*t.matching) : Json(nullptr)},
                                {"failing", t.failing ? Json(*t.failing) : Json(nullptr)},
                                {"evaluations", evals}};
    }
    if (a_.homogenize) {
      const MixedPolynomial h = rhie_homogenized(cfg);
      j["homogenized"] = to_json(h);
      j["homogenized_expression"] = to_expression(h);
    }
    emit(j);
    return j["match"].get<bool>() ? kExitOk : kExitMismatch;
  }

 private:
  ComponentOptions component_options(const FibrationConfig& cfg) const {
    ComponentOptions opt;
    opt.neighbors = a_.neighbors;
    opt.sampling.dedup_radius = a_.dedup * cfg.r0;
    return opt;
  }

  void emit(const Json& j) {
    std::ofstream file;
    std::ostream* dst = &out_;
    if (!g_.output.empty()) {
      file.open(g_.output);
      if (!file) throw InputError("cannot write " + g_.output);
      dst = &file;
    }
    if (g_.json) {
      *dst << j.dump(2) << '\n';
    } else {
      write_text(*dst, j);
    }
  }

  const Globals& g_;
  const Args& a_;
  std::ostream& out_;
};

void add_polynomial_input(CLI::App* cmd, Args& a) {
  cmd->add_option("input", a.input, "Mixed polynomial: expression, or a file with an expression or JSON")
      ->required();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Globals g;
  Args a;
  CLI::App app{"Numerical Milnor fibrations of mixed polynomials", "milnor"};
  app.option_defaults()->always_capture_default();
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON config file (flags take precedence)");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  app.add_option("--seed", g.seed, "RNG seed");
  app.add_option("--tol-fiber", g.tol_fiber, "Fiber residual tolerance |f - target|");
  app.add_option("--tol-angle", g.tol_angle, "In-fiber angle tolerance (rad)");
  app.add_option("--delta", g.delta, "Fiber radius; 0 means 1e-3 * r0^d, d the lowest degree of f");
  app.add_option("--r0", g.r0, "Ball radius");
  app.add_option("--r1", g.r1, "Inner radius for the transversality probe; 0 means r0/2");
  app.add_option("--ode-step", g.ode_step, "Flow step (rad)");
  app.add_flag("--json", g.json, "Write the report as JSON");
  app.add_option("--output", g.output, "Report file; empty means standard output");
  app.add_option("--emit-plot-data", g.plot, "CSV file for points, trajectories or roots");

  auto* analyze = app.add_subcommand("analyze", "Newton data and non-degeneracy search");
  add_polynomial_input(analyze, a);
  analyze->add_option("--face", a.face, "Weight vector P; default: all primitive positive weights up to --bound")
      ->delimiter(',');
  analyze->add_option("--bound", a.bound, "Largest weight entry when enumerating faces");
  analyze->add_option("--trials", a.trials, "Search starts per face");
  analyze->add_option("--tol", a.tol, "Criticality residual accepted as a witness");
  analyze->add_option("--tameness-eps", a.tameness_eps, "Bound on sum |z_i|^2 over a vanishing subspace");
  analyze->add_flag("--probe-transversality", a.probe_transversality,
                    "Sample fiber/sphere transversality (diagnostic)");
  analyze->add_option("--expect", a.expect_verdict, "witness_found or no_witness")
      ->check(CLI::IsMember({"witness_found", "no_witness"}));

  auto* sample = app.add_subcommand("sample-fiber", "Points of the fiber over delta");
  add_polynomial_input(sample, a);
  sample->add_option("--N", a.count, "Number of points");
  sample->add_option("--dedup", a.dedup, "Merge radius relative to r0");

  auto* mono = app.add_subcommand("monodromy", "Flow h_theta from a fiber point");
  add_polynomial_input(mono, a);
  mono->add_option("--theta", a.theta, "Flow angle (rad)");
  mono->add_option("--point", a.point, "Start near re1 im1 ... ren imn; default: a sampled point");

  auto* comp = app.add_subcommand("components", "Estimate fiber components");
  add_polynomial_input(comp, a);
  comp->add_option("--N", a.count, "Number of sampled points");
  comp->add_option("--budget", a.budget, "Random long-range pairs tried");
  comp->add_option("--k", a.neighbors, "Nearest neighbours per point");
  comp->add_option("--dedup", a.dedup, "Merge radius relative to r0");
  comp->add_option("--expect", a.expect, "Expected count; mismatch exits 4 (-1: none)");

  auto* gcd = app.add_subcommand("gcd-check", "gcd prediction, cyclic cover model, numeric count");
  gcd->add_option("--mult", a.mult, "Multiplicities n_1 ... n_r")->required()->delimiter(',');
  gcd->add_option("--factors", a.factors, "Holomorphic factors separated by ';' (enables the numeric count)");
  gcd->add_option("--N", a.count, "Sampled points for the numeric count");
  gcd->add_option("--budget", a.budget, "Random long-range pairs tried");
  gcd->add_option("--k", a.neighbors, "Nearest neighbours per point");
  gcd->add_option("--expect", a.expect, "Expected gcd; mismatch exits 4 (-1: none)");

  auto* lens = app.add_subcommand("lens-roots", "Count roots of the Rhie lens equation");
  lens->add_option("--n", a.lens_n, "Family parameter n >= 2");
  lens->add_option("--a", a.lens_a, "Parameter a in (0, 1/2)");
  lens->add_option("--eps", a.lens_eps, "Parameter eps in (0, a/10); 0 means 1e-2, 1e-3, 1e-4 for n = 2, 3, 4");
  lens->add_option("--grid", a.grid, "Seeds per side of the search square");
  lens->add_option("--half-width", a.half_width, "Half-width of the search square");
  lens->add_option("--dedup", a.lens_dedup, "Root merge radius");
  lens->add_flag("--homogenize", a.homogenize, "Also emit the two-variable homogenization");
  lens->add_flag("--bisect-eps", a.bisect_eps, "Locate the eps threshold for 5n-5 roots");
  lens->add_flag("--check-doubling", a.check_doubling, "Recount with twice the grid");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    Runner runner(g, a, out);
    if (analyze->parsed()) return runner.analyze();
    if (sample->parsed()) return runner.sample();
    if (mono->parsed()) return runner.monodromy();
    if (comp->parsed()) return runner.components();
    if (gcd->parsed()) return runner.gcd_check();
    return runner.lens();
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace milnor::cli
