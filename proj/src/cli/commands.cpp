#include "hsreg/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "hsreg/cli/config.hpp"
#include "hsreg/diffpoly.hpp"
#include "hsreg/errors.hpp"
#include "hsreg/geometry.hpp"
#include "hsreg/hodograph.hpp"
#include "hsreg/multiscale.hpp"
#include "hsreg/painleve.hpp"
#include "hsreg/toda.hpp"

namespace hsreg::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Overrides {
  std::string config_file;
  std::string output_dir;
  double eps = 0, t1 = 0, t3 = 0, x_c = 0, x_switch = 0, xi0 = 0, tol = 0;
  std::map<std::string, std::vector<CLI::Option*>> given;
};

struct Context {
  ScenarioConfig cfg;
  fs::path out_dir;
  std::ostream& out;
};

void add_scenario_flags(CLI::App* sub, Overrides& o, std::initializer_list<const char*> keys) {
  for (const std::string key : keys) {
    double* target = key == "eps"        ? &o.eps
                     : key == "t1"       ? &o.t1
                     : key == "t3"       ? &o.t3
                     : key == "xc"       ? &o.x_c
                     : key == "switch"   ? &o.x_switch
                     : key == "xi0"      ? &o.xi0
                                         : &o.tol;
    o.given[key].push_back(sub->add_option("--" + key, *target));
  }
}

bool flag_given(const Overrides& o, const std::string& key) {
  auto it = o.given.find(key);
  if (it == o.given.end()) return false;
  return std::any_of(it->second.begin(), it->second.end(), [](const CLI::Option* opt) { return opt->count() > 0; });
}

Context make_context(const Overrides& o, std::ostream& out) {
  ScenarioConfig cfg = o.config_file.empty() ? ScenarioConfig{} : load_config(o.config_file);
  if (flag_given(o, "eps")) cfg.eps = o.eps;
  if (flag_given(o, "t1")) cfg.t1 = o.t1;
  if (flag_given(o, "t3")) cfg.t3 = o.t3;
  if (flag_given(o, "xc")) cfg.x_c = o.x_c;
  if (flag_given(o, "switch")) cfg.x_switch = o.x_switch;
  if (flag_given(o, "xi0")) cfg.xi0 = o.xi0;
  if (flag_given(o, "tol")) cfg.tol = o.tol;
  cfg.validate();

  fs::path dir = "hsreg-out";
  if (!o.output_dir.empty()) {
    dir = o.output_dir;
  } else if (const char* env = std::getenv("HSREG_OUTPUT_DIR"); env && *env) {
    dir = env;
  } else if (cfg.output_dir) {
    dir = *cfg.output_dir;
  }
  return Context{cfg, dir, out};
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw DomainError("count must be at least 1");
  std::vector<double> xs;
  for (int i = 0; i < n; ++i) xs.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
  return xs;
}

fs::path write_csv(const Context& ctx, const std::string& name, const std::string& header,
                   const std::vector<std::vector<double>>& rows) {
  fs::create_directories(ctx.out_dir);
  const fs::path file = ctx.out_dir / name;
  std::ofstream os(file);
  if (!os) throw DomainError("cannot write " + file.string());
  os << header << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt::format("{:.17g}", row[i]);
    os << "\n";
  }
  return file;
}

void print_json(const Context& ctx, const json& j) { ctx.out << j.dump(2) << "\n"; }

std::shared_ptr<const painleve::TritronqueeSolution> solve_pi(const ScenarioConfig& cfg) {
  return std::make_shared<const painleve::TritronqueeSolution>(painleve::integrate_tritronquee(cfg.xi0, -3.0, cfg.tol));
}

multiscale::CompositeSolution composite_from(const ScenarioConfig& cfg) {
  if (cfg.branch != Branch::kdv25) throw ConfigError("this subcommand requires branch = kdv25");
  multiscale::CompositeOptions opt;
  opt.eps = cfg.eps;
  opt.t1 = cfg.t1;
  opt.x_switch = cfg.x_switch;
  opt.xi0 = cfg.xi0;
  opt.tol = cfg.tol;
  return multiscale::build_composite_25(opt);
}

json critical_json(const hodograph::CriticalPoint& cp) {
  return {{"m", cp.m}, {"x_c", cp.x_c()}, {"v_c", cp.v_c}, {"c", cp.c}, {"t", cp.times_c.t}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Regularized critical Hele-Shaw flows"};
  app.require_subcommand(1);
  app.fallthrough();
  Overrides o;
  app.add_option("--config", o.config_file, "key = value configuration file");
  app.add_option("--output-dir", o.output_dir, "directory for CSV and JSON files");

  std::function<void(Context&)> action;
  auto bind = [&](CLI::App* sub, std::function<void(Context&)> fn) {
    sub->callback([&action, fn] { action = fn; });
  };

  // gd
  int gd_n = 3;
  bool gd_json = false;
  auto* gd = app.add_subcommand("gd", "Gel'fand-Dikii polynomials R_0..R_n");
  gd->add_option("--n", gd_n)->check(CLI::Range(0, 12));
  gd->add_flag("--json", gd_json);
  bind(gd, [&](Context& ctx) {
    const auto R = diffpoly::gelfand_dikii(gd_n);
    if (gd_json) {
      json arr = json::array();
      for (std::size_t n = 0; n < R.size(); ++n) arr.push_back({{"n", n}, {"terms", diffpoly::to_json(R[n])}});
      print_json(ctx, arr);
    } else {
      for (std::size_t n = 0; n < R.size(); ++n) ctx.out << "R_" << n << " = " << R[n].to_string() << "\n";
    }
  });

  // critical
  auto* critical = app.add_subcommand("critical", "critical point of the (2,5) finger");
  add_scenario_flags(critical, o, {"t1"});
  bind(critical, [&](Context& ctx) { print_json(ctx, critical_json(hodograph::find_critical_25(ctx.cfg.t1))); });

  // trace
  double tr_from = 0.0, tr_to = 0.6399;
  int tr_count = 1000;
  auto* trace = app.add_subcommand("trace", "outer hodograph branch u0(x) as CSV");
  add_scenario_flags(trace, o, {"t1"});
  trace->add_option("--from", tr_from);
  trace->add_option("--to", tr_to);
  trace->add_option("--count", tr_count);
  bind(trace, [&](Context& ctx) {
    const auto cp = hodograph::find_critical_25(ctx.cfg.t1);
    auto xs = linspace(tr_from, tr_to, tr_count);
    // continue from the end nearest the catastrophe
    std::vector<std::vector<double>> rows(xs.size());
    std::optional<double> prev;
    std::vector<std::size_t> order(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) order[i] = xs.size() - 1 - i;
    if (tr_from > tr_to) std::reverse(order.begin(), order.end());
    for (std::size_t i : order) {
      const double x = xs[i];
      if (x > cp.x_c()) throw DomainError(fmt::format("trace: x = {:.17g} lies past x_c = {:.17g}", x, cp.x_c()));
      const double seed = prev ? *prev : hodograph::local_branch(cp, x);
      const double u = hodograph::solve_branch(hodograph::finger25_times(x, ctx.cfg.t1), seed);
      rows[i] = {x, u};
      prev = u;
    }
    const auto file = write_csv(ctx, "trace.csv", "x,u0", rows);
    print_json(ctx, {{"file", file.string()}, {"count", rows.size()}, {"t1", ctx.cfg.t1}, {"x_c", cp.x_c()}});
  });

  // painleve
  double pi_min = -3.0;
  int pi_count = 2001;
  auto* pain = app.add_subcommand("painleve", "tritronquee solution of Painleve I");
  add_scenario_flags(pain, o, {"xi0", "tol"});
  pain->add_option("--xi-min", pi_min);
  pain->add_option("--count", pi_count);
  bind(pain, [&](Context& ctx) {
    const auto sol = painleve::integrate_tritronquee(ctx.cfg.xi0, pi_min, ctx.cfg.tol);
    json summary = {{"xi0", sol.xi0()}, {"tol", sol.tol()}, {"xi_end", sol.xi_end()}, {"steps", sol.segments().size()}};
    double lo = sol.xi_end();
    if (sol.pole()) {
      const auto& p = *sol.pole();
      summary["pole"] = p.xi_star;
      summary["pole_sigma"] = p.sigma;
      lo = p.xi_star + 0.1;
    } else {
      summary["pole"] = nullptr;
    }
    summary["residual_max"] = sol.span_residual(lo, sol.xi0(), 10000);
    summary["node_residual_max"] = sol.node_residual(lo, sol.xi0());
    const auto w0 = sol.eval(0.0);
    summary["W0"] = w0.W;
    summary["dW0"] = w0.dW;
    std::vector<std::vector<double>> rows;
    for (double xi : linspace(sol.xi0(), lo, pi_count)) {
      const auto v = sol.eval(xi);
      rows.push_back({xi, v.W, v.dW});
    }
    summary["file"] = write_csv(ctx, "painleve.csv", "xi,W,dW", rows).string();
    print_json(ctx, summary);
  });

  // match
  double m_from = 0.6365, m_to = 0.6395;
  int m_n = 1001;
  auto* match = app.add_subcommand("match", "outer/inner overlap error");
  add_scenario_flags(match, o, {"eps", "t1", "switch", "xi0", "tol"});
  match->add_option("--from", m_from);
  match->add_option("--to", m_to);
  match->add_option("--n", m_n);
  bind(match, [&](Context& ctx) {
    const auto comp = composite_from(ctx.cfg);
    const auto e = multiscale::overlap_error(comp, m_from, m_to, m_n);
    std::vector<std::vector<double>> rows;
    for (double x : linspace(m_from, m_to, m_n)) rows.push_back({x, comp.outer(x), comp.inner(x)});
    const auto file = write_csv(ctx, "match.csv", "x,outer,inner", rows);
    print_json(ctx, {{"max_abs_err", e.max_abs},
                     {"max_rel_err", e.max_rel},
                     {"interval", {m_from, m_to}},
                     {"eps", comp.eps()},
                     {"x_star", comp.x_star()},
                     {"file", file.string()}});
  });

  // composite
  double c_from = 0.6, c_to = 0.6402302;
  int c_count = 2001;
  auto* compc = app.add_subcommand("composite", "composite solution u(x) as CSV");
  add_scenario_flags(compc, o, {"eps", "t1", "switch", "xi0", "tol"});
  compc->add_option("--from", c_from);
  compc->add_option("--to", c_to);
  compc->add_option("--count", c_count);
  bind(compc, [&](Context& ctx) {
    const auto comp = composite_from(ctx.cfg);
    std::vector<std::vector<double>> rows;
    for (double x : linspace(c_from, c_to, c_count)) rows.push_back({x, comp.eval(x)});
    const auto file = write_csv(ctx, "composite.csv", "x,u", rows);
    print_json(ctx, {{"file", file.string()},
                     {"count", rows.size()},
                     {"x_switch", comp.x_switch()},
                     {"x_star", comp.x_star()},
                     {"critical", critical_json(comp.critical())}});
  });

  // frames
  double f_from = 0.6, f_to = 0.6402302;
  int f_count = 12, f_samples = 400;
  auto* frames = app.add_subcommand("frames", "interface frames and topological events");
  add_scenario_flags(frames, o, {"eps", "t1", "switch", "xi0", "tol"});
  frames->add_option("--from", f_from);
  frames->add_option("--to", f_to);
  frames->add_option("--count", f_count);
  frames->add_option("--samples", f_samples);
  bind(frames, [&](Context& ctx) {
    const auto comp = composite_from(ctx.cfg);
    geometry::FrameOptions opt;
    opt.samples = f_samples;
    const auto xs = f_count > 0 ? linspace(f_from, f_to, f_count) : std::vector<double>{};
    auto manifest = geometry::emit_frames(comp, xs, ctx.out_dir / "frames", opt);
    manifest["directory"] = (ctx.out_dir / "frames").string();
    print_json(ctx, manifest);
  });

  // toda
  double t_from = -20.0, t_to = 0.0;
  int t_count = 401;
  bool t_frames = false;
  auto* todac = app.add_subcommand("toda", "bubble merging through the Toda reduction");
  add_scenario_flags(todac, o, {"t3", "xc", "eps", "xi0", "tol"});
  todac->add_option("--from", t_from, "first t~");
  todac->add_option("--to", t_to, "last t~");
  todac->add_option("--count", t_count);
  todac->add_flag("--frames", t_frames, "also write bubble curve frames");
  bind(todac, [&](Context& ctx) {
    const auto cp = toda::find_toda_critical(ctx.cfg.t3, ctx.cfg.x_c);
    const toda::TodaInner inner(cp, ctx.cfg.eps, solve_pi(ctx.cfg));
    std::vector<std::vector<double>> rows;
    const auto tts = linspace(t_from, t_to, t_count);
    for (double tt : tts) {
      const auto [u, v] = toda::toda_composite(inner, tt);
      rows.push_back({tt, u, v});
    }
    const auto file = write_csv(ctx, "toda.csv", "t_tilde,u,v", rows);
    json summary = {{"t3", cp.t3},
                    {"x_c", cp.x_c},
                    {"u_c", cp.u_c},
                    {"v_c", cp.v_c},
                    {"t_c", cp.t_c},
                    {"identity", 4.0 * cp.t_c * cp.t_c * cp.t_c + 81.0 * cp.t3 * cp.x_c * cp.x_c},
                    {"eps", inner.eps()},
                    {"t_tilde_star", inner.tt_star()},
                    {"file", file.string()}};
    if (t_frames) {
      geometry::emit_bubble_frames(inner, tts, ctx.out_dir / "toda_frames");
      summary["frames"] = (ctx.out_dir / "toda_frames").string();
    }
    print_json(ctx, summary);
  });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    Context ctx = make_context(o, out);
    if (!action) return 2;
    action(ctx);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const hsreg::Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace hsreg::cli
