#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>

#include "phasekit/cli.hpp"
#include "phasekit/errors.hpp"
#include "phasekit/kernel.hpp"
#include "phasekit/parallel.hpp"
#include "phasekit/transform.hpp"
#include "phasekit/verify.hpp"

namespace phasekit::cli {

namespace fs = std::filesystem;

namespace {

using Complex = std::complex<double>;
namespace tf = phasekit::transform;

struct Common {
  std::string config_path;
  int workers = 0;
};

struct StateOptions {
  std::string path;
  std::string preset;
  int preset_n = 0;
  double center = 0.0;
  std::optional<double> width;
  double momentum = 0.0;
};

struct Context {
  Json cfg;
  std::string command;
  std::ostream& out;
  std::ostream& err;
};

void fill_hbar(Json& j, double hbar) {
  if (j.is_object()) {
    if (j.contains("type") && !j.contains("hbar")) j["hbar"] = hbar;
    for (auto& [k, v] : j.items()) fill_hbar(v, hbar);
  } else if (j.is_array()) {
    for (auto& v : j) fill_hbar(v, hbar);
  }
}

StateSpec load_state(const StateOptions& o, const Json& cfg, Json& description) {
  const double hbar = cfg.at("hbar").get<double>();
  const double a = cfg.at("a").get<double>();
  if (!o.path.empty() && !o.preset.empty()) throw ConfigError("give either --state or --preset");
  if (!o.path.empty()) {
    description = Json{{"file", o.path}};
    const fs::path p(o.path);
    if (p.extension() == ".csv") return read_grid_csv(p, hbar);
    Json j = read_json_file(p);
    fill_hbar(j, hbar);
    return state_from_json(j, p.parent_path());
  }
  const double width = o.width.value_or(a);
  if (o.preset == "basis") {
    const PhaseIndex idx{o.preset_n, o.center, o.momentum, ScaleParam(width, hbar)};
    idx.validate();
    description = Json(idx);
    description["type"] = "hermite_gaussian";
    return StateSpec::hermite_gaussian(idx);
  }
  if (o.preset == "packet") {
    description = Json{{"type", "gaussian_packet"}, {"center", o.center}, {"width", width},
                       {"momentum", o.momentum}, {"hbar", hbar}};
    return StateSpec::gaussian_packet(o.center, width, o.momentum, hbar);
  }
  if (o.preset.empty()) throw ConfigError("a state is required: --state FILE or --preset NAME");
  throw ConfigError("unknown preset '" + o.preset + "' (basis, packet)");
}

tf::ProjectOptions project_options(const Json& cfg) {
  tf::ProjectOptions p;
  p.gh_order = cfg.at("quadrature").at("gh_order").get<int>();
  p.abs_tol = cfg.at("quadrature").at("abs_tol").get<double>();
  p.rel_tol = cfg.at("quadrature").at("rel_tol").get<double>();
  return p;
}

fs::path output_path(const Json& cfg, const char* name) {
  const fs::path dir = cfg.at("output").at("dir").get<std::string>();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "'");
  return dir / name;
}

std::ofstream open_output(const fs::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + p.string() + "'");
  return f;
}

void csv_header(std::ostream& f, const Context& ctx, const Json& extra) {
  f << "# " << kVersion << "\n";
  f << "# command: " << ctx.command << "\n";
  f << "# config: " << ctx.cfg.dump() << "\n";
  for (const auto& [k, v] : extra.items()) f << "# " << k << ": " << v.dump() << "\n";
}

std::string d(double v) { return format_double(v); }

void write_json(const fs::path& p, const Json& j) {
  auto f = open_output(p);
  f << j.dump(2) << "\n";
}

int cmd_verify(const Context& ctx, int workers) {
  const auto report = verify::run_suite(ctx.cfg, workers);
  Json j{{"version", kVersion}, {"config", ctx.cfg}};
  j.update(verify::to_json(report));
  const auto path = output_path(ctx.cfg, "verify_report.json");
  write_json(path, j);
  int passed = 0;
  for (const auto& c : report.checks) {
    char line[256];
    std::snprintf(line, sizeof(line), "%s  %-30s measured %.6e  expected %g  tol %g\n",
                  c.pass ? "PASS" : "FAIL", c.name.c_str(), c.measured, c.expected, c.tolerance);
    ctx.out << line;
    passed += c.pass ? 1 : 0;
  }
  ctx.out << passed << "/" << report.checks.size() << " checks passed; report " << path.string()
          << "\n";
  return report.pass() ? 0 : 1;
}

int cmd_project(const Context& ctx, const StateSpec& state, const Json& desc, double X, double P,
                int workers) {
  const ScaleParam scale(ctx.cfg.at("a").get<double>(), ctx.cfg.at("hbar").get<double>());
  const int N = ctx.cfg.at("truncation").at("N").get<int>();
  const auto sp = tf::project_spectrum(state, X, P, scale, N, project_options(ctx.cfg), workers);

  Json j{{"version", kVersion}, {"config", ctx.cfg}, {"state", desc}};
  j.update(Json(sp));
  write_json(output_path(ctx.cfg, "spectrum.json"), j);

  auto f = open_output(output_path(ctx.cfg, "spectrum.csv"));
  csv_header(f, ctx, Json{{"state", desc}, {"base", Json(sp).at("base")}});
  f << "n,re,im,abs2\n";
  for (int n = 0; n <= sp.max_order(); ++n) {
    const Complex c = sp.amplitudes[static_cast<std::size_t>(n)];
    f << n << "," << d(c.real()) << "," << d(c.imag()) << "," << d(std::norm(c)) << "\n";
  }
  const double total = tf::norm_sum(sp);
  f << "# sum_abs2: " << d(total) << "\n";
  f << "# tail_bound: " << d(sp.tail_bound) << "\n";
  ctx.out << "projected onto n <= " << N << ": sum |Psi^n|^2 = " << d(total) << "\n";
  return 0;
}

int cmd_density(const Context& ctx, const StateSpec& state, const Json& desc, int n, int workers) {
  const ScaleParam scale(ctx.cfg.at("a").get<double>(), ctx.cfg.at("hbar").get<double>());
  const double divisor = ctx.cfg.at("sampling").at("step_divisor").get<double>();
  const double extent = ctx.cfg.at("sampling").at("extent").get<double>();
  const auto ex = state.position_envelope();
  const auto ep = state.momentum_envelope();
  const double k = 2.0 * n + 1.0;
  const double sx = std::sqrt(ex.stddev * ex.stddev + k * scale.coord_unit());
  const double spr = std::sqrt(ep.stddev * ep.stddev + k * scale.momentum_unit());
  const int half = static_cast<int>(std::lround(extent * divisor));
  const int count = 2 * half + 1;
  const double hX = sx / divisor;
  const double hP = spr / divisor;
  const double norm = 1.0 / (2.0 * std::numbers::pi * scale.hbar());
  const auto opts = project_options(ctx.cfg);

  std::vector<double> rho(static_cast<std::size_t>(count) * count);
  parallel_blocks(static_cast<std::size_t>(count), workers, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const double X = ex.mean + hX * (static_cast<int>(i) - half);
      for (int j = 0; j < count; ++j) {
        const double P = ep.mean + hP * (j - half);
        rho[i * count + j] = norm * std::norm(tf::project(state, {n, X, P, scale}, opts));
      }
    }
  });

  auto f = open_output(output_path(ctx.cfg, "density.csv"));
  csv_header(f, ctx, Json{{"state", desc}, {"n", n}});
  f << "X,P,density\n";
  double mass = 0.0;
  for (int i = 0; i < count; ++i) {
    const double X = ex.mean + hX * (i - half);
    for (int j = 0; j < count; ++j) {
      const double v = rho[static_cast<std::size_t>(i) * count + j];
      mass += v;
      f << d(X) << "," << d(ep.mean + hP * (j - half)) << "," << d(v) << "\n";
    }
  }
  mass *= hX * hP;
  f << "# cell_area: " << d(hX * hP) << "\n";
  f << "# mass: " << d(mass) << "\n";
  ctx.out << "density of n = " << n << " on " << count << "x" << count << " nodes; mass "
          << d(mass) << "\n";
  return 0;
}

struct KernelOptions {
  std::string sweep = "orders";
  int n = 0;
  int np = 0;
  double X = 0.0;
  double P = 0.0;
  std::optional<double> a;
  double Xp = 0.0;
  double Pp = 0.0;
  std::optional<double> ap;
};

int cmd_kernel(const Context& ctx, const KernelOptions& o) {
  const double hbar = ctx.cfg.at("hbar").get<double>();
  const double a0 = ctx.cfg.at("a").get<double>();
  const ScaleParam left(o.a.value_or(a0), hbar);
  const ScaleParam right(o.ap.value_or(a0), hbar);
  std::vector<kernel::KernelArgs> rows;
  if (o.sweep == "orders") {
    const int N = ctx.cfg.at("truncation").at("N").get<int>();
    for (int n = 0; n <= N; ++n) {
      for (int m = 0; m <= N; ++m) rows.push_back({{n, o.X, o.P, left}, {m, o.Xp, o.Pp, right}});
    }
  } else if (o.sweep == "phase") {
    const double divisor = ctx.cfg.at("sampling").at("step_divisor").get<double>();
    const int half =
        static_cast<int>(std::lround(ctx.cfg.at("sampling").at("extent").get<double>() * divisor));
    const double hX = left.a() / divisor;
    const double hP = left.b() / divisor;
    for (int i = -half; i <= half; ++i) {
      for (int j = -half; j <= half; ++j) {
        rows.push_back({{o.n, o.Xp + i * hX, o.Pp + j * hP, left}, {o.np, o.Xp, o.Pp, right}});
      }
    }
  } else {
    throw ConfigError("unknown sweep '" + o.sweep + "' (orders, phase)");
  }
  for (const auto& r : rows) r.validate();

  auto f = open_output(output_path(ctx.cfg, "kernel.csv"));
  csv_header(f, ctx, Json{{"sweep", o.sweep}});
  f << "n,X,P,a,n',X',P',a',re_chi,im_chi,abs_chi\n";
  for (const auto& r : rows) {
    const Complex c = kernel::chi(r);
    f << r.left.n << "," << d(r.left.X) << "," << d(r.left.P) << "," << d(r.left.scale.a()) << ","
      << r.right.n << "," << d(r.right.X) << "," << d(r.right.P) << "," << d(r.right.scale.a())
      << "," << d(c.real()) << "," << d(c.imag()) << "," << d(std::abs(c)) << "\n";
  }
  ctx.out << "kernel table with " << rows.size() << " rows\n";
  return 0;
}

int cmd_basis(const Context& ctx, int n, double X, double P, std::optional<double> a) {
  const ScaleParam scale(a.value_or(ctx.cfg.at("a").get<double>()), ctx.cfg.at("hbar").get<double>());
  const PhaseIndex idx{n, X, P, scale};
  idx.validate();
  const int points = ctx.cfg.at("sampling").at("points").get<int>();
  const double reach = ctx.cfg.at("sampling").at("extent").get<double>() * std::sqrt(2.0 * n + 1.0);
  auto f = open_output(output_path(ctx.cfg, "basis.csv"));
  Json label = idx;
  csv_header(f, ctx, Json{{"index", label}});
  f << "x,re_phi,im_phi,p,re_phi_tilde,im_phi_tilde\n";
  for (int k = 0; k < points; ++k) {
    const double t = -1.0 + 2.0 * k / (points - 1);
    const double x = X + t * reach * scale.a();
    const double p = P + t * reach * scale.b();
    const Complex u = phi(idx, x);
    const Complex v = phi_tilde(idx, p);
    f << d(x) << "," << d(u.real()) << "," << d(u.imag()) << "," << d(p) << "," << d(v.real())
      << "," << d(v.imag()) << "\n";
  }
  ctx.out << "sampled phi_" << n << " at " << points << " points\n";
  return 0;
}

std::vector<std::pair<std::string, std::string>> split_overrides(
    const std::vector<std::string>& extras) {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& tok = extras[i];
    if (tok.rfind("--", 0) != 0 || tok.size() < 3) {
      throw ConfigError("unexpected argument '" + tok + "'");
    }
    const auto eq = tok.find('=');
    if (eq != std::string::npos) {
      out.emplace_back(tok.substr(2, eq - 2), tok.substr(eq + 1));
    } else {
      if (i + 1 >= extras.size()) throw ConfigError("missing value for '" + tok + "'");
      out.emplace_back(tok.substr(2), extras[++i]);
    }
  }
  return out;
}

void add_state_options(CLI::App* sub, StateOptions& s) {
  sub->add_option("--state", s.path, "State file: JSON description or 3-column CSV (x, re, im)");
  sub->add_option("--preset", s.preset, "Built-in state: basis or packet");
  sub->add_option("--preset-n", s.preset_n, "Order of the basis preset");
  sub->add_option("--center", s.center, "Preset mean position");
  sub->add_option("--width", s.width, "Preset half-width (defaults to config a)");
  sub->add_option("--momentum", s.momentum, "Preset mean momentum");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Harmonic phase-space representation toolkit"};
  app.name("phasekit");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  Common common;
  StateOptions state_opts;
  KernelOptions kopts;
  int n = 0;
  double X = 0.0;
  double P = 0.0;
  std::optional<double> a;

  auto common_options = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "JSON config file (else $PHASEKIT_CONFIG)");
    sub->add_option("--workers", common.workers, "Worker threads (0 = all cores)");
    sub->allow_extras();
    sub->footer("Any config key can be overridden as --dotted.key VALUE.");
  };

  auto* verify_cmd = app.add_subcommand("verify", "Run the verification suite");
  common_options(verify_cmd);

  auto* project_cmd = app.add_subcommand("project", "Phase-space spectrum of a state");
  common_options(project_cmd);
  add_state_options(project_cmd, state_opts);
  project_cmd->add_option("--X", X, "Base mean position");
  project_cmd->add_option("--P", P, "Base mean momentum");

  auto* density_cmd = app.add_subcommand("density", "Phase-space density |Psi^n|^2 / 2 pi hbar");
  common_options(density_cmd);
  add_state_options(density_cmd, state_opts);
  density_cmd->add_option("--n", n, "Excitation number");

  auto* kernel_cmd = app.add_subcommand("kernel", "Overlap kernel table");
  common_options(kernel_cmd);
  kernel_cmd->add_option("--sweep", kopts.sweep, "orders (n, n' <= N) or phase (X, P lattice)");
  kernel_cmd->add_option("--n", kopts.n, "Left order (phase sweep)");
  kernel_cmd->add_option("--np", kopts.np, "Right order (phase sweep)");
  kernel_cmd->add_option("--X", kopts.X, "Left mean position (orders sweep)");
  kernel_cmd->add_option("--P", kopts.P, "Left mean momentum (orders sweep)");
  kernel_cmd->add_option("--a", kopts.a, "Left half-width (defaults to config a)");
  kernel_cmd->add_option("--Xp", kopts.Xp, "Right mean position");
  kernel_cmd->add_option("--Pp", kopts.Pp, "Right mean momentum");
  kernel_cmd->add_option("--ap", kopts.ap, "Right half-width (defaults to config a)");

  auto* basis_cmd = app.add_subcommand("basis", "Samples of phi_n and its momentum counterpart");
  common_options(basis_cmd);
  basis_cmd->add_option("--n", n, "Excitation number");
  basis_cmd->add_option("--X", X, "Mean position");
  basis_cmd->add_option("--P", P, "Mean momentum");
  basis_cmd->add_option("--a", a, "Half-width (defaults to config a)");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  Json cfg;
  StateSpec state = StateSpec::gaussian_packet(0.0, 1.0, 0.0);
  Json desc;
  try {
    std::optional<std::string> file;
    if (!common.config_path.empty()) {
      file = common.config_path;
    } else if (const char* env = std::getenv("PHASEKIT_CONFIG"); env && *env) {
      file = env;
    }
    cfg = resolve_config(file, split_overrides(sub->remaining()));
    if (sub == project_cmd || sub == density_cmd) state = load_state(state_opts, cfg, desc);
  } catch (const Error& e) {
    err << "phasekit: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "phasekit: bad input: " << e.what() << "\n";
    return 2;
  }

  Context ctx{cfg, sub->get_name(), out, err};
  try {
    if (sub == verify_cmd) return cmd_verify(ctx, common.workers);
    if (sub == project_cmd) return cmd_project(ctx, state, desc, X, P, common.workers);
    if (sub == density_cmd) return cmd_density(ctx, state, desc, n, common.workers);
    if (sub == kernel_cmd) return cmd_kernel(ctx, kopts);
    return cmd_basis(ctx, n, X, P, a);
  } catch (const ConfigError& e) {
    err << "phasekit: " << e.what() << "\n";
    return 2;
  } catch (const InvalidArgument& e) {
    err << "phasekit: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "phasekit: numerical failure: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace phasekit::cli
