#include "cli.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcl/theorems.hpp"

namespace qcl::cli {

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<double> parse_reals(const std::string& text, const char* what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string piece = text.substr(pos, comma - pos);
    char* end = nullptr;
    const double v = std::strtod(piece.c_str(), &end);
    if (piece.empty() || end != piece.c_str() + piece.size())
      fail(ErrorCode::BadParameters,
           std::string("bad number in ") + what + ": '" + piece + "'");
    out.push_back(v);
    pos = comma + 1;
    if (comma == text.size()) break;
  }
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return char(std::tolower(c)); });
  return s;
}

// ---------------------------------------------------------------------------
// RunConfig: the JSON-file form of a verification run
// ---------------------------------------------------------------------------

struct RunConfig {
  std::string theorem = "fueter32";
  std::string f = "const:1";
  std::array<double, 4> q0{0, 0, 0, 0};
  std::string surface;          // empty: theorem default
  int gl_order = 32;
  int panels = 1;
  int azimuthal = 0;            // 0: 2 * gl_order
  double tolerance = 0;         // 0: theorem default
  std::string format = "json";  // json | csv
  std::string route = "surface";
  unsigned seed = 24601;
  bool check_regularity = true;
};

json config_to_json(const RunConfig& c) {
  return json{{"theorem", c.theorem},
              {"f", c.f},
              {"q0", c.q0},
              {"surface", c.surface},
              {"gl_order", c.gl_order},
              {"panels", c.panels},
              {"azimuthal", c.azimuthal},
              {"tolerance", c.tolerance},
              {"format", c.format},
              {"route", c.route},
              {"seed", c.seed},
              {"check_regularity", c.check_regularity}};
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "theorem") value.get_to(c.theorem);
    else if (key == "f") value.get_to(c.f);
    else if (key == "q0") value.get_to(c.q0);
    else if (key == "surface") value.get_to(c.surface);
    else if (key == "gl_order") value.get_to(c.gl_order);
    else if (key == "panels") value.get_to(c.panels);
    else if (key == "azimuthal") value.get_to(c.azimuthal);
    else if (key == "tolerance") value.get_to(c.tolerance);
    else if (key == "format") value.get_to(c.format);
    else if (key == "route") value.get_to(c.route);
    else if (key == "seed") value.get_to(c.seed);
    else if (key == "check_regularity") value.get_to(c.check_regularity);
    else fail(ErrorCode::BadParameters, "unknown config key: " + key);
  }
  return c;
}

void validate_config(const RunConfig& c) {
  if (!theorem_from_string(c.theorem))
    fail(ErrorCode::BadParameters, "unknown theorem id: " + c.theorem);
  if (c.format != "json" && c.format != "csv")
    fail(ErrorCode::BadParameters, "format must be json or csv");
  if (c.route != "surface" && c.route != "narrow" && c.route != "wide")
    fail(ErrorCode::BadParameters, "route must be surface, narrow or wide");
  if (c.gl_order < 1 || c.panels < 1)
    fail(ErrorCode::BadParameters, "quadrature orders must be positive");
  if (!c.surface.empty()) SurfaceDescriptor::parse(c.surface);
}

// ---------------------------------------------------------------------------
// Field specs: const:<value> | poly:<text> | kernel:<name>[:k=v,...]
// ---------------------------------------------------------------------------

KernelKind kernel_kind_from_string(const std::string& s) {
  const std::string v = lower(s);
  if (v == "fueterh") return KernelKind::FueterH;
  if (v == "altaxis") return KernelKind::AltAxis;
  if (v == "zeroradial") return KernelKind::ZeroRadial;
  if (v == "bialtaxis") return KernelKind::BiAltAxis;
  if (v == "bifueter") return KernelKind::BiFueter;
  fail(ErrorCode::BadParameters, "unknown kernel name: " + s);
}

Kernel parse_kernel_spec(const std::string& spec, const Point4& default_q0) {
  const auto colon = spec.find(':');
  const std::string name_str = spec.substr(0, colon);
  const KernelKind kind = kernel_kind_from_string(name_str);
  Point4 q0 = default_q0;
  int axis = 1;
  bool conj = false;
  if (colon != std::string::npos) {
    std::string rest = spec.substr(colon + 1);
    std::size_t pos = 0;
    while (pos < rest.size()) {
      auto comma = rest.find(',', pos);
      if (comma == std::string::npos) comma = rest.size();
      const std::string pair = rest.substr(pos, comma - pos);
      pos = comma + 1;
      if (pair.empty()) continue;
      const auto eq = pair.find('=');
      const std::string key = eq == std::string::npos ? pair : pair.substr(0, eq);
      const std::string val = eq == std::string::npos ? "1" : pair.substr(eq + 1);
      const double num = val.empty() ? 0.0 : std::strtod(val.c_str(), nullptr);
      if (key == "axis") axis = int(num);
      else if (key == "conj") conj = num != 0;
      else if (key == "cw") q0.w = num;
      else if (key == "cx") q0.x = num;
      else if (key == "cy") q0.y = num;
      else if (key == "cz") q0.z = num;
      else fail(ErrorCode::BadParameters, "unknown kernel option: " + key);
    }
  }
  return Kernel(kind, q0, axis, conj);
}

QField parse_field(const std::string& spec, const Point4& q0) {
  const auto colon = spec.find(':');
  const std::string head = colon == std::string::npos ? spec : spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (head == "const") {
    const PolyField p = PolyField::parse(rest.empty() ? "1" : rest);
    if (p.degree() > 0)
      fail(ErrorCode::BadParameters, "const spec must not depend on coordinates");
    return QField::constant(p.eval(EvalPoint::at(0, 0, 0, 0)));
  }
  if (head == "poly") return QField::poly(PolyField::parse(rest));
  if (head == "kernel") return QField::kernel(parse_kernel_spec(rest, q0));
  fail(ErrorCode::BadParameters,
       "field spec must start with const:, poly: or kernel:, got '" + spec + "'");
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

std::ostream& sink(std::ofstream& file, const std::string& path,
                   std::ostream& out) {
  if (path.empty()) return out;
  file.open(path);
  if (!file) fail(ErrorCode::BadParameters, "cannot open output file " + path);
  return file;
}

Report run_configured(const RunConfig& cfg) {
  const TheoremId t = *theorem_from_string(cfg.theorem);
  const Point4 q0{cfg.q0[0], cfg.q0[1], cfg.q0[2], cfg.q0[3]};
  const QField f = parse_field(cfg.f, q0);
  QuadRule rule;
  rule.gl_order = cfg.gl_order;
  rule.panels = cfg.panels;
  rule.azimuthal = cfg.azimuthal;

  if (cfg.route == "narrow") {
    double rho = 1.0;
    if (!cfg.surface.empty()) rho = SurfaceDescriptor::parse(cfg.surface).rho;
    Report rep = run_bi_narrow(t, f, q0, rho, rule);
    if (cfg.tolerance > 0) {
      rep.tolerance = cfg.tolerance;
      rep.pass = rep.abs_err <= rep.tolerance;
    }
    return rep;
  }
  if (cfg.route == "wide") {
    double t1 = 1.0;
    if (!cfg.surface.empty()) {
      const auto d = SurfaceDescriptor::parse(cfg.surface);
      t1 = d.extent_t1() > 0 ? d.extent_t1() : 1.0;
    }
    Report rep = run_bi_wide(t, f, q0, t1, rule);
    if (cfg.tolerance > 0) {
      rep.tolerance = cfg.tolerance;
      rep.pass = rep.abs_err <= rep.tolerance;
    }
    return rep;
  }

  RunOptions opts;
  opts.rule = rule;
  opts.tolerance = cfg.tolerance;
  opts.check_regularity = cfg.check_regularity;
  opts.sample_seed = cfg.seed;
  const SurfaceDescriptor surf = cfg.surface.empty()
                                     ? default_surface(t, q0)
                                     : SurfaceDescriptor::parse(cfg.surface);
  return run(t, f, q0, surf, opts);
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const Report rep = run_configured(cfg);
  if (cfg.format == "csv")
    out << Report::csv_header() << "\n" << rep.to_csv() << "\n";
  else
    out << rep.to_json() << "\n";
  return rep.pass ? 0 : 1;
}

int cmd_table(const RunConfig& cfg, std::ostream& out) {
  const Point4 q0{cfg.q0[0], cfg.q0[1], cfg.q0[2], cfg.q0[3]};
  const QField one = QField::constant(BiQuat::scalar(1.0));
  QuadRule rule;
  rule.gl_order = cfg.gl_order;
  rule.panels = cfg.panels;
  rule.azimuthal = cfg.azimuthal;
  RunOptions opts;
  opts.rule = rule;
  opts.sample_seed = cfg.seed;

  std::vector<Report> rows;
  for (TheoremId t : all_theorems())
    rows.push_back(run(t, one, q0, default_surface(t, q0), opts));
  rows.push_back(run_bi_narrow(TheoremId::BiAlt71, one, q0, 1.0, rule));
  rows.push_back(run_bi_wide(TheoremId::BiAlt71, one, q0, 1.0, rule));

  bool all_pass = true;
  for (const auto& r : rows) all_pass = all_pass && r.pass;

  if (cfg.format == "csv") {
    out << Report::csv_header() << "\n";
    for (const auto& r : rows) out << r.to_csv() << "\n";
  } else {
    out << "{\"rows\":[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i) out << ",";
      out << rows[i].to_json();
    }
    out << "],\"all_pass\":" << (all_pass ? "true" : "false") << "}\n";
  }
  return all_pass ? 0 : 1;
}

int cmd_convergence(const RunConfig& cfg, const std::vector<int>& orders,
                    bool self_test, std::ostream& out) {
  if (orders.size() < 2)
    fail(ErrorCode::BadParameters, "convergence needs at least two orders");
  std::vector<Report> rows;
  for (int order : orders) {
    RunConfig c = cfg;
    c.gl_order = order;
    rows.push_back(run_configured(c));
  }
  if (cfg.format == "csv") {
    out << "order," << Report::csv_header() << "\n";
    for (std::size_t i = 0; i < rows.size(); ++i)
      out << orders[i] << "," << rows[i].to_csv() << "\n";
  } else {
    out << "{\"rows\":[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i) out << ",";
      out << "{\"order\":" << orders[i] << ",\"report\":" << rows[i].to_json()
          << "}";
    }
    out << "]}\n";
  }
  if (self_test) {
    const double floor = 1e-11;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i - 1].abs_err <= floor) break;
      if (rows[i].abs_err >= rows[i - 1].abs_err) return 1;
    }
  }
  return 0;
}

int cmd_kernel_eval(const std::string& kernel_spec,
                    const std::array<double, 4>& q0v,
                    const std::vector<double>& point, std::ostream& out) {
  const Point4 q0{q0v[0], q0v[1], q0v[2], q0v[3]};
  const Kernel k = parse_kernel_spec(kernel_spec, q0);
  EvalPoint p;
  if (point.size() == 4) {
    p = EvalPoint::at(point[0], point[1], point[2], point[3]);
  } else if (point.size() == 8) {
    p.w = Complex(point[0], point[1]);
    p.x = Complex(point[2], point[3]);
    p.y = Complex(point[4], point[5]);
    p.z = Complex(point[6], point[7]);
  } else {
    fail(ErrorCode::BadParameters,
         "--point needs 4 reals or 8 interleaved re,im values");
  }
  const BiQuat v = k.eval(p);
  const auto pc = BiQuat{p.w, p.x, p.y, p.z}.components();
  const auto vc = v.components();
  out << "{\"kernel\":\"" << k.name() << "\",\"point\":[";
  for (int i = 0; i < 8; ++i) out << (i ? "," : "") << fmt_double(pc[i]);
  out << "],\"value\":[";
  for (int i = 0; i < 8; ++i) out << (i ? "," : "") << fmt_double(vc[i]);
  out << "],\"clearance\":" << fmt_double(k.locus().clearance(p)) << "}\n";
  return 0;
}

Complex circle_residue(const RationalFn& f, Complex pole, double radius) {
  Contour c;
  c.segments.push_back(Segment::arc(pole, radius, 0.0, 2.0 * kPi));
  const Complex integral = contour_integrate(
      [&](Complex z) { return f.eval(z); }, c, ContourRule{32, 8});
  return integral / (2.0 * kPi * Complex(0, 1));
}

int cmd_residue(const std::vector<double>& num, const std::vector<double>& den,
                const std::vector<double>& pole_v, int order,
                std::ostream& out) {
  struct Row {
    std::string label;
    RationalFn fn;
    Complex pole;
    int order;
    Complex expected;
    bool has_expected;
  };
  std::vector<Row> rows;
  if (!num.empty() || !den.empty()) {
    if (num.empty() || den.empty() || pole_v.empty() || order < 1)
      fail(ErrorCode::BadParameters,
           "custom residue needs --num, --den, --pole and --order");
    std::vector<Complex> nc(num.begin(), num.end());
    std::vector<Complex> dc(den.begin(), den.end());
    const Complex pole(pole_v[0], pole_v.size() > 1 ? pole_v[1] : 0.0);
    rows.push_back({"custom", {Poly(nc), Poly(dc)}, pole, order, {}, false});
  } else {
    // Built-in check rows: the three residues the verification routes use.
    const Poly den4{1.0, 0.0, -2.0, 0.0, 1.0};  // (z^2-1)^2
    rows.push_back({"(z^2-1)^-2 at +1", {Poly{1.0}, den4}, 1.0, 2,
                    Complex(-0.25), true});
    rows.push_back({"(z^2-1)^-1 at -1", {Poly{1.0}, Poly{-1.0, 0.0, 1.0}},
                    -1.0, 1, Complex(-0.5), true});
    rows.push_back({"(5z^2-3)/(z^2-1)^2 at -1",
                    {Poly{-3.0, 0.0, 5.0}, den4}, -1.0, 2, Complex(-2.0),
                    true});
  }

  bool all_ok = true;
  out << "label,analytic_re,analytic_im,numeric_re,numeric_im,diff\n";
  for (const auto& r : rows) {
    const Complex analytic = residue(r.fn, r.pole, r.order);
    const Complex numeric = circle_residue(r.fn, r.pole, 0.05);
    const double diff = std::abs(analytic - numeric);
    out << "\"" << r.label << "\"," << fmt_double(analytic.real()) << ","
        << fmt_double(analytic.imag()) << "," << fmt_double(numeric.real())
        << "," << fmt_double(numeric.imag()) << "," << fmt_double(diff)
        << "\n";
    if (diff > 1e-8) all_ok = false;
    if (r.has_expected && std::abs(analytic - r.expected) > 1e-12)
      all_ok = false;
  }

  if (num.empty() && den.empty()) {
    // Detoured full-line contour of (z^2-1)^-2 with the pole at +1 inside
    // the upper closure: expected -i*pi/2.
    const Contour c = real_line_contour(
        {{-1.0, PoleSpec::Policy::Exclude}, {1.0, PoleSpec::Policy::Include}},
        30.0, 0.25, /*with_tails=*/true);
    const RationalFn f{Poly{1.0}, Poly{1.0, 0.0, -2.0, 0.0, 1.0}};
    const Complex v =
        contour_integrate([&](Complex z) { return f.eval(z); }, c,
                          ContourRule{32, 8});
    const Complex expected(0.0, -kPi / 2.0);
    const double diff = std::abs(v - expected);
    out << "\"contour include(+1) of (z^2-1)^-2\"," << fmt_double(v.real())
        << "," << fmt_double(v.imag()) << "," << fmt_double(expected.real())
        << "," << fmt_double(expected.imag()) << "," << fmt_double(diff)
        << "\n";
    if (diff > 1e-8) all_ok = false;
  }
  return all_ok ? 0 : 1;
}

}  // namespace

std::string config_round_trip(const std::string& json_text) {
  const RunConfig cfg = config_from_json(json::parse(json_text));
  validate_config(cfg);
  return config_to_json(cfg).dump(2);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Numerical verification of quaternion and biquaternion "
               "integral theorems"};
  app.require_subcommand(1);

  // Shared run-config flags (merged over an optional --config JSON file).
  std::string config_path, theorem, fspec, q0s, surface, format, route,
      output;
  double tol = -1;
  int quad = -1, panels = -1, azimuthal = -1;
  long long seed = -1;
  bool no_reg_check = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file; flags override");
    cmd->add_option("--theorem", theorem, "theorem id, e.g. fueter32");
    cmd->add_option("--f", fspec, "field spec: const:1 | poly:\"x - w*I\" | kernel:fueterH");
    cmd->add_option("--q0", q0s, "kernel point, four comma-separated reals");
    cmd->add_option("--surface", surface,
                    "surface descriptor, e.g. sphere:r=1 or prism:rho=1");
    cmd->add_option("--quad", quad, "Gauss-Legendre order per axis");
    cmd->add_option("--panels", panels, "panels per non-periodic axis");
    cmd->add_option("--azimuthal", azimuthal, "azimuthal node count (0: 2*order)");
    cmd->add_option("--tol", tol, "absolute tolerance (default: per theorem)");
    cmd->add_option("--format", format, "json or csv");
    cmd->add_option("--output", output, "write the report to a file");
    cmd->add_option("--seed", seed, "seed for sampled property checks");
    cmd->add_flag("--no-regularity-check", no_reg_check,
                  "skip the regularity pre-check of f");
    return cmd;
  };

  CLI::App* verify = add_common(app.add_subcommand(
      "verify", "run one theorem and report value vs expected"));
  verify->add_option("--route", route, "surface (default), narrow or wide");

  CLI::App* conv = add_common(app.add_subcommand(
      "convergence", "re-run one theorem over a list of quadrature orders"));
  std::string orders_s;
  bool self_test = false;
  conv->add_option("--orders", orders_s, "comma-separated Gauss-Legendre orders")
      ->required();
  conv->add_flag("--self-test", self_test,
                 "exit 1 unless errors decrease monotonically to the floor");

  CLI::App* table = add_common(app.add_subcommand(
      "table", "verify every theorem plus both biAlt71 prismatic routes"));

  CLI::App* keval = app.add_subcommand("kernel-eval",
                                       "evaluate a singular kernel at a point");
  std::string kernel_spec, point_s;
  keval->add_option("--kernel", kernel_spec,
                    "fueterH | altAxis | zeroRadial | biAltAxis | biFueter, "
                    "with optional :axis=..,conj=..,cw=..")
      ->required();
  keval->add_option("--q0", q0s, "kernel point, four comma-separated reals");
  keval->add_option("--point", point_s,
                    "evaluation point: 4 reals or 8 interleaved re,im")
      ->required();
  keval->add_option("--output", output, "write the result to a file");

  CLI::App* resid = app.add_subcommand(
      "residue", "self-test table of the route residues, or a custom input");
  std::string num_s, den_s, pole_s;
  int res_order = 0;
  resid->add_option("--num", num_s, "numerator coefficients, ascending");
  resid->add_option("--den", den_s, "denominator coefficients, ascending");
  resid->add_option("--pole", pole_s, "pole location re[,im]");
  resid->add_option("--order", res_order, "pole order (1 or 2)");
  resid->add_option("--output", output, "write the table to a file");

  std::vector<const char*> argv;
  argv.push_back("qcl");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    app.exit(e, out, err);
    return 2;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in)
        fail(ErrorCode::BadParameters, "cannot read config " + config_path);
      json j;
      in >> j;
      cfg = config_from_json(j);
    }
    if (!theorem.empty()) cfg.theorem = theorem;
    if (!fspec.empty()) cfg.f = fspec;
    if (!q0s.empty()) {
      const auto v = parse_reals(q0s, "--q0");
      if (v.size() != 4)
        fail(ErrorCode::BadParameters, "--q0 needs exactly four reals");
      std::copy(v.begin(), v.end(), cfg.q0.begin());
    }
    if (!surface.empty()) cfg.surface = surface;
    if (quad >= 0) cfg.gl_order = quad;
    if (panels >= 0) cfg.panels = panels;
    if (azimuthal >= 0) cfg.azimuthal = azimuthal;
    if (tol >= 0) cfg.tolerance = tol;
    if (!format.empty()) cfg.format = format;
    if (!route.empty()) cfg.route = route;
    if (seed >= 0) cfg.seed = unsigned(seed);
    if (no_reg_check) cfg.check_regularity = false;
    validate_config(cfg);

    std::ofstream file;
    std::ostream& dst = sink(file, output, out);

    if (verify->parsed()) return cmd_verify(cfg, dst);
    if (table->parsed()) return cmd_table(cfg, dst);
    if (conv->parsed()) {
      std::vector<int> orders;
      for (double d : parse_reals(orders_s, "--orders"))
        orders.push_back(int(d));
      return cmd_convergence(cfg, orders, self_test, dst);
    }
    if (keval->parsed())
      return cmd_kernel_eval(kernel_spec, cfg.q0, parse_reals(point_s, "--point"),
                             dst);
    if (resid->parsed()) {
      const auto num = num_s.empty() ? std::vector<double>{} : parse_reals(num_s, "--num");
      const auto den = den_s.empty() ? std::vector<double>{} : parse_reals(den_s, "--den");
      const auto pole = pole_s.empty() ? std::vector<double>{} : parse_reals(pole_s, "--pole");
      return cmd_residue(num, den, pole, res_order, dst);
    }
    err << "error: no subcommand selected\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace qcl::cli
