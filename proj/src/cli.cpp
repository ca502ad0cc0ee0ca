#include "circext/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "circext/certifier.hpp"
#include "circext/errors.hpp"
#include "circext/kernel.hpp"
#include "circext/plot.hpp"
#include "circext/report.hpp"
#include "circext/spectrum.hpp"
#include "circext/threshold.hpp"

namespace circext::cli {

namespace {

using report::Json;

const std::map<std::string, Command> kCommands = {{"rho", Command::rho},
                                                  {"certify", Command::certify},
                                                  {"scan", Command::scan},
                                                  {"spectrum", Command::spectrum},
                                                  {"report", Command::report}};

std::string command_name(Command c) {
  for (const auto& [name, cmd] : kCommands)
    if (cmd == c) return name;
  return "?";
}

const std::map<Command, std::set<std::string>>& allowed_keys() {
  static const std::map<Command, std::set<std::string>> keys = {
      {Command::rho, {"r", "tol", "out"}},
      {Command::certify, {"lemma", "all", "eps", "eps-prime", "grid-s", "grid-alpha", "bound-scale", "jobs", "out"}},
      {Command::scan, {"lo", "hi", "points", "grid-s", "grid-alpha", "plot", "jobs", "out"}},
      {Command::spectrum, {"N", "d", "study", "N-list", "eigenvalues", "entries", "cache", "jobs", "out"}},
      {Command::report, {"tol", "grid-s", "grid-alpha", "N", "plot", "jobs", "out"}},
  };
  return keys;
}

const std::vector<std::string> kLemmas = {"rho_asymptotics", "aux_integrals",  "psi_bounds",
                                          "expansion_error", "trig_log",       "multiplier_lower",
                                          "cauchy_schwarz_factor", "step5"};

class Params {
 public:
  explicit Params(const std::map<std::string, std::string>& p) : p_(p) {}

  bool has(const std::string& k) const { return p_.count(k) > 0; }

  std::string str(const std::string& k, const std::string& def = "") const {
    auto it = p_.find(k);
    return it == p_.end() ? def : it->second;
  }

  double num(const std::string& k, double def) const {
    if (!has(k)) return def;
    const std::string& s = p_.at(k);
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw UsageError("--" + k + ": not a number: '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v)) throw UsageError("--" + k + ": not a finite number: '" + s + "'");
    return v;
  }

  double positive(const std::string& k, double def) const {
    const double v = num(k, def);
    if (!(v > 0.0)) throw UsageError("--" + k + " must be positive");
    return v;
  }

  int integer(const std::string& k, int def) const {
    if (!has(k)) return def;
    const std::string& s = p_.at(k);
    std::size_t used = 0;
    long v;
    try {
      v = std::stol(s, &used);
    } catch (const std::exception&) {
      throw UsageError("--" + k + ": not an integer: '" + s + "'");
    }
    if (used != s.size() || v < INT32_MIN || v > INT32_MAX) throw UsageError("--" + k + ": not an integer: '" + s + "'");
    return static_cast<int>(v);
  }

  bool flag(const std::string& k) const {
    if (!has(k)) return false;
    const std::string& s = p_.at(k);
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw UsageError("--" + k + " takes no value");
  }

 private:
  const std::map<std::string, std::string>& p_;
};

Json parameters_json(const RunConfig& cfg) {
  Json j = Json::object();
  for (const auto& [k, v] : cfg.parameters)
    if (k != "out") j[k] = v;
  j["format"] = cfg.output_format == Format::json ? "json" : cfg.output_format == Format::csv ? "csv" : "svg";
  return j;
}

void write_output(const Params& p, const std::string& text, std::ostream& out) {
  if (!p.has("out")) {
    out << text;
    out.flush();
    return;
  }
  const std::filesystem::path path = p.str("out");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw IoError("error writing " + path.string());
}

void require_format(const RunConfig& cfg, std::initializer_list<Format> ok) {
  for (Format f : ok)
    if (cfg.output_format == f) return;
  throw UsageError("output format not supported by '" + command_name(cfg.command) + "'");
}

int jobs_of(const Params& p) {
  const int j = p.integer("jobs", 0);
  if (j < 0) throw UsageError("--jobs must be >= 0");
  return j;
}

threshold::BallGrid ball_grid(const Params& p) {
  threshold::BallGrid g;
  g.s_points = p.integer("grid-s", g.s_points);
  g.alpha_points = p.integer("grid-alpha", g.alpha_points);
  if (g.s_points < 2 || g.alpha_points < 2) throw UsageError("--grid-s and --grid-alpha must be >= 2");
  g.jobs = jobs_of(p);
  return g;
}

std::string key_value_csv(const std::vector<std::pair<std::string, std::string>>& rows) {
  std::string s = "key,value\n";
  for (const auto& [k, v] : rows) s += k + "," + v + "\n";
  return s;
}

// ---- commands; each returns the exit code and fills `result` ----

int cmd_rho(const RunConfig& cfg, const Params& p, Json& result, std::string& text) {
  require_format(cfg, {Format::json, Format::csv});
  if (!p.has("r")) throw UsageError("rho: --r is required");
  const double r = p.num("r", 0.0);
  const double tol = p.positive("tol", 1e-10);
  if (r < 0.0) throw UsageError("--r must be nonnegative");
  const auto est = kernel::rho(r, tol);
  result = {{"r", r},
            {"value", est.value},
            {"method", std::string(kernel::method_name(est.method))},
            {"error_bound", report::json_number(est.error_bound)}};
  std::vector<std::pair<std::string, std::string>> rows = {
      {"r", report::format_number(r)},
      {"value", report::format_number(est.value)},
      {"method", std::string(kernel::method_name(est.method))},
      {"error_bound", report::format_number(est.error_bound)}};
  if (r != 1.0 && r < 3.0) {
    const double e = kernel::rho_elliptic(r).value;
    const double q = kernel::rho_quadrature(r).value;
    const double rel = std::abs(e - q) / std::abs(e);
    result["dual_check"] = {{"elliptic", e}, {"quadrature", q}, {"relative_difference", rel}};
    rows.push_back({"elliptic", report::format_number(e)});
    rows.push_back({"quadrature", report::format_number(q)});
    rows.push_back({"relative_difference", report::format_number(rel)});
  }
  if (cfg.output_format == Format::csv) text = key_value_csv(rows);
  return kExitPass;
}

GridSpec ball_override(GridSpec g, const Params& p, double eps) {
  for (auto& a : g.axes) {
    if (a.name == "s") {
      const int n = p.integer("grid-s", a.points);
      a.points = n;
      a.hi = eps;
      a.lo = eps / n;
    } else if (a.name == "alpha") {
      a.points = p.integer("grid-alpha", a.points);
    }
  }
  g.validate();
  return g;
}

std::vector<certify::CertReport> run_certifiers(const std::vector<std::string>& lemmas, double eps, double eps_prime,
                                                const Params& p, const certify::Options& opt, std::ostream& err) {
  using namespace certify;
  std::vector<CertReport> out;
  for (const auto& id : lemmas) {
    if (id == "rho_asymptotics") out.push_back(certify_rho_asymptotics(default_rho_asymptotics_grid(), opt));
    else if (id == "aux_integrals") out.push_back(certify_aux_integrals(default_aux_integrals_grid(), opt));
    else if (id == "psi_bounds") out.push_back(certify_psi_bounds(ball_override(default_psi_grid(), p, eps), opt));
    else if (id == "expansion_error")
      out.push_back(certify_expansion_error(ball_override(default_expansion_grid(), p, eps), opt));
    else if (id == "trig_log") out.push_back(certify_trig_log(default_trig_log_grid(), opt));
    else if (id == "multiplier_lower")
      out.push_back(certify_multiplier_lower(ball_override(default_multiplier_grid(), p, eps), opt));
    else if (id == "cauchy_schwarz_factor")
      out.push_back(certify_cauchy_schwarz_factor(ball_override(default_cauchy_schwarz_grid(), p, eps), opt));
    else if (id == "step5") out.push_back(certify_step5(eps_prime, default_step5_grid(eps_prime), opt));
    err << "[circext] " << id << ": " << out.back().status << " (" << out.back().runtime_ms << " ms)\n";
  }
  return out;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) parts.push_back(item);
  return parts;
}

int verdict(const std::vector<certify::CertReport>& reports) {
  bool inconclusive = false;
  for (const auto& r : reports) {
    if (r.status == "failed") return kExitFailed;
    if (!r.passed) inconclusive = true;
  }
  return inconclusive ? kExitNumerical : kExitPass;
}

int cmd_certify(const RunConfig& cfg, const Params& p, Json& result, std::string& text, std::ostream& err) {
  require_format(cfg, {Format::json, Format::csv});
  std::vector<std::string> lemmas;
  if (p.flag("all")) {
    if (p.has("lemma")) throw UsageError("certify: give either --all or --lemma");
    lemmas = kLemmas;
  } else if (p.has("lemma")) {
    lemmas = split(p.str("lemma"));
    for (const auto& l : lemmas)
      if (std::find(kLemmas.begin(), kLemmas.end(), l) == kLemmas.end()) throw UsageError("certify: unknown lemma '" + l + "'");
  } else {
    throw UsageError("certify: give --all or --lemma NAME[,NAME...]");
  }
  const double eps = p.positive("eps", 0.05);
  if (eps > 0.5) throw UsageError("--eps must not exceed 0.5");
  const double eps_prime = p.positive("eps-prime", threshold::eps_prime_of(eps));
  certify::Options opt;
  opt.bound_scale = p.positive("bound-scale", 1.0);
  opt.jobs = jobs_of(p);
  const auto reports = run_certifiers(lemmas, eps, eps_prime, p, opt, err);
  Json list = Json::array();
  bool all = true;
  for (const auto& r : reports) {
    list.push_back(report::to_json(r));
    all = all && r.passed;
  }
  result = {{"eps", eps}, {"eps_prime", eps_prime}, {"passed", all}, {"reports", list}};
  if (cfg.output_format == Format::csv) text = report::csv_cert_reports(reports);
  return verdict(reports);
}

int cmd_scan(const RunConfig& cfg, const Params& p, Json& result, std::string& text) {
  require_format(cfg, {Format::json, Format::csv, Format::svg});
  const double lo = p.positive("lo", 0.01), hi = p.positive("hi", 0.13);
  const int points = p.integer("points", 25);
  if (points < 1) throw UsageError("--points must be >= 1");
  if (!(lo < hi) && points > 1) throw UsageError("--lo must be below --hi");
  const auto grid = ball_grid(p);
  const auto curve = threshold::scan(lo, points == 1 ? std::max(hi, lo * 1.0000001) : hi, points, grid);
  result = report::to_json(curve);
  if (p.has("plot")) plot::emit_plot(curve, p.str("plot"));
  if (cfg.output_format == Format::csv) text = report::csv_curve(curve);
  if (cfg.output_format == Format::svg) text = plot::render_svg(curve);
  return kExitPass;
}

int cmd_spectrum(const RunConfig& cfg, const Params& p, Json& result, std::string& text) {
  require_format(cfg, {Format::json, Format::csv});
  spectrum::PairIntegrator integrator(jobs_of(p));
  const std::string cache = p.str("cache");
  if (!cache.empty() && std::filesystem::exists(cache)) integrator.load(cache);
  const std::string study = p.str("study", "matrix");
  const double floor_tol = 1e-8, kernel_tol = 1e-6;
  int code = kExitPass;
  if (study == "matrix") {
    const int N = p.integer("N", 8), d = p.integer("d", 0);
    if (N < 0 || N % 2 || d % 2) throw UsageError("--N and --d must be even (N >= 0)");
    const auto m = spectrum::assemble(integrator, N, d);
    const auto ev = spectrum::eigenvalues(m);
    const int count = std::min<int>(p.integer("eigenvalues", static_cast<int>(ev.size())), static_cast<int>(ev.size()));
    if (count < 0) throw UsageError("--eigenvalues must be >= 0");
    const std::vector<double> shown(ev.begin(), ev.begin() + count);
    result = report::to_json(m, p.flag("entries"));
    result["eigenvalues"] = shown;
    const double fro = m.frobenius_norm();
    const bool psd = ev.empty() || ev.front() >= -floor_tol * fro;
    const bool kernel_ok = spectrum::constant_mode_residual(m) <= kernel_tol;
    result["positive_semidefinite"] = psd;
    result["constant_mode_in_kernel"] = kernel_ok;
    if (m.constant_mode() >= 0 && m.dim() > 1) result["lambda_min_nonconstant"] = spectrum::lambda_min_nonconstant(m);
    if (cfg.output_format == Format::csv) text = report::csv_matrix(m);
    code = psd && kernel_ok ? kExitPass : kExitFailed;
  } else if (study == "scaling") {
    std::vector<int> Ns;
    for (const auto& s : split(p.str("N-list", "8,12,16,20,24"))) {
      Params one({{"N", s}});
      Ns.push_back(one.integer("N", 0));
    }
    for (int n : Ns)
      if (n < 2 || n % 2 || n > 64) throw UsageError("--N-list entries must be even and in [2, 64]");
    const auto s = spectrum::scaling_study(integrator, Ns);
    result = report::to_json(s);
    bool ok = s.monotone;
    for (const auto& r : s.rows) ok = ok && r.lambda_min > 0.0 && r.min_eigenvalue_ratio >= -floor_tol && r.constant_residual <= kernel_tol;
    if (cfg.output_format == Format::csv) text = report::csv_scaling(s);
    code = ok ? kExitPass : kExitFailed;
  } else if (study == "concentration") {
    const int N = p.integer("N", 16);
    if (N < 2 || N % 2 || N > 32) throw UsageError("--N must be even and in [2, 32] for concentration");
    const auto r = spectrum::concentration_report(integrator, N);
    result = report::to_json(r);
    if (cfg.output_format == Format::csv) text = report::csv_concentration(r);
  } else {
    throw UsageError("--study must be matrix, scaling or concentration");
  }
  if (!cache.empty()) {
    try {
      integrator.save(cache);
    } catch (const std::runtime_error& e) {
      throw IoError(e.what());
    }
  }
  return code;
}

int cmd_report(const RunConfig& cfg, const Params& p, Json& result, std::string& text, std::ostream& err) {
  require_format(cfg, {Format::json, Format::csv});
  const double tol = p.positive("tol", 1e-4);
  if (tol < 1e-4) throw UsageError("--tol must be >= 1e-4 for the threshold search");
  const auto grid = ball_grid(p);
  const int N = p.integer("N", 12);
  if (N < 4 || N % 4 || N > 64) throw UsageError("--N must be a multiple of 4 in [4, 64]");

  const double eps_max = threshold::max_epsilon(tol, grid);
  const double eps_prime = threshold::eps_prime_of(eps_max);
  const double lhs = threshold::lhs_inf(0.05, grid), rhs = threshold::rhs_sup(0.05, grid);
  err << "[circext] threshold: eps = " << eps_max << "\n";

  certify::Options opt;
  opt.jobs = jobs_of(p);
  Params none(cfg.parameters);
  const auto reports = run_certifiers(kLemmas, 0.05, eps_prime, none, opt, err);

  std::vector<int> Ns;
  for (int n = 4; n <= N; n += 4) Ns.push_back(n);
  spectrum::PairIntegrator integrator(opt.jobs);
  const auto study = spectrum::scaling_study(integrator, Ns);

  if (p.has("plot")) plot::emit_plot(threshold::scan(0.01, 0.13, 25, grid), p.str("plot"));

  Json certs = Json::array();
  for (const auto& r : reports) certs.push_back(report::to_json(r));
  const bool margin_ok = lhs > rhs;
  bool spectrum_ok = study.monotone;
  for (const auto& r : study.rows) spectrum_ok = spectrum_ok && r.lambda_min > 0.0 && r.constant_residual <= 1e-6;
  result = {{"threshold",
             {{"max_epsilon", eps_max}, {"eps_prime", eps_prime}, {"lhs_at_1_20", lhs}, {"rhs_at_1_20", rhs}, {"margin_at_1_20", lhs - rhs}}},
            {"certifications", certs},
            {"spectrum", report::to_json(study)}};
  if (cfg.output_format == Format::csv) {
    text = key_value_csv({{"max_epsilon", report::format_number(eps_max)},
                          {"eps_prime", report::format_number(eps_prime)},
                          {"margin_at_1_20", report::format_number(lhs - rhs)},
                          {"fitted_exponent", report::format_number(study.fitted_exponent)}}) +
           "\n" + report::csv_cert_reports(reports);
  }
  const int v = verdict(reports);
  if (v != kExitPass) return v;
  return margin_ok && spectrum_ok ? kExitPass : kExitFailed;
}

}  // namespace

std::string usage() {
  return "usage: circext <command> [options]\n"
         "commands:\n"
         "  rho       --r R [--tol T]\n"
         "  certify   (--all | --lemma NAME[,NAME]) [--eps E] [--eps-prime E'] [--grid-s N] [--grid-alpha N]\n"
         "            [--bound-scale S] [--jobs J]\n"
         "  scan      [--lo A] [--hi B] [--points N] [--grid-s N] [--grid-alpha N] [--plot PATH] [--jobs J]\n"
         "  spectrum  [--study matrix|scaling|concentration] [--N N] [--d D] [--N-list 8,12,...]\n"
         "            [--eigenvalues K] [--entries] [--cache PATH] [--jobs J]\n"
         "  report    [--tol T] [--grid-s N] [--grid-alpha N] [--N N] [--plot PATH] [--jobs J]\n"
         "common: --out PATH, --format json|csv (scan also svg)\n"
         "exit codes: 0 pass, 1 certification failed, 2 usage error, 3 numerical or I/O failure\n";
}

RunConfig parse(int argc, const char* const* argv, bool* help_requested, std::string* help_text) {
  if (help_requested) *help_requested = false;
  CLI::App app{"Numerical verification toolkit for the circle extension inequality", "circext"};
  app.require_subcommand(1);
  std::map<std::string, std::string> values;
  std::string format = "json";
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, cmd] : kCommands) {
    auto* sub = app.add_subcommand(name);
    subs[name] = sub;
    for (const auto& key : allowed_keys().at(cmd)) {
      if (key == "all" || key == "entries") {
        sub->add_flag_callback("--" + key, [&values, key] { values[key] = "true"; });
      } else {
        sub->add_option_function<std::string>("--" + key, [&values, key](const std::string& v) { values[key] = v; });
      }
    }
    sub->add_option("--format", format)->check(CLI::IsMember({"json", "csv", "svg"}));
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    if (help_requested) *help_requested = true;
    if (help_text) *help_text = app.help();
    return {};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  RunConfig cfg;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) cfg.command = kCommands.at(name);
  cfg.parameters = values;
  cfg.output_format = format == "csv" ? Format::csv : format == "svg" ? Format::svg : Format::json;
  return cfg;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Params p(cfg.parameters);
  const std::string name = command_name(cfg.command);
  Json result;
  std::string text;
  int code = kExitPass;
  auto emit = [&](const Json& res, const Json* error) {
    Json env = report::envelope(name, parameters_json(cfg), res);
    if (error) env["error"] = *error;
    write_output(p, report::dump(env), out);
  };
  try {
    for (const auto& [k, v] : cfg.parameters)
      if (!allowed_keys().at(cfg.command).count(k)) throw UsageError("unknown option --" + k + " for '" + name + "'");
    switch (cfg.command) {
      case Command::rho: code = cmd_rho(cfg, p, result, text); break;
      case Command::certify: code = cmd_certify(cfg, p, result, text, err); break;
      case Command::scan: code = cmd_scan(cfg, p, result, text); break;
      case Command::spectrum: code = cmd_spectrum(cfg, p, result, text); break;
      case Command::report: code = cmd_report(cfg, p, result, text, err); break;
    }
    if (cfg.output_format == Format::json) emit(result, nullptr);
    else write_output(p, text, out);
    return code;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << usage();
    return kExitUsage;
  } catch (const SingularityError& e) {
    err << "numerical error: " << e.what() << "\n";
    Json j = {{"type", "singularity"}, {"message", e.what()}};
    try { emit(result, &j); } catch (const std::exception&) {}
    return kExitNumerical;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n" << usage();
    return kExitUsage;
  } catch (const PrecisionError& e) {
    err << "numerical error: " << e.what() << "\n";
    Json j = {{"type", "precision"}, {"message", e.what()},
              {"best_estimate", report::format_number(e.best_estimate())},
              {"best_error", report::format_number(e.best_error())}};
    try { emit(result, &j); } catch (const std::exception&) {}
    return kExitNumerical;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << "\n";
    Json j = {{"type", "numerical"}, {"message", e.what()}};
    try { emit(result, &j); } catch (const std::exception&) {}
    return kExitNumerical;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    bool help = false;
    std::string help_text;
    cfg = parse(argc, argv, &help, &help_text);
    if (help) {
      out << help_text << "\n" << usage();
      return kExitPass;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << usage();
    return kExitUsage;
  }
  return run(cfg, out, err);
}

}  // namespace circext::cli
