// gcalc command-line driver.

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gcalc/config.hpp"
#include "gcalc/error.hpp"
#include "gcalc/experiments.hpp"

namespace {

struct Opt {
  const char* flag;
  const char* key;
  const char* help;
};

// Flags per subcommand and the config keys they set.
const std::map<std::string, std::vector<Opt>>& command_flags() {
  static const std::map<std::string, std::vector<Opt>> m = {
      {"integrate",
       {{"--mesh", "mesh", "builtin:<name>[:res] or JSON complex file"},
        {"--cochain", "cochain", "cochain spec, e.g. left(x), exact(sin(x)), det"},
        {"--scheme", "scheme", "barycentric | edge-midpoint | uniform"},
        {"--depths", "depths", "refinement depth"},
        {"--tol", "tol", "convergence tolerance"}}},
      {"ftc-exact",
       {{"--mesh", "mesh", "mesh spec"}, {"--F", "f", "function F(x)"}, {"--depths", "depths", "refinement depth"}}},
      {"ve",
       {{"--cochain", "cochain", "cochain spec"},
        {"--order", "order", "0 (form) or 1 (full jet)"},
        {"--points", "points", "comma-separated base points (x,y pairs for 2-cochains)"}}},
      {"wiener",
       {{"--data", "data", "feynman | perturbed | JSON file {g_dx, g_dt, v, dt_squared}"},
        {"--V", "potential", "potential V(x)"},
        {"--obs", "observable", "observable in x, y, z = values at the marked times"},
        {"--marks", "marks", "marked times, comma-separated"},
        {"--mesh", "mesh_log2", "time step 2^-k"},
        {"--samples", "samples", "number of paths"}}},
      {"ito-strat",
       {{"--f", "f", "integrand f(x)"},
        {"--F", "g", "antiderivative of f, enables the Stratonovich vs exact comparison"},
        {"--levels", "levels", "grid exponents k (mesh 2^-k)"},
        {"--samples", "samples", "number of paths"}}},
      {"qvar", {{"--levels", "levels", "grid exponents k (mesh 2^-k)"}, {"--samples", "samples", "number of paths"}}},
      {"gauss-bonnet",
       {{"--mesh", "mesh", "mesh spec"}, {"--scheme", "scheme", "refinement scheme"}, {"--depths", "depths", "depth"}}},
      {"euler",
       {{"--mesh", "mesh", "mesh spec"}, {"--scheme", "scheme", "refinement scheme"}, {"--depths", "depths", "depth"}}},
      {"stokes", {{"--mesh", "mesh", "mesh spec"}, {"--cochain", "cochain", "(n-1)-cochain spec, antisymmetrized"}}},
      {"dw",
       {{"--mesh", "mesh", "closed oriented surface"},
        {"--group", "group", "builtin:Zn | builtin:S3 | builtin:ZnxZm | JSON file"},
        {"--cocycle", "cocycle", "trivial | builtin:bimultiplicative:n | JSON file"}}},
      {"moyal",
       {{"--f", "f", "polynomial in p, q"},
        {"--g", "g", "polynomial in p, q"},
        {"--hbar", "hbar", "Planck constant"},
        {"--variant", "variant", "moyal | heis:<z>"},
        {"--at", "at", "evaluation point p,q (x,y for heis)"}}},
      {"rstieltjes",
       {{"--mesh", "mesh", "interval mesh"},
        {"--f", "f", "integrand f(x)"},
        {"--g", "g", "integrator g(x), or brownian[:levels]"},
        {"--depths", "depths", "refinement depth"},
        {"--bound", "bound", "total variation bound"}}},
      {"verify-all", {}},
  };
  return m;
}

const std::map<std::string, std::string> descriptions = {
    {"integrate", "Riemann sums of a cochain under refinement, with limit and order"},
    {"ftc-exact", "sum of the exact cochain F(y) - F(x) at every depth"},
    {"ve", "van Est jets of a cochain at base points"},
    {"wiener", "finite-dimensional Wiener integral with cutoff and cochain data"},
    {"ito-strat", "L2 gaps between Ito, Stratonovich and exact cochain sums"},
    {"qvar", "quadratic variation of Brownian paths"},
    {"gauss-bonnet", "total curvature sum of a surface mesh"},
    {"euler", "Euler characteristic as a Riemann sum"},
    {"stokes", "boundary sum against coboundary sum"},
    {"dw", "Dijkgraaf-Witten partition function and its oracle"},
    {"moyal", "star product of polynomials, exact and by integration"},
    {"rstieltjes", "Riemann-Stieltjes integral with a variation bound"},
    {"verify-all", "run the acceptance criteria"},
};

std::string wiener_mesh(const std::string& v) {
  // Accepts "2^-k" or k.
  if (v.rfind("2^-", 0) == 0) return v.substr(3);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gcalc: groupoid cochain calculus experiments"};
  app.require_subcommand(0, 1);
  std::string config_path, out, format, seed, threads;
  std::vector<std::string> sets;
  app.add_option("--config", config_path, "config file (key = value with [run], [input], [numeric])");
  app.add_option("--seed", seed, "random seed (default $GCALC_SEED or 1)");
  app.add_option("--threads", threads, "worker thread cap (0 = all cores)");
  app.add_option("--out", out, "output path, or json / csv for stdout in that format");
  app.add_option("--format", format, "json | csv");
  app.add_option("--set", sets, "override any config key: section.key=value");

  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, flags] : command_flags()) {
    CLI::App* sub = app.add_subcommand(name, descriptions.at(name));
    subs[name] = sub;
    sub->fallthrough();
    for (const auto& o : flags) sub->add_option(o.flag, values[name][o.key], o.help);
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--threads", threads, "worker thread cap");
    sub->add_option("--out", out, "output path, or json / csv");
    sub->add_option("--format", format, "json | csv");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    gcalc::ExperimentConfig cfg = config_path.empty() ? gcalc::parse_config_text("")
                                                      : gcalc::load_config_file(config_path);
    std::string chosen;
    for (const auto& [name, sub] : subs)
      if (sub->parsed()) chosen = name;
    if (!chosen.empty()) cfg.command = chosen;
    if (cfg.command.empty()) throw gcalc::Error("cli", "no subcommand given (see --help)");
    if (!chosen.empty()) {
      for (const auto& o : command_flags().at(chosen)) {
        if (subs[chosen]->count(o.flag) == 0) continue;
        std::string v = values[chosen][o.key];
        if (chosen == "wiener" && std::string(o.key) == "mesh_log2") v = wiener_mesh(v);
        gcalc::set_config_value(cfg, o.key, v);
      }
    }
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw gcalc::Error("cli", "--set expects key=value, got '" + s + "'");
      gcalc::set_config_value(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    if (!seed.empty()) gcalc::set_config_value(cfg, "seed", seed);
    if (!threads.empty()) gcalc::set_config_value(cfg, "threads", threads);
    if (out == "json" || out == "csv") {
      gcalc::set_config_value(cfg, "format", out);
    } else if (!out.empty()) {
      cfg.out = out;
    }
    if (!format.empty()) gcalc::set_config_value(cfg, "format", format);

    const gcalc::ExperimentConfig full = gcalc::with_command_defaults(cfg);
    const gcalc::CommandResult res = gcalc::run_command(full);
    std::string text;
    if (full.format == "csv") {
      text = res.csv.empty() ? std::string("key,value\n") : res.csv;
    } else {
      nlohmann::json doc = {{"command", full.command}, {"config", gcalc::to_json(full)}, {"report", res.report},
                            {"exit_code", res.exit_code}};
      text = doc.dump(2) + "\n";
    }
    if (full.command == "verify-all" && res.report.contains("criteria")) {
      for (const auto& c : res.report["criteria"]) {
        std::cerr << "criterion " << c["id"].get<int>() << " [" << (c["pass"].get<bool>() ? "PASS" : "FAIL")
                  << "] " << c["name"].get<std::string>() << ": " << c["summary"].get<std::string>() << "\n";
      }
    }
    if (full.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(full.out);
      if (!f) throw gcalc::Error("cli", "cannot write '" + full.out + "'");
      f << text;
      if (!f) throw gcalc::Error("cli", "write failed for '" + full.out + "'");
    }
    return res.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
