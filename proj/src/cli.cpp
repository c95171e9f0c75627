#include "kinetic/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kinetic/csv.hpp"
#include "kinetic/errors.hpp"
#include "kinetic/experiments.hpp"
#include "kinetic/parallel.hpp"
#include "kinetic/tableau.hpp"

namespace kinetic::cli {

namespace {

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void write_manifest(const std::string& out_dir, const std::string& subcommand,
                    const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ofstream os(out_dir + "/manifest.txt");
  os << "subcommand=" << subcommand << "\n";
  for (const auto& [key, value] : entries) os << key << "=" << value << "\n";
}

void ensure_out_dir(const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create output directory '" + out_dir + "'");
}

class ConfigFileError : public Error {
 public:
  explicit ConfigFileError(const std::string& what) : Error(what) {}
};

// Flat key=value configuration file; '#' starts a comment. Values for list
// options are comma separated. Command-line flags win over file values.
std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigFileError("cannot read config file '" + path + "'");
  std::map<std::string, std::string> values;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    size_t begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    size_t end = line.find_last_not_of(" \t\r");
    line = line.substr(begin, end - begin + 1);
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigFileError(path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    auto trim = [](std::string& s) {
      const size_t b = s.find_first_not_of(" \t");
      const size_t e = s.find_last_not_of(" \t");
      s = (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
    };
    trim(key);
    trim(value);
    if (key.empty()) throw ConfigFileError(path + ":" + std::to_string(lineno) + ": empty key");
    values[key] = value;
  }
  return values;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigFileError("config value '" + tok + "' for '" + key + "' is not a number");
    }
  }
  if (out.empty()) throw ConfigFileError("config key '" + key + "' has no value");
  return out;
}

int parse_int_value(const std::string& text, const std::string& key) {
  try {
    size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigFileError("config value '" + text + "' for '" + key + "' is not an integer");
  }
}

// Applies file values to every option the command line left untouched.
// The setter map doubles as the list of keys the file may contain.
void apply_config(const CLI::App* cmd, const std::string& path,
                  const std::map<std::string, std::function<void(const std::string&)>>& setters) {
  if (path.empty()) return;
  const auto values = read_config_file(path);
  for (const auto& [key, value] : values) {
    auto it = setters.find(key);
    if (it == setters.end())
      throw ConfigFileError("unknown config key '" + key + "' in '" + path + "'");
    if (cmd->count("--" + key) == 0) it->second(value);
  }
}

struct AccuracyArgs {
  int test = 1;
  std::string scheme = "isa3";
  std::vector<double> eps = {1.0};
  int max_n = 1280;
  int nv = 0;
  double cfl = 0.9;
  double t_end = 0.25;
};

struct RiemannArgs {
  std::vector<double> eps = {0.5, 0.1};
  int nx = 200;
  int nv = 64;
  int ref_nx = 800;
  double cfl = 0.5;
};

struct LaxArgs {
  std::vector<double> eps = {1e-2, 1e-4};
  int nx = 200;
  int nv = 80;
  int ref_nx = 3200;
  double cfl = 0.2;
  double t_end = 1.3;
};

struct RelaxArgs {
  std::string scheme = "isa3";
  std::vector<double> eps = {1.0};
  std::vector<double> dts = {0.1, 0.05, 0.025};
  double t_end = 1.0;
};

std::vector<int> grid_sweep_up_to(int max_n) {
  std::vector<int> grids;
  for (int n = 40; 2 * n <= max_n; n *= 2) grids.push_back(n);
  grids.push_back(grids.empty() ? max_n : grids.back() * 2);
  return grids;
}

int run_accuracy(const AccuracyArgs& args, const std::string& out_dir) {
  std::vector<std::vector<double>> all_rows;
  for (double eps : args.eps) {
    AccuracyConfig config;
    config.test = args.test;
    config.scheme = args.scheme;
    config.eps = eps;
    config.grids = grid_sweep_up_to(args.max_n);
    config.nv = args.nv;
    config.cfl = args.cfl;
    config.t_end = args.t_end;
    const auto rows = accuracy_sweep(config);
    std::printf("test %d  scheme %s  eps %s\n", args.test, args.scheme.c_str(),
                format_value(eps).c_str());
    std::printf("  %6s  %12s  %6s\n", "N", "L1", "order");
    for (const auto& r : rows) {
      std::printf("  %6d  %12.4e  %6.2f\n", r.nx, r.l1, r.order);
      all_rows.push_back({static_cast<double>(r.nx), r.eps, r.l1, r.order});
    }
  }
  const std::string path =
      out_dir + "/accuracy_test" + std::to_string(args.test) + "_" + args.scheme + ".csv";
  write_csv(path, {"N", "eps", "l1", "order"}, all_rows);
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int run_riemann(const RiemannArgs& args, const std::string& out_dir) {
  for (double eps : args.eps) {
    RiemannConfig config;
    config.eps = eps;
    config.nx = args.nx;
    config.nv = args.nv;
    config.ref_nx = args.ref_nx;
    config.cfl = args.cfl;
    config.cache_dir = out_dir;
    const RiemannResult result = riemann_test(config);
    for (const auto& snap : result.kinetic) {
      const std::string path = out_dir + "/profile_riemann_" + format_value(eps) + "_" +
                               format_value(snap.time) + ".csv";
      write_profile_csv(path, result.grid, snap.mac);
    }
    for (size_t k = 0; k < result.ns_reference.size(); ++k) {
      const std::string path = out_dir + "/nsref_riemann_" + format_value(eps) + "_" +
                               format_value(result.kinetic[k].time) + ".csv";
      write_fluid_profile_csv(path, result.ref_grid, result.ns_reference[k]);
    }
    std::printf("riemann eps %s: wrote %zu kinetic and %zu reference profiles\n",
                format_value(eps).c_str(), result.kinetic.size(), result.ns_reference.size());
  }
  return 0;
}

int run_lax(const LaxArgs& args, const std::string& out_dir) {
  for (double eps : args.eps) {
    LaxConfig config;
    config.eps = eps;
    config.nx = args.nx;
    config.nv = args.nv;
    config.ref_nx = args.ref_nx;
    config.cfl = args.cfl;
    config.t_end = args.t_end;
    config.cache_dir = out_dir;
    const LaxResult result = lax_test(config);

    const std::string stem = out_dir + "/profile_lax_" + format_value(eps) + "_" +
                             format_value(config.t_end);
    write_profile_csv(stem + ".csv", result.grid, result.kinetic.mac);
    write_fluid_profile_csv(out_dir + "/nsref_lax_" + format_value(eps) + ".csv", result.ref_grid,
                            result.ns_reference);
    write_fluid_profile_csv(out_dir + "/eulerref_lax_" + format_value(eps) + ".csv",
                            result.ref_grid, result.euler_reference);

    std::vector<std::vector<double>> rows;
    for (int i = 0; i < result.grid.nx; ++i)
      rows.push_back({result.grid.node(i), result.shear_kinetic[i], result.shear_macro[i],
                      result.heat_kinetic[i], result.heat_macro[i]});
    write_csv(out_dir + "/diagnostics_lax_" + format_value(eps) + ".csv",
              {"x", "shear_f1", "shear_macro", "heat_f1", "heat_macro"}, rows);

    rows.clear();
    for (int i = 0; i < result.ref_grid.nx; ++i)
      rows.push_back({result.ref_grid.node(i), result.shear_ns[i], result.heat_ns[i]});
    write_csv(out_dir + "/diagnostics_ns_lax_" + format_value(eps) + ".csv",
              {"x", "shear_ns", "heat_ns"}, rows);
    std::printf("lax eps %s done\n", format_value(eps).c_str());
  }
  return 0;
}

int run_relax_order(const RelaxArgs& args, const std::string& out_dir) {
  std::vector<std::vector<double>> rows;
  for (double eps : args.eps) {
    const RelaxOrderResult result = relaxation_order_study(args.scheme, eps, args.dts, args.t_end);
    std::printf("scheme %s  eps %s\n", args.scheme.c_str(), format_value(eps).c_str());
    for (size_t k = 0; k < result.errors.size(); ++k) {
      const double order = k == 0 ? std::numeric_limits<double>::quiet_NaN()
                                  : result.orders[k - 1];
      std::printf("  dt %8s  L1 %12.4e  order %6.2f\n", format_value(result.dts[k]).c_str(),
                  result.errors[k], order);
      rows.push_back({eps, result.dts[k], result.errors[k], order});
    }
  }
  write_csv(out_dir + "/relax_order_" + args.scheme + ".csv", {"eps", "dt", "l1", "order"}, rows);
  return 0;
}

int run_tableau_check(const std::string& out_dir) {
  std::ostringstream report;
  write_tableau_report(report);
  std::fputs(report.str().c_str(), stdout);
  std::ofstream os(out_dir + "/tableau_report.txt");
  os << report.str();
  return 0;
}

}  // namespace

int parse_and_dispatch(int argc, const char* const* argv) {
  configure_threads();

  CLI::App app{"IMEX Runge-Kutta solver for kinetic relaxation models in 1D x 1V/2V"};
  app.require_subcommand(1);
  std::string out_dir = "out";
  app.add_option("-o,--out", out_dir, "output directory")->capture_default_str();

  AccuracyArgs acc;
  CLI::App* acc_cmd = app.add_subcommand("accuracy", "smooth-wave convergence sweep");
  acc_cmd->add_option("--test", acc.test, "test id (1 or 2)")->check(CLI::Range(1, 2));
  acc_cmd->add_option("--scheme", acc.scheme, "scheme name")->capture_default_str();
  acc_cmd->add_option("--eps", acc.eps, "Knudsen numbers")->capture_default_str();
  acc_cmd->add_option("--max-n", acc.max_n, "finest grid")->capture_default_str();
  acc_cmd->add_option("--nv", acc.nv, "velocity points per axis (0 = default)");
  acc_cmd->add_option("--cfl", acc.cfl, "CFL number")->capture_default_str();
  acc_cmd->add_option("--t-end", acc.t_end, "final time")->capture_default_str();
  std::string acc_config;
  acc_cmd->add_option("--config", acc_config, "flat key=value configuration file");

  RiemannArgs rie;
  CLI::App* rie_cmd = app.add_subcommand("riemann", "Riemann problem with viscous reference");
  rie_cmd->add_option("--eps", rie.eps, "Knudsen numbers")->capture_default_str();
  rie_cmd->add_option("--nx", rie.nx, "spatial points")->capture_default_str();
  rie_cmd->add_option("--nv", rie.nv, "velocity points per axis")->capture_default_str();
  rie_cmd->add_option("--ref-nx", rie.ref_nx, "reference grid")->capture_default_str();
  rie_cmd->add_option("--cfl", rie.cfl, "CFL number")->capture_default_str();
  std::string rie_config;
  rie_cmd->add_option("--config", rie_config, "flat key=value configuration file");

  LaxArgs lax;
  CLI::App* lax_cmd = app.add_subcommand("lax", "Lax shock tube with closure diagnostics");
  lax_cmd->add_option("--eps", lax.eps, "Knudsen numbers")->capture_default_str();
  lax_cmd->add_option("--nx", lax.nx, "spatial points")->capture_default_str();
  lax_cmd->add_option("--nv", lax.nv, "velocity points per axis")->capture_default_str();
  lax_cmd->add_option("--ref-nx", lax.ref_nx, "reference grid")->capture_default_str();
  lax_cmd->add_option("--cfl", lax.cfl, "CFL number")->capture_default_str();
  lax_cmd->add_option("--t-end", lax.t_end, "final time")->capture_default_str();
  std::string lax_config;
  lax_cmd->add_option("--config", lax_config, "flat key=value configuration file");

  RelaxArgs rel;
  CLI::App* rel_cmd = app.add_subcommand("relax-order", "homogeneous relaxation order study");
  rel_cmd->add_option("--scheme", rel.scheme, "scheme name")->capture_default_str();
  rel_cmd->add_option("--eps", rel.eps, "Knudsen numbers")->capture_default_str();
  rel_cmd->add_option("--dt", rel.dts, "time steps")->capture_default_str();
  rel_cmd->add_option("--t-end", rel.t_end, "final time")->capture_default_str();
  std::string rel_config;
  rel_cmd->add_option("--config", rel_config, "flat key=value configuration file");

  CLI::App* tab_cmd = app.add_subcommand("tableau-check", "report on the builtin schemes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    ensure_out_dir(out_dir);
    if (acc_cmd->parsed()) {
      apply_config(acc_cmd, acc_config,
                   {{"test", [&](const std::string& v) { acc.test = parse_int_value(v, "test"); }},
                    {"scheme", [&](const std::string& v) { acc.scheme = v; }},
                    {"eps", [&](const std::string& v) { acc.eps = parse_double_list(v, "eps"); }},
                    {"max-n", [&](const std::string& v) { acc.max_n = parse_int_value(v, "max-n"); }},
                    {"nv", [&](const std::string& v) { acc.nv = parse_int_value(v, "nv"); }},
                    {"cfl", [&](const std::string& v) { acc.cfl = parse_double_list(v, "cfl")[0]; }},
                    {"t-end", [&](const std::string& v) { acc.t_end = parse_double_list(v, "t-end")[0]; }}});
      builtin_scheme(acc.scheme);  // fail fast on bad names
      std::vector<std::pair<std::string, std::string>> manifest = {
          {"test", std::to_string(acc.test)},
          {"scheme", acc.scheme},
          {"max_n", std::to_string(acc.max_n)},
          {"nv", std::to_string(acc.nv)},
          {"cfl", format_value(acc.cfl)},
          {"t_end", format_value(acc.t_end)},
      };
      for (double e : acc.eps) manifest.push_back({"eps", format_value(e)});
      write_manifest(out_dir, "accuracy", manifest);
      return run_accuracy(acc, out_dir);
    }
    if (rie_cmd->parsed()) {
      apply_config(rie_cmd, rie_config,
                   {{"eps", [&](const std::string& v) { rie.eps = parse_double_list(v, "eps"); }},
                    {"nx", [&](const std::string& v) { rie.nx = parse_int_value(v, "nx"); }},
                    {"nv", [&](const std::string& v) { rie.nv = parse_int_value(v, "nv"); }},
                    {"ref-nx", [&](const std::string& v) { rie.ref_nx = parse_int_value(v, "ref-nx"); }},
                    {"cfl", [&](const std::string& v) { rie.cfl = parse_double_list(v, "cfl")[0]; }}});
      std::vector<std::pair<std::string, std::string>> manifest = {
          {"nx", std::to_string(rie.nx)},
          {"nv", std::to_string(rie.nv)},
          {"ref_nx", std::to_string(rie.ref_nx)},
          {"cfl", format_value(rie.cfl)},
      };
      for (double e : rie.eps) manifest.push_back({"eps", format_value(e)});
      write_manifest(out_dir, "riemann", manifest);
      return run_riemann(rie, out_dir);
    }
    if (lax_cmd->parsed()) {
      apply_config(lax_cmd, lax_config,
                   {{"eps", [&](const std::string& v) { lax.eps = parse_double_list(v, "eps"); }},
                    {"nx", [&](const std::string& v) { lax.nx = parse_int_value(v, "nx"); }},
                    {"nv", [&](const std::string& v) { lax.nv = parse_int_value(v, "nv"); }},
                    {"ref-nx", [&](const std::string& v) { lax.ref_nx = parse_int_value(v, "ref-nx"); }},
                    {"cfl", [&](const std::string& v) { lax.cfl = parse_double_list(v, "cfl")[0]; }},
                    {"t-end", [&](const std::string& v) { lax.t_end = parse_double_list(v, "t-end")[0]; }}});
      std::vector<std::pair<std::string, std::string>> manifest = {
          {"nx", std::to_string(lax.nx)},   {"nv", std::to_string(lax.nv)},
          {"ref_nx", std::to_string(lax.ref_nx)}, {"cfl", format_value(lax.cfl)},
          {"t_end", format_value(lax.t_end)},
      };
      for (double e : lax.eps) manifest.push_back({"eps", format_value(e)});
      write_manifest(out_dir, "lax", manifest);
      return run_lax(lax, out_dir);
    }
    if (rel_cmd->parsed()) {
      apply_config(rel_cmd, rel_config,
                   {{"scheme", [&](const std::string& v) { rel.scheme = v; }},
                    {"eps", [&](const std::string& v) { rel.eps = parse_double_list(v, "eps"); }},
                    {"dt", [&](const std::string& v) { rel.dts = parse_double_list(v, "dt"); }},
                    {"t-end", [&](const std::string& v) { rel.t_end = parse_double_list(v, "t-end")[0]; }}});
      builtin_scheme(rel.scheme);
      std::vector<std::pair<std::string, std::string>> manifest = {
          {"scheme", rel.scheme},
          {"t_end", format_value(rel.t_end)},
      };
      for (double e : rel.eps) manifest.push_back({"eps", format_value(e)});
      for (double d : rel.dts) manifest.push_back({"dt", format_value(d)});
      write_manifest(out_dir, "relax-order", manifest);
      return run_relax_order(rel, out_dir);
    }
    if (tab_cmd->parsed()) {
      write_manifest(out_dir, "tableau-check", {});
      return run_tableau_check(out_dir);
    }
  } catch (const ConfigFileError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 3;
  } catch (const MalformedTableau& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    const std::string dump = out_dir + "/failure_dump.txt";
    std::ofstream os(dump);
    os << e.what() << "\n";
    std::cerr << "solver failure: " << e.what() << "\ndiagnostic dump: " << dump << "\n";
    return 4;
  }
  return 2;
}

}  // namespace kinetic::cli
