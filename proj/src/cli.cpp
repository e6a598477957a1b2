#include "eqlat/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "eqlat/config_io.hpp"
#include "eqlat/csv.hpp"
#include "eqlat/errors.hpp"
#include "eqlat/experiments.hpp"
#include "eqlat/verify.hpp"

namespace eqlat {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::vector<std::string> scenarios;
  std::string figure;
  std::string positional;
  std::string mode = "both";
  std::string out;
  std::uint64_t seed = 42;
  std::optional<std::uint64_t> pathCap;
  double gammaShift = 0.2;
};

FigureOptions figure_options(const Options& o) {
  FigureOptions f;
  f.seed = o.seed;
  f.gammaShift = o.gammaShift;
  if (o.pathCap) f.pathCap = *o.pathCap;
  return f;
}

fs::path output_dir(const Options& o) {
  fs::path dir = ".";
  if (!o.out.empty()) {
    dir = o.out;
  } else if (const char* env = std::getenv("EQLAT_OUT_DIR"); env && *env) {
    dir = env;
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "'", "E_IO");
  return dir;
}

std::vector<SolutionMode> modes(const std::string& m) {
  if (m == "both") return {SolutionMode::consistent, SolutionMode::inconsistent};
  return {parse_mode(m)};
}

/// Scenario from --scenario, else from a figure id given by --figure or positionally.
std::vector<ScenarioConfig> load(const Options& o, bool allowMany) {
  std::vector<ScenarioConfig> out;
  for (const auto& path : o.scenarios) {
    out.push_back(parse_config(path));
    if (o.pathCap) out.back().pathCap = *o.pathCap;
  }
  for (const std::string& id : {o.figure, o.positional}) {
    if (!id.empty()) out.push_back(scenario(id, figure_options(o)));
  }
  if (out.empty()) {
    if (!allowMany) throw ConfigError("no scenario given (use --scenario <path> or --figure <id>)");
    for (const auto& id : figure_ids()) out.push_back(scenario(id, figure_options(o)));
  }
  if (!allowMany && out.size() > 1) throw ConfigError("give exactly one scenario");
  return out;
}

void write_solutions(const ScenarioConfig& cfg, const Options& o, const fs::path& dir,
                     std::ostream& out) {
  const Model model(cfg);
  for (SolutionMode m : modes(o.mode)) {
    const PricingSolution sol = solve_equilibrium(model, m);
    const fs::path file = dir / (cfg.name + "_" + std::string(to_string(m)) + ".csv");
    write_atomic(file, solution_csv(model, sol));
    for (auto [root, end] = model.lattice.roots(); root < end; ++root) {
      out << cfg.name << ' ' << to_string(m) << " D0[" << model.lattice.chain().labels[model.lattice.regime(root)]
          << "] = " << format_number(sol.price[root]) << '\n';
    }
    out << "wrote " << file.string() << '\n';
  }
}

int cmd_solve(const Options& o, std::ostream& out) {
  const fs::path dir = output_dir(o);
  write_solutions(load(o, false).front(), o, dir, out);
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const fs::path dir = output_dir(o);
  const VerificationReport rep = verify_scenario(load(o, false).front());
  out << rep.key_values();
  write_atomic(dir / (rep.scenario + "_verify.csv"),
               VerificationReport::csv_header() + "\n" + rep.csv_row() + "\n");
  return rep.passed() ? kExitOk : kExitCheckFailed;
}

int cmd_figure(const Options& o, std::ostream& out) {
  const std::string id = !o.figure.empty() ? o.figure : o.positional;
  if (id.empty()) throw ConfigError("figure needs an id (e.g. 'figure fig8')");
  const fs::path dir = output_dir(o);
  for (const FigureTable& t : run_figure(id, figure_options(o))) {
    write_atomic(dir / (t.id + ".csv"), table_csv(t));
    write_atomic(dir / (t.id + ".provenance.json"), provenance_json(t));
    out << "wrote " << (dir / (t.id + ".csv")).string() << '\n';
  }
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const fs::path dir = output_dir(o);
  std::string csv = VerificationReport::csv_header() + "\n";
  bool ok = true;
  for (const ScenarioConfig& cfg : load(o, true)) {
    write_solutions(cfg, o, dir, out);
    if (cfg.run.verify) {
      const VerificationReport rep = verify_scenario(cfg);
      csv += rep.csv_row() + "\n";
      ok = ok && rep.passed();
      out << cfg.name << " verify " << (rep.passed() ? "pass" : "fail") << '\n';
    }
  }
  write_atomic(dir / "sweep.csv", csv);
  return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact lattice equilibrium pricing under regime-switching risk aversion", "eqlat"};
  app.require_subcommand(1);
  Options o;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "output directory (default $EQLAT_OUT_DIR or .)");
    sub->add_option("--seed", o.seed, "seed for simulated paths");
    sub->add_option("--path-cap", o.pathCap, "maximum number of terminal paths");
    sub->add_option("--gamma-shift", o.gammaShift, "relative risk-aversion shift of the second regime (fig9)");
    sub->add_option("--figure", o.figure, "built-in figure scenario id");
  };
  CLI::App* solve = app.add_subcommand("solve", "solve a scenario and write per-node CSVs");
  CLI::App* verify = app.add_subcommand("verify", "run every identity and oracle check");
  CLI::App* figure = app.add_subcommand("figure", "write a figure table and its provenance");
  CLI::App* sweep = app.add_subcommand("sweep", "solve and verify several scenarios");
  for (CLI::App* sub : {solve, verify, figure, sweep}) common(sub);
  for (CLI::App* sub : {solve, verify}) {
    sub->add_option("--scenario", o.scenarios, "scenario JSON file")->expected(1);
    sub->add_option("id", o.positional, "built-in figure scenario id");
  }
  sweep->add_option("--scenario", o.scenarios, "scenario JSON file (repeatable)");
  figure->add_option("id", o.positional, "figure id");
  for (CLI::App* sub : {solve, sweep}) {
    sub->add_option("--mode", o.mode, "consistent | inconsistent | both")
        ->check(CLI::IsMember({"consistent", "inconsistent", "both"}));
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "eqlat: error [E_USAGE]: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (*solve) return cmd_solve(o, out);
    if (*verify) return cmd_verify(o, out);
    if (*figure) return cmd_figure(o, out);
    return cmd_sweep(o, out);
  } catch (const Error& e) {
    err << "eqlat: error [" << e.code() << "]: " << e.what() << '\n';
    return e.exit_status();
  } catch (const std::bad_alloc&) {
    err << "eqlat: error [E_RESOURCE]: out of memory\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "eqlat: error [E_INTERNAL]: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace eqlat
