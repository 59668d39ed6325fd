#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cifh/oracle.hpp"
#include "cifh/pipeline.hpp"
#include "cifh/validation.hpp"

namespace cifh::cli {

namespace {

using nlohmann::json;

std::uint64_t named_substream(std::uint64_t seed, std::string_view name) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  std::uint64_t x = seed ^ h;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return (x ^ (x >> 31)) & 0x7fffffffffffffffULL;
}

struct InstanceArgs {
  std::string path;
  std::string kind;
  std::string graph;
  std::string convention;
  std::map<std::string, std::string> params;
  std::optional<std::uint64_t> seed;
};

void add_instance_options(CLI::App* app, InstanceArgs& a) {
  app->add_option("--instance,-i", a.path, "Instance document (JSON)");
  app->add_option("--generate,-g", a.kind,
                  "Instance family: hubbard-triangle, hubbard-chain, heisenberg-line4, complete-graph, fmc-graph, random");
  app->add_option("--graph", a.graph, "Named graph for fmc-graph: line<N>, cycle<N>, complete<N>, star<N>");
  app->add_option("--convention", a.convention, "traceless | psd | fmc");
  app->add_option("--seed", a.seed, "Root seed for every randomized step");
  for (const char* key : {"t", "U", "mu", "sites", "n", "w", "density", "hopping-density", "max-w", "max-mu",
                          "max-hopping"}) {
    app->add_option_function<std::string>(std::string("--") + key,
                                          [&a, key](const std::string& v) { a.params[key] = v; }, "generator parameter");
  }
  for (const char* key : {"periodic", "bipartite", "zero-mu"}) {
    app->add_flag_function(std::string("--") + key, [&a, key](std::int64_t) { a.params[key] = "true"; },
                           "generator flag");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path + "'");
}

CifhInstance load_instance(const InstanceArgs& a) {
  const int sources = !a.path.empty() + !a.kind.empty() + (!a.graph.empty() && a.kind.empty());
  if (sources != 1) throw Error("give exactly one of --instance, --generate or --graph");
  if (!a.path.empty()) {
    if (!a.params.empty()) throw Error("generator parameters given together with --instance");
    return parse_instance(read_file(a.path));
  }
  std::map<std::string, std::string> params = a.params;
  std::string kind = a.kind;
  if (kind.empty()) {
    kind = "fmc-graph";
    if (!a.convention.empty() && convention_from_string(a.convention) != Convention::Fmc)
      throw Error("--graph without --generate builds a Fermionic Max Cut instance; use --convention fmc");
  } else if (!a.convention.empty()) {
    params["convention"] = a.convention;
  }
  if (!a.graph.empty()) params["graph"] = a.graph;
  if (a.seed) params["seed"] = std::to_string(named_substream(*a.seed, "instancegen"));
  return generate(kind, params);
}

json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

json curve_json(const std::vector<CurvePoint>& curve) {
  json out = json::array();
  for (const CurvePoint& p : curve) {
    out.push_back({{"p_class", p.p_class},
                   {"energy_class", p.energy_class},
                   {"energy_quad", p.energy_quad},
                   {"energy_total", p.energy_total},
                   {"ratio", p.ratio},
                   {"status", std::string(to_string(p.status))},
                   {"primal_residual", p.primal_residual},
                   {"iterations", p.iterations}});
  }
  return out;
}

json report_json(const CifhInstance& inst, const CertifiedSolution& sol, const SolveOptions& opt) {
  const RatioDerivation& d = sol.derivation;
  json der = {{"a_upper", d.a_upper},
              {"b_upper", d.b_upper},
              {"beta", number(d.beta)},
              {"f_beta_0", d.f_beta_0},
              {"f_beta_1", d.f_beta_1},
              {"guarantee", d.guarantee},
              {"nominal_ratio", d.nominal_ratio},
              {"classical_value", d.classical_value},
              {"classical_method", d.classical_method},
              {"classical_exact", d.class_exact},
              {"classical_ratio", d.classical_ratio}};
  if (d.oracle_lambda_max) der["oracle_lambda_max"] = *d.oracle_lambda_max;
  if (d.sandwich_holds) der["sandwich_holds"] = *d.sandwich_holds;

  json gamma = json::array();
  const Matrix& g = sol.gamma.gamma();
  for (Eigen::Index a = 0; a < g.rows(); ++a) {
    json row = json::array();
    for (Eigen::Index b = 0; b < g.cols(); ++b) row.push_back(g(a, b));
    gamma.push_back(std::move(row));
  }

  json r = {{"schema_version", kSchemaVersion},
            {"instance_digest", instance_digest(inst)},
            {"instance", json::parse(serialize_instance(inst))},
            {"method", sol.method},
            {"candidate", sol.candidate},
            {"p_class", sol.p_class},
            {"energy_class", sol.energy_class},
            {"energy_quad", sol.energy_quad},
            {"energy_total", sol.energy_total},
            {"ratio_bound", sol.ratio_bound},
            {"purified", sol.purified},
            {"max_sdp_residual", sol.max_sdp_residual},
            {"derivation", der},
            {"grid", opt.grid},
            {"curve", curve_json(sol.curve)},
            {"covariance", gamma}};
  if (sol.exact_ratio) r["exact_ratio"] = *sol.exact_ratio;
  if (sol.particle_expectation) r["particle_expectation"] = *sol.particle_expectation;
  return r;
}

std::string curve_csv(const std::vector<CurvePoint>& curve) {
  std::ostringstream os;
  os << "p_class,energy_class,energy_quad,energy_total,ratio\n";
  os << std::setprecision(17);
  for (const CurvePoint& p : curve)
    os << p.p_class << ',' << p.energy_class << ',' << p.energy_quad << ',' << p.energy_total << ',' << p.ratio << '\n';
  return os.str();
}

struct SolveArgs {
  InstanceArgs inst;
  int grid = 20;
  std::optional<int> q;
  std::string psd_mode = "auto";
  int trials = 64;
  bool oracle = false;
  int oracle_gate = 12;
  int brute_force_gate = 20;
  double sdp_tol = 1e-7;
  long sdp_max_iter = 20000;
  std::string report;
  std::string csv;
  std::optional<double> require_ratio;
};

void add_solve_options(CLI::App* app, SolveArgs& s) {
  add_instance_options(app, s.inst);
  app->add_option("--sweep,--grid,-M", s.grid, "p_class grid size M (points j/M, j = 0..M)")->check(CLI::PositiveNumber);
  app->add_option("--q", s.q, "Fixed particle number (traceless, mu = 0, bipartite)")->check(CLI::NonNegativeNumber);
  app->add_option("--psd-mode", s.psd_mode, "Classical part for psd instances: auto | exact | gw")
      ->check(CLI::IsMember({"auto", "exact", "gw"}));
  app->add_option("--trials", s.trials, "Goemans-Williamson rounding trials")->check(CLI::PositiveNumber);
  app->add_flag("--oracle", s.oracle, "Certify against exact diagonalization");
  app->add_option("--oracle-gate", s.oracle_gate, "Largest n for the oracle")->check(CLI::Range(1, kOracleMaxModes));
  app->add_option("--brute-force-gate", s.brute_force_gate, "Largest n for classical enumeration")
      ->check(CLI::Range(1, kBruteForceMaxModes));
  app->add_option("--sdp-tol", s.sdp_tol, "SDP feasibility tolerance")->check(CLI::PositiveNumber);
  app->add_option("--sdp-max-iter", s.sdp_max_iter, "SDP iteration cap")->check(CLI::PositiveNumber);
  app->add_option("--report", s.report, "Write the report document here");
  app->add_option("--csv", s.csv, "Write the p_class curve here");
  app->add_option("--require-ratio", s.require_ratio, "Exit 2 when the certified ratio is below this value");
}

struct Solved {
  CifhInstance inst;
  CertifiedSolution sol;
  SolveOptions opt;
};

Solved do_solve(const SolveArgs& s) {
  CifhInstance inst = load_instance(s.inst);
  SolveOptions opt;
  opt.grid = s.grid;
  opt.oracle = s.oracle;
  opt.oracle_gate = s.oracle_gate;
  opt.brute_force_gate = s.brute_force_gate;
  opt.sdp_tol = s.sdp_tol;
  opt.sdp_max_iter = s.sdp_max_iter;
  opt.gw_trials = s.trials;
  opt.psd_mode = s.psd_mode == "exact" ? PsdClassicalMode::Exact
                 : s.psd_mode == "gw"  ? PsdClassicalMode::GoemansWilliamson
                                       : PsdClassicalMode::Auto;
  if (inst.convention() == Convention::Psd && resolve_psd_mode(inst, opt) == PsdClassicalMode::GoemansWilliamson) {
    if (!s.inst.seed) throw Error("the Goemans-Williamson path is randomized; pass --seed");
    opt.seed = named_substream(*s.inst.seed, "gw");
  }
  CertifiedSolution sol = s.q ? solve_fixed_particles(inst, *s.q, opt) : solve(inst, opt);
  return {std::move(inst), std::move(sol), opt};
}

int finish_solve(const Solved& r, const SolveArgs& s, std::ostream& out) {
  if (!s.report.empty()) write_file(s.report, report_json(r.inst, r.sol, r.opt).dump(2) + "\n");
  if (!s.csv.empty()) write_file(s.csv, curve_csv(r.sol.curve));
  const bool violated = guarantee_violated(r.sol);
  const bool below = s.require_ratio && r.sol.ratio_bound < *s.require_ratio;
  if (violated) out << "guarantee violated: certified ratio below the proven bound\n";
  if (below) out << "certified ratio below --require-ratio " << *s.require_ratio << "\n";
  return violated || below ? 2 : 0;
}

void print_summary(const Solved& r, std::ostream& out) {
  const CertifiedSolution& sol = r.sol;
  out << std::setprecision(10);
  out << "instance " << instance_digest(r.inst) << " n=" << r.inst.n() << " convention=" << to_string(r.inst.convention())
      << "\n";
  out << "method=" << sol.method << " candidate=" << sol.candidate << " p_class=" << sol.p_class
      << " energy=" << sol.energy_total << " (class " << sol.energy_class << ", quad " << sol.energy_quad << ")\n";
  if (sol.particle_expectation) out << "particle_expectation=" << *sol.particle_expectation << "\n";
  out << "certified ratio_bound=" << sol.ratio_bound << " guarantee=" << sol.derivation.guarantee;
  if (sol.exact_ratio) out << " exact_ratio=" << *sol.exact_ratio << " lambda_max=" << *sol.derivation.oracle_lambda_max;
  out << "\n";
}

json spectrum_json(const SectorSpectrum& s) {
  json sectors = json::array();
  for (int N = 0; N <= s.n; ++N)
    sectors.push_back({{"particles", N}, {"max", s.per_sector_max[N]}, {"min", s.per_sector_min[N]}});
  return {{"n", s.n},
          {"lambda_max", s.global_max},
          {"lambda_min", s.global_min},
          {"sectors", sectors},
          {"eigenvalues", s.eigenvalues}};
}

double first_gap(const SectorSpectrum& s) {
  const double scale = std::max(1.0, std::abs(s.global_max));
  for (double e : s.eigenvalues)
    if (e < s.global_max - 1e-9 * scale) return s.global_max - e;
  return 0.0;
}

int cmd_oracle(const InstanceArgs& a, const std::string& report, std::ostream& out) {
  const CifhInstance inst = load_instance(a);
  if (inst.n() > kOracleMaxModes)
    throw Error("oracle refuses n = " + std::to_string(inst.n()) + " (limit " + std::to_string(kOracleMaxModes) + ")");
  const SectorSpectrum s = exact_spectrum(inst);
  json doc = {{"schema_version", kSchemaVersion}, {"instance_digest", instance_digest(inst)}, {"spectrum", spectrum_json(s)}};
  const double gap = first_gap(s);
  doc["gap"] = gap;
  out << std::setprecision(12);
  out << "lambda_max=" << s.global_max << " lambda_min=" << s.global_min << " gap=" << gap << "\n";
  for (int N = 0; N <= s.n; ++N) out << "  N=" << N << " max=" << s.per_sector_max[N] << " min=" << s.per_sector_min[N] << "\n";
  if (inst == heisenberg_line4()) {
    const GapBoundRecord rec = heisenberg_gap_bound();
    doc["gaussian_ceiling"] = {{"lambda_max", rec.lambda_max},
                               {"gap", rec.gap},
                               {"s", rec.s},
                               {"alpha_star", rec.alpha_star},
                               {"ratio_upper", rec.ratio_upper}};
    out << "gaussian ceiling: s=" << rec.s << " alpha*=" << rec.alpha_star << " ratio_upper=" << rec.ratio_upper << "\n";
  }
  if (!report.empty()) write_file(report, doc.dump(2) + "\n");
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian-state approximations for classically interacting fermionic Hamiltonians", "cifh"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  SolveArgs solve_args;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve an instance and certify the approximation ratio");
  add_solve_options(solve_cmd, solve_args);

  SolveArgs sweep_args;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Emit the p_class curve as CSV on stdout");
  add_solve_options(sweep_cmd, sweep_args);

  InstanceArgs oracle_args;
  std::string oracle_report;
  CLI::App* oracle_cmd = app.add_subcommand("oracle", "Exact spectra by Jordan-Wigner diagonalization");
  add_instance_options(oracle_cmd, oracle_args);
  oracle_cmd->add_option("--report", oracle_report, "Write the spectrum document here");

  InstanceArgs gen_args;
  std::string gen_out;
  CLI::App* gen_cmd = app.add_subcommand("generate", "Write an instance document");
  add_instance_options(gen_cmd, gen_args);
  gen_cmd->add_option("--out,-o", gen_out, "Output path (default stdout)");

  std::string bench_filter;
  std::uint64_t bench_seed = validation::SuiteOptions{}.seed;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Run the acceptance suites");
  bench_cmd->add_option("--filter", bench_filter, "Comma-separated criterion keys or ids");
  bench_cmd->add_option("--seed", bench_seed, "Suite seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (*solve_cmd) {
      const Solved r = do_solve(solve_args);
      print_summary(r, out);
      return finish_solve(r, solve_args, out);
    }
    if (*sweep_cmd) {
      const Solved r = do_solve(sweep_args);
      out << curve_csv(r.sol.curve);
      return finish_solve(r, sweep_args, err);
    }
    if (*oracle_cmd) return cmd_oracle(oracle_args, oracle_report, out);
    if (*gen_cmd) {
      const std::string doc = serialize_instance(load_instance(gen_args));
      if (gen_out.empty()) {
        out << doc;
      } else {
        write_file(gen_out, doc);
      }
      return 0;
    }
    if (*bench_cmd) {
      validation::SuiteOptions so;
      so.filter = bench_filter;
      so.seed = bench_seed;
      bool all = true;
      int ran = 0;
      validation::run_suite(so, [&](const validation::CriterionResult& r) {
        out << validation::format_result(r) << "\n" << std::flush;
        all = all && r.passed;
        ++ran;
      });
      if (ran == 0) {
        err << "error: --filter '" << bench_filter << "' matches no criterion\n";
        return 1;
      }
      out << (all ? "all criteria passed" : "some criteria FAILED") << "\n";
      return all ? 0 : 2;
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace cifh::cli
