// Command-line driver: build | inverse | scan | qscan | resources | crossover
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "lscan/config.hpp"
#include "lscan/statevector.hpp"

using namespace lscan;

namespace {

struct Overrides {
  std::string config, output_dir, problem;
  std::optional<int> workers, n_basis, n_grid, K, width_ref_n;
  std::vector<double> span, basis_span, alpha_window;
  std::optional<double> width_factor, width, epsilon;
  std::optional<std::uint64_t> seed;
  std::optional<long> rounds;
  bool statevector_check = false;
};

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "JSON run configuration");
  app->add_option("--output-dir", o.output_dir, "directory for emitted files");
  app->add_option("--workers", o.workers, "parallel workers (default: available cores)");
  app->add_option("--problem", o.problem, "harmonic, morse, or path to a (q, V) CSV");
  app->add_option("--n-basis", o.n_basis);
  app->add_option("--n-grid", o.n_grid);
  app->add_option("--span", o.span)->expected(2);
  app->add_option("--basis-span", o.basis_span)->expected(2);
  app->add_option("--width-factor", o.width_factor);
  app->add_option("--width-ref-n", o.width_ref_n, "basis size whose spacing sets the width");
  app->add_option("--width", o.width, "absolute Gaussian width");
  app->add_option("--alpha-window", o.alpha_window)->expected(2);
  app->add_option("-K,--K", o.K, "alpha grid points");
  app->add_option("--epsilon", o.epsilon, "dip threshold (scan) or window half-width (qscan)");
}

RunConfig resolve(const Overrides& o, bool quantum) {
  RunConfig c = o.config.empty() ? RunConfig{} : load_config_file(o.config);
  if (!o.output_dir.empty()) c.output_dir = o.output_dir;
  if (!o.problem.empty()) c.problem = o.problem;
  if (o.workers) c.workers = *o.workers;
  if (o.n_basis) c.n_basis = *o.n_basis;
  if (o.n_grid) c.n_grid = *o.n_grid;
  if (o.K) c.K = *o.K;
  if (o.width_ref_n) c.width_ref_n = *o.width_ref_n;
  if (!o.span.empty()) c.span = {o.span[0], o.span[1]};
  if (!o.basis_span.empty()) c.basis_span = std::array<double, 2>{o.basis_span[0], o.basis_span[1]};
  if (!o.alpha_window.empty()) c.alpha_window = {o.alpha_window[0], o.alpha_window[1]};
  if (o.width_factor) c.width_factor = *o.width_factor;
  if (o.width) c.width = *o.width;
  if (quantum) {
    if (!c.quantum) c.quantum = QuantumSection{};
    if (o.epsilon) c.quantum->scan.epsilon = *o.epsilon;
    if (o.seed) {
      c.quantum->scan.seed = *o.seed;
      c.quantum->seed_set = true;
    }
    if (o.rounds) c.quantum->rounds = *o.rounds;
    if (o.statevector_check) c.quantum->statevector_check = true;
  } else if (o.epsilon) {
    c.epsilon = *o.epsilon;
  }
  return c;
}

std::string out_path(const RunConfig& c, const std::string& name) {
  std::filesystem::create_directories(c.output_dir);
  return (std::filesystem::path(c.output_dir) / name).string();
}

int cmd_build(const RunConfig& c) {
  const auto sys = system_for(c);
  const double kappa = cond2(sys.B.transpose() * sys.B);
  json cfg = to_json(c);
  cfg.erase("output_dir");
  cfg.erase("workers");
  write_text(out_path(c, "B.csv"), matrix_csv(sys.B));
  write_text(out_path(c, "Bpp.csv"), matrix_csv(sys.Bpp));
  write_text(out_path(c, "Vdiag.csv"), matrix_csv(sys.Vdiag()));
  json meta = {{"N", sys.basis.size()},
               {"M", sys.grid.size()},
               {"width", sys.basis.width},
               {"centers", sys.basis.centers},
               {"grid", sys.grid.points},
               {"kappa", std::isfinite(kappa) ? json(kappa) : json(nullptr)},
               {"config", cfg}};
  write_text(out_path(c, "meta.json"), meta.dump(2) + "\n");
  std::cout << "kappa(B^T B) = " << format_double(kappa) << "\n";
  return 0;
}

int cmd_inverse(const RunConfig& c) {
  const auto rep = solve_by_inverse(system_for(c));
  const std::string text = to_json(rep).dump(2) + "\n";
  write_text(out_path(c, "inverse.json"), text);
  std::cout << text;
  return rep.status == SolveStatus::failed ? 3 : 0;
}

int cmd_scan(const RunConfig& c) {
  const auto sys = system_for(c);
  const auto fam = make_family(sys, c.alpha_window[0], c.alpha_window[1], c.K);
  const auto s = scan(fam, c.workers);
  const double eps = c.epsilon ? *c.epsilon : default_threshold(s);
  const auto dips = detect_dips(s, eps);
  json j = to_json(dips);
  j["slope"] = s.slope;
  j["slope_forward_difference"] = s.slope_fd;
  j["slope_warning"] = s.slope_warning;
  j["lipschitz_ok"] = lipschitz_excess(s, fam) <= 0.0;
  write_text(out_path(c, "scan.csv"), scan_csv(s));
  write_text(out_path(c, "dips.json"), j.dump(2) + "\n");
  std::cout << dips.dips.size() << " dips below " << format_double(eps) << ":";
  for (const auto& d : dips.dips) std::cout << ' ' << format_double(d.alpha_star);
  std::cout << "\n";
  return 0;
}

ExtendedMatrix quantum_family(const RunConfig& c, const CollocationSystem& sys) {
  const auto fam = make_family(sys, c.alpha_window[0], c.alpha_window[1], c.K);
  if (c.quantum->form == QuantumForm::dilation)
    return extend_rect({{0, fam.M0}, {1, -fam.M1}}, fam.alphas());
  const Mat a = fam.M0.transpose() * fam.M0;
  const Mat cross = fam.M0.transpose() * fam.M1;
  Mat b = -(cross + cross.transpose());
  Mat cc = fam.M1.transpose() * fam.M1;
  return extend_square({{0, 0.5 * (a + a.transpose())}, {1, 0.5 * (b + b.transpose())}, {2, 0.5 * (cc + cc.transpose())}},
                       fam.alphas());
}

int cmd_qscan(const RunConfig& c) {
  if (!c.quantum || !c.quantum->seed_set) throw ValidationError("qscan requires a seed (--seed or quantum.seed)");
  const auto& q = *c.quantum;
  const auto sys = system_for(c);
  const auto ext = quantum_family(c, sys);
  if (ext.dimension() > kMaxDenseDim) throw TooLarge("qscan: K times block size exceeds 4096");
  const auto table = tabulate(ext, q.scan);
  const auto out = run_scan(table, q.scan, q.rounds, c.workers);
  std::vector<double> hits;
  for (const auto& s : out.samples)
    if (s.chi) hits.push_back(s.alpha);
  const auto hist = density_histogram(hits, c.alpha_window[0], c.alpha_window[1], q.bins);
  write_text(out_path(c, "samples.jsonl"), samples_jsonl(out));
  write_text(out_path(c, "histogram.csv"), histogram_csv(hist, c.alpha_window[0], c.alpha_window[1]));
  json summary = {{"rounds", q.rounds},
                  {"marked_size", out.marked_size},
                  {"empty_window", out.empty_window},
                  {"n_states", out.n_states},
                  {"max_grover", out.max_grover},
                  {"success_rate", out.success_rate()},
                  {"model_success_rate",
                   mean_success_prob(out.n_states, out.marked_size, q.scan.amplification, q.scan.max_grover)}};
  if (q.statevector_check) {
    const auto sv = statevector_oracle(ext, q.scan, q.rounds);
    summary["statevector_success_rate"] = sv.success_rate();
  }
  write_text(out_path(c, "qscan.json"), summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_resources(const RunConfig& c) {
  const auto rep = evaluate(c.resources);
  const std::string text = to_json(rep).dump(2) + "\n";
  write_text(out_path(c, "resources.json"), text);
  std::cout << text;
  return 0;
}

int cmd_crossover(const RunConfig& c) {
  validate(c.resources);
  const double n = crossover_N(c.resources);
  json j = {{"N_star", n}, {"K", c.resources.K}, {"epsilon", c.resources.epsilon}, {"d", c.resources.d},
            {"M_max", c.resources.M_max}};
  write_text(out_path(c, "crossover.json"), j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collocation eigenproblems by landscape scanning"};
  app.require_subcommand(1);
  Overrides o;
  auto* build = app.add_subcommand("build", "assemble B, B'' and V and report kappa(B^T B)");
  auto* inverse = app.add_subcommand("inverse", "solve by the matrix-inverse route");
  auto* scn = app.add_subcommand("scan", "minimum-singular-value landscape and dips");
  auto* qscan = app.add_subcommand("qscan", "simulated quantum landscape scan");
  auto* res = app.add_subcommand("resources", "leading-term cost estimates");
  auto* cross = app.add_subcommand("crossover", "N where the quantum scan cost drops below the classical one");
  for (auto* s : {build, inverse, scn, qscan, res, cross}) add_common(s, o);
  qscan->add_option("--seed", o.seed, "RNG seed (required)");
  qscan->add_option("--rounds", o.rounds);
  qscan->add_flag("--statevector-check", o.statevector_check, "cross-check against the statevector oracle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*build) return cmd_build(resolve(o, false));
    if (*inverse) return cmd_inverse(resolve(o, false));
    if (*scn) return cmd_scan(resolve(o, false));
    if (*qscan) return cmd_qscan(resolve(o, true));
    if (*res) return cmd_resources(resolve(o, false));
    if (*cross) return cmd_crossover(resolve(o, false));
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
