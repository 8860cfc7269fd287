#include "fraclat/cli.hpp"

#include <cmath>
#include <filesystem>
#include <functional>
#include <ostream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "fraclat/io.hpp"
#include "fraclat/model.hpp"
#include "fraclat/nehari.hpp"
#include "fraclat/random.hpp"
#include "fraclat/semigroup.hpp"
#include "fraclat/spectral.hpp"

namespace fraclat::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct SolverOverrides {
  double tol_grad = SolverConfig{}.tol_grad;
  int max_iter = SolverConfig{}.max_iter;
  int points = 0;
  int kernel_radius = 0;

  void attach(CLI::App* sub) {
    sub->add_option("--tol-grad", tol_grad, "gradient tolerance")->capture_default_str();
    sub->add_option("--max-iter", max_iter, "iteration cap")->capture_default_str();
    sub->add_option("--points", points, "override quadrature points M");
    sub->add_option("--kernel-radius", kernel_radius, "override kernel radius R");
  }

  SolverConfig solver() const {
    SolverConfig cfg;
    cfg.tol_grad = tol_grad;
    cfg.max_iter = max_iter;
    return cfg;
  }

  Model model(const std::string& path) const {
    ModelConfig mc = parse_model_config(io::read_text(path));
    if (points > 0) mc.points = points;
    if (kernel_radius > 0) mc.kernel_radius = kernel_radius;
    return mc.build();
  }
};

fs::path with_suffix(const fs::path& out, const std::string& suffix) {
  fs::path p = out.parent_path() / (out.stem().string() + suffix);
  return p;
}

json result_json(const GroundStateResult& r, const std::string& field_name, bool converged) {
  json j;
  j["energy"] = r.energy;
  j["grad_residual"] = r.grad_residual;
  j["nehari_residual"] = r.nehari_residual;
  j["iterations"] = r.iterations;
  j["boundary_mass"] = r.boundary_mass;
  j["field"] = field_name;
  j["converged"] = converged;
  j["warnings"] = r.warnings;
  return j;
}

int cmd_kernel(double alpha, int dim, int radius, int points, const std::string& out_path, std::ostream& out) {
  SpectralConfig cfg{points, radius};
  Kernel K = kernel_table(FractionalOrder(alpha), dim, radius, cfg);
  io::write_kernel(out_path, K);
  std::vector<int> zero(static_cast<std::size_t>(dim), 0);
  out << "kernel alpha=" << alpha << " d=" << dim << " R=" << radius << " M=" << points
      << " K(0)=" << io::format_double(K(zero)) << " tail_bound=" << K.tail_bound()
      << " doubling_error=" << K.doubling_error() << "\n";
  return kSuccess;
}

int cmd_apply(const std::string& in_path, double alpha, const std::string& method, int points, int kernel_radius,
              const std::string& out_path, std::ostream& out) {
  const Field u = io::read_field(in_path);
  const auto& g = u.geometry();
  const FractionalOrder a(alpha);
  Field v(g);
  if (method == "fft") {
    v = apply_multiplier_fft(u, a);
  } else if (g.periodic() && points == 0 && kernel_radius == 0) {
    v = apply_kernel(u, periodic_kernel(a, g));
  } else {
    SpectralConfig cfg = default_spectral_config(g.dim(), g.radius());
    if (points > 0) cfg.points = points;
    cfg.radius = kernel_radius > 0 ? kernel_radius : std::min(2 * g.radius(), cfg.points / 2 - 1);
    v = apply_kernel(u, kernel_table(a, g.dim(), cfg.radius, cfg, false));
  }
  io::write_field(out_path, v);
  out << "apply method=" << method << " sites=" << g.site_count() << " |v|_inf=" << norm(v, INFINITY) << "\n";
  return kSuccess;
}

int cmd_heat_compare(double alpha, int dim, int radius, std::uint64_t seed, double tol, const std::string& out_path,
                     std::ostream& out) {
  const FractionalOrder a(alpha);
  const LatticeGeometry g(dim, radius);
  const HeatConfig hc = calibrate_heat_config(a, tol);
  SpectralConfig sc = default_spectral_config(dim, radius);
  sc.radius = std::min(2 * radius, sc.points / 2 - 1);
  const Kernel K = kernel_table(a, dim, sc.radius, sc, false);

  std::vector<int> zero(static_cast<std::size_t>(dim), 0);
  std::vector<Field> inputs{Field::delta(g, zero)};
  PortableRng rng(seed);
  for (int i = 0; i < 10; ++i) inputs.push_back(random_field(g, rng));
  double worst = 0.0;
  for (const auto& u : inputs) {
    const Field diff = fraclap_semigroup(u, a, hc) - apply_kernel(u, K);
    worst = std::max(worst, norm(diff, INFINITY) / norm(u, INFINITY));
  }
  json j;
  j["max_rel_err"] = worst;
  j["scalar_identity_err"] = scalar_identity_error(a, hc, dim);
  j["nodes"] = hc.t_nodes;
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) out << text;
  else io::write_atomic(out_path, text);
  return kSuccess;
}

int cmd_solve(const SolverOverrides& ov, const std::string& config, const std::string& w0_path,
              const std::string& out_path, std::ostream& out, std::ostream& err) {
  const Model m = ov.model(config);
  const Field w0 = io::read_field(w0_path, m.geometry());
  const fs::path out_p(out_path);
  const fs::path field_p = with_suffix(out_p, ".field.csv");
  auto emit = [&](const GroundStateResult& r, bool converged) {
    io::write_field(field_p, r.u);
    io::write_atomic(out_p, result_json(r, field_p.filename().string(), converged).dump(2) + "\n");
    for (const auto& w : r.warnings) err << "warning: " << w << "\n";
  };
  try {
    const GroundStateResult r = minimize(m, w0, ov.solver());
    emit(r, true);
    out << "solve energy=" << io::format_double(r.energy) << " iterations=" << r.iterations
        << " grad_residual=" << r.grad_residual << "\n";
    return kSuccess;
  } catch (const NonConvergenceError& e) {
    emit(e.best(), false);
    err << e.what() << "\n";
    return kNumericalFailure;
  }
}

int cmd_multistart(const SolverOverrides& ov, const std::string& config, int starts, std::uint64_t seed,
                   unsigned threads, const std::string& out_path, std::ostream& out, std::ostream& err) {
  const Model m = ov.model(config);
  MultistartConfig ms;
  ms.n_starts = starts;
  ms.seed = seed;
  ms.threads = threads;
  const SolutionSet set = multistart(m, ms, ov.solver());
  const fs::path out_p(out_path);
  json arr = json::array();
  for (std::size_t k = 0; k < set.orbits.size(); ++k) {
    const auto& o = set.orbits[k];
    const fs::path rep = with_suffix(out_p, ".orbit" + std::to_string(k) + ".csv");
    io::write_field(rep, o.representative);
    arr.push_back({{"energy", o.energy}, {"orbit_representative", rep.filename().string()},
                   {"multiplicity", o.multiplicity}});
  }
  io::write_atomic(out_p, arr.dump(2) + "\n");
  std::size_t skipped = 0;
  for (const auto& s : set.starts) {
    if (s.converged) continue;
    ++skipped;
    err << "start " << s.index << " skipped: " << s.message << "\n";
  }
  out << "multistart starts=" << starts << " orbits=" << set.orbits.size() << " skipped=" << skipped;
  if (!set.orbits.empty()) out << " ground_energy=" << io::format_double(set.ground_energy());
  out << "\n";
  return set.orbits.empty() ? kNumericalFailure : kSuccess;
}

int cmd_validate(const ValidateOptions& opts, const std::string& json_path, std::ostream& out) {
  const auto results = run_validation(opts);
  print_validation_table(out, results);
  if (!json_path.empty()) io::write_atomic(json_path, validation_json(results));
  const bool ok = std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
  return ok ? kSuccess : kNumericalFailure;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete fractional Laplacian kernels and Nehari ground states on Z^d", "fraclat"};
  app.require_subcommand(1);
  std::function<int()> action;

  // kernel
  auto* kernel = app.add_subcommand("kernel", "tabulate K^alpha by trapezoid quadrature");
  double k_alpha = 0.0;
  int k_dim = 1, k_radius = 20, k_points = 8192;
  std::string k_out;
  kernel->add_option("--alpha", k_alpha, "order in (0, 1]")->required();
  kernel->add_option("--dim", k_dim, "lattice dimension")->capture_default_str();
  kernel->add_option("--radius", k_radius, "table radius R")->capture_default_str();
  kernel->add_option("--points", k_points, "quadrature points M per axis")->capture_default_str();
  kernel->add_option("--out", k_out, "kernel CSV path")->required();
  kernel->callback([&] { action = [&] { return cmd_kernel(k_alpha, k_dim, k_radius, k_points, k_out, out); }; });

  // apply
  auto* apply = app.add_subcommand("apply", "apply (-Delta)^alpha to a field CSV");
  std::string a_in, a_out, a_method = "kernel";
  double a_alpha = 0.0;
  int a_points = 0, a_radius = 0;
  apply->add_option("--in", a_in, "input field CSV")->required()->check(CLI::ExistingFile);
  apply->add_option("--alpha", a_alpha, "order in (0, 1]")->required();
  apply->add_option("--method", a_method, "kernel or fft")->check(CLI::IsMember({"kernel", "fft"}))->capture_default_str();
  apply->add_option("--points", a_points, "quadrature points M (kernel method)");
  apply->add_option("--kernel-radius", a_radius, "kernel radius R (kernel method)");
  apply->add_option("--out", a_out, "output field CSV")->required();
  apply->callback([&] {
    action = [&] { return cmd_apply(a_in, a_alpha, a_method, a_points, a_radius, a_out, out); };
  });

  // heat-compare
  auto* heat = app.add_subcommand("heat-compare", "compare the semigroup and kernel definitions");
  double h_alpha = 0.0, h_tol = 1e-6;
  int h_dim = 1, h_radius = 16;
  std::uint64_t h_seed = 0;
  std::string h_out;
  heat->add_option("--alpha", h_alpha, "order in (0, 1)")->required();
  heat->add_option("--dim", h_dim, "lattice dimension")->capture_default_str();
  heat->add_option("--radius", h_radius, "box radius L")->capture_default_str();
  heat->add_option("--seed", h_seed, "seed for the random inputs")->capture_default_str();
  heat->add_option("--tol", h_tol, "scalar identity target for node calibration")->capture_default_str();
  heat->add_option("--out", h_out, "JSON report path (stdout when omitted)");
  heat->callback([&] {
    action = [&] { return cmd_heat_compare(h_alpha, h_dim, h_radius, h_seed, h_tol, h_out, out); };
  });

  // solve
  auto* solve = app.add_subcommand("solve", "minimise I on the Nehari manifold from an initial field");
  SolverOverrides s_ov;
  std::string s_config, s_w0, s_out;
  solve->add_option("--config", s_config, "model JSON")->required()->check(CLI::ExistingFile);
  solve->add_option("--w0", s_w0, "initial field CSV")->required()->check(CLI::ExistingFile);
  solve->add_option("--out", s_out, "result JSON path")->required();
  s_ov.attach(solve);
  solve->callback([&] { action = [&] { return cmd_solve(s_ov, s_config, s_w0, s_out, out, err); }; });

  // multistart
  auto* multi = app.add_subcommand("multistart", "seeded multistart search with orbit deduplication");
  SolverOverrides m_ov;
  std::string m_config, m_out;
  int m_starts = 1;
  std::uint64_t m_seed = 0;
  unsigned m_threads = 0;
  multi->add_option("--config", m_config, "model JSON")->required()->check(CLI::ExistingFile);
  multi->add_option("--starts", m_starts, "number of starts")->capture_default_str()->check(CLI::PositiveNumber);
  multi->add_option("--seed", m_seed, "batch seed")->required();
  multi->add_option("--threads", m_threads, "worker cap (0: FRACLAT_THREADS or all cores)");
  multi->add_option("--out", m_out, "set JSON path")->required();
  m_ov.attach(multi);
  multi->callback([&] {
    action = [&] { return cmd_multistart(m_ov, m_config, m_starts, m_seed, m_threads, m_out, out, err); };
  });

  // validate
  auto* validate = app.add_subcommand("validate", "run the invariant suite");
  ValidateOptions v_opts;
  std::string v_only, v_json, v_fault;
  validate->add_option("--only", v_only, "restrict to one module")
      ->check(CLI::IsMember({"lattice", "spectral", "semigroup", "model", "nehari", "cli"}));
  validate->add_option("--json", v_json, "machine-readable report path");
  validate->add_option("--inject-fault", v_fault, "deliberate fault for testing the suite")
      ->check(CLI::IsMember({"wrong-sign-kernel"}));
  validate->callback([&] {
    action = [&] {
      if (!v_only.empty()) v_opts.only = v_only;
      v_opts.wrong_sign_kernel = v_fault == "wrong-sign-kernel";
      return cmd_validate(v_opts, v_json, out);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    return action();
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const json::exception& e) {
    err << "error: bad JSON: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

}  // namespace fraclat::cli
