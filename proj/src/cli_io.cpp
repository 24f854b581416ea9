#include "knotflow/cli_io.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <numbers>
#include <sstream>

#include "knotflow/complexity.hpp"
#include "knotflow/energetics.hpp"
#include "knotflow/equilibrium_spectrum.hpp"
#include "knotflow/errors.hpp"
#include "knotflow/initial_conditions.hpp"
#include "knotflow/kernels.hpp"
#include "knotflow/parallel.hpp"

namespace knotflow {
namespace {

using nlohmann::json;

constexpr std::string_view kCurveMagic = "# knotflow-curve v1 n=";

double parse_field(std::string_view text, int line) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": cannot read number '" + std::string(text) + "'");
  }
  return v;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "failed writing " + path.string());
}

// JSON numbers must be finite; anything else is written as null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json controls_json(const StepControls& c) {
  return {{"dt_init", c.dt_init}, {"dt_min", c.dt_min},       {"dt_max", c.dt_max},
          {"growth", c.growth},   {"max_halvings", c.max_halvings}, {"energy_slack", c.energy_slack},
          {"projection", c.projection_enabled}};
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string format_curve(const Samples& tangent) {
  const int n = static_cast<int>(tangent.cols());
  std::string text;
  text.reserve(static_cast<std::size_t>(n) * 80);
  text += kCurveMagic;
  text += std::to_string(n);
  text += '\n';
  for (int j = 0; j < n; ++j) {
    text += format_double(grid_point(n, j));
    for (int c = 0; c < 3; ++c) {
      text += ',';
      text += format_double(tangent(c, j));
    }
    text += '\n';
  }
  return text;
}

Samples parse_curve(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines[0].substr(0, kCurveMagic.size()) != kCurveMagic) {
    throw Error(ErrorKind::ParseError, "missing curve header");
  }
  const std::string_view count_text = lines[0].substr(kCurveMagic.size());
  int n = 0;
  const auto res = std::from_chars(count_text.data(), count_text.data() + count_text.size(), n);
  if (res.ec != std::errc() || res.ptr != count_text.data() + count_text.size() || !is_power_of_two(n) || n < 4) {
    throw Error(ErrorKind::ParseError, "header must give a power-of-two node count");
  }
  if (static_cast<int>(lines.size()) != n + 1) {
    throw Error(ErrorKind::ParseError, "expected " + std::to_string(n) + " samples, found " + std::to_string(lines.size() - 1));
  }
  Samples values(3, n);
  for (int j = 0; j < n; ++j) {
    std::string_view line = lines[static_cast<std::size_t>(j) + 1];
    double fields[4];
    for (int f = 0; f < 4; ++f) {
      const auto comma = line.find(',');
      if ((f < 3) == (comma == std::string_view::npos)) {
        throw Error(ErrorKind::ParseError, "line " + std::to_string(j + 2) + ": expected 4 comma-separated fields");
      }
      fields[f] = parse_field(line.substr(0, comma), j + 2);
      if (comma != std::string_view::npos) line.remove_prefix(comma + 1);
    }
    if (std::abs(fields[0] - grid_point(n, j)) > 1e-9) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(j + 2) + ": parameter is not on the uniform grid");
    }
    values.col(j) << fields[1], fields[2], fields[3];
  }
  return values;
}

void write_curve_file(const std::filesystem::path& path, const Samples& tangent) {
  write_text(path, format_curve(tangent));
}

Samples read_curve_file(const std::filesystem::path& path) { return parse_curve(read_text(path)); }

TangentField load_curve_file(const std::filesystem::path& path, int n) {
  ProjectionOptions options;
  options.n_out = n;
  return constant_speed_project(read_curve_file(path), options);
}

std::string format_energy_csv(const std::vector<EnergyLogRow>& rows) {
  std::string text(kEnergyCsvHeader);
  text += '\n';
  for (const auto& r : rows) {
    for (double v : {r.t, r.dt, r.e_bend, r.e_interaction, r.e_total, r.speed_error, r.mean_error}) {
      text += format_double(v);
      text += ',';
    }
    text += format_double(r.distortion);
    text += '\n';
  }
  return text;
}

std::string cmd_simulate(const SimulateConfig& config) {
  set_thread_count(config.threads);
  const Kernel kernel = parse_kernel(config.kernel);
  const TangentField tau0 = generate(parse_generator(config.ic), config.n, config.seed);
  if (config.t_final < 0.0) throw Error(ErrorKind::ParameterOutOfRange, "t-final must be non-negative");

  std::vector<double> times;
  if (config.snapshots == 1) {
    times.push_back(config.t_final);
  } else {
    for (int i = 0; i < config.snapshots; ++i) times.push_back(config.t_final * i / (config.snapshots - 1));
  }
  const Trajectory traj = run(tau0, kernel, config.controls, config.t_final, times);

  std::filesystem::create_directories(config.out);
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    write_curve_file(config.out / ("snap_" + std::to_string(i) + ".curve"), traj.snapshots[i].tau.values());
  }
  write_text(config.out / "energy.csv", format_energy_csv(traj.energy_log));

  const auto& last = traj.energy_log.back();
  json snapshot_times = json::array();
  for (const auto& s : traj.snapshots) snapshot_times.push_back(s.t);
  json report = {
      {"command", "simulate"},
      {"config",
       {{"kernel", kernel.name()},
        {"ic", config.ic},
        {"n", config.n},
        {"t_final", config.t_final},
        {"controls", controls_json(config.controls)},
        {"snapshots", config.snapshots},
        {"threads", config.threads},
        {"seed", config.seed}}},
      {"final",
       {{"t", traj.final_state.t},
        {"steps", traj.final_state.step_index},
        {"E_bend", last.e_bend},
        {"E_interaction", last.e_interaction},
        {"E_total", last.e_total},
        {"speed_err", last.speed_error},
        {"mean_err", last.mean_error},
        {"distortion", number(last.distortion)}}},
      {"snapshot_times", snapshot_times},
  };
  const std::string text = report.dump(2);
  write_text(config.out / "run.json", text + "\n");
  return text;
}

std::string cmd_invariants(const InvariantsConfig& config) {
  const TangentField tau = generate(parse_generator(config.ic), config.n, config.seed);
  const CurveEmbedding curve = reconstruct_curve(tau);
  json report = {{"command", "invariants"}, {"ic", config.ic}, {"n", tau.size()}};
  json errors = json::object();

  report["speed_err"] = tau.speed_error();
  report["mean_err"] = tau.mean_error();
  report["length"] = curve.length();
  report["E_b"] = bending_energy(tau);
  report["kappa_q"] = {{"1", total_q_curvature(tau, 1.0)}, {"2", total_q_curvature(tau, 2.0)}};

  double delta = std::numeric_limits<double>::quiet_NaN();
  try {
    delta = distortion(curve);
  } catch (const Error& e) {
    errors["distortion"] = std::string(e.name());
  }
  report["distortion"] = number(delta);

  json bounds = json::array();
  json weighted = json::object();
  if (std::isfinite(delta)) {
    const CrossingReport acn = acn_bound_check(curve);
    report["acn"] = acn.acn;
    report["crossing"] = {{"integral", acn.value}, {"over_4pi", acn.value / (4 * std::numbers::pi)},
                          {"over_8pi", acn.value / (8 * std::numbers::pi)}};
    bounds.push_back({{"name", "acn"}, {"value", acn.acn}, {"bound", acn.bound_rhs}, {"satisfied", acn.satisfied}});
    for (double p : config.p_values) {
      const CrossingReport r = weighted_bound_check(curve, p);
      weighted[format_double(p)] = r.value;
      bounds.push_back({{"name", "c_p"}, {"p", p}, {"value", r.value}, {"bound", r.bound_rhs}, {"satisfied", r.satisfied}});
    }
  } else {
    report["acn"] = nullptr;
    report["crossing"] = nullptr;
    errors["crossing"] = "DegenerateChord";
  }
  report["c_p"] = weighted;
  report["bounds"] = bounds;

  json interaction = json::object();
  for (const auto& spec : config.kernels) {
    const Kernel kernel = parse_kernel(spec);
    try {
      interaction[kernel.name()] = number(interaction_energy(curve, kernel));
    } catch (const Error& e) {
      interaction[kernel.name()] = nullptr;
      errors["E_K:" + kernel.name()] = std::string(e.name());
    }
  }
  report["E_interaction"] = interaction;
  report["errors"] = errors;
  return report.dump(2);
}

std::string cmd_spectrum(const SpectrumConfig& config) {
  const Kernel kernel = parse_kernel(config.kernel);
  KernelMoments moments;
  try {
    moments = kernel_moments(kernel, config.k_max, MomentPolicy::Strict);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NonRemovableSingularity) throw;
    moments = kernel_moments(kernel, config.k_max, MomentPolicy::FinitePart);
  }
  const ModeMatrices matrices = circle_linearization(moments);
  const SpectrumReport spec = spectrum_report(matrices);

  json modes = json::array();
  for (const auto& mode : spec.modes) {
    json eig = json::array();
    for (const auto& ev : mode.eigenvalues) eig.push_back({ev.real(), ev.imag()});
    const ModeMatrix& a = matrices.at(mode.k);
    json diagonal = json::array();
    for (int i = 0; i < 3; ++i) diagonal.push_back(number(a(i, i).real()));
    modes.push_back({{"k", mode.k}, {"eigenvalues", eig}, {"diagonal", diagonal}});
  }
  json report = {
      {"command", "spectrum"},
      {"kernel", kernel.name()},
      {"k_max", config.k_max},
      {"regularization", moments.finite_part ? "finite-part" : "none"},
      {"lambda1_Ku", number(moments.lambda(MomentKernel::Ku, 1))},
      {"zero_count", spec.zero_count},
      {"spectral_gap", number(spec.spectral_gap)},
      {"others_stable", spec.others_stable},
      {"modes", modes},
  };
  return report.dump(2);
}

void cmd_generate(const std::string& ic, int n, const std::filesystem::path& out, std::uint64_t seed) {
  const TangentField tau = generate(parse_generator(ic), n, seed);
  if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
  write_curve_file(out, tau.values());
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Constrained gradient flows of knot energies"};
  app.require_subcommand(1);

  SimulateConfig sim;
  bool no_projection = false;
  auto* simulate = app.add_subcommand("simulate", "integrate the flow and write snapshots");
  simulate->add_option("--kernel", sim.kernel, "interaction kernel")->capture_default_str();
  simulate->add_option("--ic", sim.ic, "initial condition")->capture_default_str();
  simulate->add_option("--n", sim.n, "grid size (power of two)")->capture_default_str();
  simulate->add_option("--t-final", sim.t_final, "final time")->capture_default_str();
  simulate->add_option("--dt-init", sim.controls.dt_init, "initial step")->capture_default_str();
  simulate->add_option("--dt-min", sim.controls.dt_min, "smallest step")->capture_default_str();
  simulate->add_option("--dt-max", sim.controls.dt_max, "largest step")->capture_default_str();
  simulate->add_flag("--no-projection", no_projection, "skip the constant-speed projection");
  simulate->add_option("--snapshots", sim.snapshots, "number of evenly spaced snapshots")->capture_default_str();
  simulate->add_option("--out", sim.out, "output directory")->capture_default_str();
  simulate->add_option("--threads", sim.threads, "worker threads")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "seed for random initial data")->capture_default_str();

  InvariantsConfig inv;
  std::vector<std::string> inv_kernels;
  std::vector<double> inv_p;
  int inv_threads = 1;
  auto* invariants = app.add_subcommand("invariants", "energies, distortion and crossing bounds of a curve");
  invariants->add_option("--ic", inv.ic, "curve generator")->capture_default_str();
  invariants->add_option("--n", inv.n, "grid size")->capture_default_str();
  invariants->add_option("--kernel", inv_kernels, "kernel (repeatable)");
  invariants->add_option("--p", inv_p, "crossing weight exponent (repeatable)");
  invariants->add_option("--threads", inv_threads, "worker threads")->capture_default_str();
  invariants->add_option("--seed", inv.seed, "seed for random initial data")->capture_default_str();

  SpectrumConfig spec;
  auto* spectrum = app.add_subcommand("spectrum", "linearisation at the unit circle");
  spectrum->add_option("--kernel", spec.kernel, "interaction kernel")->capture_default_str();
  spectrum->add_option("--k-max", spec.k_max, "largest mode")->capture_default_str();

  std::string gen_ic = "circle";
  int gen_n = 256;
  std::string gen_out;
  std::uint64_t gen_seed = 0;
  auto* gen = app.add_subcommand("generate", "write an initial curve file");
  gen->add_option("--ic", gen_ic, "curve generator")->capture_default_str();
  gen->add_option("--n", gen_n, "grid size")->capture_default_str();
  gen->add_option("--out", gen_out, "output curve file")->required();
  gen->add_option("--seed", gen_seed, "seed for random initial data")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << json{{"error", "ParseError"}, {"message", e.what()}}.dump() << '\n';
    return 2;
  }

  try {
    if (*simulate) {
      sim.controls.projection_enabled = !no_projection;
      out << cmd_simulate(sim) << '\n';
    } else if (*invariants) {
      if (!inv_kernels.empty()) inv.kernels = inv_kernels;
      if (!inv_p.empty()) inv.p_values = inv_p;
      set_thread_count(inv_threads);
      out << cmd_invariants(inv) << '\n';
    } else if (*spectrum) {
      out << cmd_spectrum(spec) << '\n';
    } else if (*gen) {
      cmd_generate(gen_ic, gen_n, gen_out, gen_seed);
    }
  } catch (const Error& e) {
    err << json{{"error", std::string(e.name())}, {"message", e.what()}}.dump() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << json{{"error", "IoError"}, {"message", e.what()}}.dump() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace knotflow
