#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "knotflow/constrained_flow.hpp"
#include "knotflow/torus_geometry.hpp"

namespace knotflow {

// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

// Curve files: "# knotflow-curve v1 n=<N>" followed by N lines "x,t1,t2,t3".
std::string format_curve(const Samples& tangent);
Samples parse_curve(std::string_view text);
void write_curve_file(const std::filesystem::path& path, const Samples& tangent);
Samples read_curve_file(const std::filesystem::path& path);
// Reads and projects onto the constraint set, resampling to n nodes (0 keeps
// the file's size).
TangentField load_curve_file(const std::filesystem::path& path, int n = 0);

inline constexpr std::string_view kEnergyCsvHeader = "t,dt,E_bend,E_interaction,E_total,speed_err,mean_err,distortion";
std::string format_energy_csv(const std::vector<EnergyLogRow>& rows);

struct SimulateConfig {
  std::string kernel = "distortion:q=1";
  std::string ic = "circle";
  int n = 256;
  double t_final = 1.0;
  StepControls controls;
  int snapshots = 11;
  std::filesystem::path out = "knotflow_out";
  int threads = 1;
  std::uint64_t seed = 0;
};

struct InvariantsConfig {
  std::string ic = "circle";
  int n = 256;
  std::vector<std::string> kernels = {"distortion:q=1"};
  std::vector<double> p_values = {0.0};
  std::uint64_t seed = 0;
};

struct SpectrumConfig {
  std::string kernel = "distortion:q=1";
  int k_max = 64;
};

// Each command returns its JSON report as text; simulate and generate also
// write files.
std::string cmd_simulate(const SimulateConfig& config);
std::string cmd_invariants(const InvariantsConfig& config);
std::string cmd_spectrum(const SpectrumConfig& config);
void cmd_generate(const std::string& ic, int n, const std::filesystem::path& out, std::uint64_t seed = 0);

// Entry point of the command-line tool. Errors are reported on `err` as a
// JSON object {"error": <name>, "message": ...} with exit status 2.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace knotflow
