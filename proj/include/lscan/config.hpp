#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lscan/collocation.hpp"
#include "lscan/invsolve.hpp"
#include "lscan/landscape.hpp"
#include "lscan/qsim.hpp"
#include "lscan/resources.hpp"

namespace lscan {

using json = nlohmann::json;

enum class QuantumForm { dilation, normal };

struct QuantumSection {
  QuantumScanConfig scan;
  bool seed_set = false;
  long rounds = 10000;
  int bins = 50;
  QuantumForm form = QuantumForm::dilation;
  bool statevector_check = false;
};

struct RunConfig {
  std::string problem = "harmonic";  // harmonic, morse, or a path to a (q, V) CSV
  int n_basis = 26;
  int n_grid = 80;
  std::array<double, 2> span{-10.0, 10.0};
  std::optional<std::array<double, 2>> basis_span;  // default: central 80% of span
  double width_factor = 1.0;
  int width_ref_n = 0;  // 0: use n_basis
  std::optional<double> width;
  double morse_de = 16.0, morse_a = 4.0;
  double potential_shift = 0.0;
  std::array<double, 2> alpha_window{0.0, 55.0};
  int K = 2000;
  std::optional<double> epsilon;
  std::optional<QuantumSection> quantum;
  ResourceInputs resources;
  std::string output_dir = "out";
  int workers = 0;
};

RunConfig config_from_json(const json& j);
json to_json(const RunConfig& c);
RunConfig load_config_file(const std::string& path);

std::array<double, 2> basis_span_of(const RunConfig& c);
BasisSpec basis_for(const RunConfig& c);
SpatialGrid grid_for(const RunConfig& c);
Potential potential_for(const RunConfig& c);
CollocationSystem system_for(const RunConfig& c);

json to_json(const InverseSolveReport& r);
InverseSolveReport inverse_report_from_json(const json& j);
json to_json(const DipSet& d);
DipSet dipset_from_json(const json& j);
json to_json(const Sample& s);
Sample sample_from_json(const json& j);
json to_json(const CostReport& r);

std::string format_double(double x);
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

std::string matrix_csv(const Mat& m);
Mat matrix_from_csv(const std::string& text);
std::string scan_csv(const LandscapeScan& s);
LandscapeScan scan_from_csv(const std::string& text);
std::string samples_jsonl(const ScanOutcome& o);
std::vector<Sample> samples_from_jsonl(const std::string& text);
std::string histogram_csv(const std::vector<int>& counts, double a, double b);

}  // namespace lscan
