#include "lscan/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace lscan {

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const char* where) {
  if (!j.is_object()) throw ValidationError(std::string(where) + ": expected a JSON object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ValidationError(std::string(where) + ": unknown key '" + k + "'");
}

template <class T>
void get(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config key '") + key + "': " + e.what());
  }
}

std::array<double, 2> get_pair(const json& j, const char* key) {
  std::vector<double> v;
  get(j, key, v);
  if (v.size() != 2) throw ValidationError(std::string("config key '") + key + "' must hold two numbers");
  return {v[0], v[1]};
}

QpeModel qpe_model_from(const std::string& s) {
  if (s == "ideal_rounding") return QpeModel::ideal_rounding;
  if (s == "sinc_kernel") return QpeModel::sinc_kernel;
  throw ValidationError("unknown qpe_model: " + s);
}

Amplification amplification_from(const std::string& s) {
  if (s == "exact_rotation") return Amplification::exact_rotation;
  if (s == "omit_initial_angle") return Amplification::omit_initial_angle;
  throw ValidationError("unknown amplification: " + s);
}

double json_real(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  return j.get<double>();
}

}  // namespace

RunConfig config_from_json(const json& j) {
  check_keys(j,
             {"problem", "n_basis", "n_grid", "span", "basis_span", "width_factor", "width_ref_n", "width", "morse",
              "potential_shift", "alpha_window", "K", "epsilon", "quantum", "resources", "output_dir", "workers"},
             "config");
  RunConfig c;
  get(j, "problem", c.problem);
  get(j, "n_basis", c.n_basis);
  get(j, "n_grid", c.n_grid);
  if (j.contains("span")) c.span = get_pair(j, "span");
  if (j.contains("basis_span")) c.basis_span = get_pair(j, "basis_span");
  get(j, "width_factor", c.width_factor);
  get(j, "width_ref_n", c.width_ref_n);
  if (j.contains("width")) {
    double w = 0;
    get(j, "width", w);
    c.width = w;
  }
  if (j.contains("morse")) {
    check_keys(j["morse"], {"D_e", "a"}, "morse");
    get(j["morse"], "D_e", c.morse_de);
    get(j["morse"], "a", c.morse_a);
  }
  get(j, "potential_shift", c.potential_shift);
  if (j.contains("alpha_window")) c.alpha_window = get_pair(j, "alpha_window");
  get(j, "K", c.K);
  if (j.contains("epsilon")) {
    double e = 0;
    get(j, "epsilon", e);
    c.epsilon = e;
  }
  if (j.contains("quantum")) {
    const json& q = j["quantum"];
    check_keys(q,
               {"lambda0", "epsilon", "b", "c", "qpe_model", "p_fail", "max_grover", "seed", "iota", "amplification",
                "rounds", "bins", "form", "statevector_check"},
               "quantum");
    QuantumSection s;
    get(q, "lambda0", s.scan.lambda0);
    get(q, "epsilon", s.scan.epsilon);
    get(q, "b", s.scan.b);
    get(q, "c", s.scan.c);
    std::string m = to_string(s.scan.qpe_model);
    get(q, "qpe_model", m);
    s.scan.qpe_model = qpe_model_from(m);
    get(q, "p_fail", s.scan.p_fail);
    get(q, "max_grover", s.scan.max_grover);
    if (q.contains("seed")) {
      get(q, "seed", s.scan.seed);
      s.seed_set = true;
    }
    get(q, "iota", s.scan.iota);
    std::string a = to_string(s.scan.amplification);
    get(q, "amplification", a);
    s.scan.amplification = amplification_from(a);
    get(q, "rounds", s.rounds);
    get(q, "bins", s.bins);
    std::string f = "dilation";
    get(q, "form", f);
    if (f == "dilation")
      s.form = QuantumForm::dilation;
    else if (f == "normal")
      s.form = QuantumForm::normal;
    else
      throw ValidationError("unknown quantum form: " + f);
    get(q, "statevector_check", s.statevector_check);
    c.quantum = s;
  }
  if (j.contains("resources")) {
    const json& r = j["resources"];
    check_keys(r, {"N", "K", "epsilon", "d", "kappa", "M_max", "J", "iota", "omega", "log_base"}, "resources");
    get(r, "N", c.resources.N);
    get(r, "K", c.resources.K);
    get(r, "epsilon", c.resources.epsilon);
    get(r, "d", c.resources.d);
    get(r, "kappa", c.resources.kappa);
    get(r, "M_max", c.resources.M_max);
    get(r, "J", c.resources.J);
    get(r, "iota", c.resources.iota);
    get(r, "omega", c.resources.omega_fail);
    get(r, "log_base", c.resources.log_base);
  }
  get(j, "output_dir", c.output_dir);
  get(j, "workers", c.workers);
  return c;
}

json to_json(const RunConfig& c) {
  json j;
  j["problem"] = c.problem;
  j["n_basis"] = c.n_basis;
  j["n_grid"] = c.n_grid;
  j["span"] = {c.span[0], c.span[1]};
  const auto bs = basis_span_of(c);
  j["basis_span"] = {bs[0], bs[1]};
  j["width_factor"] = c.width_factor;
  j["width_ref_n"] = c.width_ref_n;
  if (c.width) j["width"] = *c.width;
  j["morse"] = {{"D_e", c.morse_de}, {"a", c.morse_a}};
  j["potential_shift"] = c.potential_shift;
  j["alpha_window"] = {c.alpha_window[0], c.alpha_window[1]};
  j["K"] = c.K;
  if (c.epsilon) j["epsilon"] = *c.epsilon;
  if (c.quantum) {
    const auto& q = *c.quantum;
    json jq = {{"lambda0", q.scan.lambda0},
               {"epsilon", q.scan.epsilon},
               {"b", q.scan.b},
               {"c", q.scan.c},
               {"qpe_model", to_string(q.scan.qpe_model)},
               {"p_fail", q.scan.p_fail},
               {"max_grover", q.scan.max_grover},
               {"iota", q.scan.iota},
               {"amplification", to_string(q.scan.amplification)},
               {"rounds", q.rounds},
               {"bins", q.bins},
               {"form", q.form == QuantumForm::dilation ? "dilation" : "normal"},
               {"statevector_check", q.statevector_check}};
    if (q.seed_set) jq["seed"] = q.scan.seed;
    j["quantum"] = jq;
  }
  const auto& r = c.resources;
  j["resources"] = {{"N", r.N},         {"K", r.K},         {"epsilon", r.epsilon}, {"d", r.d},
                    {"kappa", r.kappa}, {"M_max", r.M_max}, {"J", r.J},             {"iota", r.iota},
                    {"omega", r.omega_fail}, {"log_base", r.log_base}};
  j["output_dir"] = c.output_dir;
  j["workers"] = c.workers;
  return j;
}

RunConfig load_config_file(const std::string& path) {
  const std::string text = read_text(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("config " + path + ": " + e.what());
  }
  return config_from_json(j);
}

std::array<double, 2> basis_span_of(const RunConfig& c) {
  if (c.basis_span) return *c.basis_span;
  const double mid = 0.5 * (c.span[0] + c.span[1]);
  const double half = 0.4 * (c.span[1] - c.span[0]);
  return {mid - half, mid + half};
}

BasisSpec basis_for(const RunConfig& c) {
  if (!(c.span[0] < c.span[1])) throw InvalidSpan("span must satisfy lo < hi");
  const auto bs = basis_span_of(c);
  if (c.width) return make_gaussian_basis_fixed(c.n_basis, bs[0], bs[1], *c.width);
  const int ref = c.width_ref_n > 0 ? c.width_ref_n : c.n_basis;
  if (!(c.width_factor > 0)) throw InvalidSpan("width_factor must be positive");
  return make_gaussian_basis_fixed(c.n_basis, bs[0], bs[1], c.width_factor * center_spacing(ref, bs[0], bs[1]));
}

SpatialGrid grid_for(const RunConfig& c) { return make_grid(c.n_grid, c.span[0], c.span[1]); }

Potential potential_for(const RunConfig& c) {
  Potential p = c.problem == "harmonic" ? Potential::harmonic()
                : c.problem == "morse"  ? Potential::morse(c.morse_de, c.morse_a)
                                        : Potential::load_csv(c.problem);
  return c.potential_shift != 0.0 ? p.shifted(c.potential_shift) : p;
}

CollocationSystem system_for(const RunConfig& c) { return assemble(basis_for(c), grid_for(c), potential_for(c)); }

json to_json(const InverseSolveReport& r) {
  json kappa = std::isfinite(r.kappa) ? json(r.kappa) : json(nullptr);
  return {{"energies", r.energies}, {"complex_count", r.complex_count}, {"kappa", kappa}, {"status", to_string(r.status)}};
}

InverseSolveReport inverse_report_from_json(const json& j) {
  InverseSolveReport r;
  r.energies = j.at("energies").get<std::vector<double>>();
  r.complex_count = j.at("complex_count").get<int>();
  r.kappa = json_real(j.at("kappa"));
  const auto s = j.at("status").get<std::string>();
  r.status = s == "ok" ? SolveStatus::ok : s == "ill_conditioned" ? SolveStatus::ill_conditioned : SolveStatus::failed;
  return r;
}

json to_json(const DipSet& d) {
  json arr = json::array();
  for (const auto& x : d.dips)
    arr.push_back({{"alpha_star", x.alpha_star}, {"sigma_value", x.sigma_value}, {"interval", {x.alpha_lo, x.alpha_hi}}});
  return {{"threshold", d.threshold}, {"dips", arr}};
}

DipSet dipset_from_json(const json& j) {
  DipSet d;
  d.threshold = j.at("threshold").get<double>();
  for (const auto& x : j.at("dips")) {
    const auto iv = x.at("interval").get<std::vector<double>>();
    d.dips.push_back({x.at("alpha_star").get<double>(), x.at("sigma_value").get<double>(), iv.at(0), iv.at(1)});
  }
  return d;
}

json to_json(const Sample& s) {
  return {{"alpha", s.alpha}, {"alpha_index", s.alpha_index}, {"lambda_tilde", s.lambda_tilde}, {"chi", s.chi}, {"xi", s.xi}};
}

Sample sample_from_json(const json& j) {
  return {j.at("alpha_index").get<int>(), j.at("alpha").get<double>(), j.at("lambda_tilde").get<double>(),
          j.at("chi").get<int>(), j.at("xi").get<long>()};
}

json to_json(const CostReport& r) {
  return {{"classical_inverse", {{"value", r.classical_inverse}, {"units", "flops"}}},
          {"classical_scan", {{"value", r.classical_scan}, {"units", "flops"}}},
          {"quantum_scan", {{"value", r.quantum_scan}, {"units", "queries"}}},
          {"quantum_scan_gaussian", {{"value", r.quantum_scan_gaussian}, {"units", "queries"}}},
          {"zeta_total", {{"value", r.zeta_total}, {"bound", r.zeta_bound}}},
          {"appendixA_total", {{"value", r.appendixA_total}, {"iota_variant", r.appendixA_total_iota}, {"units", "t_gates"}}},
          {"note", "leading-term scaling estimates with unit constants, not gate counts"}};
}

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
  if (!out) throw ValidationError("write failed: " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string matrix_csv(const Mat& m) {
  std::string s;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) s += ',';
      s += format_double(m(i, j));
    }
    s += '\n';
  }
  return s;
}

namespace {

std::vector<double> parse_row(const std::string& line) {
  std::vector<double> row;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t end = line.find(',', pos);
    if (end == std::string::npos) end = line.size();
    double v = 0;
    const char* b = line.data() + pos;
    auto res = std::from_chars(b, line.data() + end, v);
    if (res.ec != std::errc() || res.ptr != line.data() + end) throw ValidationError("malformed CSV field: " + line);
    row.push_back(v);
    pos = end + 1;
  }
  return row;
}

}  // namespace

Mat matrix_from_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) rows.push_back(parse_row(line));
  if (rows.empty()) return {};
  Mat m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw ValidationError("ragged matrix CSV");
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

std::string scan_csv(const LandscapeScan& s) {
  std::string out = "alpha,sigma_min,sigma_detrended\n";
  for (std::size_t i = 0; i < s.alphas.size(); ++i)
    out += format_double(s.alphas[i]) + ',' + format_double(s.sigmas[i]) + ',' + format_double(s.sigmas_detrended[i]) + '\n';
  return out;
}

LandscapeScan scan_from_csv(const std::string& text) {
  LandscapeScan s;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (line != "alpha,sigma_min,sigma_detrended") throw ValidationError("scan CSV: unexpected header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto r = parse_row(line);
    if (r.size() != 3) throw ValidationError("scan CSV: expected three columns");
    s.alphas.push_back(r[0]);
    s.sigmas.push_back(r[1]);
    s.sigmas_detrended.push_back(r[2]);
  }
  return s;
}

std::string samples_jsonl(const ScanOutcome& o) {
  std::string out;
  for (const auto& s : o.samples) out += to_json(s).dump() + '\n';
  return out;
}

std::vector<Sample> samples_from_jsonl(const std::string& text) {
  std::vector<Sample> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(sample_from_json(json::parse(line)));
  return out;
}

std::string histogram_csv(const std::vector<int>& counts, double a, double b) {
  std::string out = "bin_lo,bin_hi,count\n";
  const double w = (b - a) / static_cast<double>(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    out += format_double(a + w * static_cast<double>(i)) + ',' + format_double(a + w * static_cast<double>(i + 1)) + ',' +
           std::to_string(counts[i]) + '\n';
  return out;
}

}  // namespace lscan
