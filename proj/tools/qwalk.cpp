// qwalk: command-line front end for the walk analyses.
//
//   qwalk validate  WALK.json
//   qwalk spectrum  WALK.json [--grid N] [--samples K] [--seed S]
//   qwalk criteria  WALK.json
//   qwalk simulate  WALK.json --phi PHI [--steps N] [--average M] [--out FILE]
//   qwalk localize  WALK.json --phi PHI [--x X] [--N N] [--quad M]
//   qwalk deform    TARGET.json [--samples K] [--grid N] [--out FILE]
//
// Exit codes: 0 ok, 1 some verdict inconclusive, 2 invalid input.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qwalk/qwalk.hpp"

namespace {

using namespace qwalk;

constexpr int exit_ok = 0;
constexpr int exit_inconclusive = 1;
constexpr int exit_invalid = 2;

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError("cannot parse '" + s + "' in " + what);
  }
}

// "e3" is the third basis vector; otherwise comma-separated entries "re" or "re:im".
CVector parse_phi(const std::string& spec, std::size_t dim) {
  if (spec.size() > 1 && spec[0] == 'e') {
    const int k = static_cast<int>(parse_double(spec.substr(1), "--phi"));
    if (k < 1 || static_cast<std::size_t>(k) > dim)
      throw UsageError("--phi " + spec + ": basis index must be in 1.." + std::to_string(dim));
    return basis_vector(dim, static_cast<std::size_t>(k - 1));
  }
  CVector phi;
  for (const auto& entry : split(spec, ',')) {
    const auto parts = split(entry, ':');
    if (parts.size() == 1) {
      phi.emplace_back(parse_double(parts[0], "--phi"), 0.0);
    } else if (parts.size() == 2) {
      phi.emplace_back(parse_double(parts[0], "--phi"), parse_double(parts[1], "--phi"));
    } else {
      throw UsageError("--phi entry '" + entry + "' must be re or re:im");
    }
  }
  require_unit(phi, dim, "--phi");
  return phi;
}

LatticePoint parse_point(const std::string& spec, std::size_t d) {
  if (spec.empty()) return LatticePoint(d, 0);
  LatticePoint x;
  for (const auto& e : split(spec, ',')) x.push_back(static_cast<int>(parse_double(e, "--x")));
  if (x.size() != d) throw UsageError("--x has " + std::to_string(x.size()) + " coordinates, expected " + std::to_string(d));
  return x;
}

void write_text(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw UsageError("cannot write " + out);
  f << text;
}

std::size_t default_grid(std::size_t d) { return d <= 2 ? 64 : (d == 3 ? 32 : 12); }

Json walk_summary(const Walk& w) {
  Json j;
  j["dimension"] = w.dimension();
  j["coin_dimension"] = w.coin_dimension();
  Json steps = Json::array();
  for (const auto& s : w.steps()) steps.push_back(s);
  j["steps"] = std::move(steps);
  j["kind"] = to_string(w.kind());
  j["coin_class"] = to_string(w.coin().primary_class());
  j["coin_eigenvalues"] = to_json(w.coin().eigenvalues());
  return j;
}

bool is_lazy_layout(const Walk& w) {
  const auto expected = lazy_steps(w.dimension());
  if (w.steps().size() != expected.size() || w.coin_dimension() != expected.size()) return false;
  const auto coord = ResolutionOfUnity::coordinate(expected.size());
  for (std::size_t a = 0; a < expected.size(); ++a) {
    if (w.steps()[a] != expected[a]) return false;
    if ((w.projection(a) - coord[a]).max_abs() > 1e-14) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

int cmd_validate(const std::string& file) {
  try {
    const Walk w = load_walk(file);
    Json j;
    j["command"] = "validate";
    j["valid"] = true;
    j["walk"] = walk_summary(w);
    std::cout << dump(j);
    return exit_ok;
  } catch (const DocumentError& e) {
    Json j;
    j["command"] = "validate";
    j["valid"] = false;
    j["error"] = e.what();
    std::cout << dump(j);
    std::cerr << "error: " << e.what() << '\n';
    return exit_invalid;
  }
}

int cmd_spectrum(const std::string& file, std::size_t grid_n, std::size_t samples, std::uint64_t seed,
                 const std::string& out) {
  const Walk w = load_walk(file);
  const auto grid = TorusGrid::standard(w.dimension(), grid_n ? grid_n : default_grid(w.dimension()));
  const auto candidates = candidate_spectrum(w, samples, seed);

  std::vector<std::pair<cplx, bool>> probes;  // value, is candidate
  for (const auto& c : candidates) probes.emplace_back(c, true);
  for (const auto& e : w.coin().eigenvalues()) {
    bool seen = false;
    for (const auto& p : probes) seen = seen || std::abs(p.first - e) < 1e-6;
    if (!seen) probes.emplace_back(e, false);
  }

  const Coin& coin = w.coin();
  bool inconclusive = false;
  Json probe_list = Json::array();
  Json eigenvalues = Json::array();
  for (const auto& [omega, is_candidate] : probes) {
    Json pj;
    pj["omega"] = to_json(omega);
    pj["candidate"] = is_candidate;
    pj["coin_eigenvalue"] = coin.has_eigenvalue(omega);
    const auto scan = symbol_scan(w, omega, grid);
    pj["symbol_scan"] = to_json(scan);
    if (w.kind() == WalkKind::Plain && coin.flags().grover &&
        (std::abs(omega - 1.0) < 1e-6 || std::abs(omega + 1.0) < 1e-6)) {
      pj["kernel_scan"] = to_json(criterion_grover(w, omega.real() > 0 ? 1 : -1, grid));
    } else if (w.kind() == WalkKind::Plain && !w.steps().contains_origin() && !coin.flags().scalar &&
               coin.has_eigenvalue(omega)) {
      pj["kernel_scan"] = to_json(criterion_general(w, omega, grid));
    }
    if (scan.verdict == Verdict::Inconclusive) inconclusive = true;
    if (scan.verdict == Verdict::Present) eigenvalues.push_back(to_json(omega));
    probe_list.push_back(std::move(pj));
  }

  Json j;
  j["command"] = "spectrum";
  j["seed"] = seed;
  j["samples"] = samples;
  j["grid"] = grid_json(grid);
  j["walk"] = walk_summary(w);
  j["candidates"] = to_json(candidates);
  j["probes"] = std::move(probe_list);
  j["eigenvalues"] = std::move(eigenvalues);
  write_text(dump(j), out);
  return inconclusive ? exit_inconclusive : exit_ok;
}

int cmd_criteria(const std::string& file, const std::string& out) {
  const Walk w = load_walk(file);
  Json list = Json::array();
  for (int sign : {1, -1}) {
    const auto r = symmetric_sufficient(w, sign);
    Json c;
    c["name"] = "symmetric-balance";
    c["sign"] = sign;
    c["applies"] = r.applies;
    c["max_defect"] = r.max_defect;
    c["conclusion"] = r.implies_eigenvalue ? (sign > 0 ? "eigenvalue 1 present" : "eigenvalue -1 present") : "none";
    list.push_back(std::move(c));
  }
  {
    const auto r = reflection_no_minus(w);
    Json c;
    c["name"] = "rest-step-exclusion";
    c["applies"] = r.applies;
    c["rest_component"] = r.rest_component;
    c["conclusion"] = r.excludes_minus_one ? "eigenvalue -1 absent" : "none";
    list.push_back(std::move(c));
  }
  {
    Json c;
    c["name"] = "lazy-balance";
    const auto& mu = w.coin().reflection_vector();
    const bool layout = is_lazy_layout(w) && w.coin().flags().reflection && mu.has_value();
    const bool fires = layout && lazy_both_eigen(*mu).both_present;
    c["applies"] = fires;
    c["conclusion"] = fires ? "eigenvalues 1 and -1 present" : "none";
    list.push_back(std::move(c));
  }
  {
    Json c;
    c["name"] = "product-dimension";
    const bool applies = w.kind() == WalkKind::Product && w.coin().flags().grover;
    const auto r = product_dim_criterion(w.coin());
    c["applies"] = applies;
    c["dim_plus"] = r.dim_plus;
    c["dim_minus"] = r.dim_minus;
    c["conclusion"] = applies && r.implies_eigenvalue_one ? "eigenvalue 1 present" : "none";
    list.push_back(std::move(c));
  }
  Json j;
  j["command"] = "criteria";
  j["walk"] = walk_summary(w);
  j["criteria"] = std::move(list);
  write_text(dump(j), out);
  return exit_ok;
}

int cmd_simulate(const std::string& file, const std::string& phi_spec, std::size_t steps, std::size_t average,
                 const std::string& out) {
  const Walk w = load_walk(file);
  const CVector phi = parse_phi(phi_spec, w.coin_dimension());
  std::ostringstream os;
  if (average > 0) {
    const auto r = averaged_distribution(w, phi, steps, average);
    write_distribution_csv(os, w.dimension(), r.last, &r.average);
  } else {
    write_distribution_csv(os, w.dimension(), distribution(evolve(w, phi, steps)));
  }
  write_text(os.str(), out);
  return exit_ok;
}

int cmd_localize(const std::string& file, const std::string& phi_spec, const std::string& x_spec, std::size_t n,
                 std::size_t quad, std::size_t samples, std::uint64_t seed, const std::string& out) {
  const Walk w = load_walk(file);
  const CVector phi = parse_phi(phi_spec, w.coin_dimension());
  const LatticePoint x = parse_point(x_spec, w.dimension());
  if (n == 0) throw UsageError("--N must be at least 1");
  const std::size_t m = quad ? quad : (w.dimension() == 1 ? 2048 : 128);
  const auto r = wiener_check(w, phi, x, n, m, WienerOptions{samples, seed});
  Json j;
  j["command"] = "localize";
  j["seed"] = seed;
  j["phi"] = to_json(phi);
  j["x"] = x;
  j["N"] = n;
  j["quad_points"] = m;
  const Json body = to_json(r);
  for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
  write_text(dump(j), out);
  return exit_ok;
}

int cmd_deform(const std::string& file, std::size_t samples, std::size_t grid_n, const std::string& out) {
  const Json doc = read_json_file(file);
  const CVector mu = parse_vector(detail::member(doc, "mu", ""), "/mu");
  const MuPath path = detail::located("/mu", [&] { return mu_path(mu); });
  const auto ts = uniform_parameters(samples);
  const auto rows = deformation_sweep(path, ts, grid_n ? grid_n : default_grid(path.lattice_dimension()));

  std::ostringstream os;
  os.precision(17);
  os << "t";
  for (std::size_t i = 0; i < mu.size(); ++i) os << ",mu_re_" << (i + 1) << ",mu_im_" << (i + 1);
  os << ",plus_verdict,plus_max_sigma,minus_verdict,minus_min_sigma,balance_plus,rest_excludes_minus,balanced_both\n";
  bool inconclusive = false;
  for (const auto& r : rows) {
    os << r.t;
    for (const auto& c : r.mu) os << ',' << c.real() << ',' << c.imag();
    os << ',' << to_string(r.plus.verdict) << ',' << r.plus.max_sigma << ',' << to_string(r.minus.verdict) << ','
       << r.minus.min_sigma << ',' << r.balance_plus << ',' << r.rest_excludes_minus << ',' << r.balanced_both << '\n';
    inconclusive = inconclusive || r.plus.verdict == Verdict::Inconclusive || r.minus.verdict == Verdict::Inconclusive;
  }
  write_text(os.str(), out);
  return inconclusive ? exit_inconclusive : exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eigenvalue analysis and simulation of periodic quantum walks on Z^d"};
  app.require_subcommand(1);

  std::string file;
  std::string out;
  std::string phi;
  std::string x;
  std::size_t grid = 0;
  std::size_t samples = 50;
  std::uint64_t seed = default_seed;
  std::size_t steps = 0;
  std::size_t average = 0;
  std::size_t n = 1000;
  std::size_t quad = 0;
  std::size_t deform_samples = 5;

  auto* validate = app.add_subcommand("validate", "Check that a walk document defines a valid walk");
  validate->add_option("file", file, "Walk document (JSON)")->required();

  auto* spectrum = app.add_subcommand("spectrum", "Candidate eigenvalues and grid-certified verdicts");
  spectrum->add_option("file", file, "Walk document (JSON)")->required();
  spectrum->add_option("--grid", grid, "Grid points per torus axis (0: 64 for d<=2, 32 for d=3)");
  spectrum->add_option("--samples", samples, "Random torus points for the candidate spectrum");
  spectrum->add_option("--seed", seed, "Seed for the random torus points");
  spectrum->add_option("--out", out, "Output file (default stdout)");

  auto* criteria = app.add_subcommand("criteria", "Structural eigenvalue criteria");
  criteria->add_option("file", file, "Walk document (JSON)")->required();
  criteria->add_option("--out", out, "Output file (default stdout)");

  auto* simulate = app.add_subcommand("simulate", "Probability distribution p_n as CSV");
  simulate->add_option("file", file, "Walk document (JSON)")->required();
  simulate->add_option("--phi", phi, "Initial coin state: eK or comma-separated re[:im] entries")->required();
  simulate->add_option("--steps", steps, "Number of steps n");
  simulate->add_option("--average", average, "Add the Cesaro average over steps 1..M as a column");
  simulate->add_option("--out", out, "Output CSV (default stdout)");

  auto* localize = app.add_subcommand("localize", "Time average against eigenprojection weights");
  localize->add_option("file", file, "Walk document (JSON)")->required();
  localize->add_option("--phi", phi, "Initial coin state: eK or comma-separated re[:im] entries")->required();
  localize->add_option("--x", x, "Lattice site, comma-separated (default origin)");
  localize->add_option("--N", n, "Number of steps averaged");
  localize->add_option("--quad", quad, "Quadrature points per axis (0: 2048 for d=1, else 128)");
  localize->add_option("--samples", samples, "Random torus points for the candidate spectrum");
  localize->add_option("--seed", seed, "Seed for the random torus points");
  localize->add_option("--out", out, "Output file (default stdout)");

  auto* deform = app.add_subcommand("deform", "Sweep the reflection-vector path from the Grover vector");
  deform->add_option("file", file, "Target document {\"mu\": [...]}")->required();
  deform->add_option("--samples", deform_samples, "Number of uniformly spaced t values in [0, 1]");
  deform->add_option("--grid", grid, "Grid points per torus axis");
  deform->add_option("--out", out, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_invalid;
  }

  try {
    if (*validate) return cmd_validate(file);
    if (*spectrum) return cmd_spectrum(file, grid, samples, seed, out);
    if (*criteria) return cmd_criteria(file, out);
    if (*simulate) return cmd_simulate(file, phi, steps, average, out);
    if (*localize) return cmd_localize(file, phi, x, n, quad, samples, seed, out);
    if (*deform) return cmd_deform(file, deform_samples, grid, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_invalid;
  }
  return exit_invalid;
}
