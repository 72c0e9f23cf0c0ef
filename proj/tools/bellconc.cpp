// bellconc command-line front end.
//
// Exit codes: 0 success, 2 invalid parameters or unparsable input, 3 missing
// data, 4 input outside the domain of the requested method.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bellconc/bell.hpp"
#include "bellconc/entanglement.hpp"
#include "bellconc/errors.hpp"
#include "bellconc/expdata.hpp"
#include "bellconc/fits.hpp"
#include "bellconc/io.hpp"
#include "bellconc/nlfrac.hpp"
#include "bellconc/qstate.hpp"
#include "bellconc/rng.hpp"

#ifndef BELLCONC_VERSION
#define BELLCONC_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace bellconc;
using json = nlohmann::ordered_json;

namespace {

constexpr double kDegree = kPi / 180.0;

std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Flags, inputs and seed of one invocation. Written next to every output file
// as <out>.manifest.json; the digest covers everything except the timestamp.
struct RunManifest {
  std::string command;
  json flags = json::object();
  std::optional<std::uint64_t> seed;
  json inputs = json::object();

  void add_input(const std::string& path) { inputs[path] = hex64(fnv1a64(read_text_file(path))); }

  void add_inequality_dir(const std::string& dir) {
    std::string bytes;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
      if (e.is_regular_file() && e.path().extension() == ".bellineq") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) bytes += f.filename().string() + "\n" + read_text_file(f.string());
    inputs[dir] = hex64(fnv1a64(bytes));
  }

  json body() const {
    json j;
    j["command"] = command;
    j["flags"] = flags;
    j["seed"] = seed ? json(*seed) : json(nullptr);
    j["versions"] = {{"bellconc", BELLCONC_VERSION}, {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                                                   std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                                                   std::to_string(EIGEN_MINOR_VERSION)}};
    j["inputs"] = inputs;
    return j;
  }

  std::string digest() const { return hex64(fnv1a64(body().dump())); }

  std::string to_json() const {
    json j = body();
    j["digest"] = digest();
    j["timestamp"] = utc_timestamp();
    return j.dump(2) + "\n";
  }
};

void collect_flags(const CLI::App* app, RunManifest& m) {
  for (const CLI::Option* opt : app->get_options()) {
    if (opt->count() == 0 || opt->get_name() == "--help" || opt->get_name() == "-h") continue;
    const auto& res = opt->results();
    m.flags[opt->get_name()] = res.size() == 1 ? json(res.front()) : json(res);
  }
}

// Writes `text` to `out` plus its manifest, or to stdout when `out` is empty.
void emit(const std::string& out, const std::string& text, const RunManifest& manifest) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  write_text_file(out, text);
  write_text_file(out + ".manifest.json", manifest.to_json());
}

std::string with_manifest(json j, const RunManifest& manifest) {
  j["manifest"] = manifest.digest();
  return j.dump(2) + "\n";
}

std::vector<double> grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw ParameterError("empty grid: need v-min <= v-max and a positive step");
  const auto count = static_cast<long long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> out;
  for (long long k = 0; k < count; ++k) out.push_back(std::round((lo + static_cast<double>(k) * step) * 1e12) / 1e12);
  return out;
}

// Two numeric columns; a non-numeric first line is treated as a header.
std::vector<std::pair<double, double>> read_pairs(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  std::vector<std::pair<double, double>> out;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double a = 0.0, b = 0.0;
    if (!(fields >> a >> b)) {
      if (row == 1) continue;
      throw ParseError(path + ": expected two numbers", row);
    }
    out.emplace_back(a, b);
  }
  return out;
}

std::vector<double> parse_basis(const std::string& spec) {
  if (spec == "2q") return kBasis2q;
  if (spec == "3q") return kBasis3q;
  std::vector<double> out;
  std::istringstream in(spec);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    const auto slash = tok.find('/');
    try {
      out.push_back(slash == std::string::npos ? std::stod(tok)
                                               : std::stod(tok.substr(0, slash)) / std::stod(tok.substr(slash + 1)));
    } catch (const std::exception&) {
      throw ParameterError("bad basis exponent '" + tok + "'");
    }
  }
  return out;
}

std::string ineq_dir_or_default(const std::string& dir) { return dir.empty() ? default_inequality_dir() : dir; }

InequalitySet load_set(const std::string& dir, int n, RunManifest& manifest) {
  InequalitySet set = load_inequality_set(dir, n);
  manifest.add_inequality_dir(dir);
  return set;
}

json estimate_json(const PvEstimate& e) {
  json j;
  j["p_v"] = e.p_v;
  j["std_err"] = e.std_err;
  j["m"] = e.samples;
  j["violations"] = e.violations;
  j["set_tag"] = e.set_tag;
  j["lower_bound"] = e.lower_bound;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement estimation from the nonlocal fraction of two- and three-qubit states"};
  app.require_subcommand(1);
  app.set_version_flag("--version", BELLCONC_VERSION);

  // Shared option values.
  std::string out, state_path, ineq_dir, samples_path;
  std::uint64_t seed = 1;
  std::uint64_t samples = 1000000;
  unsigned workers = 1;
  double theta_deg = 45.0, v = 1.0, x = 0.0, y = 0.0, gamma = 1.0;
  int n_qubits = 2;

  const auto add_sampling = [&](CLI::App* sub) {
    sub->add_option("--ineq-dir", ineq_dir, "Directory of *.bellineq files (default: $BELLCONC_INEQ_DIR or bundled data)");
    sub->add_option("--samples,-m", samples, "Number of sampled measurement settings")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "Master random seed");
    sub->add_option("--workers", workers, "Worker threads (0 = all cores)");
  };

  // state make
  auto* state = app.add_subcommand("state", "Construct states")->require_subcommand(1);
  auto* state_make = state->add_subcommand("make", "Write a state as JSON");
  std::string family, bits;
  state_make->add_option("--family", family, "gghz | werner | gsms2 | gsms3 | mems | phn | basis")->required();
  state_make->add_option("--theta-deg", theta_deg, "Angle theta in degrees");
  state_make->add_option("--v", v, "Visibility");
  state_make->add_option("--n", n_qubits, "Number of qubits");
  state_make->add_option("--x", x, "GSMS / PhN parameter x");
  state_make->add_option("--y", y, "GSMS parameter y");
  state_make->add_option("--gamma", gamma, "MEMS parameter gamma");
  state_make->add_option("--bits", bits, "Basis state label such as 010");
  state_make->add_option("--out,-o", out, "Output file (default: stdout)");

  // pv
  auto* pv = app.add_subcommand("pv", "Monte Carlo nonlocal fraction of a state");
  pv->add_option("--state", state_path, "State JSON file")->required();
  add_sampling(pv);
  pv->add_option("--out,-o", out, "Output JSON file");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "p_V and concurrence of Werner-like states over a visibility grid");
  double v_min = 0.9, v_max = 1.0, dv = 0.01;
  std::string conc_kind;
  sweep->add_option("--theta-deg", theta_deg, "Angle theta in degrees");
  sweep->add_option("--n", n_qubits, "Number of qubits");
  sweep->add_option("--v-min", v_min);
  sweep->add_option("--v-max", v_max);
  sweep->add_option("--dv", dv, "Visibility step");
  sweep->add_option("--conc", conc_kind, "closed-w2 | gme-xstate | gme-published (default by qubit count)");
  add_sampling(sweep);
  sweep->add_option("--out,-o", out, "Output CSV file");

  // dist / rescale
  auto* dist = app.add_subcommand("dist", "Distribution of maximal Bell values under random settings");
  dist->add_option("--state", state_path, "State JSON file")->required();
  add_sampling(dist);
  dist->add_option("--out,-o", out, "Output CSV file (sidecar <out>.json)");

  auto* rescale = app.add_subcommand("rescale", "p_V of white-noise mixtures from a stored distribution");
  std::vector<double> v_list;
  rescale->add_option("--samples-file", samples_path, "CSV written by `dist`")->required();
  rescale->add_option("--v", v_list, "Visibilities");
  rescale->add_option("--v-min", v_min);
  rescale->add_option("--v-max", v_max);
  rescale->add_option("--dv", dv);
  rescale->add_option("--out,-o", out, "Output CSV file");

  // conc
  auto* conc = app.add_subcommand("conc", "Concurrence of a state");
  std::string method = "wootters";
  std::vector<int> part{0};
  conc->add_option("--state", state_path, "State JSON file")->required();
  conc->add_option("--method", method, "wootters | pure | gme-pure | gme-xstate");
  conc->add_option("--part", part, "Qubits on one side of the cut for --method pure");
  conc->add_option("--out,-o", out);

  // fit
  auto* fit = app.add_subcommand("fit", "Fitted relations between p_V, visibility and concurrence")->require_subcommand(1);
  auto* fit_eval = fit->add_subcommand("eval", "Evaluate a published fit");
  std::string fit_name;
  double pv_percent = 0.0;
  fit_eval->add_option("--name", fit_name, "One of: " + [] {
    std::string s;
    for (const auto& n : named_fits()) s += (s.empty() ? "" : ", ") + n;
    return s;
  }())->required();
  fit_eval->add_option("--pv", pv_percent, "p_V in percent")->required();
  fit_eval->add_option("--theta-deg", theta_deg, "Angle for v-2q / v-3q");
  fit_eval->add_option("--out,-o", out);

  auto* fit_refit = fit->add_subcommand("refit", "Least-squares fit on a fractional-power basis");
  std::string input_path, basis_spec = "2q", source;
  fit_refit->add_option("--input", input_path, "CSV with columns pv_percent,value");
  fit_refit->add_option("--source", source, "werner2-closed: sample the analytic two-qubit curve instead of --input");
  fit_refit->add_option("--basis", basis_spec, "2q | 3q | comma-separated exponents (fractions allowed)");
  fit_refit->add_option("--v-min", v_min);
  fit_refit->add_option("--v-max", v_max);
  fit_refit->add_option("--dv", dv);
  fit_refit->add_option("--out,-o", out);

  auto* fit_est = fit->add_subcommand("estimate-theta-v0", "Recover (theta, v0) from a p_V(v) curve");
  fit_est->add_option("--input", input_path, "CSV with columns v,pv_percent");
  fit_est->add_option("--samples-file", samples_path, "Distribution from `dist`, rescaled over the v grid");
  fit_est->add_option("--v-min", v_min);
  fit_est->add_option("--v-max", v_max);
  fit_est->add_option("--dv", dv);
  fit_est->add_option("--out,-o", out);

  // exp
  auto* exp = app.add_subcommand("exp", "Coincidence-count pipeline")->require_subcommand(1);
  std::size_t blocks = 2000;
  double counts = 4000.0, vc = 1.0, margin = 0.015;
  std::optional<std::uint64_t> poisson_seed;
  std::string data_path, out_dir, basis_dir, statistic = "pv_cc";
  std::vector<std::string> basis_files;
  std::size_t trials = 100;

  auto* exp_synth = exp->add_subcommand("synth", "Synthetic CC data of a three-qubit state");
  exp_synth->add_option("--state", state_path)->required();
  exp_synth->add_option("--blocks", blocks, "Number of 8-setting blocks");
  exp_synth->add_option("--counts", counts, "Mean total counts per setting");
  exp_synth->add_option("--seed", seed, "Settings seed (shared with `pv`)");
  exp_synth->add_option("--poisson-seed", poisson_seed, "Draw Poisson counts with this seed");
  exp_synth->add_option("--out,-o", out)->required();

  auto* exp_basis = exp->add_subcommand("synth-basis", "Synthetic CC data of the 8 computational basis states");
  exp_basis->add_option("--blocks", blocks);
  exp_basis->add_option("--counts", counts);
  exp_basis->add_option("--seed", seed);
  exp_basis->add_option("--out-dir", out_dir)->required();

  auto* exp_mix = exp->add_subcommand("mix", "Mix state counts with basis-state counts");
  exp_mix->add_option("--state-cc", data_path)->required();
  exp_mix->add_option("--basis-cc", basis_files, "Eight basis-state CSV files");
  exp_mix->add_option("--basis-dir", basis_dir, "Directory holding basis-000.csv ... basis-111.csv");
  exp_mix->add_option("--vc", vc, "Mixing weight v_c")->required();
  exp_mix->add_option("--out,-o", out)->required();

  auto* exp_pv = exp->add_subcommand("pv", "Nonlocal fraction from CC data");
  exp_pv->add_option("--data", data_path)->required();
  exp_pv->add_option("--ineq-dir", ineq_dir);
  exp_pv->add_option("--margin", margin, "Bell-value precision for the companion interval");
  exp_pv->add_option("--out,-o", out);

  auto* exp_res = exp->add_subcommand("resample", "Poisson resampling of a CC statistic");
  exp_res->add_option("--data", data_path)->required();
  exp_res->add_option("--statistic", statistic, "pv_cc | total_counts | correlator | fidelity_proxy");
  exp_res->add_option("--trials", trials);
  exp_res->add_option("--seed", seed);
  exp_res->add_option("--ineq-dir", ineq_dir);
  exp_res->add_option("--workers", workers);
  exp_res->add_option("--out,-o", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    RunManifest manifest;
    const CLI::App* leaf = &app;
    while (!leaf->get_subcommands().empty()) {
      leaf = leaf->get_subcommands().front();
      manifest.command += (manifest.command.empty() ? "" : " ") + leaf->get_name();
    }
    collect_flags(leaf, manifest);
    const double theta = theta_deg * kDegree;

    if (*state_make) {
      std::string text;
      if (family == "gghz") {
        text = pure_state_to_json(gghz(theta, n_qubits));
      } else if (family == "basis") {
        text = pure_state_to_json(basis_state(bits));
      } else if (family == "werner") {
        text = density_matrix_to_json(werner_like(theta, v, n_qubits));
      } else if (family == "gsms2") {
        text = density_matrix_to_json(gsms2(x, y));
      } else if (family == "gsms3") {
        text = density_matrix_to_json(gsms3(x, y));
      } else if (family == "mems") {
        text = density_matrix_to_json(mems(gamma));
      } else if (family == "phn") {
        text = density_matrix_to_json(phn(x, n_qubits));
      } else {
        throw ParameterError("unknown family '" + family + "'");
      }
      emit(out, text, manifest);
    } else if (*pv) {
      manifest.seed = seed;
      const DensityMatrix rho = load_state(state_path);
      manifest.add_input(state_path);
      const InequalitySet set = load_set(ineq_dir_or_default(ineq_dir), rho.n_qubits(), manifest);
      const PvEstimate e = estimate_pv(rho, set, samples, seed, workers);
      emit(out, with_manifest(estimate_json(e), manifest), manifest);
    } else if (*sweep) {
      manifest.seed = seed;
      const auto vs = grid(v_min, v_max, dv);
      if (conc_kind.empty()) conc_kind = n_qubits == 2 ? "closed-w2" : "gme-xstate";
      const InequalitySet set = load_set(ineq_dir_or_default(ineq_dir), n_qubits, manifest);
      std::string csv = "v,p_v,std_err,concurrence\n";
      for (double vk : vs) {
        const PvEstimate e = estimate_pv(werner_like(theta, vk, n_qubits), set, samples, seed, workers);
        double c = 0.0;
        if (conc_kind == "closed-w2" && n_qubits == 2) {
          c = conc_closed_w2(theta, vk);
        } else if (conc_kind == "gme-xstate" && n_qubits == 3) {
          c = gme_closed_w3_xstate(theta, vk);
        } else if (conc_kind == "gme-published" && n_qubits == 3) {
          c = gme_closed_w3_published(theta, vk);
        } else {
          throw ParameterError("concurrence '" + conc_kind + "' does not apply to " + std::to_string(n_qubits) + " qubits");
        }
        csv += format_shortest(vk) + "," + format_shortest(e.p_v) + "," + format_shortest(e.std_err) + "," +
               format_shortest(c) + "\n";
      }
      emit(out, csv, manifest);
    } else if (*dist) {
      manifest.seed = seed;
      const DensityMatrix rho = load_state(state_path);
      manifest.add_input(state_path);
      const InequalitySet set = load_set(ineq_dir_or_default(ineq_dir), rho.n_qubits(), manifest);
      const ViolationSamples s = violation_distribution(rho, set, samples, seed, workers, fs::path(state_path).stem().string());
      emit(out, samples_to_csv(s), manifest);
      if (!out.empty()) write_text_file(out + ".json", samples_sidecar_json(s));
    } else if (*rescale) {
      manifest.add_input(samples_path);
      const auto values = samples_from_csv(read_text_file(samples_path));
      const auto vs = v_list.empty() ? grid(v_min, v_max, dv) : v_list;
      std::string csv = "v,p_v\n";
      for (double vk : vs) csv += format_shortest(vk) + "," + format_shortest(pv_from_distribution(values, vk)) + "\n";
      emit(out, csv, manifest);
    } else if (*conc) {
      manifest.add_input(state_path);
      json j;
      j["method"] = method;
      if (method == "wootters") {
        j["value"] = concurrence2(load_state(state_path));
      } else if (method == "gme-xstate") {
        j["value"] = gme_concurrence_xstate(xstate_decompose(load_state(state_path)));
      } else if (method == "pure" || method == "gme-pure") {
        const PureState psi = pure_state_from_json(read_text_file(state_path));
        j["value"] = method == "pure" ? concurrence_pure(psi, part) : gme_concurrence_pure(psi);
      } else {
        throw ParameterError("unknown method '" + method + "'");
      }
      emit(out, with_manifest(j, manifest), manifest);
    } else if (*fit_eval) {
      json j;
      j["name"] = fit_name;
      j["pv_percent"] = pv_percent;
      if (fit_name == "v-2q" || fit_name == "v-3q") j["theta_rad"] = theta;
      j["value"] = evaluate_named_fit(fit_name, pv_percent, theta);
      j["units"] = "percent";
      emit(out, with_manifest(j, manifest), manifest);
    } else if (*fit_refit) {
      std::vector<std::pair<double, double>> points;
      std::string provenance = "refit";
      if (source == "werner2-closed") {
        for (double vk : grid(v_min, v_max, dv)) points.emplace_back(100.0 * pv_werner2_closed(vk), vk);
        provenance = "refit:werner2-closed";
      } else if (!source.empty()) {
        throw ParameterError("unknown source '" + source + "'");
      } else if (!input_path.empty()) {
        manifest.add_input(input_path);
        points = read_pairs(input_path);
        provenance = "refit:" + fs::path(input_path).stem().string();
      } else {
        throw ParameterError("refit needs --input or --source");
      }
      const FitCurve c = refit(points, parse_basis(basis_spec), provenance);
      json j = json::parse(fit_curve_to_json(c));
      emit(out, with_manifest(j, manifest), manifest);
    } else if (*fit_est) {
      std::vector<std::pair<double, double>> curve;
      if (!samples_path.empty()) {
        manifest.add_input(samples_path);
        const auto values = samples_from_csv(read_text_file(samples_path));
        for (double vk : grid(v_min, v_max, dv)) {
          const double p = 100.0 * pv_from_distribution(values, vk);
          if (p > 0.0) curve.emplace_back(vk, p);
        }
      } else if (!input_path.empty()) {
        manifest.add_input(input_path);
        curve = read_pairs(input_path);
      } else {
        throw ParameterError("estimate-theta-v0 needs --input or --samples-file");
      }
      const ThetaV0 r = estimate_theta_v0(curve);
      json j;
      j["theta_rad"] = r.theta;
      j["theta_deg"] = r.theta / kDegree;
      j["v0"] = r.v0;
      j["residual"] = r.residual;
      j["points"] = curve.size();
      emit(out, with_manifest(j, manifest), manifest);
    } else if (*exp_synth) {
      manifest.seed = seed;
      manifest.add_input(state_path);
      const DensityMatrix rho = load_state(state_path);
      const CCDataset ds = synthesize_cc(rho, blocks, seed, counts, poisson_seed, fs::path(state_path).stem().string());
      save_cc(ds, out);
      write_text_file(out + ".manifest.json", manifest.to_json());
    } else if (*exp_basis) {
      manifest.seed = seed;
      fs::create_directories(out_dir);
      for (const auto& ds : synthesize_basis_cc(blocks, seed, counts)) {
        const std::string path = (fs::path(out_dir) / (ds.tag + ".csv")).string();
        save_cc(ds, path);
        write_text_file(path + ".manifest.json", manifest.to_json());
      }
    } else if (*exp_mix) {
      if (basis_files.empty() && !basis_dir.empty()) {
        for (unsigned k = 0; k < 8; ++k) {
          std::string label;
          for (int p = 2; p >= 0; --p) label += ((k >> p) & 1U) ? '1' : '0';
          basis_files.push_back((fs::path(basis_dir) / ("basis-" + label + ".csv")).string());
        }
      }
      if (basis_files.size() != 8) throw ParameterError("mix needs exactly 8 basis datasets");
      manifest.add_input(data_path);
      std::vector<CCDataset> basis;
      for (const auto& f : basis_files) {
        basis.push_back(load_cc(f));
        manifest.add_input(f);
      }
      const CCDataset mixed = mix_counts(load_cc(data_path), basis, vc);
      save_cc(mixed, out);
      write_text_file(out + ".manifest.json", manifest.to_json());
    } else if (*exp_pv) {
      manifest.add_input(data_path);
      const CCDataset ds = load_cc(data_path);
      const InequalitySet set = load_set(ineq_dir_or_default(ineq_dir), 3, manifest);
      const PvCCResult r = pv_cc(ds, set, margin);
      json j = estimate_json(r.estimate);
      j["low"] = r.low;
      j["high"] = r.high;
      j["margin"] = margin;
      j["blocks"] = r.blocks;
      j["excluded_records"] = r.excluded_records;
      if (r.excluded_records > 0) std::cerr << "warning: " << r.excluded_records << " records outside complete blocks\n";
      emit(out, with_manifest(j, manifest), manifest);
    } else if (*exp_res) {
      manifest.seed = seed;
      manifest.add_input(data_path);
      const CCDataset ds = load_cc(data_path);
      std::optional<InequalitySet> set;
      if (statistic == "pv_cc" || statistic == "pv-cc") set = load_set(ineq_dir_or_default(ineq_dir), 3, manifest);
      const ResampleResult r = poisson_resample(ds, statistic, trials, seed, set ? &*set : nullptr, workers);
      json j;
      j["statistic"] = statistic;
      j["mean"] = r.mean;
      j["std"] = r.std;
      j["trials"] = r.trials;
      emit(out, with_manifest(j, manifest), manifest);
    }
    return 0;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
