#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "grfhomog/curvature.hpp"
#include "grfhomog/errors.hpp"
#include "grfhomog/json_io.hpp"
#include "grfhomog/verify.hpp"

namespace {

using namespace grfhomog;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericalFailure = 3;

int env_threads() {
  const char* raw = std::getenv("GRF_HOMOG_THREADS");
  if (!raw) return 0;
  const int value = std::atoi(raw);
  if (value <= 0) throw ConfigError("GRF_HOMOG_THREADS must be a positive integer");
  return value;
}

std::vector<double> parse_csv_numbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("not a number in list: " + item);
    }
  }
  return out;
}

void emit(const std::string& path, const std::string& contents) {
  if (path.empty())
    std::cout << contents;
  else
    write_file(path, contents);
}

// Replaces the command line with the entries of a JSON config document:
// {"command": "flow", "space": "mpq", "p": 2, ...}. Flags given on the real
// command line after --config win (they are appended last).
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  std::vector<std::string> rest;
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw ConfigError("--config needs a path");
      config_path = args[++i];
    } else {
      rest.push_back(args[i]);
    }
  }
  if (config_path.empty()) return rest;

  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(read_file(config_path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config parse failure: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config document must be a JSON object");
  if (!doc.contains("command")) throw ConfigError("config document needs \"command\"");
  out.push_back(doc.at("command").get<std::string>());
  for (const auto& [key, value] : doc.items()) {
    if (key == "command") continue;
    out.push_back("--" + key);
    if (value.is_boolean()) {
      if (!value.get<bool>()) out.pop_back();
    } else if (value.is_string()) {
      out.push_back(value.get<std::string>());
    } else {
      out.push_back(value.dump());
    }
  }
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

struct SpaceOptions {
  std::string space = "mpq";
  int p = 2;
  int q = 1;
  int n = 4;
};

void add_space_options(CLI::App* cmd, SpaceOptions& opts) {
  cmd->add_option("--space", opts.space, "space selector: mpq | group:su2 | torus");
  cmd->add_option("--p", opts.p, "first winding number (mpq)");
  cmd->add_option("--q", opts.q, "second winding number (mpq)");
  cmd->add_option("--n", opts.n, "torus dimension");
}

int run_verify(const SpaceOptions& opts) {
  std::vector<CheckResult> results;
  std::string tables;
  if (opts.space == "mpq") {
    const MpqSpace m = mpq(opts.p, opts.q);
    results = verify_mpq(opts.p, opts.q);
    tables = mpq_table_report(m);
  } else if (opts.space == "group:su2") {
    results = verify_group_su2();
  } else if (opts.space == "torus") {
    results = verify_torus(opts.n);
  } else {
    throw ConfigError("unknown space selector: " + opts.space);
  }
  std::cout << verify_text_report(results);
  if (!tables.empty()) std::cout << tables;
  return all_pass(results) ? kExitPass : kExitCheckFailure;
}

int run_brf(const SpaceOptions& opts, const std::string& init_json, double tol,
            int multistart, std::uint64_t seed, const std::string& out_path) {
  if (opts.space != "mpq") throw ConfigError("brf supports --space mpq");
  const MpqSpace m = mpq(opts.p, opts.q);
  const Chart chart = m.brf_chart();

  SolveOptions options;
  options.tol = tol;

  if (multistart > 0) {
    const auto reports = solve_multistart(chart, multistart, seed, options, env_threads());
    emit(out_path, multistart_report_json(reports, chart));
    for (const auto& r : reports)
      if (r.converged) return kExitPass;
    return kExitNumericalFailure;
  }

  Vec initial;
  if (init_json.empty()) {
    initial = opts.p == opts.q ? (Vec(5) << 3.0, 1.1, 0.9, 0.05, 1.8).finished()
                               : (Vec(4) << 1.0, 1.0, 1.0, 1.0).finished();
  } else {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(init_json);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("--init parse failure: ") + e.what());
    }
    if (!doc.is_array() || static_cast<int>(doc.size()) != chart.dim())
      throw ConfigError("--init must be a JSON array of length " +
                        std::to_string(chart.dim()));
    initial = Vec(chart.dim());
    for (int i = 0; i < chart.dim(); ++i) initial[i] = parse_fraction(doc.at(i));
  }
  if (!chart.domain_check(initial)) throw ConfigError("--init is outside the chart domain");

  const SolveReport report = solve(chart, initial, options);
  emit(out_path, solve_report_json(report, chart));
  return report.converged ? kExitPass : kExitNumericalFailure;
}

int run_flow(const SpaceOptions& opts, double lambda, const std::string& init_csv,
             double t_max, int samples, const std::string& out_path) {
  if (opts.space != "mpq") throw ConfigError("flow supports --space mpq");
  if (lambda <= 0) throw ConfigError("--lambda must be positive");
  if (t_max <= 0) throw ConfigError("--tmax must be positive");
  if (samples < 1) throw ConfigError("--samples must be at least 1");
  const MpqSpace m = mpq(opts.p, opts.q);
  const FlowChart chart = m.flow_chart();
  const FlowProblem problem{chart, m.harmonic_h(lambda)};

  FlowState initial;
  initial.t = 0.0;
  initial.metric_params = Vec::Zero(chart.metric_dim());
  initial.b_params = Vec::Zero(chart.b_dim());
  const std::vector<double> init = parse_csv_numbers(init_csv);
  if (static_cast<int>(init.size()) != chart.metric_dim() &&
      static_cast<int>(init.size()) != 3)
    throw ConfigError("--init needs " + std::to_string(chart.metric_dim()) +
                      " (or 3 diagonal) metric parameters");
  for (std::size_t i = 0; i < init.size(); ++i) initial.metric_params[i] = init[i];
  if (!chart.metric_in_domain(initial.metric_params))
    throw ConfigError("--init metric is not positive definite");

  IntegrateOptions options;
  options.sample_times.reserve(samples);
  for (int i = 1; i <= samples; ++i)
    options.sample_times.push_back(t_max * i / samples);

  const FlowTrajectory trajectory = integrate(problem, initial, t_max, options);

  std::ostringstream csv;
  const bool emit_b = opts.p == opts.q;
  csv << "t,M,A,B";
  if (emit_b) {
    csv << ",C,S";
    for (int i = 0; i < chart.b_dim(); ++i) {
      static const char* kNames[] = {"b23", "b45", "b24p35", "b25m34"};
      csv << "," << kNames[i];
    }
  }
  csv << ",residual_norm,scal,normH2\n";
  for (const auto& sample : trajectory.samples) {
    csv << fmt_double(sample.state.t);
    for (int i = 0; i < chart.metric_dim(); ++i)
      csv << "," << fmt_double(sample.state.metric_params[i]);
    if (emit_b)
      for (int i = 0; i < chart.b_dim(); ++i)
        csv << "," << fmt_double(sample.state.b_params[i]);
    csv << "," << fmt_double(sample.residual_norm) << "," << fmt_double(sample.scal)
        << "," << fmt_double(sample.norm_h2) << "\n";
  }
  emit(out_path, csv.str());

  if (trajectory.status == FlowStatus::step_underflow ||
      trajectory.status == FlowStatus::domain_exit) {
    const double t_last = trajectory.samples.back().state.t;
    std::cerr << "flow stopped at t=" << t_last << ": "
              << (trajectory.status == FlowStatus::domain_exit
                      ? "metric reached the boundary of the positive-definite cone"
                      : "step size underflow")
              << "; trajectory up to that point written\n";
    return kExitNumericalFailure;
  }
  return kExitPass;
}

int run_stability(const SpaceOptions& opts, double lambda, const std::string& out_path) {
  if (opts.space != "mpq") throw ConfigError("stability supports --space mpq");
  if (lambda <= 0) throw ConfigError("--lambda must be positive");
  const MpqSpace m = mpq(opts.p, opts.q);
  const Eigen::Vector3d fp = fixed_point_mpq(opts.p, opts.q, lambda);
  const int p = opts.p, q = opts.q;
  const JacobianReport report = jacobian_eigen(
      [p, q, lambda](const Vec& y) {
        return Vec(mpq_ode_rhs(y[0], y[1], y[2], p, q, lambda));
      },
      Vec(fp));
  emit(out_path, stability_json(report, fp, p, q, lambda));
  return kExitPass;
}

int run_kobayashi(const std::string& data_path, const std::string& out_path) {
  if (data_path.empty()) throw ConfigError("kobayashi needs --data <file.json>");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(data_path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("data parse failure: ") + e.what());
  }
  const KobayashiReport report = kobayashi_check(kobayashi_data_from_json(doc));
  emit(out_path, kobayashi_report_json(report));
  return report.ok ? kExitPass : kExitCheckFailure;
}

int run_catalog(const std::string& sub, const SpaceOptions& opts,
                const std::string& dump_path) {
  if (sub == "list") {
    std::cout << "mpq --p P --q Q   (SU(2)^2/K_{p,q}; coprime, P >= Q >= 1)\n"
              << "group:su2         (flat bi-invariant model)\n"
              << "group:su2xsu2     (flat bi-invariant product model)\n"
              << "torus --n N       (abelian baseline)\n";
    return kExitPass;
  }
  if (sub == "mpq") {
    const MpqSpace m = mpq(opts.p, opts.q);
    emit(dump_path, catalog_space_json(m));
    return kExitPass;
  }
  throw ConfigError("unknown catalog subcommand: " + sub);
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = expand_config(args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  CLI::App app{"invariant Bismut geometry, BRF solving and generalized Ricci flow"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  SpaceOptions space_opts;

  auto* verify_cmd = app.add_subcommand("verify", "run the reproduction checks");
  add_space_options(verify_cmd, space_opts);

  auto* brf_cmd = app.add_subcommand("brf", "solve the Bismut-Ricci-flat equations");
  add_space_options(brf_cmd, space_opts);
  std::string init_json;
  double tol = 1e-12;
  int multistart = 0;
  std::uint64_t seed = 0;
  std::string out_path;
  brf_cmd->add_option("--init", init_json, "initial parameters as a JSON array");
  brf_cmd->add_option("--tol", tol, "residual norm tolerance");
  brf_cmd->add_option("--multistart", multistart, "number of random starts");
  brf_cmd->add_option("--seed", seed, "RNG seed for multistart");
  brf_cmd->add_option("--out", out_path, "output JSON path (stdout when absent)");

  auto* flow_cmd = app.add_subcommand("flow", "integrate the generalized Ricci flow");
  add_space_options(flow_cmd, space_opts);
  double lambda = 1.0, t_max = 200.0;
  int samples = 400;
  std::string init_csv = "1,0.3,2";
  std::string flow_out;
  flow_cmd->add_option("--lambda", lambda, "torsion scale of H_0");
  flow_cmd->add_option("--init", init_csv, "initial metric parameters M,A,B[,C,S]");
  flow_cmd->add_option("--tmax", t_max, "integration horizon");
  flow_cmd->add_option("--samples", samples, "number of equispaced sample times");
  flow_cmd->add_option("--out", flow_out, "output CSV path (stdout when absent)");

  auto* stability_cmd = app.add_subcommand("stability", "linearize at the flow fixed point");
  add_space_options(stability_cmd, space_opts);
  double stab_lambda = 1.0;
  std::string stab_out;
  stability_cmd->add_option("--lambda", stab_lambda, "torsion scale");
  stability_cmd->add_option("--out", stab_out, "output JSON path (stdout when absent)");

  auto* kob_cmd = app.add_subcommand("kobayashi", "check the circle-bundle conditions");
  std::string data_path, kob_out;
  kob_cmd->add_option("--data", data_path, "KobayashiData JSON file");
  kob_cmd->add_option("--out", kob_out, "output JSON path (stdout when absent)");

  auto* catalog_cmd = app.add_subcommand("catalog", "list or dump model spaces");
  auto* catalog_list = catalog_cmd->add_subcommand("list", "list available spaces");
  auto* catalog_mpq = catalog_cmd->add_subcommand("mpq", "dump an M_{p,q} space");
  SpaceOptions catalog_opts;
  std::string dump_path;
  catalog_mpq->add_option("--p", catalog_opts.p, "first winding number");
  catalog_mpq->add_option("--q", catalog_opts.q, "second winding number");
  catalog_mpq->add_option("--dump", dump_path, "output JSON path (stdout when absent)");
  catalog_cmd->require_subcommand(1);

  std::vector<const char*> argv2;
  argv2.push_back(argc > 0 ? argv[0] : "grf-homog");
  for (const auto& a : args) argv2.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv2.size()), argv2.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitPass : kExitConfigError;
  }

  try {
    if (verify_cmd->parsed()) return run_verify(space_opts);
    if (brf_cmd->parsed())
      return run_brf(space_opts, init_json, tol, multistart, seed, out_path);
    if (flow_cmd->parsed())
      return run_flow(space_opts, lambda, init_csv, t_max, samples, flow_out);
    if (stability_cmd->parsed()) return run_stability(space_opts, stab_lambda, stab_out);
    if (kob_cmd->parsed()) return run_kobayashi(data_path, kob_out);
    if (catalog_cmd->parsed())
      return run_catalog(catalog_list->parsed() ? "list" : "mpq", catalog_opts, dump_path);
  } catch (const ChartDegenerate& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  } catch (const SingularMetric& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitConfigError;
}
