// Command-line driver: generate baseline schemes, elevate them to MIMO,
// verify, simulate, sweep, and check the built-in golden vectors.

#include <omp.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "ccm/elevate.hpp"
#include "ccm/json_io.hpp"
#include "ccm/miso.hpp"
#include "ccm/model.hpp"
#include "ccm/phy.hpp"
#include "ccm/pipeline.hpp"
#include "ccm/verify.hpp"

namespace {

using namespace ccm;

int exit_code_for(const Error& error) {
  switch (error.code()) {
    case ErrorCode::kUnsupportedT:
    case ErrorCode::kApplicability:
      return 3;
    case ErrorCode::kScheduleNotFound:
      return 4;
    default:
      return 2;
  }
}

std::vector<int> parse_demand_list(const std::string& text) {
  std::vector<int> demands;
  std::istringstream is(text);
  std::string item;
  try {
    while (std::getline(is, item, ',')) demands.push_back(std::stoi(item));
  } catch (const std::exception&) {
    fail(ErrorCode::kBadInput, "bad demand list '" + text + "'");
  }
  return demands;
}

DeliveryScheme generate_baseline(const RunSpec& spec) {
  if (spec.g_values.size() != 1) {
    fail(ErrorCode::kBadInput, "generate needs a single G value in the config");
  }
  const NetworkConfig real = validate_config(spec.K, spec.L, spec.g_values.front(), spec.N, spec.M, spec.F);
  const NetworkConfig virt = virtual_config(real);
  const std::vector<int> demands = spec.demands.empty() ? default_demands(virt) : spec.demands;
  if (spec.baseline == "cyclic") return cyclic_t1_scheduler(virt, demands, spec.node_budget);
  if (spec.baseline == "multiserver-bit") return multiserver_bitlevel(virt, demands);
  if (spec.baseline == "multiserver-signal") return decouple(multiserver_bitlevel(virt, demands));
  fail(ErrorCode::kBadInput,
       "unknown baseline '" + spec.baseline + "' (expected cyclic, multiserver-bit, multiserver-signal)");
}

int cmd_generate(const std::string& config_path, const std::string& baseline,
                 const std::string& demands, const std::string& out_path, long long budget) {
  RunSpec spec = load_run_spec(config_path);
  if (!baseline.empty()) spec.baseline = baseline;
  if (!demands.empty()) spec.demands = parse_demand_list(demands);
  if (budget > 0) spec.node_budget = budget;
  const DeliveryScheme scheme = generate_baseline(spec);
  save_scheme(scheme, out_path);
  std::cout << "wrote " << out_path << ": flavor=" << flavor_name(scheme.flavor)
            << " subpacketization=" << scheme.subpackets_per_file
            << " transmissions=" << scheme.transmissions.size() << "\n";
  return 0;
}

int cmd_elevate(const std::string& scheme_path, int G, const std::string& out_path) {
  const DeliveryScheme elevated = elevate_scheme(load_scheme(scheme_path), G);
  save_scheme(elevated, out_path);
  std::cout << "wrote " << out_path << ": subpacketization=" << elevated.subpackets_per_file
            << " transmissions=" << elevated.transmissions.size()
            << " mac_mode=" << (elevated.mac_mode ? "true" : "false") << "\n";
  return 0;
}

int cmd_verify(const std::string& scheme_path, const std::string& mode, const std::string& report_path,
               bool serial) {
  const DeliveryScheme scheme = load_scheme(scheme_path);
  VerifyOptions options;
  options.parallel = !serial;
  if (mode == "auto") {
    options.mode = default_mode(scheme);
  } else if (mode == "strict") {
    options.mode = VerifyMode::kStrict;
  } else if (mode == "mac") {
    options.mode = VerifyMode::kMac;
  } else {
    fail(ErrorCode::kBadInput, "mode must be strict, mac, or auto");
  }
  const VerificationReport report = check_scheme(scheme, options);
  if (!report_path.empty()) write_text_file(report_path, report.to_json_string());
  std::cout << (report.pass ? "PASS" : "FAIL") << " mode=" << verify_mode_name(report.mode)
            << " transmissions=" << report.transmissions
            << " subpacketization=" << report.subpacketization << " achieved_dof="
            << report.achieved_dof.numerator();
  if (report.achieved_dof.denominator() != 1) std::cout << "/" << report.achieved_dof.denominator();
  std::cout << " violations=" << report.violations.size() << "\n";
  for (size_t i = 0; i < report.violations.size() && i < 10; ++i) {
    const Violation& v = report.violations[i];
    std::cout << "  [tx " << v.transmission << "] " << v.rule << ": " << v.detail << "\n";
  }
  return report.pass ? 0 : 1;
}

int cmd_simulate(const std::string& scheme_path, const std::string& seeds_text,
                 const std::string& noise_text, const std::string& policy_name,
                 const std::string& out_path, const std::string& csv_path, bool no_cancel,
                 bool serial) {
  const DeliveryScheme scheme = load_scheme(scheme_path);
  const std::vector<uint64_t> seeds = parse_seed_list(seeds_text);
  const std::vector<double> noise = parse_noise_list(noise_text);
  const CombinerPolicy policy = combiner_policy_from_name(policy_name);
  if (seeds.empty()) fail(ErrorCode::kBadInput, "need at least one seed");
  if (noise.empty()) fail(ErrorCode::kBadInput, "need at least one noise variance");

  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  std::ostringstream csv;
  csv << "seed,noise,transmission,stream,error\n";
  double max_zf_residual = 0, max_noiseless_error = 0, max_gap = 0;
  bool have_noiseless = false;
  for (uint64_t seed : seeds) {
    const ChannelRealization channel = sample_channels(scheme.config, seed, policy);
    for (double variance : noise) {
      SimulationOptions options;
      options.seed = seed;
      options.noise_variance = variance;
      options.cache_cancellation = !no_cancel;
      options.parallel = !serial;
      const SimulationReport report = simulate(scheme, channel, options);
      max_zf_residual = std::max(max_zf_residual, report.max_zf_residual);
      max_gap = std::max(max_gap, report.max_cancellation_gap);
      if (variance == 0.0) {
        max_noiseless_error = std::max(max_noiseless_error, report.max_error);
        have_noiseless = true;
      }
      nlohmann::ordered_json run;
      run["seed"] = seed;
      run["noise"] = variance;
      run["max_error"] = report.max_error;
      run["mean_mse"] = report.mean_mse;
      run["predicted_mean_mse"] = report.predicted_mean_mse;
      runs.push_back(std::move(run));
      if (!csv_path.empty()) {
        for (const StreamRecord& r : report.records) {
          csv << seed << ',' << variance << ',' << r.transmission << ',' << r.stream.user << ':'
              << r.stream.stream << ',' << r.error << '\n';
        }
      }
    }
  }
  nlohmann::ordered_json j;
  j["scheme"] = scheme_path;
  j["combiner_policy"] = policy_name;
  j["cache_cancellation"] = !no_cancel;
  j["seeds"] = seeds;
  j["noise"] = noise;
  j["max_zf_residual"] = max_zf_residual;
  if (have_noiseless) j["max_noiseless_error"] = max_noiseless_error;
  j["max_cancellation_gap"] = max_gap;
  j["runs"] = std::move(runs);
  const std::string text = j.dump(1) + "\n";
  if (!out_path.empty()) write_text_file(out_path, text);
  if (!csv_path.empty()) write_text_file(csv_path, csv.str());
  std::cout << text;
  return 0;
}

int cmd_pipeline(const std::string& config_path, const std::string& out_path, bool serial) {
  RunSpec spec = load_run_spec(config_path);
  spec.parallel = !serial;
  const std::vector<PipelineRow> rows = run_pipeline(spec);
  const std::string csv = rows_to_csv(rows);
  if (!out_path.empty()) {
    write_text_file(out_path, csv);
    std::cout << "wrote " << out_path << " (" << rows.size() << " rows)\n";
  } else {
    std::cout << csv;
  }
  for (const PipelineRow& row : rows) {
    if (!row.verify_pass) return 1;
  }
  return 0;
}

struct GoldenCheck {
  std::string name;
  bool pass;
  std::string detail;
};

int cmd_golden(const std::string& data_dir) {
  std::vector<GoldenCheck> checks;
  auto expect = [&](const std::string& name, bool ok, const std::string& detail = "") {
    checks.push_back({name, ok, detail});
  };

  // Example 1: bit-level multiserver scheme and its decoupling.
  const NetworkConfig small = validate_config(3, 2, 1, 3, Rational(1));
  const DeliveryScheme bit = multiserver_bitlevel(small, {1, 2, 3});
  const auto bit_golden = decode_transmissions(read_text_file(data_dir + "/example1_bit.json"),
                                               Flavor::kMisoBit);
  expect("example1 bit-level transmission", bit.transmissions == bit_golden);
  expect("example1 subpacketization = 3", bit.subpackets_per_file == 3);

  const DeliveryScheme decoupled = decouple(bit);
  const auto signal_golden = decode_transmissions(read_text_file(data_dir + "/example1_signal.json"),
                                                  Flavor::kMisoSignal);
  expect("example1 decoupled 6-term transmission", decoupled.transmissions == signal_golden);

  // K=6 worked example: virtual schedule and its elevation.
  const NetworkConfig big = validate_config(6, 4, 2, 6, Rational(1));
  const DeliveryScheme virt = cyclic_t1_scheduler(virtual_config(big), {1, 2, 3, 4, 5, 6});
  std::string diff;
  const auto virt_golden = decode_transmissions(read_text_file(data_dir + "/k6_virtual.json"),
                                                Flavor::kMisoSignal);
  expect("K=6 virtual schedule contains x-hat(1), x-hat(2)",
         contains_fragments_up_to_q(virt, virt_golden, &diff), diff);

  const DeliveryScheme elevated = elevate_scheme(virt, 2);
  const auto mimo_golden = decode_transmissions(read_text_file(data_dir + "/k6_elevated.json"),
                                                Flavor::kMimoSignal);
  diff.clear();
  expect("K=6 elevated schedule contains x(1), x(2)",
         contains_fragments_up_to_q(elevated, mimo_golden, &diff), diff);
  expect("K=6 elevated subpacketization = 36", elevated.subpackets_per_file == 36);
  expect("K=6 elevated transmissions = 30", elevated.transmissions.size() == 30);

  // Headline DoF constants: 5 for pure MISO (G=1), 6 after elevation (G=2).
  const NetworkConfig miso_view = validate_config(6, 4, 1, 6, Rational(1));
  const DeliveryScheme pure_miso =
      elevate_scheme(cyclic_t1_scheduler(virtual_config(miso_view), {1, 2, 3, 4, 5, 6}), 1);
  expect("pure MISO DoF = 5", achieved_dof(pure_miso) == Rational(5));
  expect("elevated MIMO DoF = 6", achieved_dof(elevated) == Rational(6));

  bool all = true;
  for (const GoldenCheck& check : checks) {
    std::cout << (check.pass ? "[PASS] " : "[FAIL] ") << check.name;
    if (!check.pass && !check.detail.empty()) std::cout << " — " << check.detail;
    std::cout << "\n";
    all &= check.pass;
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("CCMIMO_THREADS")) {
    const int n = std::atoi(threads);
    if (n > 0) omp_set_num_threads(n);
  }

  CLI::App app{"coded caching delivery schemes for multi-antenna networks"};
  app.require_subcommand(1);

  std::string config_path, scheme_path, out_path, report_path, csv_path, data_dir;
  std::string baseline, demands, mode = "auto", seeds = "0", noise = "0", policy = "identity";
  long long budget = 0;
  int G = 1;
  bool serial = false, no_cancel = false;

  CLI::App* generate = app.add_subcommand("generate", "generate a baseline MISO scheme (virtual network)");
  generate->add_option("--config", config_path, "experiment config file")->required();
  generate->add_option("--baseline", baseline, "cyclic | multiserver-bit | multiserver-signal");
  generate->add_option("--demands", demands, "comma-separated file indices (one per user)");
  generate->add_option("--out", out_path, "output scheme file")->required();
  generate->add_option("--budget", budget, "scheduler node budget");

  CLI::App* elevate = app.add_subcommand("elevate", "stretch a MISO scheme into a MIMO scheme");
  elevate->add_option("--scheme", scheme_path, "input scheme file")->required();
  elevate->add_option("--G", G, "receiver spatial multiplexing gain")->required();
  elevate->add_option("--out", out_path, "output scheme file")->required();

  CLI::App* verify = app.add_subcommand("verify", "combinatorial decodability + completeness check");
  verify->add_option("--scheme", scheme_path, "scheme file")->required();
  verify->add_option("--mode", mode, "strict | mac | auto");
  verify->add_option("--report", report_path, "write the JSON report here");
  verify->add_flag("--serial", serial, "disable the OpenMP scan");

  CLI::App* simulate = app.add_subcommand("simulate", "link-level simulation of a MIMO scheme");
  simulate->add_option("--scheme", scheme_path, "scheme file")->required();
  simulate->add_option("--seeds", seeds, "seed list: 0..49 or 0,3,17");
  simulate->add_option("--noise", noise, "noise variance list, e.g. 0,1e-3");
  simulate->add_option("--policy", policy, "receive combiner policy: identity | svd");
  simulate->add_option("--out", out_path, "write the JSON report here");
  simulate->add_option("--csv", csv_path, "write per-stream errors as CSV");
  simulate->add_flag("--no-cancel", no_cancel, "ablation: disable cache-aided cancellation");
  simulate->add_flag("--serial", serial, "disable the OpenMP sweep");

  CLI::App* pipeline = app.add_subcommand("pipeline", "generate -> elevate -> verify -> simulate -> CSV");
  pipeline->add_option("--config", config_path, "experiment config file")->required();
  pipeline->add_option("--out", out_path, "metrics CSV path (stdout when omitted)");
  pipeline->add_flag("--serial", serial, "disable OpenMP");

  CLI::App* golden = app.add_subcommand("golden", "regenerate and compare the worked examples");
  golden->add_option("--data", data_dir, "golden fragment directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) return cmd_generate(config_path, baseline, demands, out_path, budget);
    if (elevate->parsed()) return cmd_elevate(scheme_path, G, out_path);
    if (verify->parsed()) return cmd_verify(scheme_path, mode, report_path, serial);
    if (simulate->parsed()) {
      return cmd_simulate(scheme_path, seeds, noise, policy, out_path, csv_path, no_cancel, serial);
    }
    if (pipeline->parsed()) return cmd_pipeline(config_path, out_path, serial);
    if (golden->parsed()) {
      return cmd_golden(data_dir.empty() ? std::string(CCM_DATA_DIR) + "/golden" : data_dir);
    }
  } catch (const Error& error) {
    std::cerr << "error: " << error.what() << "\n";
    return exit_code_for(error);
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 2;
  }
  return 2;
}
