#include "ccm/pipeline.hpp"

#include <nlohmann/json.hpp>
#include <sstream>

#include "ccm/elevate.hpp"
#include "ccm/json_io.hpp"
#include "ccm/model.hpp"

namespace ccm {

using nlohmann::json;

std::vector<uint64_t> parse_seed_list(const std::string& text) {
  std::vector<uint64_t> seeds;
  if (text.empty()) return seeds;
  const auto range = text.find("..");
  try {
    if (range != std::string::npos) {
      const uint64_t lo = std::stoull(text.substr(0, range));
      const uint64_t hi = std::stoull(text.substr(range + 2));
      if (hi < lo) fail(ErrorCode::kBadInput, "seed range is empty");
      for (uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
      return seeds;
    }
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) seeds.push_back(std::stoull(item));
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(ErrorCode::kBadInput, "bad seed list '" + text + "'");
  }
  return seeds;
}

std::vector<double> parse_noise_list(const std::string& text) {
  std::vector<double> noise;
  if (text.empty()) return noise;
  std::istringstream is(text);
  std::string item;
  try {
    while (std::getline(is, item, ',')) noise.push_back(std::stod(item));
  } catch (const std::exception&) {
    fail(ErrorCode::kBadInput, "bad noise list '" + text + "'");
  }
  return noise;
}

std::vector<int> default_demands(const NetworkConfig& config) {
  std::vector<int> demands(config.K);
  for (int k = 1; k <= config.K; ++k) demands[k - 1] = (k - 1) % config.N + 1;
  return demands;
}

RunSpec parse_run_spec(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::kBadInput, std::string("config file is not valid JSON: ") + e.what());
  }
  RunSpec spec;
  try {
    spec.K = j.at("K").get<long long>();
    spec.L = j.at("L").get<long long>();
    spec.N = j.at("N").get<long long>();
    spec.M = rational_from_json(j.at("M"));
    spec.F = j.value("F", 0LL);
    const json& g = j.at("G");
    if (g.is_array()) {
      spec.g_values = g.get<std::vector<int>>();
    } else {
      spec.g_values = {g.get<int>()};
    }
    spec.baseline = j.value("baseline", std::string("cyclic"));
    if (j.contains("demands")) spec.demands = j.at("demands").get<std::vector<int>>();
    if (j.contains("seeds")) {
      if (j.at("seeds").is_string()) {
        spec.seeds = parse_seed_list(j.at("seeds").get<std::string>());
      } else {
        spec.seeds = j.at("seeds").get<std::vector<uint64_t>>();
      }
    }
    if (j.contains("noise")) spec.noise = j.at("noise").get<std::vector<double>>();
    spec.policy = combiner_policy_from_name(j.value("combiner_policy", std::string("identity")));
    spec.node_budget = j.value("search_node_budget", kDefaultNodeBudget);
  } catch (const json::exception& e) {
    fail(ErrorCode::kBadInput, std::string("config file missing/odd field: ") + e.what());
  }
  return spec;
}

RunSpec load_run_spec(const std::string& path) { return parse_run_spec(read_text_file(path)); }

PipelineScheme build_pipeline_scheme(const RunSpec& spec, int G) {
  PipelineScheme out;
  out.config = validate_config(spec.K, spec.L, G, spec.N, spec.M, spec.F);
  out.kind = baseline_kind_from_name(spec.baseline);
  const NetworkConfig virt = virtual_config(out.config);
  const std::vector<int> demands = spec.demands.empty() ? default_demands(virt) : spec.demands;

  if (out.kind == BaselineKind::kCyclic) {
    out.miso = cyclic_t1_scheduler(virt, demands, spec.node_budget);
  } else {
    out.miso = decouple(multiserver_bitlevel(virt, demands));
  }
  out.elevated = elevate_scheme(out.miso, G);

  VerifyOptions options;
  options.mode = default_mode(out.elevated);
  options.parallel = spec.parallel;
  out.report = check_scheme(out.elevated, options);
  return out;
}

std::vector<PipelineRow> run_pipeline(const RunSpec& spec) {
  std::vector<PipelineRow> rows;
  for (int G : spec.g_values) {
    PipelineScheme ps = build_pipeline_scheme(spec, G);
    PipelineRow base;
    base.config = ps.elevated.config;
    base.baseline = spec.baseline;
    base.flavor = ps.elevated.flavor;
    base.mode = ps.report.mode;
    base.verify_pass = ps.report.pass;
    base.transmissions = ps.report.transmissions;
    base.subpacketization = ps.report.subpacketization;
    base.predicted_subpacketization = predicted_subpacketization(ps.elevated.config, ps.kind);
    base.achieved_dof = ps.report.achieved_dof;
    base.predicted_dof = Rational(static_cast<long long>(ps.elevated.config.G) * ps.elevated.config.t +
                                  ps.elevated.config.L);

    const bool can_simulate = ps.report.pass && !ps.elevated.mac_mode;
    if (spec.seeds.empty() || !can_simulate) {
      rows.push_back(base);
      continue;
    }
    for (uint64_t seed : spec.seeds) {
      const ChannelRealization channel = sample_channels(ps.elevated.config, seed, spec.policy);
      SimulationOptions options;
      options.seed = seed;
      options.parallel = spec.parallel;
      options.noise_variance = 0.0;
      const SimulationReport noiseless = simulate(ps.elevated, channel, options);
      if (spec.noise.empty()) {
        PipelineRow row = base;
        row.seed = seed;
        row.max_noiseless_error = noiseless.max_error;
        rows.push_back(row);
        continue;
      }
      for (double variance : spec.noise) {
        options.noise_variance = variance;
        const SimulationReport run = variance == 0.0 ? noiseless : simulate(ps.elevated, channel, options);
        PipelineRow row = base;
        row.seed = seed;
        row.noise = variance;
        row.max_noiseless_error = noiseless.max_error;
        row.mse = run.mean_mse;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

namespace {

std::string rational_to_string(const Rational& value) {
  if (value.denominator() == 1) return std::to_string(value.numerator());
  return std::to_string(value.numerator()) + "/" + std::to_string(value.denominator());
}

std::string double_to_string(double value) {
  std::ostringstream os;
  os.precision(17);
  os << value;
  return os.str();
}

}  // namespace

std::string rows_to_csv(const std::vector<PipelineRow>& rows) {
  std::ostringstream os;
  os << "K,L,G,N,M,t,eta,baseline,flavor,mode,verify_pass,transmissions,subpacketization,"
        "predicted_subpacketization,achieved_dof,predicted_dof,seed,noise,max_noiseless_error,mse\n";
  for (const PipelineRow& row : rows) {
    os << row.config.K << ',' << row.config.L << ',' << row.config.G << ',' << row.config.N << ','
       << rational_to_string(row.config.M) << ',' << row.config.t << ',' << row.config.eta << ','
       << row.baseline << ',' << flavor_name(row.flavor) << ',' << verify_mode_name(row.mode) << ','
       << (row.verify_pass ? "true" : "false") << ',' << row.transmissions << ','
       << row.subpacketization << ',' << row.predicted_subpacketization << ','
       << rational_to_string(row.achieved_dof) << ',' << rational_to_string(row.predicted_dof) << ',';
    if (row.seed) os << *row.seed;
    os << ',';
    if (row.noise) os << double_to_string(*row.noise);
    os << ',';
    if (row.max_noiseless_error) os << double_to_string(*row.max_noiseless_error);
    os << ',';
    if (row.mse) os << double_to_string(*row.mse);
    os << '\n';
  }
  return os.str();
}

}  // namespace ccm
