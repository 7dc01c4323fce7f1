#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ccm/miso.hpp"
#include "ccm/phy.hpp"
#include "ccm/types.hpp"
#include "ccm/verify.hpp"

namespace ccm {

/// Parsed experiment description (the CLI config file).
struct RunSpec {
  long long K = 0, L = 0, N = 0, F = 0;
  Rational M;
  std::vector<int> g_values;  // "G" may be a scalar or a sweep list
  std::string baseline = "cyclic";
  std::vector<int> demands;         // empty -> user k requests file ((k-1) mod N) + 1
  std::vector<uint64_t> seeds;      // empty -> verification only
  std::vector<double> noise;        // noise variances
  CombinerPolicy policy = CombinerPolicy::kIdentity;
  long long node_budget = kDefaultNodeBudget;
  bool parallel = true;
};

RunSpec parse_run_spec(const std::string& text);
RunSpec load_run_spec(const std::string& path);

/// "0..49" or "0,3,17"
std::vector<uint64_t> parse_seed_list(const std::string& text);
std::vector<double> parse_noise_list(const std::string& text);

std::vector<int> default_demands(const NetworkConfig& config);

/// generate (virtual network) -> decouple if bit-level -> elevate -> verify.
struct PipelineScheme {
  NetworkConfig config;  // real network
  BaselineKind kind = BaselineKind::kCyclic;
  DeliveryScheme miso;     // virtual-network baseline (signal-level)
  DeliveryScheme elevated; // the MIMO scheme under test
  VerificationReport report;
};

PipelineScheme build_pipeline_scheme(const RunSpec& spec, int G);

/// One metrics row per (config, seed, noise); simulation columns are empty
/// for verification-only rows and for mac-mode schemes.
struct PipelineRow {
  NetworkConfig config;
  std::string baseline;
  Flavor flavor = Flavor::kMimoSignal;
  VerifyMode mode = VerifyMode::kStrict;
  bool verify_pass = false;
  int transmissions = 0;
  long long subpacketization = 0;
  long long predicted_subpacketization = 0;
  Rational achieved_dof;
  Rational predicted_dof;  // Gt + L
  std::optional<uint64_t> seed;
  std::optional<double> noise;
  std::optional<double> max_noiseless_error;
  std::optional<double> mse;
};

std::vector<PipelineRow> run_pipeline(const RunSpec& spec);

std::string rows_to_csv(const std::vector<PipelineRow>& rows);

}  // namespace ccm
