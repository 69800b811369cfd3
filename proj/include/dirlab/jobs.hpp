#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dirlab/norms.hpp"

namespace dirlab {

// Resolved estimator job. Every field that influences the computation is part
// of the cache key; the seed is always explicit (defaults are injected and
// echoed back in the record).
struct JobConfig {
  std::string command = "estimate"; // estimate|weak|unconditional|strip|eco|weissler|moin
  std::string input_path;

  std::string norm = "ell1";
  std::string norm2 = "csup"; // second tag for strip
  double p = 2.0;
  double p2 = 2.0;
  bool weak = false;

  std::string schedule = "dyadic:0"; // dyadic:<kmax>, 0 = up to n_max
  std::uint64_t seed = 1;
  std::string out_dir = "dirlab_out";
  double recenter = 0.0;

  std::uint32_t mc_samples = 4096;
  std::uint32_t dual_samples = 16;
  std::uint32_t grid_points = 256;
  double t_span = 32.0;
  std::uint32_t refine_steps = 2;
  std::uint32_t torus_samples = 4;

  bool exponent_mode = false; // strip: fit the polynomial-comparison exponent
  std::string strategy = "random";
  int trials = 16;

  std::string space = "l2:64"; // eco coefficient model, "l<q>" or "l<q>:<dim>"
  std::uint32_t blocks = 3;
  double mass_target = 1.0;
  std::uint64_t prime_budget = 10000;

  double wp = 2.0, wq = 4.0;
  double radius = 0.7071067811865476; // sqrt(1/2)
  std::uint64_t moin_n = 16;
  int search_iters = 4;

  std::optional<double> target; // declared paper target for report

  nlohmann::json resolved() const;
  SamplerSet samplers() const;
};

struct RunResult {
  nlohmann::json record;
  std::string record_path;
  std::string csv_path;
  bool cache_hit = false;
};

// Dispatches to the library, writes the ResultRecord JSON, the per-N CSV and
// the plot-data file under out_dir, and caches on the content hash of
// (input bytes + resolved config).
RunResult run_job(const JobConfig& cfg);

struct ReportOptions {
  std::vector<std::string> record_paths;
  bool check = false;
  double tol = 0.1;
  std::string out_dir = "dirlab_out";
};

struct ReportResult {
  std::string table;    // human-readable summary
  std::string csv_path; // merged CSV
  bool check_failed = false;
};

ReportResult run_report(const ReportOptions& opts);

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ull);

} // namespace dirlab
