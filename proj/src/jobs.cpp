#include "dirlab/jobs.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dirlab/abscissa.hpp"
#include "dirlab/contraction.hpp"
#include "dirlab/extremal.hpp"
#include "dirlab/series_io.hpp"

namespace dirlab {

namespace fs = std::filesystem;
using nlohmann::json;

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h) {
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

// JSON cannot hold infinities; the +/-inf sentinels travel as strings
json json_real(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string iso_utc_now() {
  std::time_t t;
  if (const char* e = std::getenv("SOURCE_DATE_EPOCH"); e && *e)
    t = static_cast<std::time_t>(std::strtoll(e, nullptr, 10));
  else
    t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void atomic_write(const fs::path& path, const std::string& bytes) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << bytes;
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

CoefficientSpaceSpec parse_space(const std::string& s, std::uint32_t auto_dim) {
  if (s == "scalar") return CoefficientSpaceSpec::scalar_space();
  if (s.empty() || s[0] != 'l')
    throw std::domain_error("space must be \"scalar\" or \"l<q>[:dim]\"");
  std::string body = s.substr(1);
  std::uint32_t dim = auto_dim;
  if (const auto colon = body.find(':'); colon != std::string::npos) {
    dim = static_cast<std::uint32_t>(std::stoul(body.substr(colon + 1)));
    body = body.substr(0, colon);
  }
  const double q = body == "inf" ? kInf : std::stod(body);
  return CoefficientSpaceSpec::lq(std::max<std::uint32_t>(dim, 1), q);
}

std::uint32_t parse_schedule_kmax(const std::string& s) {
  if (s == "dyadic") return 0;
  if (s.rfind("dyadic:", 0) == 0) return static_cast<std::uint32_t>(std::stoul(s.substr(7)));
  throw std::domain_error("schedule must be dyadic or dyadic:<kmax>");
}

json estimate_json(const AbscissaEstimate& e) {
  json j;
  j["value"] = json_real(e.value);
  j["method"] = method_name(e.method);
  j["fit_residual"] = e.fit_residual;
  j["schedule"] = e.schedule;
  json diag = json::object();
  for (const auto& [k, v] : e.diagnostics) diag[k] = json_real(v);
  j["diagnostics"] = std::move(diag);
  return j;
}

void append_table(json& table, const std::vector<SchedulePoint>& pts,
                  const std::string& tag) {
  for (const auto& pt : pts) {
    json row;
    row["N"] = pt.N;
    row["norm"] = json_real(pt.norm);
    row["log_ratio"] = json_real(pt.log_ratio);
    row["tag"] = tag;
    table.push_back(std::move(row));
  }
}

std::string table_csv(const json& table, std::uint64_t seed) {
  std::string csv = "N,norm,log_norm_over_log_N,tag,seed\n";
  for (const auto& row : table) {
    csv += std::to_string(row.at("N").get<std::uint64_t>());
    csv += ',';
    const auto cell = [&](const json& v) {
      return v.is_string() ? v.get<std::string>() : fmt_double(v.get<double>());
    };
    csv += cell(row.at("norm"));
    csv += ',';
    csv += cell(row.at("log_ratio"));
    csv += ',';
    csv += row.at("tag").get<std::string>();
    csv += ',';
    csv += std::to_string(seed);
    csv += '\n';
  }
  return csv;
}

} // namespace

json JobConfig::resolved() const {
  json j;
  j["command"] = command;
  j["input_path"] = input_path;
  j["norm"] = norm;
  j["norm2"] = norm2;
  j["p"] = p;
  j["p2"] = p2;
  j["weak"] = weak;
  j["schedule"] = schedule;
  j["seed"] = seed;
  j["recenter"] = recenter;
  j["mc_samples"] = mc_samples;
  j["dual_samples"] = dual_samples;
  j["grid_points"] = grid_points;
  j["t_span"] = t_span;
  j["refine_steps"] = refine_steps;
  j["torus_samples"] = torus_samples;
  j["exponent_mode"] = exponent_mode;
  j["strategy"] = strategy;
  j["trials"] = trials;
  j["space"] = space;
  j["blocks"] = blocks;
  j["mass_target"] = mass_target;
  j["prime_budget"] = prime_budget;
  j["wp"] = wp;
  j["wq"] = wq;
  j["radius"] = radius;
  j["moin_n"] = moin_n;
  j["search_iters"] = search_iters;
  if (target) j["target"] = *target;
  return j;
}

SamplerSet JobConfig::samplers() const {
  SamplerSet s = SamplerSet::seeded(seed);
  s.hp.mc_samples = mc_samples;
  s.dinf.grid_points = grid_points;
  s.dinf.t_span = t_span;
  s.dinf.refine_steps = refine_steps;
  s.dinf.torus_samples = torus_samples;
  s.dual_samples = dual_samples;
  return s;
}

RunResult run_job(const JobConfig& cfg) {
  const json resolved = cfg.resolved();

  std::string input_bytes;
  std::optional<DirichletTruncation> series;
  const bool needs_input = cfg.command == "estimate" || cfg.command == "weak" ||
                           cfg.command == "unconditional" || cfg.command == "strip";
  if (needs_input) {
    if (cfg.input_path.empty())
      throw ParseError(0, "command " + cfg.command + " needs an input file");
    input_bytes = read_file(cfg.input_path);
    series = parse_series_jsonl(input_bytes);
  }

  const std::string hash = hash_hex(fnv1a64(resolved.dump() + "\n" + input_bytes));
  const fs::path out_dir(cfg.out_dir);
  fs::create_directories(out_dir);
  const std::string stem = cfg.command + "-" + hash.substr(0, 12);
  const fs::path record_path = out_dir / (stem + ".json");
  const fs::path csv_path = out_dir / (stem + ".csv");
  const fs::path plot_path = out_dir / (stem + ".plot.csv");

  // cache: identical (input, config) reproduces the record bit for bit
  if (fs::exists(record_path)) {
    json cached = json::parse(read_file(record_path));
    if (cached.value("content_hash", "") == hash) {
      const std::string csv = table_csv(cached.value("table", json::array()), cfg.seed);
      atomic_write(csv_path, csv);
      atomic_write(plot_path, csv);
      return {std::move(cached), record_path.string(), csv_path.string(), true};
    }
  }

  json record;
  record["command"] = cfg.command;
  record["config"] = resolved;
  record["content_hash"] = hash;
  json table = json::array();

  const SamplerSet samplers = cfg.samplers();
  EstimatorParams params;
  params.samplers = samplers;
  params.recenter_sigma = cfg.recenter;

  if (needs_input) {
    const std::uint64_t n_max = series->n_max();
    const PrimeTable primes(std::max<std::uint64_t>(n_max + 1, 1024));
    const auto schedule = dyadic_schedule(n_max, parse_schedule_kmax(cfg.schedule));
    const NormTag tag = NormTag::parse(cfg.norm, cfg.p, cfg.weak);

    if (cfg.command == "estimate") {
      const AbscissaEstimate est = bohr_cahen(*series, tag, schedule, params, primes);
      record["estimates"]["abscissa"] = estimate_json(est);
      record["headline"] = {{"name", "sigma_" + tag.name()}, {"value", json_real(est.value)}};
      append_table(table, est.table, tag.name());
    } else if (cfg.command == "weak") {
      const AbscissaEstimate est = weak_abscissa(*series, tag, cfg.dual_samples,
                                                 samplers.weak_seed, schedule, params, primes);
      record["estimates"]["weak_abscissa"] = estimate_json(est);
      record["headline"] = {{"name", "sigma_weak_" + tag.name()},
                            {"value", json_real(est.value)}};
      append_table(table, est.table, "weak-" + tag.name());
    } else if (cfg.command == "unconditional") {
      const SignStrategy strat = cfg.strategy == "exhaustive" ? SignStrategy::exhaustive
                                                              : SignStrategy::random;
      const AbscissaEstimate est = unconditional_abscissa(*series, strat, cfg.trials,
                                                          cfg.seed, schedule, params, primes);
      record["estimates"]["unconditional"] = estimate_json(est);
      record["headline"] = {{"name", "sigma_unc"}, {"value", json_real(est.value)}};
      append_table(table, est.table, "sign-csup");
    } else { // strip
      const NormTag tag2 = NormTag::parse(cfg.norm2, cfg.p2, false);
      if (cfg.exponent_mode) {
        const StripExponentReport rep =
            strip_exponent(tag, tag2, schedule, cfg.trials, cfg.seed, params, primes);
        record["estimates"]["strip_exponent"] = {{"exponent", rep.exponent},
                                                 {"fit_residual", rep.fit_residual},
                                                 {"assumption", rep.assumption}};
        record["headline"] = {{"name", "strip_exponent"}, {"value", json_real(rep.exponent)}};
        append_table(table, rep.table, tag.name() + "/" + tag2.name());
      } else {
        const StripReport rep = strip_report(*series, tag, tag2, schedule, params, primes);
        record["estimates"]["first"] = estimate_json(rep.first);
        record["estimates"]["second"] = estimate_json(rep.second);
        record["estimates"]["width"] = json_real(rep.width);
        record["headline"] = {{"name", "strip_width"}, {"value", json_real(rep.width)}};
        append_table(table, rep.first.table, tag.name());
        append_table(table, rep.second.table, tag2.name());
      }
    }
  } else if (cfg.command == "eco") {
    const PrimeTable primes(std::max<std::uint64_t>(cfg.prime_budget + 1, 1024));
    const double cot = cotype_of(parse_space(cfg.space, 1));
    const auto qs = default_q_schedule(cot, cfg.blocks);
    const BlockPlan plan = build_blocks(qs, cfg.prime_budget, cfg.mass_target, primes);
    std::size_t total = 0;
    for (const auto& b : plan.blocks) total += b.size();
    const CoefficientSpaceSpec space =
        parse_space(cfg.space, static_cast<std::uint32_t>(total));
    const DirichletTruncation D = build_eco(space, plan, primes);
    const GapReport rep =
        verify_gap(D, space, plan, cfg.trials, cfg.seed, params, primes);

    atomic_write(out_dir / (stem + ".plan.json"), plan.to_json());
    record["estimates"]["sigma_a"] = estimate_json(rep.sigma_a_est);
    record["estimates"]["sigma_unc"] = estimate_json(rep.sigma_unc_est);
    record["estimates"]["predicted_gap"] = rep.predicted_gap;
    record["estimates"]["mass_target_used"] = rep.mass_target_used;
    record["estimates"]["space"] = rep.space_name;
    record["headline"] = {{"name", "gap_sigma_a_minus_sigma_unc"},
                          {"value", json_real(rep.sigma_a_est.value -
                                              rep.sigma_unc_est.value)}};
    if (!cfg.target) record["target"] = rep.predicted_gap;
    append_table(table, rep.sigma_a_est.table, "ell1");
    append_table(table, rep.sigma_unc_est.table, "sign-csup");
  } else if (cfg.command == "weissler") {
    const WeisslerReport rep =
        weissler_check(cfg.wp, cfg.wq, cfg.radius, cfg.trials, cfg.mc_samples, cfg.seed);
    json w;
    w["max_ratio"] = rep.max_ratio;
    w["max_ratio_se"] = rep.max_ratio_se;
    w["violation"] = rep.violation;
    w["witness_ratio"] = rep.witness_ratio;
    json wit = json::array();
    for (const cplx& c : rep.witness) wit.push_back({c.real(), c.imag()});
    w["witness"] = std::move(wit);
    w["samples"] = cfg.mc_samples;
    record["estimates"]["weissler"] = std::move(w);
    record["headline"] = {{"name", "weissler_max_ratio"}, {"value", rep.max_ratio}};
  } else if (cfg.command == "moin") {
    const PrimeTable primes(std::max<std::uint64_t>(cfg.moin_n + 1, 1024));
    const MoinResult res = moin_lower_bound(cfg.wp, cfg.wq, cfg.moin_n, cfg.search_iters,
                                            cfg.seed, cfg.mc_samples, primes);
    json m;
    m["best_ratio"] = res.best_ratio;
    m["best_ratio_se"] = res.best_ratio_se;
    m["samples"] = cfg.mc_samples;
    json growth = json::array();
    for (const auto& [N, ratio] : res.growth) {
      growth.push_back({{"N", N}, {"ratio", ratio}});
      table.push_back({{"N", N},
                       {"norm", ratio},
                       {"log_ratio", std::log(ratio) / std::log(double(N))},
                       {"tag", "moin"}});
    }
    m["growth"] = std::move(growth);
    record["estimates"]["moin"] = std::move(m);
    record["headline"] = {{"name", "moin_lower_bound"}, {"value", res.best_ratio}};
  } else {
    throw std::domain_error("unknown command: " + cfg.command);
  }

  if (cfg.target) record["target"] = *cfg.target;
  record["table"] = std::move(table);
  record["timestamps"] = {{"created_utc", iso_utc_now()}};

  const std::string csv = table_csv(record["table"], cfg.seed);
  atomic_write(record_path, record.dump(2) + "\n");
  atomic_write(csv_path, csv);
  atomic_write(plot_path, csv);
  return {std::move(record), record_path.string(), csv_path.string(), false};
}

ReportResult run_report(const ReportOptions& opts) {
  if (opts.record_paths.empty()) throw std::domain_error("report: no records given");

  ReportResult res;
  std::string csv = "record,command,headline,value,target,deviation\n";
  std::ostringstream tab;
  tab << "record                        command        headline                      "
         "value      target     deviation\n";

  for (const auto& path : opts.record_paths) {
    json rec;
    try {
      rec = json::parse(read_file(path));
    } catch (const std::exception& e) {
      throw std::runtime_error("report: cannot parse " + path + ": " + e.what());
    }
    if (!rec.contains("command") || !rec.contains("headline") ||
        !rec["headline"].contains("value"))
      throw std::runtime_error("report: record " + path +
                               " does not follow the ResultRecord schema");

    const std::string cmd = rec["command"].get<std::string>();
    const std::string name = rec["headline"].value("name", "");
    const json& v = rec["headline"]["value"];
    const double value = v.is_string() ? (v == "inf"    ? kInf
                                          : v == "-inf" ? -kInf
                                                        : std::nan(""))
                                       : v.get<double>();
    std::string tgt = "-", dev = "-";
    bool failed = false;
    if (rec.contains("target")) {
      const double target = rec["target"].get<double>();
      tgt = fmt_double(target);
      const double d = std::abs(value - target);
      dev = fmt_double(d);
      if (opts.check && !(d <= opts.tol)) failed = true;
    }
    const std::string base = fs::path(path).filename().string();
    csv += base + "," + cmd + "," + name + "," + fmt_double(value) + "," + tgt + "," +
           dev + "\n";
    char line[256];
    std::snprintf(line, sizeof line, "%-29s %-14s %-29s %-10.4g %-10s %-10s%s\n",
                  base.c_str(), cmd.c_str(), name.c_str(), value, tgt.c_str(), dev.c_str(),
                  failed ? "  [CHECK FAILED]" : "");
    tab << line;
    res.check_failed |= failed;
  }

  fs::create_directories(opts.out_dir);
  const fs::path csv_path = fs::path(opts.out_dir) / "report.csv";
  atomic_write(csv_path, csv);
  res.csv_path = csv_path.string();
  res.table = tab.str();
  return res;
}

} // namespace dirlab
