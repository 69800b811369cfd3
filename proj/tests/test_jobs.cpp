#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "dirlab/jobs.hpp"
#include "dirlab/series_io.hpp"

using namespace dirlab;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("dirlab_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string write_zeta(const fs::path& dir, std::uint64_t n_max) {
  DirichletTruncation D(CoefficientSpaceSpec::scalar_space(), n_max);
  for (std::uint64_t n = 1; n <= n_max; ++n) D.set(n, Coefficient::scalar({1, 0}));
  const std::string path = (dir / "zeta.jsonl").string();
  write_series_jsonl(D, path);
  return path;
}

} // namespace

TEST_CASE("jsonl ingestion examples") {
  // header + three scalar records
  const std::string good =
      "{\"kind\":\"scalar\",\"n_max\":3}\n"
      "{\"n\":1,\"re\":[1.0],\"im\":[0.0]}\n"
      "{\"n\":2,\"re\":[-0.5],\"im\":[0.25]}\n"
      "{\"n\":3,\"re\":[0.0],\"im\":[1.0]}\n";
  const DirichletTruncation D = parse_series_jsonl(good);
  CHECK(D.space().is_scalar());
  CHECK(D.n_max() == 3);
  CHECK(D.support_size() == 3);
  CHECK(D.at(2).get(0) == cplx{-0.5, 0.25});

  // n beyond n_max is a data error with its line number
  const std::string past =
      "{\"kind\":\"scalar\",\"n_max\":3}\n"
      "{\"n\":4,\"re\":[1.0],\"im\":[0.0]}\n";
  CHECK_THROWS_AS(parse_series_jsonl(past), ParseError);
  try {
    parse_series_jsonl(past);
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }

  // vector record of wrong length fails at its line
  const std::string badlen =
      "{\"kind\":\"vector\",\"dim\":3,\"q\":2,\"n_max\":2}\n"
      "{\"n\":1,\"re\":[1.0,0.0,0.0],\"im\":[0.0,0.0,0.0]}\n"
      "{\"n\":2,\"re\":[1.0],\"im\":[0.0]}\n";
  try {
    parse_series_jsonl(badlen);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
  }

  // q = "inf" parses to the sup-norm model
  const std::string qinf =
      "{\"kind\":\"vector\",\"dim\":2,\"q\":\"inf\",\"n_max\":1}\n"
      "{\"n\":1,\"re\":[1.0,2.0],\"im\":[0.0,0.0]}\n";
  CHECK(std::isinf(parse_series_jsonl(qinf).space().q));

  // round trip through the writer
  TempDir tmp;
  DirichletTruncation V(CoefficientSpaceSpec::lq(2, 2.0), 4);
  V.set(2, Coefficient::basis(1, {0.5, -1}));
  const std::string path = (tmp.path / "v.jsonl").string();
  write_series_jsonl(V, path);
  const DirichletTruncation back = read_series_jsonl(path);
  CHECK(back.space() == V.space());
  CHECK(back.at(2) == V.at(2));
}

TEST_CASE("run_job writes a record, tables, and caches on rerun") {
  TempDir tmp;
  JobConfig cfg;
  cfg.command = "estimate";
  cfg.input_path = write_zeta(tmp.path, 256);
  cfg.norm = "ell1";
  cfg.seed = 5;
  cfg.out_dir = (tmp.path / "out").string();

  const RunResult first = run_job(cfg);
  CHECK(!first.cache_hit);
  CHECK(fs::exists(first.record_path));
  CHECK(fs::exists(first.csv_path));
  const double value = first.record["headline"]["value"].get<double>();
  CHECK(value == doctest::Approx(1.0).epsilon(0.03));
  CHECK(first.record["config"]["seed"] == 5); // seed echoed in the record

  const std::string record_bytes = slurp(first.record_path);
  const std::string csv_bytes = slurp(first.csv_path);
  CHECK(csv_bytes.rfind("N,norm,log_norm_over_log_N,tag,seed", 0) == 0);

  const RunResult again = run_job(cfg);
  CHECK(again.cache_hit);
  CHECK(slurp(again.record_path) == record_bytes);
  CHECK(slurp(again.csv_path) == csv_bytes);

  // a different seed is a different cache entry
  cfg.seed = 6;
  const RunResult other = run_job(cfg);
  CHECK(!other.cache_hit);
  CHECK(other.record_path != first.record_path);
}

TEST_CASE("eco job emits a block plan and a gap report") {
  TempDir tmp;
  JobConfig cfg;
  cfg.command = "eco";
  cfg.space = "l2";
  cfg.blocks = 2;
  cfg.mass_target = 0.8;
  cfg.prime_budget = 2000;
  cfg.trials = 2;
  cfg.out_dir = (tmp.path / "out").string();

  const RunResult res = run_job(cfg);
  CHECK(res.record["estimates"].contains("sigma_a"));
  CHECK(res.record["estimates"].contains("sigma_unc"));
  CHECK(res.record["estimates"]["predicted_gap"].get<double>() == doctest::Approx(0.5));
  CHECK(res.record["target"].get<double>() == doctest::Approx(0.5));

  bool plan_found = false;
  for (const auto& entry : fs::directory_iterator(cfg.out_dir))
    if (entry.path().string().find(".plan.json") != std::string::npos) plan_found = true;
  CHECK(plan_found);
}

TEST_CASE("report merges records and checks targets") {
  TempDir tmp;
  JobConfig cfg;
  cfg.command = "estimate";
  cfg.input_path = write_zeta(tmp.path, 256);
  cfg.norm = "ell1";
  cfg.out_dir = (tmp.path / "out").string();
  cfg.target = 1.0;
  const RunResult zeta = run_job(cfg);

  cfg.norm = "csup";
  cfg.target = 1.0; // the positive series has sigma_c = 1 as well
  const RunResult csup = run_job(cfg);

  ReportOptions opts;
  opts.record_paths = {zeta.record_path, csup.record_path};
  opts.out_dir = (tmp.path / "out").string();
  const ReportResult rep = run_report(opts);
  CHECK(!rep.check_failed);
  CHECK(fs::exists(rep.csv_path));
  CHECK(rep.table.find("sigma_ell1") != std::string::npos);

  opts.check = true;
  opts.tol = 0.05;
  CHECK(!run_report(opts).check_failed);

  // a declared target the estimate genuinely misses
  cfg.norm = "ell1";
  cfg.target = 0.7;
  const RunResult off = run_job(cfg);
  opts.record_paths.push_back(off.record_path);
  CHECK(run_report(opts).check_failed);

  // schema violations are merge errors
  const std::string junk = (tmp.path / "junk.json").string();
  std::ofstream(junk) << "{\"foo\": 1}\n";
  opts.record_paths = {junk};
  CHECK_THROWS(run_report(opts));
}

TEST_CASE("weissler and moin jobs round-trip through records") {
  TempDir tmp;
  JobConfig cfg;
  cfg.command = "weissler";
  cfg.wp = 2.0;
  cfg.wq = 4.0;
  cfg.radius = 0.9;
  cfg.trials = 3;
  cfg.mc_samples = 8192;
  cfg.out_dir = (tmp.path / "out").string();
  const RunResult w = run_job(cfg);
  CHECK(w.record["estimates"]["weissler"]["violation"].get<bool>());

  JobConfig mcfg;
  mcfg.command = "moin";
  mcfg.wp = 2.0;
  mcfg.wq = 4.0;
  mcfg.moin_n = 4;
  mcfg.search_iters = 1;
  mcfg.mc_samples = 2048;
  mcfg.out_dir = (tmp.path / "out").string();
  const RunResult m = run_job(mcfg);
  CHECK(m.record["estimates"]["moin"]["best_ratio"].get<double>() >= 1.0);
}
