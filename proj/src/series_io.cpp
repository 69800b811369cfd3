#include "dirlab/series_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dirlab {

using nlohmann::json;

namespace {

double parse_q(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "Inf" || s == "infinity") return kInf;
    throw std::runtime_error("q must be a number or \"inf\"");
  }
  return j.get<double>();
}

} // namespace

DirichletTruncation parse_series_jsonl(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;

  // header
  json header;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      header = json::parse(line);
    } catch (const std::exception& e) {
      throw ParseError(lineno, std::string("header: ") + e.what());
    }
    break;
  }
  if (header.is_null()) throw ParseError(lineno, "missing header record");

  CoefficientSpaceSpec space;
  std::uint64_t n_max = 0;
  try {
    const std::string kind = header.at("kind").get<std::string>();
    n_max = header.at("n_max").get<std::uint64_t>();
    if (kind == "scalar") {
      space = CoefficientSpaceSpec::scalar_space();
    } else if (kind == "vector") {
      space = CoefficientSpaceSpec::lq(header.at("dim").get<std::uint32_t>(),
                                       parse_q(header.at("q")));
    } else {
      throw std::runtime_error("kind must be \"scalar\" or \"vector\"");
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(lineno, std::string("header: ") + e.what());
  }
  if (n_max == 0) throw ParseError(lineno, "header: n_max must be positive");

  DirichletTruncation D(space, n_max);
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const std::exception& e) {
      throw ParseError(lineno, e.what());
    }
    try {
      const std::uint64_t n = rec.at("n").get<std::uint64_t>();
      if (n == 0 || n > n_max)
        throw std::runtime_error("n = " + std::to_string(n) + " outside [1, n_max]");
      const auto& re = rec.at("re");
      const auto& im = rec.at("im");
      if (!re.is_array() || !im.is_array() || re.size() != im.size())
        throw std::runtime_error("re/im must be arrays of equal length");
      if (re.size() != space.dim)
        throw std::runtime_error("coefficient length " + std::to_string(re.size()) +
                                 " does not match dim " + std::to_string(space.dim));
      Coefficient c;
      for (std::uint32_t j = 0; j < re.size(); ++j) {
        const cplx v{re[j].get<double>(), im[j].get<double>()};
        if (v != cplx{}) c.set(j, v);
      }
      D.set(n, std::move(c));
    } catch (const std::exception& e) {
      throw ParseError(lineno, e.what());
    }
  }
  return D;
}

DirichletTruncation read_series_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_series_jsonl(buf.str());
}

void write_series_jsonl(const DirichletTruncation& D, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  json header;
  const auto& sp = D.space();
  header["kind"] = sp.is_scalar() ? "scalar" : "vector";
  header["n_max"] = D.n_max();
  if (!sp.is_scalar()) {
    header["dim"] = sp.dim;
    if (std::isinf(sp.q))
      header["q"] = "inf";
    else
      header["q"] = sp.q;
  }
  out << header.dump() << '\n';
  for (const auto& [n, a] : D.support()) {
    json rec;
    rec["n"] = n;
    std::vector<double> re(sp.dim, 0.0), im(sp.dim, 0.0);
    for (const auto& [j, v] : a.entries()) {
      re.at(j) = v.real();
      im.at(j) = v.imag();
    }
    rec["re"] = re;
    rec["im"] = im;
    out << rec.dump() << '\n';
  }
}

} // namespace dirlab
