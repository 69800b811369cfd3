#pragma once

#include <stdexcept>
#include <string>

#include "dirlab/series.hpp"

namespace dirlab {

// JSON-lines coefficient format. First line is the header
//   {"kind": "scalar"|"vector", "dim": d, "q": q|"inf", "n_max": N}
// (dim and q optional for scalar); each following line is one coefficient
//   {"n": n, "re": [..], "im": [..]}
// with re/im arrays of length dim.

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_) + ": " + what), line(line_) {}
};

DirichletTruncation read_series_jsonl(const std::string& path);
DirichletTruncation parse_series_jsonl(const std::string& text);
void write_series_jsonl(const DirichletTruncation& D, const std::string& path);

} // namespace dirlab
