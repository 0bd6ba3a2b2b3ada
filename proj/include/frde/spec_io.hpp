#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "frde/solver.hpp"

namespace frde {

class SpecFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raw document form of a problem-spec file. Expression sources are kept
// verbatim so writing a parsed document reproduces the canonical file.
struct EnvelopesDocument {
  std::string l, l1, k, k1;
  double mu = 0.0;
  double gamma = 0.0;
};

struct RhsDocument {
  std::string kind;  // "structured" | "general"
  std::string l, phi, k;  // structured fields
  std::string f;          // general field
  double alpha_l = 0.0;
  double alpha_k = 0.0;
  double mu = 0.0;
  std::optional<double> gamma;
  std::optional<EnvelopesDocument> envelopes;
};

struct SpecDocument {
  double beta = 0.5;
  double x0 = 1.0;
  RhsDocument rhs;
  SolverParams solver;

  ProblemSpec to_problem() const;
};

// Strict parse: unknown keys are rejected, ranges validated, and every
// expression string must parse under its declared variable set.
SpecDocument parse_spec_json(const std::string& text);
SpecDocument load_spec_file(const std::string& path);

// Canonical serialization: fixed key order, 2-space indent, shortest
// round-trip numbers. write(parse(file)) reproduces a canonical file.
std::string write_spec_json(const SpecDocument& doc);

}  // namespace frde
