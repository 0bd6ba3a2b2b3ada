#include "frde/spec_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace frde {
namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok) throw SpecFileError("unknown key \"" + key + "\" in " + where);
  }
}

double require_number(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw SpecFileError(std::string("missing key \"") + key + "\" in " + where);
  if (!obj[key].is_number()) throw SpecFileError(std::string("key \"") + key + "\" in " + where + " must be a number");
  return obj[key].get<double>();
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw SpecFileError(std::string("missing key \"") + key + "\" in " + where);
  if (!obj[key].is_string()) throw SpecFileError(std::string("key \"") + key + "\" in " + where + " must be a string");
  return obj[key].get<std::string>();
}

Expr parse_checked(const std::string& source, const std::vector<std::string>& variables,
                   const std::string& what) {
  try {
    return parse(source, variables);
  } catch (const ParseError& e) {
    throw SpecFileError("expression \"" + what + "\" does not parse: " + e.what());
  }
}

std::string format_number(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(v));
    return buf;
  }
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, end);
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

ProblemSpec SpecDocument::to_problem() const {
  if (!(beta > 0.0) || !(beta < 1.0)) throw SpecFileError("beta must lie in (0, 1)");
  ProblemSpec spec;
  spec.beta = beta;
  spec.x0 = x0;
  spec.solver = solver;
  if (!(solver.tol > 0.0)) throw SpecFileError("solver.tol must be positive");
  if (solver.N < 1) throw SpecFileError("solver.N must be >= 1");

  auto check_alpha = [](double a, const char* name) {
    if (!(a >= 0.0) || !(a < 1.0))
      throw SpecFileError(std::string(name) + " must lie in [0, 1)");
  };
  check_alpha(rhs.alpha_l, "alpha_l");
  check_alpha(rhs.alpha_k, "alpha_k");
  if (rhs.mu < 0.0) throw SpecFileError("mu must be nonnegative");

  const std::vector<std::string> t_vars{"t"};
  const std::vector<std::string> tx_vars{"t", "x"};
  const std::vector<std::string> x_vars{"x"};

  if (rhs.kind == "structured") {
    StructuredRhs s;
    s.l = SingularFunction::from_rho(parse_checked(rhs.l, t_vars, "l"), rhs.alpha_l);
    s.phi = parse_checked(rhs.phi, x_vars, "phi");
    s.k = SingularFunction::from_rho(parse_checked(rhs.k, t_vars, "k"), rhs.alpha_k);
    s.mu = rhs.mu;
    spec.rhs = std::move(s);
  } else if (rhs.kind == "general") {
    GeneralRhs g;
    g.f = parse_checked(rhs.f, tx_vars, "f");
    g.alpha_l = rhs.alpha_l;
    g.alpha_k = rhs.alpha_k;
    g.mu = rhs.mu;
    spec.rhs = std::move(g);
  } else {
    throw SpecFileError("rhs.kind must be \"structured\" or \"general\"");
  }

  spec.gamma_exp = rhs.gamma;
  if (rhs.envelopes) {
    Envelopes env;
    env.l = parse_checked(rhs.envelopes->l, t_vars, "envelopes.l");
    env.l1 = parse_checked(rhs.envelopes->l1, t_vars, "envelopes.l1");
    env.k = parse_checked(rhs.envelopes->k, t_vars, "envelopes.k");
    env.k1 = parse_checked(rhs.envelopes->k1, t_vars, "envelopes.k1");
    env.mu = rhs.envelopes->mu;
    env.gamma_exp = rhs.envelopes->gamma;
    spec.envelopes = std::move(env);
  }
  return spec;
}

SpecDocument parse_spec_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw SpecFileError(std::string("spec file is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw SpecFileError("spec file must be a JSON object");
  reject_unknown_keys(root, {"beta", "x0", "rhs", "solver"}, "the top-level object");

  SpecDocument doc;
  doc.beta = require_number(root, "beta", "the top-level object");
  doc.x0 = require_number(root, "x0", "the top-level object");

  if (!root.contains("rhs") || !root["rhs"].is_object())
    throw SpecFileError("missing \"rhs\" object");
  const json& rhs = root["rhs"];
  doc.rhs.kind = require_string(rhs, "kind", "rhs");
  if (doc.rhs.kind == "structured") {
    reject_unknown_keys(rhs, {"kind", "l", "alpha_l", "phi", "mu", "k", "alpha_k", "gamma",
                              "envelopes"},
                        "rhs");
    doc.rhs.l = require_string(rhs, "l", "rhs");
    doc.rhs.alpha_l = require_number(rhs, "alpha_l", "rhs");
    doc.rhs.phi = require_string(rhs, "phi", "rhs");
    doc.rhs.mu = require_number(rhs, "mu", "rhs");
    doc.rhs.k = require_string(rhs, "k", "rhs");
    doc.rhs.alpha_k = require_number(rhs, "alpha_k", "rhs");
  } else if (doc.rhs.kind == "general") {
    reject_unknown_keys(rhs, {"kind", "f", "alpha_l", "alpha_k", "mu", "gamma", "envelopes"},
                        "rhs");
    doc.rhs.f = require_string(rhs, "f", "rhs");
    doc.rhs.alpha_l = require_number(rhs, "alpha_l", "rhs");
    doc.rhs.alpha_k = require_number(rhs, "alpha_k", "rhs");
    doc.rhs.mu = require_number(rhs, "mu", "rhs");
  } else {
    throw SpecFileError("rhs.kind must be \"structured\" or \"general\"");
  }
  if (rhs.contains("gamma")) doc.rhs.gamma = require_number(rhs, "gamma", "rhs");
  if (rhs.contains("envelopes")) {
    const json& env = rhs["envelopes"];
    if (!env.is_object()) throw SpecFileError("rhs.envelopes must be an object");
    reject_unknown_keys(env, {"l", "l1", "k", "k1", "mu", "gamma"}, "rhs.envelopes");
    EnvelopesDocument e;
    e.l = require_string(env, "l", "rhs.envelopes");
    e.l1 = require_string(env, "l1", "rhs.envelopes");
    e.k = require_string(env, "k", "rhs.envelopes");
    e.k1 = require_string(env, "k1", "rhs.envelopes");
    e.mu = require_number(env, "mu", "rhs.envelopes");
    e.gamma = require_number(env, "gamma", "rhs.envelopes");
    doc.rhs.envelopes = std::move(e);
  }

  if (root.contains("solver")) {
    const json& sol = root["solver"];
    if (!sol.is_object()) throw SpecFileError("\"solver\" must be an object");
    reject_unknown_keys(sol, {"T0", "Tmax", "N", "grading", "ratio", "tol"}, "solver");
    if (sol.contains("T0")) doc.solver.T0 = require_number(sol, "T0", "solver");
    if (sol.contains("Tmax")) doc.solver.Tmax = require_number(sol, "Tmax", "solver");
    if (sol.contains("N")) {
      if (!sol["N"].is_number_integer()) throw SpecFileError("solver.N must be an integer");
      doc.solver.N = sol["N"].get<int>();
    }
    if (sol.contains("grading")) doc.solver.grading = require_number(sol, "grading", "solver");
    if (sol.contains("ratio")) doc.solver.ratio = require_number(sol, "ratio", "solver");
    if (sol.contains("tol")) doc.solver.tol = require_number(sol, "tol", "solver");
  }

  doc.to_problem();  // surface validation errors now
  return doc;
}

SpecDocument load_spec_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecFileError("cannot open spec file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec_json(buf.str());
}

std::string write_spec_json(const SpecDocument& doc) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"beta\": " << format_number(doc.beta) << ",\n";
  os << "  \"x0\": " << format_number(doc.x0) << ",\n";
  os << "  \"rhs\": {\n";
  os << "    \"kind\": " << quote(doc.rhs.kind) << ",\n";
  if (doc.rhs.kind == "structured") {
    os << "    \"l\": " << quote(doc.rhs.l) << ",\n";
    os << "    \"alpha_l\": " << format_number(doc.rhs.alpha_l) << ",\n";
    os << "    \"phi\": " << quote(doc.rhs.phi) << ",\n";
    os << "    \"mu\": " << format_number(doc.rhs.mu) << ",\n";
    os << "    \"k\": " << quote(doc.rhs.k) << ",\n";
    os << "    \"alpha_k\": " << format_number(doc.rhs.alpha_k);
  } else {
    os << "    \"f\": " << quote(doc.rhs.f) << ",\n";
    os << "    \"alpha_l\": " << format_number(doc.rhs.alpha_l) << ",\n";
    os << "    \"alpha_k\": " << format_number(doc.rhs.alpha_k) << ",\n";
    os << "    \"mu\": " << format_number(doc.rhs.mu);
  }
  if (doc.rhs.gamma) os << ",\n    \"gamma\": " << format_number(*doc.rhs.gamma);
  if (doc.rhs.envelopes) {
    const EnvelopesDocument& e = *doc.rhs.envelopes;
    os << ",\n    \"envelopes\": {\n";
    os << "      \"l\": " << quote(e.l) << ",\n";
    os << "      \"l1\": " << quote(e.l1) << ",\n";
    os << "      \"k\": " << quote(e.k) << ",\n";
    os << "      \"k1\": " << quote(e.k1) << ",\n";
    os << "      \"mu\": " << format_number(e.mu) << ",\n";
    os << "      \"gamma\": " << format_number(e.gamma) << "\n";
    os << "    }";
  }
  os << "\n  },\n";
  os << "  \"solver\": {\n";
  os << "    \"T0\": " << format_number(doc.solver.T0) << ",\n";
  os << "    \"Tmax\": " << format_number(doc.solver.Tmax) << ",\n";
  os << "    \"N\": " << doc.solver.N << ",\n";
  os << "    \"grading\": " << format_number(doc.solver.grading) << ",\n";
  os << "    \"ratio\": " << format_number(doc.solver.ratio) << ",\n";
  os << "    \"tol\": " << format_number(doc.solver.tol) << "\n";
  os << "  }\n";
  os << "}\n";
  return os.str();
}

}  // namespace frde
