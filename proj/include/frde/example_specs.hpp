#pragma once

#include <stdexcept>
#include <string_view>
#include <vector>

namespace frde::examples {

// Six shipped problem specs, embedded so the CLI can reproduce them without
// touching the filesystem. specs/example-4.X.json carries the same bytes.

inline constexpr std::string_view kSpec41 = R"json({
  "beta": 0.5,
  "x0": 1,
  "rhs": {
    "kind": "structured",
    "l": "t^(-3/4)+t^(-1/2)",
    "alpha_l": 0.75,
    "phi": "(x+1)/(x+2)",
    "mu": 0,
    "k": "0",
    "alpha_k": 0
  },
  "solver": {
    "T0": 10,
    "Tmax": 1000000,
    "N": 256,
    "grading": 0,
    "ratio": 1.25,
    "tol": 1e-10
  }
}
)json";

inline constexpr std::string_view kSpec42 = R"json({
  "beta": 0.5,
  "x0": 1,
  "rhs": {
    "kind": "structured",
    "l": "t^(-0.7)",
    "alpha_l": 0.7,
    "phi": "ln(1+x^(0.5))",
    "mu": 0.5,
    "k": "0",
    "alpha_k": 0
  },
  "solver": {
    "T0": 10,
    "Tmax": 1000000,
    "N": 256,
    "grading": 0,
    "ratio": 1.25,
    "tol": 1e-10
  }
}
)json";

inline constexpr std::string_view kSpec43 = R"json({
  "beta": 0.5,
  "x0": 1,
  "rhs": {
    "kind": "structured",
    "l": "t^(-1/2)",
    "alpha_l": 0.5,
    "phi": "cbrt(x)",
    "mu": 0.3333333333333333,
    "k": "0",
    "alpha_k": 0
  },
  "solver": {
    "T0": 10,
    "Tmax": 1000000,
    "N": 256,
    "grading": 0,
    "ratio": 1.25,
    "tol": 1e-10
  }
}
)json";

inline constexpr std::string_view kSpec44 = R"json({
  "beta": 0.5,
  "x0": 1,
  "rhs": {
    "kind": "structured",
    "l": "1/(1+t)",
    "alpha_l": 0,
    "phi": "sqrt(x)",
    "mu": 0.5,
    "k": "sqrt(t)/(1+t)",
    "alpha_k": 0,
    "gamma": 0.75
  },
  "solver": {
    "T0": 10,
    "Tmax": 1000000,
    "N": 256,
    "grading": 0,
    "ratio": 1.25,
    "tol": 1e-10
  }
}
)json";

inline constexpr std::string_view kSpec45 = R"json({
  "beta": 0.5,
  "x0": 1,
  "rhs": {
    "kind": "general",
    "f": "sqrt(x+t)/(1+t)",
    "alpha_l": 0,
    "alpha_k": 0,
    "mu": 0.5,
    "envelopes": {
      "l": "1/(1+t)",
      "l1": "0",
      "k": "sqrt(t)/(1+t)",
      "k1": "sqrt(t)/(1+t)",
      "mu": 0.5,
      "gamma": 0.75
    }
  },
  "solver": {
    "T0": 10,
    "Tmax": 1000000,
    "N": 256,
    "grading": 0,
    "ratio": 1.25,
    "tol": 1e-10
  }
}
)json";

inline constexpr std::string_view kSpec46 = R"json({
  "beta": 0.5,
  "x0": 1,
  "rhs": {
    "kind": "structured",
    "l": "t^(-2/3)",
    "alpha_l": 0.6666666666666666,
    "phi": "cbrt(x)",
    "mu": 0.3333333333333333,
    "k": "-t^(-1/2)",
    "alpha_k": 0.5,
    "envelopes": {
      "l": "t^(-2/3)",
      "l1": "t^(-2/3)",
      "k": "-t^(-1/2)",
      "k1": "-t^(-1/2)",
      "mu": 0.3333333333333333,
      "gamma": 0.6666666666666666
    }
  },
  "solver": {
    "T0": 10,
    "Tmax": 100000000,
    "N": 384,
    "grading": 0,
    "ratio": 1.08,
    "tol": 1e-10
  }
}
)json";

inline const std::vector<std::string>& ids() {
  static const std::vector<std::string> kIds{"4.1", "4.2", "4.3", "4.4", "4.5", "4.6"};
  return kIds;
}

inline std::string_view spec_json(std::string_view id) {
  if (id == "4.1") return kSpec41;
  if (id == "4.2") return kSpec42;
  if (id == "4.3") return kSpec43;
  if (id == "4.4") return kSpec44;
  if (id == "4.5") return kSpec45;
  if (id == "4.6") return kSpec46;
  throw std::invalid_argument("unknown example id: " + std::string(id));
}

// Closed-form limits of the shipped examples, as printable labels.
inline std::string_view reference_limit_label(std::string_view id) {
  if (id == "4.1") return "(sqrt(pi)+sqrt(4+pi)-2)/2";
  if (id == "4.2") return "0";
  if (id == "4.3") return "pi^(3/4)";
  if (id == "4.4") return "sqrt(pi)";
  if (id == "4.5") return "sqrt(pi)";
  if (id == "4.6") return "-sqrt(pi)";
  throw std::invalid_argument("unknown example id: " + std::string(id));
}

}  // namespace frde::examples
