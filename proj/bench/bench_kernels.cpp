// Times the O(N^2) Volterra kernels (moment-table build and operator
// application) with the serial reference against the OpenMP path, and checks
// that both produce bitwise-identical results.

#include <chrono>
#include <cstdio>
#include <vector>

#include "frde/example_specs.hpp"
#include "frde/parallel.hpp"
#include "frde/solver.hpp"
#include "frde/spec_io.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

int main() {
  std::printf("OpenMP available: %s, max threads: %d\n",
              frde::parallel_available() ? "yes" : "no", frde::max_threads());

  frde::SpecDocument doc =
      frde::parse_spec_json(std::string(frde::examples::spec_json("4.1")));
  frde::ProblemSpec spec = doc.to_problem();

  {
    // warm the shared Gauss-Jacobi rule cache so the first timing row does
    // not pay for rule construction
    frde::GradedMesh warm;
    warm.T = spec.solver.T0;
    warm.N = 64;
    warm.grading = spec.effective_grading();
    frde::VolterraOperator op(spec, warm.nodes(), frde::Exec::serial);
  }

  std::printf("%6s  %12s  %12s  %8s  %12s  %12s  %8s  %s\n", "N", "build ser", "build par",
              "speedup", "apply ser", "apply par", "speedup", "bitwise");
  for (int n : {128, 256, 512, 1024}) {
    frde::GradedMesh mesh;
    mesh.T = spec.solver.T0;
    mesh.N = n;
    mesh.grading = spec.effective_grading();
    const std::vector<double> nodes = mesh.nodes();

    auto t0 = Clock::now();
    frde::VolterraOperator serial_op(spec, nodes, frde::Exec::serial);
    const double build_serial = seconds_since(t0);

    t0 = Clock::now();
    frde::VolterraOperator parallel_op(spec, nodes, frde::Exec::parallel);
    const double build_parallel = seconds_since(t0);

    std::vector<double> w(nodes.size(), spec.x0);
    constexpr int kApplies = 20;

    t0 = Clock::now();
    std::vector<double> ws;
    for (int i = 0; i < kApplies; ++i) ws = serial_op.apply(w, frde::Exec::serial);
    const double apply_serial = seconds_since(t0) / kApplies;

    t0 = Clock::now();
    std::vector<double> wp;
    for (int i = 0; i < kApplies; ++i) wp = parallel_op.apply(w, frde::Exec::parallel);
    const double apply_parallel = seconds_since(t0) / kApplies;

    bool bitwise = ws.size() == wp.size();
    for (std::size_t i = 0; bitwise && i < ws.size(); ++i) bitwise = ws[i] == wp[i];

    std::printf("%6d  %10.4f s  %10.4f s  %7.2fx  %10.6f s  %10.6f s  %7.2fx  %s\n", n,
                build_serial, build_parallel, build_serial / build_parallel, apply_serial,
                apply_parallel, apply_serial / apply_parallel, bitwise ? "yes" : "NO");
  }
  return 0;
}
