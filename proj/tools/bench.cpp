#include <chrono>
#include <cstdio>

#include "antiplane/fem.hpp"
#include "antiplane/mesh.hpp"

using namespace antiplane;
using Clock = std::chrono::steady_clock;

namespace {

template <class F>
double time_best_of(int reps, F&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = Clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  int levels = argc > 1 ? std::atoi(argv[1]) : 7;
  std::printf("%8s %10s %12s %12s %8s\n", "level", "triangles", "parallel_ms", "serial_ms",
              "speedup");
  Mesh mesh = unit_square_mesh(BoundaryTag::Contact, BoundaryTag::Neumann, BoundaryTag::Dirichlet,
                               BoundaryTag::Neumann);
  for (int level = 0; level <= levels; ++level) {
    if (level > 0) mesh = refine_uniform(mesh);
    DofMap dofs = build_dof_map(mesh);
    std::vector<double> mu(mesh.triangles.size(), 1.0);

    SparseSymMatrix A_par, A_ser;
    double par_ms = time_best_of(3, [&] { A_par = assemble_stiffness(mesh, mu, dofs); });
    double ser_ms = time_best_of(3, [&] { A_ser = assemble_stiffness_serial(mesh, mu, dofs); });
    double diff = (A_par - A_ser).norm();
    if (diff != 0.0) {
      std::printf("mismatch between parallel and serial assembly: %g\n", diff);
      return 1;
    }
    std::printf("%8d %10zu %12.3f %12.3f %7.2fx\n", level, mesh.triangles.size(), par_ms, ser_ms,
                ser_ms / par_ms);
  }
  return 0;
}
