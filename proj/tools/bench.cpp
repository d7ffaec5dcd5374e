// Benchmark: OpenMP-parallel sweep drivers against the serial reference
// implementations, on the two hot workloads (randomized bracket-identity
// sweeps and Nijenhuis-relation tuple enumeration).

#include "diracwb/geometry.hpp"
#include "diracwb/relations.hpp"
#include "diracwb/rng.hpp"
#include "reference/oracles.hpp"

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace diracwb;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

Superfunction random_elem(Rng& rng) {
  Superfunction f;
  for (int t = 0; t < 3; ++t) {
    Mono m;
    m.xexp.resize(3);
    m.pexp.resize(3);
    for (int i = 0; i < 3; ++i) {
      m.xexp[i] = static_cast<uint16_t>(rng.below(2));
      m.pexp[i] = static_cast<uint16_t>(rng.below(2));
    }
    m.xi = static_cast<uint32_t>(rng.below(16));
    m.th = static_cast<uint32_t>(rng.below(16));
    m.trim();
    f += Superfunction::monomial(m, rng.small_rat_nonzero());
  }
  return f;
}

// Jacobi residual sweep over random triples; returns total surviving terms
// (always zero) plus a checksum of intermediate bracket sizes.
long bracket_sweep(const std::vector<std::array<Superfunction, 3>>& triples, bool parallel,
                   bool use_reference) {
  long checksum = 0;
  const long n = static_cast<long>(triples.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) reduction(+ : checksum) if (parallel)
#endif
  for (long i = 0; i < n; ++i) {
    const auto& [u, v, w] = triples[i];
    auto br = [&](const Superfunction& a, const Superfunction& b) {
      return use_reference ? reference::big_bracket_oracle(a, b) : big_bracket(a, b);
    };
    Superfunction uvw = br(u, br(v, w));
    Superfunction uv_w = br(br(u, v), w);
    checksum += static_cast<long>(uvw.term_count() + uv_w.term_count());
  }
  return checksum;
}

}  // namespace

int main() {
  const int triples_n = 800;
  Rng rng(2718);
  std::vector<std::array<Superfunction, 3>> triples;
  triples.reserve(triples_n);
  for (int i = 0; i < triples_n; ++i)
    triples.push_back({random_elem(rng), random_elem(rng), random_elem(rng)});

#ifdef _OPENMP
  const int threads = omp_get_max_threads();
#else
  const int threads = 1;
#endif
  std::printf("diracwb benchmark (%d thread%s)\n", threads, threads == 1 ? "" : "s");

  auto t0 = std::chrono::steady_clock::now();
  long ref = bracket_sweep(triples, false, true);
  double t_ref = ms_since(t0);

  t0 = std::chrono::steady_clock::now();
  long ser = bracket_sweep(triples, false, false);
  double t_ser = ms_since(t0);

  t0 = std::chrono::steady_clock::now();
  long par = bracket_sweep(triples, true, false);
  double t_par = ms_since(t0);

  std::printf("bracket sweep, %d Jacobi triples\n", triples_n);
  std::printf("  reference (serial, term-by-term)  %8.1f ms  checksum %ld\n", t_ref, ref);
  std::printf("  kernel    (serial, recursive)     %8.1f ms  checksum %ld\n", t_ser, ser);
  std::printf("  kernel    (OpenMP)                %8.1f ms  checksum %ld  speedup %.2fx\n",
              t_par, par, t_ser / t_par);
  if (ref != ser || ser != par) {
    std::printf("  CHECKSUM MISMATCH\n");
    return 1;
  }

  // Nijenhuis tuple enumeration on a polynomial relation of rank 4.
  auto t5 = AlgebroidStructure::tangent(4);
  PolyMat nm = zero_mat(4, 4);
  Rng rng2(99);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) nm[i][j] = rng2.poly(2, 1, 2, 2);
  LinearRelation rel = LinearRelation::graph_of(nm);
  NijenhuisOptions opt;
  opt.samples = 12;

#ifdef _OPENMP
  omp_set_num_threads(1);
#endif
  t0 = std::chrono::steady_clock::now();
  CheckReport serial_rep = is_nijenhuis_relation(t5, rel, opt);
  double t_nij_ser = ms_since(t0);
#ifdef _OPENMP
  omp_set_num_threads(threads);
#endif
  t0 = std::chrono::steady_clock::now();
  CheckReport parallel_rep = is_nijenhuis_relation(t5, rel, opt);
  double t_nij_par = ms_since(t0);

  std::printf("nijenhuis-relation tuple sweep, rank-4 polynomial graph\n");
  std::printf("  serial  %8.1f ms  verdict %s\n", t_nij_ser,
              to_string(serial_rep.verdict).c_str());
  std::printf("  OpenMP  %8.1f ms  verdict %s  speedup %.2fx\n", t_nij_par,
              to_string(parallel_rep.verdict).c_str(), t_nij_ser / t_nij_par);
  if (serial_rep.verdict != parallel_rep.verdict ||
      serial_rep.witnesses.size() != parallel_rep.witnesses.size()) {
    std::printf("  VERDICT MISMATCH\n");
    return 1;
  }
  return 0;
}
