// Timing comparison of the log-joint evaluation paths: the plain serial
// reference, the kernel pinned to one thread, and the kernel with all
// threads. Values are cross-checked before timing.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "climact/forward.hpp"
#include "climact/joint.hpp"
#include "climact/rng.hpp"
#include "reference/naive_model.hpp"

using namespace climact;

namespace {

SubredditCatalog make_catalog(std::size_t k, std::uint64_t seed) {
  SubredditCatalog cat;
  Rng rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    cat.names.push_back("sub" + std::to_string(i));
    Vec4 sc;
    for (double& v : sc) v = rng.normal();
    cat.scores.push_back(sc);
    cat.popularity.push_back(rng.normal());
  }
  return cat;
}

ModelParameters bench_params() {
  ModelParameters p;
  p.beta_e0 = 0.1;
  p.beta_e1 = 0.8;
  p.theta_e = 0.25;
  p.beta_pl0 = -1.5;
  p.beta_pl1 = 0.6;
  p.beta_pl2 = 0.9;
  p.beta_pl3 = 0.4;
  p.beta_s1 = {0.5, -0.4, 0.2, 0.3};
  p.beta_s2 = 0.3;
  p.beta_s3 = {0.2, 0.5, -0.1};
  p.beta_ps0 = -1.2;
  p.beta_ps1 = {0.3, -0.2, 0.1, 0.2};
  p.beta_ps2 = 1.5;
  p.beta_ps3 = 0.7;
  p.beta_ps4 = 0.5;
  p.beta_i0 = -0.5;
  p.beta_i1 = {0.2, -0.3, 0.1, 0.15};
  p.beta_i2 = 0.6;
  p.beta_a0 = -0.8;
  p.beta_a1 = 1.0;
  p.beta_a2 = 1.0;
  p.beta_a3 = {0.4, 0.6, 0.1};
  p.beta_a4 = {-0.2, 0.1, 0.3};
  p.beta_a5 = 0.4;
  return p;
}

double time_ms(int reps, const auto& fn) {
  fn();  // warm up
  const auto begin = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  const auto end = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(end - begin).count() /
         reps;
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t n_users = 20000;
  std::size_t k = 100;
  int reps = 5;
  if (argc > 1) n_users = std::stoul(argv[1]);
  if (argc > 2) k = std::stoul(argv[2]);
  if (argc > 3) reps = std::stoi(argv[3]);

  const SubredditCatalog catalog = make_catalog(k, 7);
  const ModelParameters params = bench_params();
  Hyperparameters hyper;
  const auto [users, latents] =
      forward_sample(params, catalog, hyper, n_users, MediaGenerator{}, 11);

  const Dataset data{catalog, users};
  const JointModel model(data, hyper, ModelStructure{});
  std::vector<double> z(model.dim());
  model.layout().pack(params, z);
  for (std::size_t u = 0; u < n_users; ++u) {
    const std::size_t off = model.latent_offset(u);
    for (std::size_t a = 0; a < 4; ++a) z[off + a] = latents.d[u][a];
    z[off + 4] = latents.s[u];
  }
  std::vector<double> grad(model.dim());

  const double v_ref =
      ref::naive_joint_log_density(params, latents, users, catalog, hyper);
  const double v_kernel = model.log_density(z);
  const double rel = std::abs(v_kernel - v_ref) /
                     std::max(1.0, std::abs(v_ref));
  std::printf("n_users=%zu K=%zu reps=%d\n", n_users, k, reps);
  std::printf("reference  log p = %.10f\n", v_ref);
  std::printf("kernel     log p = %.10f   (rel diff %.3e)\n", v_kernel, rel);
  if (rel > 1e-10) {
    std::printf("MISMATCH between kernel and reference\n");
    return 1;
  }

#ifdef _OPENMP
  const int max_threads = omp_get_max_threads();
#else
  const int max_threads = 1;
#endif

  const double t_ref = time_ms(reps, [&] {
    ref::naive_joint_log_density(params, latents, users, catalog, hyper);
  });
  std::printf("%-34s %9.2f ms\n", "reference (serial, value)", t_ref);

#ifdef _OPENMP
  omp_set_num_threads(1);
#endif
  const double t1v = time_ms(reps, [&] { model.log_density(z); });
  std::printf("%-34s %9.2f ms   (%.2fx vs reference)\n",
              "kernel 1 thread (value)", t1v, t_ref / t1v);
  const double t1g = time_ms(reps, [&] { model.log_density_grad(z, grad); });
  std::printf("%-34s %9.2f ms\n", "kernel 1 thread (value+grad)", t1g);

#ifdef _OPENMP
  omp_set_num_threads(max_threads);
  const double tnv = time_ms(reps, [&] { model.log_density(z); });
  std::printf("%-34s %9.2f ms   (%.2fx vs 1 thread)\n",
              ("kernel " + std::to_string(max_threads) + " threads (value)")
                  .c_str(),
              tnv, t1v / tnv);
  const double tng = time_ms(reps, [&] { model.log_density_grad(z, grad); });
  std::printf("%-34s %9.2f ms   (%.2fx vs 1 thread)\n",
              ("kernel " + std::to_string(max_threads) +
               " threads (value+grad)")
                  .c_str(),
              tng, t1g / tng);

  omp_set_num_threads(1);
  const double v1 = model.log_density(z);
  omp_set_num_threads(max_threads);
  const double vn = model.log_density(z);
  std::printf("bit-identical across thread counts: %s\n",
              v1 == vn ? "yes" : "NO");
  if (v1 != vn) return 1;
#endif
  return 0;
}
