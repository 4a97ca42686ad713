// Compares the OpenMP kernels against their serial reference
// implementations: wall time per call plus an equality check.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "coldstart/criteria.hpp"
#include "coldstart/data_model.hpp"
#include "coldstart/fm.hpp"
#include "coldstart/matrix.hpp"
#include "coldstart/rng.hpp"

using namespace coldstart;

namespace {

template <typename F>
double time_call(F&& f, int repeats) {
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < repeats; ++i) f();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count() / repeats;
}

void report(const char* name, double serial_ms, double parallel_ms, bool equal) {
  std::printf("%-22s serial %9.3f ms   omp %9.3f ms   speedup %5.2fx   %s\n", name, serial_ms,
              parallel_ms, serial_ms / parallel_ms, equal ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  int n = 1500;       // pool size for the pairwise kernels
  int repeats = 3;
  if (argc > 1) n = std::atoi(argv[1]);
  if (argc > 2) repeats = std::atoi(argv[2]);

#ifdef _OPENMP
  std::printf("openmp threads: %d, n = %d\n", omp_get_max_threads(), n);
#else
  std::printf("openmp disabled, n = %d\n", n);
#endif

  Rng rng = make_rng(42);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Pairwise diversity over a random potential-rating vector.
  std::vector<double> potential(static_cast<std::size_t>(n));
  for (double& v : potential) v = 1.0 + 4.0 * unit(rng);
  Matrix d_par, d_ser;
  const double t_div_ser = time_call([&] { d_ser = serial::diversity_matrix(potential); }, repeats);
  const double t_div_par = time_call([&] { d_par = diversity_matrix(potential); }, repeats);
  report("diversity_matrix", t_div_ser, t_div_par, d_par == d_ser);

  // Pairwise cosine over a synthetic corpus restricted to training items.
  SyntheticSpec spec;
  spec.users = n;
  spec.items = 400;
  spec.attrs = 60;
  spec.density = 0.05;
  spec.seed = 9;
  const RatingStore store = generate_synthetic(spec);
  const Split split = make_split(store, 0.2, 1);
  std::vector<int> everyone(static_cast<std::size_t>(n));
  for (int u = 0; u < n; ++u) everyone[static_cast<std::size_t>(u)] = u;
  Matrix s_par, s_ser;
  const double t_sim_ser =
      time_call([&] { s_ser = serial::similarity_matrix(store, split, everyone); }, repeats);
  const double t_sim_par =
      time_call([&] { s_par = similarity_matrix(store, split, everyone); }, repeats);
  report("similarity_matrix", t_sim_ser, t_sim_par, s_par == s_ser);

  // Row-streamed mat-vec on a dense matrix of that size.
  Matrix m(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (double& v : m.data()) v = unit(rng) - 0.5;
  std::vector<double> x(static_cast<std::size_t>(n));
  for (double& v : x) v = unit(rng);
  std::vector<double> y_par, y_ser;
  const double t_mv_ser = time_call([&] { y_ser = serial::matvec(m, x); }, repeats);
  const double t_mv_par = time_call([&] { y_par = matvec(m, x); }, repeats);
  report("matvec", t_mv_ser, t_mv_par, y_par == y_ser);

  // Batch willingness scoring across the user pool.
  TrainConfig cfg;
  cfg.epochs = 2;
  const PretrainedModels models = pretrain_models(store, split, cfg);
  const std::vector<int> attrs = store.item_attrs(split.test_items.front());
  std::vector<double> p_par, p_ser;
  const double t_pred_ser =
      time_call([&] { p_ser = serial::predict_users(models.clf, everyone, attrs); }, repeats);
  const double t_pred_par =
      time_call([&] { p_par = predict_users(models.clf, everyone, attrs); }, repeats);
  report("predict_users", t_pred_ser, t_pred_par, p_par == p_ser);

  return 0;
}
