#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <filesystem>
#include <string>
#include <vector>

#include "kacsim.h"

namespace fs = std::filesystem;

namespace {

struct Handles {
  ks_kernel* det = nullptr;
  ks_kernel* kac2 = nullptr;
  ks_law* rademacher = nullptr;
  ks_law* point1 = nullptr;
  Handles() {
    REQUIRE(ks_kernel_from_json(R"({"law":"deterministic","atoms":[0.6,0.7],"label":"det"})",
                                &det) == KS_OK);
    REQUIRE(ks_kernel_preset("kac2", &kac2) == KS_OK);
    REQUIRE(ks_law_from_json(R"({"family":"rademacher"})", &rademacher) == KS_OK);
    REQUIRE(ks_law_from_json(R"({"family":"point_mass","m0":1.0})", &point1) == KS_OK);
  }
  ~Handles() {
    ks_kernel_free(det);
    ks_kernel_free(kac2);
    ks_law_free(rademacher);
    ks_law_free(point1);
  }
};

}  // namespace

TEST_CASE("version and error reporting") {
  CHECK(std::strlen(ks_version()) > 0);
  ks_kernel* out = nullptr;
  CHECK(ks_kernel_from_json(nullptr, &out) == KS_ERR_CONFIG);
  CHECK(std::strlen(ks_last_error()) > 0);
  CHECK(ks_kernel_from_json("{bad json", &out) == KS_ERR_CONFIG);
  CHECK(ks_kernel_from_json(R"({"law":"deterministic","atoms":[-1.0,0.5]})", &out) ==
        KS_ERR_CONFIG);
  CHECK(ks_kernel_preset("no-such-kernel", &out) == KS_ERR_CONFIG);
}

TEST_CASE("kernel surface: json, validation, spectral, conjugate exponent") {
  Handles h;
  char* json = nullptr;
  REQUIRE(ks_kernel_to_json(h.det, &json) == KS_OK);
  CHECK(std::string(json).find("deterministic") != std::string::npos);
  ks_string_free(json);

  int passed = -1;
  char* report = nullptr;
  REQUIRE(ks_kernel_validate(h.det, &passed, &report) == KS_OK);
  CHECK(passed == 1);
  CHECK(std::string(report).find("conditions") != std::string::npos);
  ks_string_free(report);

  ks_kernel* degenerate = nullptr;
  REQUIRE(ks_kernel_from_json(R"({"law":"deterministic","atoms":[1.0,0.0]})", &degenerate) ==
          KS_OK);
  REQUIRE(ks_kernel_validate(degenerate, &passed, nullptr) == KS_OK);
  CHECK(passed == 0);
  ks_kernel_free(degenerate);

  double S = 0.0, mu = 0.0;
  REQUIRE(ks_kernel_spectral(h.det, 1.0, &S, &mu) == KS_OK);
  CHECK(S == doctest::Approx(0.3));
  CHECK(mu == doctest::Approx(0.3));
  CHECK(ks_kernel_spectral(h.det, -1.0, &S, &mu) == KS_ERR_NUMERIC);

  double q_star = 0.0;
  REQUIRE(ks_kernel_conjugate_exponent(h.det, 1.0, 64.0, &q_star) == KS_OK);
  CHECK(std::isinf(q_star));
  ks_kernel* wide = nullptr;
  REQUIRE(ks_kernel_from_json(R"({"law":"deterministic","atoms":[1.2,0.5]})", &wide) == KS_OK);
  REQUIRE(ks_kernel_conjugate_exponent(wide, 1.0, 64.0, &q_star) == KS_OK);
  CHECK(q_star == doctest::Approx(12.483979).epsilon(1e-4));
  ks_kernel_free(wide);

  int exists = -1, conservative = -1;
  REQUIRE(ks_kernel_exists_delta_above(h.det, 1.0, &exists) == KS_OK);
  CHECK(exists == 1);
  REQUIRE(ks_kernel_is_conservative(h.kac2, 2.0, &conservative) == KS_OK);
  CHECK(conservative == 1);

  double cg = 0.0;
  REQUIRE(ks_kernel_c_gamma(h.det, 1.0, &cg) == KS_OK);
  CHECK(cg == doctest::Approx(1.0 / std::tgamma(1.3)).epsilon(1e-12));
}

TEST_CASE("law classification and stable CF") {
  Handles h;
  ks_profile* profile = nullptr;
  REQUIRE(ks_law_classify(h.rademacher, 2.0, &profile) == KS_OK);
  int h_case = -1;
  double k0 = 0.0, eta0 = 0.0;
  REQUIRE(ks_profile_info(profile, &h_case, &k0, &eta0) == KS_OK);
  CHECK(h_case == 2);  // H2
  double re = 0.0, im = 0.0;
  REQUIRE(ks_profile_stable_cf(profile, 1.0, &re, &im) == KS_OK);
  CHECK(re == doctest::Approx(std::exp(-0.5)));
  CHECK(im == doctest::Approx(0.0));
  ks_profile_free(profile);

  CHECK(ks_law_classify(h.rademacher, 1.5, &profile) == KS_ERR_HYPOTHESIS);
}

TEST_CASE("tree statistics surface") {
  Handles h;
  const int64_t sizes[2] = {1, 1};
  double p = 0.0;
  REQUIRE(ks_tree_shape_probability(2, sizes, 2, &p) == KS_OK);
  CHECK(p == doctest::Approx(1.0 / 3.0));

  double m_n = 0.0, asym = 0.0;
  REQUIRE(ks_tree_weight_norm(h.det, 1.0, 10, &m_n, &asym) == KS_OK);
  CHECK(m_n > 1.0);

  double ks_stat = 1.0;
  REQUIRE(ks_tree_subtree_fraction_ks(5, 2, 500, 2000, 2, &ks_stat) == KS_OK);
  CHECK(ks_stat < 0.06);

  const std::string path = (fs::temp_directory_path() / "kacsim_capi_stats.csv").string();
  double mean_mt = 0.0;
  REQUIRE(ks_tree_stats_csv(h.det, 1.0, 20, 2000, 7, 2, path.c_str(), &mean_mt) == KS_OK);
  CHECK(mean_mt == doctest::Approx(1.0).epsilon(0.1));
  CHECK(fs::exists(path));
  fs::remove(path);
}

TEST_CASE("monte carlo surface: nu, clock, batches") {
  std::vector<int64_t> nus(1000);
  REQUIRE(ks_sample_nu(3, 0.0, 2, 1000, nus.data()) == KS_OK);
  for (int64_t v : nus) CHECK(v == 0);

  double ks_stat = 1.0;
  int warn = -1;
  REQUIRE(ks_gamma_clock_check(11, 8.0, 2, 20000, &ks_stat, &warn) == KS_OK);
  CHECK(ks_stat < 0.03);
  CHECK(warn == 0);

  Handles h;
  ks_batch* batch = nullptr;
  REQUIRE(ks_sample_batch(21, h.det, h.rademacher, 1.0, 5000, 1.0, 2, &batch) == KS_OK);
  const double* values = nullptr;
  int64_t count = 0;
  REQUIRE(ks_batch_values(batch, &values, &count) == KS_OK);
  CHECK(count == 5000);

  // Determinism across worker counts, through the C surface.
  ks_batch* batch1 = nullptr;
  REQUIRE(ks_sample_batch(21, h.det, h.rademacher, 1.0, 5000, 1.0, 1, &batch1) == KS_OK);
  const double* values1 = nullptr;
  int64_t count1 = 0;
  REQUIRE(ks_batch_values(batch1, &values1, &count1) == KS_OK);
  REQUIRE(count1 == count);
  bool identical = true;
  for (int64_t i = 0; i < count; ++i) identical = identical && values[i] == values1[i];
  CHECK(identical);

  const std::string path = (fs::temp_directory_path() / "kacsim_capi_batch.csv").string();
  REQUIRE(ks_batch_write_csv(batch, path.c_str()) == KS_OK);
  ks_batch* back = nullptr;
  REQUIRE(ks_batch_read_csv(path.c_str(), &back) == KS_OK);
  const double* back_values = nullptr;
  int64_t back_count = 0;
  REQUIRE(ks_batch_values(back, &back_values, &back_count) == KS_OK);
  CHECK(back_count == count);
  CHECK(back_values[0] == values[0]);
  ks_batch_free(back);
  ks_batch_free(batch1);
  ks_batch_free(batch);
  fs::remove(path);
  fs::remove(path + ".meta.json");

  // Cost cap propagates as a numeric error.
  ks_batch* too_big = nullptr;
  CHECK(ks_sample_batch(21, h.det, h.rademacher, 30.0, 10, -1.0, 1, &too_big) == KS_ERR_NUMERIC);
}

TEST_CASE("wild series surface") {
  Handles h;
  double re = 0.0, im = 0.0, tail = 0.0;
  REQUIRE(ks_wild_solution(h.det, h.rademacher, 0.0, 1.2, 8, &re, &im, &tail) == KS_OK);
  CHECK(re == doctest::Approx(std::cos(1.2)));
  CHECK(tail == doctest::Approx(0.0));
  CHECK(ks_wild_solution(h.kac2, h.rademacher, 1.0, 1.0, 8, &re, &im, &tail) ==
        KS_ERR_UNSUPPORTED);
}

TEST_CASE("fixed point surface") {
  Handles h;
  ks_mixing* mixing = nullptr;
  REQUIRE(ks_solve_mixing(31, h.det, 1.0, 20000, 200, 5e-3, 2, 0, &mixing) == KS_OK);
  int converged = 0, sweeps = 0;
  double final_distance = 0.0;
  REQUIRE(ks_mixing_info(mixing, &converged, &sweeps, &final_distance) == KS_OK);
  CHECK(converged == 1);
  CHECK(sweeps > 0);

  const double* pop = nullptr;
  int64_t pop_size = 0;
  REQUIRE(ks_mixing_population(mixing, &pop, &pop_size) == KS_OK);
  CHECK(pop_size == 20000);

  double estimate = 0.0;
  int finite = 0;
  REQUIRE(ks_mixing_moment(mixing, 2.0, std::numeric_limits<double>::infinity(),
                           &estimate, &finite) == KS_OK);
  CHECK(finite == 1);
  CHECK(estimate == doctest::Approx(1.12).epsilon(0.08));

  double exact = 0.0;
  REQUIRE(ks_exact_second_moment(h.det, 1.0, &exact) == KS_OK);
  CHECK(exact == doctest::Approx(1.12).epsilon(1e-12));

  ks_profile* profile = nullptr;
  REQUIRE(ks_law_classify(h.point1, 1.0, &profile) == KS_OK);
  ks_batch* vinf = nullptr;
  REQUIRE(ks_sample_limit_batch(41, mixing, profile, 10000, 2, &vinf) == KS_OK);
  const double* values = nullptr;
  int64_t n = 0;
  REQUIRE(ks_batch_values(vinf, &values, &n) == KS_OK);
  double mean = 0.0;
  for (int64_t i = 0; i < n; ++i) mean += values[i];
  CHECK(mean / static_cast<double>(n) == doctest::Approx(1.0).epsilon(0.05));

  REQUIRE(ks_limit_cf(mixing, profile, 0.0, &estimate, &final_distance) == KS_OK);
  CHECK(estimate == doctest::Approx(1.0));

  const std::string path = (fs::temp_directory_path() / "kacsim_capi_mixing.csv").string();
  REQUIRE(ks_mixing_write_csv(mixing, path.c_str()) == KS_OK);
  ks_mixing* back = nullptr;
  REQUIRE(ks_mixing_read_csv(path.c_str(), &back) == KS_OK);
  const double* back_pop = nullptr;
  int64_t back_n = 0;
  REQUIRE(ks_mixing_population(back, &back_pop, &back_n) == KS_OK);
  CHECK(back_n == pop_size);
  ks_mixing_free(back);
  fs::remove(path);
  fs::remove(path + ".meta.json");

  ks_batch_free(vinf);
  ks_profile_free(profile);
  ks_mixing_free(mixing);
}

TEST_CASE("metrics surface") {
  // Two point-mass batches 0 and 2.5.
  std::vector<double> zeros(100, 0.0), shifted(100, 2.5);
  ks_batch* a = nullptr;
  ks_batch* b = nullptr;
  REQUIRE(ks_batch_from_values(zeros.data(), 100, &a) == KS_OK);
  REQUIRE(ks_batch_from_values(shifted.data(), 100, &b) == KS_OK);

  double xi = 0.0, re = 0.0, im = -1.0;
  REQUIRE(ks_empirical_cf(a, &xi, 1, &re, &im) == KS_OK);
  CHECK(re == doctest::Approx(1.0));
  CHECK(im == doctest::Approx(0.0));

  double d = 0.0, cost = 0.0;
  int exact = 0;
  REQUIRE(ks_wasserstein(a, b, 1.0, &d, &cost, &exact) == KS_OK);
  CHECK(d == doctest::Approx(2.5));
  CHECK(exact == 1);

  double two_sample = 0.0;
  REQUIRE(ks_ks_distance_two_sample(a, b, &two_sample) == KS_OK);
  CHECK(two_sample == doctest::Approx(1.0));

  double ks_ref = 0.0;
  REQUIRE(ks_ks_distance_ref(a, "std_normal", &ks_ref) == KS_OK);
  CHECK(ks_ref == doctest::Approx(0.5));
  CHECK(ks_ks_distance_ref(a, "what:1.0", &ks_ref) == KS_ERR_CONFIG);

  double z = 0.0;
  REQUIRE(ks_zolotarev_bound_constant(b, b, 1.0, &z) == KS_OK);
  CHECK(z == doctest::Approx(5.0));  // (2.5 + 2.5)/Gamma(2)

  // Synthetic exponential decay through the C fit.
  ks_kernel* det = nullptr;
  REQUIRE(ks_kernel_from_json(R"({"law":"deterministic","atoms":[0.6,0.7]})", &det) == KS_OK);
  std::vector<double> ts, ds;
  for (int t = 1; t <= 5; ++t) {
    ts.push_back(t);
    ds.push_back(2.0 * std::exp(-0.75 * t));
  }
  double slope = 0.0, r2 = 0.0, predicted = 0.0;
  int used = 0;
  REQUIRE(ks_fit_decay_rate(ts.data(), ds.data(), 5, det, 1.0, 2.0, 0.0, &slope, &r2, &predicted,
                            &used) == KS_OK);
  CHECK(slope == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(predicted == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(used == 5);
  ks_kernel_free(det);
  ks_batch_free(a);
  ks_batch_free(b);
}
