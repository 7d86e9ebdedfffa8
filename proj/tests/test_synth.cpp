#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "sblgamp/synth.hpp"

using namespace sblgamp;

namespace {

int nonzero_count(const Vector& v) {
  int c = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) c += v[i] != 0.0 ? 1 : 0;
  return c;
}

}  // namespace

TEST_CASE("gen_signal produces exactly k nonzeros on a fresh support") {
  for (const int k : {0, 1, 7, 20}) {
    TrialSpec spec;
    spec.n = 20;
    spec.m = 10;
    spec.k = k;
    Rng rng(99);
    const Vector x = gen_signal(spec, rng);
    CHECK(x.size() == 20);
    CHECK(nonzero_count(x) == k);
  }
}

TEST_CASE("rademacher nonzeros are unit magnitude") {
  TrialSpec spec;
  spec.n = 40;
  spec.m = 10;
  spec.k = 15;
  spec.nonzero_dist = NonzeroDist::rademacher;
  Rng rng(5);
  const Vector x = gen_signal(spec, rng);
  int count = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0) {
      CHECK(std::abs(x[i]) == 1.0);
      ++count;
    }
  }
  CHECK(count == 15);
}

TEST_CASE("signal support is uniform enough to hit every index") {
  // With 2000 draws of a 1-of-5 support, every index appears many times.
  std::set<int> seen;
  for (int rep = 0; rep < 200; ++rep) {
    TrialSpec spec;
    spec.n = 5;
    spec.m = 2;
    spec.k = 1;
    Rng rng(static_cast<std::uint64_t>(rep));
    const Vector x = gen_signal(spec, rng);
    for (int i = 0; i < 5; ++i) {
      if (x[i] != 0.0) seen.insert(i);
    }
  }
  CHECK(seen.size() == 5);
}

TEST_CASE("gen_matrix normalizes every column") {
  Rng rng(123);
  const Matrix a = gen_matrix(17, 33, rng);
  for (int j = 0; j < 33; ++j) {
    CHECK(a.col(j).norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  Rng rng1(7);
  const Matrix scalar = gen_matrix(1, 1, rng1);
  CHECK(std::abs(scalar(0, 0)) == 1.0);
}

TEST_CASE("identical specs give bitwise identical instances") {
  TrialSpec spec;
  spec.n = 30;
  spec.m = 12;
  spec.k = 5;
  spec.snr_db = 15.0;
  spec.seed = 777;
  const ProblemInstance a = make_instance(spec);
  const ProblemInstance b = make_instance(spec);
  CHECK(a.A == b.A);
  CHECK(a.y == b.y);
  CHECK(*a.truth == *b.truth);
  CHECK(*a.noise_var == *b.noise_var);
}

TEST_CASE("determinism fixture pins the generator streams") {
  // Values captured once from this generator design; any change to the
  // seeding chain or the distribution transforms shows up here.
  TrialSpec spec;
  spec.n = 10;
  spec.m = 5;
  spec.k = 3;
  spec.seed = 42;

  CHECK(derive_seed(42, 1) == 17532488217563185893ull);
  CHECK(derive_seed(42, 2) == 8238092213399105094ull);

  Rng srng(derive_seed(spec.seed, 1));
  const Vector x = gen_signal(spec, srng);
  CHECK(nonzero_count(x) == 3);
  CHECK(x[1] == -1.3322820181924364);
  CHECK(x[5] == 0.75170908050599616);
  CHECK(x[8] == -0.75385990110342238);

  const ProblemInstance inst = make_instance(spec);
  CHECK(inst.y[0] == -0.074359241605415738);
  CHECK(inst.y[4] == 1.0158653881234678);
  CHECK_FALSE(inst.noise_var.has_value());

  TrialSpec noisy = spec;
  noisy.snr_db = 20.0;
  const ProblemInstance ninst = make_instance(noisy);
  CHECK(ninst.y[0] == 0.023103843941704602);
  CHECK(*ninst.noise_var == 0.0069087353899410838);
}

TEST_CASE("noise uses an independent sub-stream") {
  TrialSpec spec;
  spec.n = 25;
  spec.m = 10;
  spec.k = 4;
  spec.seed = 31;
  const ProblemInstance clean = make_instance(spec);
  spec.snr_db = 10.0;
  const ProblemInstance noisy = make_instance(spec);
  // changing the SNR leaves A and x untouched
  CHECK(clean.A == noisy.A);
  CHECK(*clean.truth == *noisy.truth);
  CHECK(clean.y != noisy.y);
}

TEST_CASE("noiseless instances satisfy y = Ax exactly") {
  TrialSpec spec;
  spec.n = 15;
  spec.m = 6;
  spec.k = 2;
  spec.seed = 8;
  const ProblemInstance inst = make_instance(spec);
  CHECK(inst.y == inst.A * *inst.truth);
  CHECK_FALSE(inst.noise_var.has_value());

  spec.k = 0;
  const ProblemInstance zero = make_instance(spec);
  CHECK(zero.y.norm() == 0.0);
}

TEST_CASE("realized SNR concentrates near the requested level") {
  TrialSpec spec;
  spec.n = 400;
  spec.m = 160;
  spec.k = 30;
  spec.snr_db = 20.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    spec.seed = seed;
    const ProblemInstance inst = make_instance(spec);
    const Vector z = inst.A * *inst.truth;
    const Vector w = inst.y - z;
    const double snr_db = 10.0 * std::log10(z.squaredNorm() / w.squaredNorm());
    CHECK(snr_db >= 17.0);
    CHECK(snr_db <= 23.0);
  }
}

TEST_CASE("degenerate specs are rejected") {
  TrialSpec spec;
  spec.n = 10;
  spec.m = 4;
  spec.k = 0;
  spec.snr_db = 20.0;   // SNR undefined for a zero signal
  CHECK_THROWS_AS(spec.validate(), std::domain_error);
  CHECK_THROWS_AS(make_instance(spec), std::domain_error);

  spec.snr_db.reset();
  spec.k = 11;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}
