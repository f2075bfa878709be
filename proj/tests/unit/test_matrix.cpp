#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "doctest.h"
#include "eigenchaos/common.hpp"
#include "eigenchaos/matrix.hpp"
#include "eigenchaos/rng.hpp"

using namespace eigenchaos;

namespace {

// Scoped temp file: removed when the test leaves the block.
struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path(name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

SymmetricMatrix ones_off_diag_2x2() {
  SymmetricMatrix x(2);
  x.set(0, 0, 1.0);
  x.set(1, 1, 1.0);
  x.set(0, 1, 2.0);
  return x;
}

}  // namespace

TEST_SUITE("matrix") {

TEST_CASE("set maintains symmetry bit-exactly") {
  SymmetricMatrix x(3);
  x.set(0, 2, -1.75);
  CHECK(x(2, 0) == -1.75);
  CHECK(x(0, 2) == -1.75);
  CHECK(x.n() == 3);
  CHECK(x.max_abs() == 1.75);
  x.set(1, 1, 3.0);
  CHECK(x.frobenius_norm() == doctest::Approx(std::sqrt(2 * 1.75 * 1.75 + 9.0)).epsilon(1e-15));
}

TEST_CASE("same_bits and check_finite") {
  SymmetricMatrix x = ones_off_diag_2x2();
  SymmetricMatrix y = ones_off_diag_2x2();
  CHECK(x.same_bits(y));
  y.set(0, 1, 2.0 + 1e-16);  // rounds back to 2.0
  CHECK(x.same_bits(y));
  y.set(0, 1, 2.5);
  CHECK_FALSE(x.same_bits(y));
  x.check_finite();
  y.set(1, 1, std::numeric_limits<double>::quiet_NaN());
  CHECK_THROWS_AS(y.check_finite(), ValidationError);
}

TEST_CASE("variance profiles: goe, wigner, checkerboard") {
  const VarianceProfile goe = VarianceProfile::goe(3);
  CHECK(goe.at(0, 0) == 2.0);
  CHECK(goe.at(0, 1) == 1.0);
  CHECK_FALSE(goe.normalized);
  goe.validate();

  const VarianceProfile wig = VarianceProfile::wigner(4);
  CHECK(wig.at(2, 2) == 1.0);
  CHECK(wig.at(1, 3) == 1.0);
  CHECK(wig.normalized);
  wig.validate();

  const VarianceProfile cb = VarianceProfile::checkerboard(4);
  CHECK(cb.at(0, 0) == 0.5);
  CHECK(cb.at(0, 1) == 1.5);
  CHECK(cb.at(1, 1) == 0.5);
  CHECK(cb.normalized);
  cb.validate();

  CHECK_THROWS_AS((void)VarianceProfile::checkerboard(5), ValidationError);
  CHECK_THROWS_AS((void)VarianceProfile::checkerboard(4, 0.5, 1.6), ValidationError);
}

TEST_CASE("profile validation catches a broken normalization claim") {
  VarianceProfile wig = VarianceProfile::wigner(4);
  wig.sigma2[0] = 2.0;  // row sum is now n+1, but normalized is still set
  CHECK_THROWS_AS(wig.validate(), ValidationError);
}

TEST_CASE("entry laws parse, validate, and have unit moments") {
  CHECK(EntryLaw::parse("gaussian").name() == "gaussian");
  CHECK(EntryLaw::parse("uniform-scaled").name() == "uniform-scaled");
  CHECK(EntryLaw::parse("shifted-bimodal-smoothed").name() == "shifted-bimodal-smoothed");
  CHECK_THROWS_AS((void)EntryLaw::parse("cauchy"), ValidationError);

  EntryLaw bad = EntryLaw::parse("shifted-bimodal-smoothed");
  bad.separation = 1.5;
  CHECK_THROWS_AS(bad.validate(), ValidationError);

  const double sqrt3 = std::sqrt(3.0);
  for (const char* name : {"gaussian", "uniform-scaled", "shifted-bimodal-smoothed"}) {
    const EntryLaw law = EntryLaw::parse(name);
    Rng rng(7, 0);
    const int trials = 20000;
    double sum = 0.0;
    double sq = 0.0;
    for (int i = 0; i < trials; ++i) {
      const double x = law.sample(rng);
      if (law.kind == EntryLaw::Kind::uniform_scaled) {
        REQUIRE(std::abs(x) <= sqrt3);
      }
      sum += x;
      sq += x * x;
    }
    const double mean = sum / trials;
    CAPTURE(name);
    CHECK(std::abs(mean) < 5.0 / std::sqrt(static_cast<double>(trials)));
    CHECK(sq / trials - mean * mean == doctest::Approx(1.0).epsilon(0.06));
  }
}

TEST_CASE("goe sampler is the gaussian generalized-wigner sampler") {
  Rng a(13, 2);
  Rng b(13, 2);
  const SymmetricMatrix x = sample_goe(6, a);
  const SymmetricMatrix y = sample_generalized_wigner(VarianceProfile::goe(6), EntryLaw{}, b);
  CHECK(x.same_bits(y));
}

TEST_CASE("sampling is deterministic per stream") {
  Rng a(21, 5);
  Rng b(21, 5);
  CHECK(sample_goe(8, a).same_bits(sample_goe(8, b)));
}

TEST_CASE("eigh on a 2x2 with known spectrum") {
  const Spectrum s = eigh(ones_off_diag_2x2());
  REQUIRE(s.n == 2);
  CHECK(s.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(s.eigenvalues[1] == doctest::Approx(-1.0).epsilon(1e-14));
  const double r = 1.0 / std::sqrt(2.0);
  // Sign canonicalization: ties on |v_i| resolve toward the lowest index.
  CHECK(s.vec(0, 1) == doctest::Approx(r).epsilon(1e-14));
  CHECK(s.vec(1, 1) == doctest::Approx(r).epsilon(1e-14));
  CHECK(s.vec(0, 2) == doctest::Approx(r).epsilon(1e-14));
  CHECK(s.vec(1, 2) == doctest::Approx(-r).epsilon(1e-14));
  CHECK(s.operator_norm() == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("eigh on a diagonal matrix keeps coordinate vectors") {
  SymmetricMatrix x(2);
  x.set(0, 0, 3.0);
  x.set(1, 1, 1.0);
  const Spectrum s = eigh(x);
  CHECK(s.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(s.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.vec(0, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(s.vec(1, 1)) < 1e-14);
}

TEST_CASE("eigh reconstruction and orthonormality at n=16") {
  Rng rng(3, 0);
  const SymmetricMatrix x = sample_goe(16, rng);
  const Spectrum s = eigh(x);
  const double scale = std::max(1.0, s.operator_norm());

  double recon_err = 0.0;
  double ortho_err = 0.0;
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 16; ++j) {
      double sum = 0.0;
      for (int a = 1; a <= 16; ++a) sum += s.eigenvalues[a - 1] * s.vec(i, a) * s.vec(j, a);
      recon_err = std::max(recon_err, std::abs(sum - x(i, j)));
    }
  }
  for (int a = 1; a <= 16; ++a) {
    for (int b = 1; b <= 16; ++b) {
      double dot = 0.0;
      for (int i = 0; i < 16; ++i) dot += s.vec(i, a) * s.vec(i, b);
      ortho_err = std::max(ortho_err, std::abs(dot - (a == b ? 1.0 : 0.0)));
    }
  }
  CHECK(recon_err <= 1e-12 * scale);
  CHECK(ortho_err <= 1e-13);
  CHECK(std::is_sorted(s.eigenvalues.rbegin(), s.eigenvalues.rend()));
}

TEST_CASE("eigh_values agrees with the full decomposition") {
  Rng rng(5, 1);
  const SymmetricMatrix x = sample_goe(12, rng);
  const Spectrum s = eigh(x);
  const std::vector<double> vals = eigh_values(x);
  REQUIRE(vals.size() == 12);
  for (int i = 0; i < 12; ++i) {
    CHECK(vals[static_cast<std::size_t>(i)] ==
          doctest::Approx(s.eigenvalues[static_cast<std::size_t>(i)]).epsilon(1e-12));
  }
  CHECK(operator_norm(x) == doctest::Approx(s.operator_norm()).epsilon(1e-12));
}

TEST_CASE("matrix text round trip is bit-exact") {
  Rng rng(17, 0);
  const SymmetricMatrix x = sample_goe(7, rng);
  TempFile f("tmp_matrix_roundtrip.txt");
  write_matrix_text(f.path, x);
  const SymmetricMatrix y = read_matrix_text(f.path);
  CHECK(x.same_bits(y));
}

TEST_CASE("matrix reader rejects missing and asymmetric input") {
  CHECK_THROWS_AS((void)read_matrix_text("does_not_exist_anywhere.txt"), ValidationError);
  TempFile f("tmp_matrix_bad.txt");
  write_text_atomic(f.path, "2\n1 2\n3 1\n");
  CHECK_THROWS_AS((void)read_matrix_text(f.path), ValidationError);
}

TEST_CASE("write_text_atomic writes the full content") {
  TempFile f("tmp_atomic.txt");
  write_text_atomic(f.path, "hello\nworld\n");
  FILE* fp = std::fopen(f.path.c_str(), "rb");
  REQUIRE(fp != nullptr);
  char buf[64] = {0};
  const std::size_t got = std::fread(buf, 1, sizeof(buf) - 1, fp);
  std::fclose(fp);
  CHECK(std::string(buf, got) == "hello\nworld\n");
}

}  // TEST_SUITE
