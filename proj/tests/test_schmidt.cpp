#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "entangleid/schmidt.hpp"
#include "support.hpp"

using namespace entangleid;
using testutil::sv;
using testutil::thrown_code;
using testutil::vec;

TEST_CASE("normalize_and_sort sorts and rescales arbitrary weights") {
  SchmidtVector a = normalize_and_sort(vec({0.1, 0.4, 0.1, 0.4}));
  CHECK(a.probs().isApprox(vec({0.4, 0.4, 0.1, 0.1}), 1e-15));

  SchmidtVector b = normalize_and_sort(vec({2.0, 2.0, 1.0, 1.0}));
  CHECK(b[0] == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(b[2] == doctest::Approx(1.0 / 6).epsilon(1e-14));
  CHECK(b.probs().sum() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("normalize_and_sort rejects junk") {
  CHECK(thrown_code([] { normalize_and_sort(Eigen::VectorXd()); }) == Errc::EmptyInput);
  CHECK(thrown_code([] { normalize_and_sort(vec({1.0, -0.5})); }) == Errc::NegativeWeight);
  CHECK(thrown_code([] { normalize_and_sort(vec({0.0, 0.0})); }) == Errc::ZeroSum);
}

TEST_CASE("strict construction enforces normalization but forgives order") {
  CHECK(thrown_code([] { SchmidtVector::from_probabilities(vec({0.5, 0.5, 0.5})); }) ==
        Errc::NotNormalized);
  CHECK(thrown_code([] { SchmidtVector::from_probabilities(vec({1.5, -0.5})); }) ==
        Errc::NegativeWeight);
  SchmidtVector s = SchmidtVector::from_probabilities(vec({0.1, 0.9}));
  CHECK(s[0] == 0.9);
  // Deviation inside normalization_tol is accepted and rescaled away.
  SchmidtVector t = SchmidtVector::from_probabilities(vec({0.5, 0.5 + 1e-10}));
  CHECK(t.probs().sum() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("spectra of different length compare through zero padding") {
  CHECK(sv({0.5, 0.5}).approx_equal(sv({0.5, 0.5, 0.0}), 1e-12));
  CHECK_FALSE(sv({0.5, 0.5}).approx_equal(sv({0.6, 0.4}), 1e-12));
}

TEST_CASE("schmidt_spectrum of diagonal amplitude matrices") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
  m(0, 0) = std::sqrt(0.5);
  m(1, 1) = std::sqrt(0.25);
  m(2, 2) = std::sqrt(0.25);
  auto state = BipartitePureState::from_amplitudes(m);
  CHECK(schmidt_spectrum(state).probs().isApprox(vec({0.5, 0.25, 0.25}), 1e-12));
}

TEST_CASE("schmidt_spectrum recognizes product and maximally entangled states") {
  Eigen::MatrixXcd prod = Eigen::MatrixXcd::Zero(2, 2);
  prod(0, 0) = 1.0;
  auto sp = schmidt_spectrum(BipartitePureState::from_amplitudes(prod));
  CHECK(sp[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sp[1] == doctest::Approx(0.0).epsilon(1e-14));

  Eigen::MatrixXcd bell = Eigen::MatrixXcd::Identity(2, 2) / std::sqrt(2.0);
  auto sb = schmidt_spectrum(BipartitePureState::from_amplitudes(bell));
  CHECK(sb.probs().isApprox(vec({0.5, 0.5}), 1e-12));
}

TEST_CASE("schmidt_spectrum of a rectangular state has min-dimension length") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 5);
  m(0, 1) = std::sqrt(0.7);
  m(1, 3) = std::complex<double>(0.0, std::sqrt(0.3));
  auto s = schmidt_spectrum(BipartitePureState::from_amplitudes(m));
  CHECK(s.dim() == 2);
  CHECK(s.probs().isApprox(vec({0.7, 0.3}), 1e-12));
}

TEST_CASE("state construction rejects unnormalized amplitudes") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(2, 2);  // norm sqrt(2)
  CHECK(thrown_code([&] { BipartitePureState::from_amplitudes(m); }) == Errc::NotNormalized);
  CHECK(thrown_code([] { BipartitePureState::from_amplitudes(Eigen::MatrixXcd()); }) ==
        Errc::EmptyInput);
}

TEST_CASE("bhattacharyya_sq basics") {
  SchmidtVector p = sv({0.5, 0.25, 0.25, 0.0});
  CHECK(bhattacharyya_sq(p, p) == doctest::Approx(1.0).epsilon(1e-15));

  // Hand expansion against the closed form 0.65 + 2 sqrt(0.03).
  SchmidtVector q = sv({8.0 / 15, 4.0 / 15, 0.2, 0.0});
  double direct = std::sqrt(0.5 * 8.0 / 15) + std::sqrt(0.25 * 4.0 / 15) + std::sqrt(0.25 * 0.2);
  CHECK(bhattacharyya_sq(p, q) == doctest::Approx(direct * direct).epsilon(1e-15));
  CHECK(bhattacharyya_sq(p, q) == doctest::Approx(0.65 + 2.0 * std::sqrt(0.03)).epsilon(1e-14));

  // Symmetry and zero padding.
  CHECK(bhattacharyya_sq(p, q) == bhattacharyya_sq(q, p));
  CHECK(bhattacharyya_sq(sv({1.0}), sv({0.5, 0.5})) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("fidelity_pure matches the inner product modulus squared") {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2);
  a(0, 0) = 1.0;
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(2, 2);
  b(0, 0) = std::complex<double>(0.0, 1.0);  // same state up to global phase
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(2, 2);
  c(1, 1) = 1.0;

  auto sa = BipartitePureState::from_amplitudes(a);
  auto sb = BipartitePureState::from_amplitudes(b);
  auto sc = BipartitePureState::from_amplitudes(c);
  CHECK(fidelity_pure(sa, sa) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(fidelity_pure(sa, sb) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(fidelity_pure(sa, sc) == doctest::Approx(0.0).epsilon(1e-15));

  Eigen::MatrixXcd wide = Eigen::MatrixXcd::Zero(2, 3);
  wide(0, 0) = 1.0;
  auto sw = BipartitePureState::from_amplitudes(wide);
  CHECK(thrown_code([&] { fidelity_pure(sa, sw); }) == Errc::DimensionMismatch);
}

TEST_CASE("codiagonal states with matched order realize the overlap ceiling") {
  SchmidtVector p = sv({0.5, 0.3, 0.2});
  SchmidtVector q = sv({0.6, 0.3, 0.1});
  Eigen::MatrixXcd mp = Eigen::MatrixXcd::Zero(3, 3), mq = Eigen::MatrixXcd::Zero(3, 3);
  for (int i = 0; i < 3; ++i) {
    mp(i, i) = std::sqrt(p[i]);
    mq(i, i) = std::sqrt(q[i]);
  }
  double f = fidelity_pure(BipartitePureState::from_amplitudes(mp),
                           BipartitePureState::from_amplitudes(mq));
  CHECK(f == doctest::Approx(bhattacharyya_sq(p, q)).epsilon(1e-13));
}

TEST_CASE("tensor spectrum equals the sorted pairwise products") {
  SchmidtVector a = sv({0.4, 0.4, 0.1, 0.1});
  SchmidtVector b = sv({0.6, 0.4});
  SchmidtVector t = tensor(a, b);

  // Independent enumeration of the products.
  std::vector<double> expect;
  for (Eigen::Index i = 0; i < a.dim(); ++i)
    for (Eigen::Index j = 0; j < b.dim(); ++j) expect.push_back(a[i] * b[j]);
  std::sort(expect.begin(), expect.end(), std::greater<>());
  REQUIRE(t.dim() == static_cast<Eigen::Index>(expect.size()));
  for (Eigen::Index i = 0; i < t.dim(); ++i)
    CHECK(t[i] == doctest::Approx(expect[static_cast<std::size_t>(i)]).epsilon(1e-14));

  CHECK(t.probs().isApprox(vec({0.24, 0.24, 0.16, 0.16, 0.06, 0.06, 0.04, 0.04}), 1e-12));
  CHECK(tensor(a, sv({1.0})).approx_equal(a, 1e-14));
}

TEST_CASE("rng streams are reproducible and substreams independent") {
  RngStream a(42, 7), b(42, 7), c(42, 8);
  bool same = true, differ = false;
  for (int i = 0; i < 64; ++i) {
    std::uint64_t x = a.next_u64();
    same = same && (x == b.next_u64());
    differ = differ || (x != c.next_u64());
  }
  CHECK(same);
  CHECK(differ);
  RngStream d = a.substream(8);
  RngStream e(42, 8);
  CHECK(d.next_u64() == e.next_u64());
}

TEST_CASE("gaussian samples have roughly standard moments") {
  RngStream rng(123);
  const int n = 40000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    double g = rng.gaussian();
    sum += g;
    sq += g * g;
  }
  CHECK(std::abs(sum / n) < 0.03);
  CHECK(std::abs(sq / n - 1.0) < 0.05);
}

TEST_CASE("sampled states reproduce the requested spectrum") {
  RngStream rng(2024);
  SchmidtVector spec = sv({0.5, 0.25, 0.25});
  for (int rep = 0; rep < 5; ++rep) {
    auto state = sample_state_with_spectrum(spec, rng);
    CHECK(schmidt_spectrum(state).approx_equal(spec, 1e-9));
  }
  // Rectangular carrier, spectrum padded with zeros by the extra dimensions.
  auto wide = sample_state_with_spectrum(spec, 3, 5, rng);
  CHECK(wide.dim_a() == 3);
  CHECK(wide.dim_b() == 5);
  CHECK(schmidt_spectrum(wide).approx_equal(spec, 1e-9));

  CHECK(thrown_code([&] { sample_state_with_spectrum(spec, 2, 5, rng); }) ==
        Errc::DimensionTooSmall);
}

TEST_CASE("sampling a flat rank-1 spectrum gives a product state") {
  RngStream rng(5);
  auto state = sample_state_with_spectrum(sv({1.0, 0.0}), rng);
  auto spec = schmidt_spectrum(state);
  CHECK(spec[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("same stream id reproduces amplitudes, different id varies them") {
  SchmidtVector spec = sv({0.7, 0.2, 0.1});
  RngStream r1(99, 1), r2(99, 1), r3(99, 2);
  auto s1 = sample_state_with_spectrum(spec, r1);
  auto s2 = sample_state_with_spectrum(spec, r2);
  auto s3 = sample_state_with_spectrum(spec, r3);
  CHECK((s1.amplitudes() - s2.amplitudes()).norm() == 0.0);
  CHECK((s1.amplitudes() - s3.amplitudes()).norm() > 1e-3);
  CHECK(schmidt_spectrum(s3).approx_equal(spec, 1e-9));
}

TEST_CASE("core operations instantiate for float") {
  using SVf = SchmidtVectorT<float>;
  Eigen::VectorXf w(3);
  w << 2.0f, 1.0f, 1.0f;
  SVf p = normalize_and_sort(w);
  CHECK(p[0] == doctest::Approx(0.5f));
  CHECK(bhattacharyya_sq(p, p) == doctest::Approx(1.0f).epsilon(1e-6));
}
