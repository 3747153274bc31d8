#include <cmath>
#include <random>

#include "doctest.h"
#include "tracerec/estimator.hpp"
#include "tracerec/oracle.hpp"
#include "tracerec/strings.hpp"

using namespace tracerec;

TEST_CASE("exact distribution of a single bit") {
  const ExactDistribution d = exact_trace_distribution(BitString("1"), ChannelParams(0.5));
  CHECK(d.entries.size() == 2);
  CHECK(d.probability(Trace("1")) == 0.5);
  CHECK(d.probability(Trace("")) == 0.5);
  CHECK(d.probability(Trace("0")) == 0.0);
}

TEST_CASE("exact distribution agrees with the counting formula") {
  const ExactDistribution d = exact_trace_distribution(BitString("11001"), ChannelParams(0.5));
  CHECK(d.probability(Trace("101")) == doctest::Approx(0.125).epsilon(1e-15));

  for (const double q : {0.2, 0.5, 0.9}) {
    const ChannelParams ch(q);
    for (std::size_t n = 0; n <= 8; ++n) {
      for (std::uint64_t xv = 0; xv < (std::uint64_t{1} << n); ++xv) {
        const BitString x = BitString::from_integer(xv, n);
        const ExactDistribution dist = exact_trace_distribution(x, ch);
        REQUIRE(std::abs(dist.total_mass() - 1.0) <= 1e-12);
        REQUIRE(dist.entries.size() <= (std::size_t{2} << n));
        for (const auto& [w, prob] : dist.entries) {
          REQUIRE(std::abs(prob - trace_probability(w, x, ch)) <= 1e-15);
        }
      }
    }
  }
}

TEST_CASE("exact expectations of simple statistics") {
  const BitString x("10110");
  const ChannelParams half(0.5);
  CHECK(exact_statistic_expectation(x, half, [](const Trace&) { return cplx{1.0, 0.0}; }).real() ==
        doctest::Approx(1.0).epsilon(1e-15));
  const cplx len = exact_statistic_expectation(x, half, [](const Trace& t) {
    return cplx{static_cast<double>(t.size()), 0.0};
  });
  CHECK(len.real() == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(len.imag() == 0.0);
}

TEST_CASE("size limit") {
  const BitString big(std::string(kOracleMaxLength + 1, '1'));
  CHECK_THROWS_AS(exact_trace_distribution(big, ChannelParams(0.5)), SizeLimitError);
  const BitString edge(std::string(kOracleMaxLength, '1'));
  const ExactDistribution d = exact_trace_distribution(edge, ChannelParams(0.5));
  CHECK(d.entries.size() == kOracleMaxLength + 1);
}

TEST_CASE("single-bit statistic expectation is the ones polynomial") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const BitString one("1");
  double worst = 0.0;
  for (const double q : {0.2, 0.5, 0.8}) {
    const ChannelParams ch(q);
    for (std::size_t n = 1; n <= 8; ++n) {
      for (std::uint64_t xv = 0; xv < (std::uint64_t{1} << n); ++xv) {
        const BitString x = BitString::from_integer(xv, n);
        const ExactDistribution dist = exact_trace_distribution(x, ch);
        cplx z{u(rng), u(rng)};
        if (std::abs(z) > 1.0) z /= std::abs(z);
        const EvalVector zv{z, {}};
        const cplx lhs =
            exact_statistic_expectation(dist, [&](const Trace& t) { return subsequence_statistic(t, one, zv, ch); });
        cplx rhs{0.0, 0.0};
        for (std::size_t k = 0; k < n; ++k) {
          if (x[k] == 1) rhs += ipow(z, k);
        }
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("Monte-Carlo frequencies agree with the exact law") {
  // 10^6 draws per source; exceedances of 4 sigma are counted against the
  // chance rate.
  constexpr std::uint64_t kDraws = 1000000;
  std::uint64_t values = 0;
  std::uint64_t outside = 0;
  double worst = 0.0;
  std::mt19937_64 pick(5);
  for (std::size_t n = 1; n <= 8; ++n) {
    for (int rep = 0; rep < 4; ++rep) {
      const BitString x = BitString::from_integer(pick() & ((std::uint64_t{1} << n) - 1), n);
      const ChannelParams ch(0.3 + 0.1 * rep);
      const TracePool pool = sample_pool(x, ch, kDraws, 1000 + n * 10 + rep);
      for (const auto& [w, prob] : exact_trace_distribution(x, ch).entries) {
        const auto it = pool.entries().find(w);
        const double observed = it == pool.entries().end() ? 0.0 : static_cast<double>(it->second);
        const double sigma = std::sqrt(kDraws * prob * (1.0 - prob));
        if (sigma == 0.0) continue;
        const double z = std::abs(observed - prob * kDraws) / sigma;
        worst = std::max(worst, z);
        ++values;
        if (z > 4.0) ++outside;
      }
    }
  }
  INFO("values " << values << " worst z " << worst);
  CHECK(outside <= 1);
  CHECK(worst < 5.5);
}

TEST_CASE("multinomial pool sampler") {
  const BitString x("0110100111");
  const ChannelParams ch(0.35);
  const TracePool a = sample_pool_multinomial(x, ch, 2000000, 4);
  const TracePool b = sample_pool_multinomial(x, ch, 2000000, 4);
  CHECK(a.total() == 2000000);
  CHECK(a.entries() == b.entries());
  CHECK(a.derived_seed() == b.derived_seed());
  CHECK(sample_pool_multinomial(x, ch, 2000000, 5).entries() != a.entries());
  double worst = 0.0;
  for (const auto& [w, prob] : exact_trace_distribution(x, ch).entries) {
    const auto it = a.entries().find(w);
    const double observed = it == a.entries().end() ? 0.0 : static_cast<double>(it->second);
    const double sigma = std::sqrt(2e6 * prob * (1.0 - prob));
    worst = std::max(worst, std::abs(observed - 2e6 * prob) / sigma);
  }
  CHECK(worst < 5.5);
  CHECK(sample_pool_multinomial(x, ch, 0, 1).total() == 0);
}
