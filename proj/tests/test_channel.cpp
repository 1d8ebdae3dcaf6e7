#include <gtest/gtest.h>

#include <thread>
#include <vector>

#include "gsm/channel.hpp"
#include "gsm/parallel.hpp"
#include "gsm/signal.hpp"

using namespace gsm;

TEST(Rng, SameStreamSameDraws) {
  RngStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    EXPECT_NE(x, c.next_u64());
    EXPECT_NE(x, d.next_u64());
  }
}

TEST(Channel, EntryStatistics) {
  RngStream rng(1, stream_id(StreamDomain::test, 0));
  const int draws = 1'000'000;
  const cmat h = sample_channel(1000, 1000, rng);
  ASSERT_EQ(h.size(), draws);
  double re2 = 0, im2 = 0, pow = 0;
  cplx mean{};
  for (Eigen::Index k = 0; k < h.size(); ++k) {
    const cplx v = h.data()[k];
    mean += v;
    re2 += v.real() * v.real();
    im2 += v.imag() * v.imag();
    pow += std::norm(v);
  }
  EXPECT_NEAR(pow / draws, 1.0, 0.01);
  EXPECT_NEAR(std::abs(mean) / draws, 0.0, 0.01);
  EXPECT_NEAR(re2 / draws, 0.5, 0.01);
  EXPECT_NEAR(im2 / draws, 0.5, 0.01);
}

TEST(Channel, Deterministic) {
  RngStream a(9, 3), b(9, 3);
  EXPECT_EQ(sample_channel(4, 6, a), sample_channel(4, 6, b));
  const cvec x = cvec::Ones(6);
  const cmat h = sample_channel(4, 6, a);
  const cmat h2 = sample_channel(4, 6, b);
  EXPECT_EQ(transmit(h, x, 0.3, a), transmit(h2, x, 0.3, b));
}

TEST(Transmit, NoiselessAndNoiseOnly) {
  RngStream rng(2, 0);
  const cmat h = sample_channel(5, 3, rng);
  const cvec x = cvec::Random(3);
  EXPECT_EQ((transmit(h, x, 0.0, rng) - h * x).norm(), 0.0);

  const double sigma2 = 0.37;
  const cvec zero = cvec::Zero(3);
  double acc = 0.0;
  const int n = 20000;
  for (int t = 0; t < n; ++t) acc += transmit(h, zero, sigma2, rng).squaredNorm();
  EXPECT_NEAR(acc / (n * 5) / sigma2, 1.0, 0.03);
}

TEST(Transmit, EnergyAdds) {
  RngStream rng(3, 0);
  const cmat h = sample_channel(4, 4, rng);
  const cvec x = cvec::Random(4);
  const double sigma2 = 0.8;
  double acc = 0.0;
  const int n = 100000;
  for (int t = 0; t < n; ++t) acc += transmit(h, x, sigma2, rng).squaredNorm();
  const double expected = (h * x).squaredNorm() + 4 * sigma2;
  EXPECT_NEAR(acc / n / expected, 1.0, 0.01);
}

TEST(Transmit, ChannelDoesNotDependOnData) {
  // The channel is drawn before the data is looked at: two frames with the
  // same stream and different x see the same H.
  RngStream a(5, 1), b(5, 1);
  const cmat ha = sample_channel(3, 3, a);
  const cmat hb = sample_channel(3, 3, b);
  EXPECT_EQ(ha, hb);
  const cvec ya = transmit(ha, cvec::Zero(3), 1.0, a);
  const cvec yb = transmit(hb, cvec::Ones(3), 1.0, b);
  EXPECT_NEAR((yb - ya - hb * cvec::Ones(3)).norm(), 0.0, 1e-12);
}

TEST(Parallel, CoversEveryIndexOnce) {
  for (const unsigned threads : {1u, 2u, 5u}) {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), threads, [&](std::uint64_t i) { hits[i] += 1; });
    for (const int h : hits) ASSERT_EQ(h, 1);
  }
  EXPECT_THROW(parallel_for(10, 3, [](std::uint64_t i) {
                 if (i == 4) throw std::runtime_error("boom");
               }),
               std::runtime_error);
}

TEST(Parallel, ThreadsFromEnvironment) {
  ::setenv(kThreadsEnv, "3", 1);
  EXPECT_EQ(resolve_threads(0), 3u);
  EXPECT_EQ(resolve_threads(2), 2u);
  ::setenv(kThreadsEnv, "junk", 1);
  EXPECT_GE(resolve_threads(0), 1u);
  ::unsetenv(kThreadsEnv);
}
