#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <set>

#include "psdns/mesh.hpp"

using namespace psdns;

TEST_CASE("dft_frequencies ordering") {
  CHECK(dft_frequencies(8) == std::vector<long>{0, 1, 2, 3, -4, -3, -2, -1});
  CHECK(dft_frequencies(2) == std::vector<long>{0, -1});
  CHECK(dft_frequencies(4) == std::vector<long>{0, 1, -2, -1});
  CHECK_THROWS_AS(dft_frequencies(7), std::invalid_argument);
  CHECK_THROWS_AS(dft_frequencies(0), std::invalid_argument);
}

TEST_CASE("half_frequencies flips the Nyquist sign") {
  CHECK(half_frequencies(8) == std::vector<long>{0, 1, 2, 3, 4});
  CHECK(half_frequencies(2) == std::vector<long>{0, 1});
  std::vector<long> expected16{0, 1, 2, 3, 4, 5, 6, 7, 8};
  CHECK(half_frequencies(16) == expected16);
}

TEST_CASE("decomposition validation") {
  CHECK_NOTHROW(Decomposition::slab(4).validate(8));
  CHECK_THROWS_AS(Decomposition::slab(3).validate(8), std::invalid_argument);
  CHECK_THROWS_AS(Decomposition::slab(16).validate(8), std::invalid_argument);
  CHECK_NOTHROW(Decomposition::pencil(4, 2).validate(16));
  CHECK_THROWS_AS(Decomposition::pencil(4, 3).validate(16), std::invalid_argument);
  // N/p1 must be even so the half spectrum splits evenly
  CHECK_THROWS_AS(Decomposition::pencil(8, 8).validate(8), std::invalid_argument);
  Decomposition two_rank_serial{DecompKind::Serial, 2};
  CHECK_THROWS_AS(two_rank_serial.validate(8), std::invalid_argument);
}

TEST_CASE("physical mesh blocks") {
  SUBCASE("serial N=4") {
    auto x = build_physical_mesh<double>(4, Decomposition::serial(), {0, 0, 0});
    const double pi = std::numbers::pi;
    for (int a = 0; a < 3; ++a) {
      REQUIRE(x[a].size() == 4);
      CHECK(x[a][0] == doctest::Approx(0.0));
      CHECK(x[a][1] == doctest::Approx(pi / 2));
      CHECK(x[a][2] == doctest::Approx(pi));
      CHECK(x[a][3] == doctest::Approx(3 * pi / 2));
    }
  }
  SUBCASE("slab N=8 M=4 rank 2 owns indices 4,5 on axis 0") {
    auto d = Decomposition::slab(4);
    auto x = build_physical_mesh<double>(8, d, rank_info(d, 2));
    const double pi = std::numbers::pi;
    REQUIRE(x[0].size() == 2);
    CHECK(x[0][0] == doctest::Approx(pi));
    CHECK(x[0][1] == doctest::Approx(5 * pi / 4));
    CHECK(x[1].size() == 8);
    CHECK(x[2].size() == 8);
  }
  SUBCASE("pencil N=16 p1=p2=2 rank 3 owns the upper x and y halves") {
    auto d = Decomposition::pencil(4, 2);
    auto info = rank_info(d, 3);
    CHECK(info.xz_rank == 1);
    CHECK(info.xy_rank == 1);
    auto l = physical_layout(16, d, info);
    CHECK(l.offset == std::array<std::size_t, 3>{8, 8, 0});
    CHECK(l.local == std::array<std::size_t, 3>{8, 8, 16});
  }
}

TEST_CASE("physical mesh blocks tile the box exactly once") {
  for (auto d : {Decomposition::slab(4), Decomposition::pencil(4, 2)}) {
    const std::size_t n = 8;
    std::set<std::array<std::size_t, 3>> seen;
    for (int r = 0; r < d.ranks; ++r) {
      auto l = physical_layout(n, d, rank_info(d, r));
      for (std::size_t i = 0; i < l.local[0]; ++i)
        for (std::size_t j = 0; j < l.local[1]; ++j)
          for (std::size_t k = 0; k < l.local[2]; ++k) {
            auto ins = seen.insert({l.offset[0] + i, l.offset[1] + j, l.offset[2] + k});
            CHECK(ins.second);  // disjoint
          }
    }
    CHECK(seen.size() == n * n * n);
  }
}

TEST_CASE("wave tables: K_over_K2 zero-mode guard and values") {
  auto d = Decomposition::serial();
  auto t = build_wave_tables<double>(8, d, {0, 0, 0}, DealiasRule::Appendix);
  // k = (0,0,0)
  CHECK(t.k_over_k2[0][0] == 0.0);
  CHECK(t.k_over_k2[1][0] == 0.0);
  CHECK(t.k_over_k2[2][0] == 0.0);
  // k = (1,2,2): |k|^2 = 9
  const std::size_t m = t.index(1, 2, 2);
  CHECK(t.k2[m] == 9);
  CHECK(t.k_over_k2[0][m] == doctest::Approx(1.0 / 9));
  CHECK(t.k_over_k2[1][m] == doctest::Approx(2.0 / 9));
  CHECK(t.k_over_k2[2][m] == doctest::Approx(2.0 / 9));
}

TEST_CASE("dealias cutoffs disagree between the two rules at N=8") {
  auto d = Decomposition::serial();
  auto appendix = build_wave_tables<double>(8, d, {0, 0, 0}, DealiasRule::Appendix);
  auto maintext = build_wave_tables<double>(8, d, {0, 0, 0}, DealiasRule::MainText);
  // Appendix: kmax = 10/3, so |k|=3 kept, |k|=4 rejected.
  CHECK(appendix.dealias[appendix.index(3, 0, 0)] == 1);
  CHECK(appendix.dealias[appendix.index(4, 0, 0)] == 0);  // kx = -4
  // Main text: kmax = 8/3, so |k|=3 rejected.
  CHECK(maintext.dealias[maintext.index(3, 0, 0)] == 0);
}

TEST_CASE("K2*K_over_K2 == K away from the zero mode") {
  for (auto d : {Decomposition::serial(), Decomposition::slab(2), Decomposition::pencil(4, 2)}) {
    const std::size_t n = 8;
    for (int r = 0; r < d.ranks; ++r) {
      auto t = build_wave_tables<double>(n, d, rank_info(d, r), DealiasRule::Appendix);
      std::size_t m = 0;
      for (std::size_t i = 0; i < t.layout.local[0]; ++i)
        for (std::size_t j = 0; j < t.layout.local[1]; ++j)
          for (std::size_t k = 0; k < t.layout.local[2]; ++k, ++m)
            for (int a = 0; a < 3; ++a) {
              const double lhs = static_cast<double>(t.k2[m]) * t.k_over_k2[a][m];
              if (t.k2[m] == 0)
                CHECK(t.k_over_k2[a][m] == 0.0);
              else
                CHECK(lhs == doctest::Approx(static_cast<double>(t.k(a, i, j, k))).epsilon(1e-14));
            }
    }
  }
}

TEST_CASE("local K blocks reconstruct the serial wavevector mesh") {
  const std::size_t n = 8;
  auto serial = build_wave_tables<double>(n, Decomposition::serial(), {0, 0, 0},
                                          DealiasRule::Appendix);
  for (auto d : {Decomposition::slab(2), Decomposition::slab(4), Decomposition::pencil(2, 2),
                 Decomposition::pencil(4, 2)}) {
    for (int r = 0; r < d.ranks; ++r) {
      auto t = build_wave_tables<double>(n, d, rank_info(d, r), DealiasRule::Appendix);
      for (std::size_t i = 0; i < t.layout.local[0]; ++i)
        for (std::size_t j = 0; j < t.layout.local[1]; ++j)
          for (std::size_t k = 0; k < t.layout.local[2]; ++k)
            for (int a = 0; a < 3; ++a)
              CHECK(t.k(a, i, j, k) ==
                    serial.k(a, i + t.layout.offset[0], j + t.layout.offset[1],
                             k + t.layout.offset[2]));
    }
  }
}

TEST_CASE("dealias mask is symmetric under k -> -k on represented modes") {
  const std::size_t n = 8;
  auto t = build_wave_tables<double>(n, Decomposition::serial(), {0, 0, 0},
                                     DealiasRule::Appendix);
  auto full = dft_frequencies(n);
  // Mirror (kx,ky,kz) -> (-kx,-ky,kz) stays within the half spectrum.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n / 2 + 1; ++k) {
        const long mi = full[i] == -4 ? -4 : -full[i];  // -N/2 maps to itself
        const long mj = full[j] == -4 ? -4 : -full[j];
        std::size_t ii = 0, jj = 0;
        for (std::size_t q = 0; q < n; ++q) {
          if (full[q] == mi) ii = q;
          if (full[q] == mj) jj = q;
        }
        CHECK(t.dealias[t.index(i, j, k)] == t.dealias[t.index(ii, jj, k)]);
      }
}
