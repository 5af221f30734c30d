#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "corpus.hpp"
#include "latnet/latsig.hpp"
#include "latnet/residuated.hpp"

using namespace latnet;

namespace {

Signal random_signal(const FiniteLattice& L, SplitMix64& rng, bool integer = false) {
  Signal f(L.m);
  for (auto& v : f)
    v = integer ? double(int(rng.below(19)) - 9) : (rng.next_double() * 4 - 2);
  return f;
}

}  // namespace

TEST_CASE("shifts read the meet/join translate and compose accordingly") {
  SplitMix64 rng(1);
  for (auto& L : corpus::small_lattices(8)) {
    auto f = random_signal(*L, rng);
    for (int a = 0; a < L->m; ++a) {
      auto tf = shift(*L, a, f, ShiftFlavor::meet);
      auto jf = shift(*L, a, f, ShiftFlavor::join);
      for (int y = 0; y < L->m; ++y) {
        CHECK(tf[y] == f[L->meet_of(a, y)]);
        CHECK(jf[y] == f[L->join_of(a, y)]);
      }
      // Composition: T_a T_b = T_{a meet b} (dually for joins).
      for (int b = 0; b < L->m; ++b) {
        CHECK(shift(*L, a, shift(*L, b, f, ShiftFlavor::meet), ShiftFlavor::meet) ==
              shift(*L, L->meet_of(a, b), f, ShiftFlavor::meet));
        CHECK(shift(*L, a, shift(*L, b, f, ShiftFlavor::join), ShiftFlavor::join) ==
              shift(*L, L->join_of(a, b), f, ShiftFlavor::join));
      }
      // Idempotence.
      CHECK(shift(*L, a, tf, ShiftFlavor::meet) == tf);
    }
    // Shift by top (meet) and by bot (join) are the identity.
    CHECK(shift(*L, L->top, f, ShiftFlavor::meet) == f);
    CHECK(shift(*L, L->bot, f, ShiftFlavor::join) == f);
  }
  CHECK_THROWS_AS(shift(*chain_lattice(3), 0, Signal{1.0, 2.0}, ShiftFlavor::meet),
                  ShapeMismatch);
}

TEST_CASE("convolution matches its direct formula; one-hot filters shift") {
  SplitMix64 rng(2);
  for (auto& L : corpus::small_lattices(8)) {
    auto f = random_signal(*L, rng, true);
    auto h = random_signal(*L, rng, true);
    for (auto flavor : {ShiftFlavor::meet, ShiftFlavor::join}) {
      auto conv = convolve(*L, h, f, flavor);
      for (int y = 0; y < L->m; ++y) {
        double want = 0;
        for (int x = 0; x < L->m; ++x)
          want += h[x] * f[flavor == ShiftFlavor::meet ? L->meet_of(x, y) : L->join_of(x, y)];
        CHECK(conv[y] == doctest::Approx(want).epsilon(1e-12));
      }
    }
    // one_hot(top) is the identity filter for the meet flavor.
    CHECK(convolve(*L, one_hot(*L, L->top), f, ShiftFlavor::meet) == f);
    CHECK(convolve(*L, one_hot(*L, L->bot), f, ShiftFlavor::join) == f);
    // one_hot(a) shifts.
    for (int a = 0; a < L->m; ++a)
      CHECK(convolve(*L, one_hot(*L, a), f, ShiftFlavor::meet) ==
            shift(*L, a, f, ShiftFlavor::meet));
    // Filters commute (exact on integer signals).
    auto h2 = random_signal(*L, rng, true);
    auto lhs = convolve(*L, h, convolve(*L, h2, f, ShiftFlavor::meet), ShiftFlavor::meet);
    auto rhs = convolve(*L, h2, convolve(*L, h, f, ShiftFlavor::meet), ShiftFlavor::meet);
    for (int y = 0; y < L->m; ++y) CHECK(lhs[y] == doctest::Approx(rhs[y]).epsilon(1e-12));
  }
}

TEST_CASE("upset indicators are meet-shift eigenvectors; downsets are join-shift ones") {
  for (auto& L : corpus::small_lattices(8)) {
    for (int y = 0; y < L->m; ++y) {
      auto up = upset_indicator(*L, y);
      auto down = downset_indicator(*L, y);
      for (int x = 0; x < L->m; ++x) {
        CHECK(up[x] == (L->le(y, x) ? 1.0 : 0.0));
        CHECK(down[x] == (L->le(x, y) ? 1.0 : 0.0));
      }
      for (int a = 0; a < L->m; ++a) {
        auto tu = shift(*L, a, up, ShiftFlavor::meet);
        double lam = L->le(y, a) ? 1.0 : 0.0;
        for (int x = 0; x < L->m; ++x) CHECK(tu[x] == lam * up[x]);
        auto td = shift(*L, a, down, ShiftFlavor::join);
        double mu = L->le(a, y) ? 1.0 : 0.0;
        for (int x = 0; x < L->m; ++x) CHECK(td[x] == mu * down[x]);
      }
    }
  }
}

TEST_CASE("the five-element example has the frozen basis matrices") {
  auto L = corpus::five_example();
  auto B = eigenbasis(*L);
  CHECK(B.m == 5);
  CHECK(B.order == std::vector<int>{0, 1, 2, 3, 4});
  const std::vector<std::uint8_t> bMeet = {
      1, 1, 1, 1, 1,  //
      0, 1, 1, 1, 1,  //
      0, 0, 1, 0, 1,  //
      0, 0, 0, 1, 1,  //
      0, 0, 0, 0, 1,
  };
  CHECK(B.b_meet == bMeet);
  const std::vector<long long> theta = {
      1, -1, 0,  0,  0,  //
      1, 0,  -1, -1, 1,  //
      1, 0,  0,  -1, 0,  //
      1, 0,  -1, 0,  0,  //
      1, 0,  0,  0,  0,
  };
  CHECK(B.theta == theta);
  // Exact evaluation on a probe vector.
  auto out = apply_theta(B, std::vector<long long>{1, 10, 100, 1000, 10000});
  CHECK(out == std::vector<long long>{-9, 8901, -999, -99, 1});
}

TEST_CASE("basis matrices: downset columns, transpose pairing, exact inversion") {
  for (auto& L : corpus::small_lattices(8)) {
    auto B = eigenbasis(*L);
    const int m = B.m;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        CHECK(B.b_meet[std::size_t(i) * m + j] ==
              (L->le(B.order[i], B.order[j]) ? 1 : 0));
        CHECK(B.b_join[std::size_t(i) * m + j] == B.b_meet[std::size_t(j) * m + i]);
      }
    // b_meet is unit upper triangular in extension order.
    for (int i = 0; i < m; ++i) {
      CHECK(B.b_meet[std::size_t(i) * m + i] == 1);
      for (int j = 0; j < i; ++j) CHECK(B.b_meet[std::size_t(i) * m + j] == 0);
    }
    // theta * b_meet = b_join, exactly, in integers.
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        long long acc = 0;
        for (int k = 0; k < m; ++k)
          acc += B.theta[std::size_t(i) * m + k] * B.b_meet[std::size_t(k) * m + j];
        CHECK(acc == B.b_join[std::size_t(i) * m + j]);
      }
  }
  // The guard trips on oversized lattices.
  std::vector<LatticePtr> tenCopies(10, chain_lattice(2));
  auto big = product_lattice(tenCopies);
  CHECK(big->m == 1024);
  CHECK_THROWS_AS(eigenbasis(*big), TooLarge);
}

TEST_CASE("the double overload of apply_theta matches the integer one") {
  auto L = corpus::five_example();
  auto B = eigenbasis(*L);
  std::vector<double> f = {0.5, -1.25, 2.0, 3.5, -0.75};
  auto got = apply_theta(B, f);
  for (int i = 0; i < 5; ++i) {
    double want = 0;
    for (int k = 0; k < 5; ++k) want += double(B.theta[std::size_t(i) * 5 + k]) * f[k];
    CHECK(got[i] == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("theta intertwines the two shift families only on the trivial lattice") {
  CHECK(theta_intertwines(*chain_lattice(1)));
  for (auto& L : corpus::small_lattices(8))
    if (L->m > 1) CHECK_FALSE(theta_intertwines(*L));
}

TEST_CASE("residuated convolution matches a direct loop on a chain with max-plus") {
  auto K = chain_lattice(6);
  auto R = maxplus_algebra();
  SplitMix64 rng(3);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> f(6), h(6);
    for (auto& v : f) v = rng.next_double() * 10 - 5;
    for (auto& v : h) v = rng.next_double() * 10 - 5;
    auto got = residuated_convolve(*K, R, h, f);
    for (int x = 0; x < 6; ++x) {
      double want = xr::neg_inf;
      for (int y = 0; y < 6; ++y) want = std::max(want, h[y] + f[std::min(x, y)]);
      CHECK(xr::approx_eq(got[x], want));
    }
  }
}

TEST_CASE("residuated convolution and its adjoint satisfy the adjunction") {
  SplitMix64 rng(4);
  std::vector<ScalarResiduated> Rs = {maxplus_algebra(), tnorm_product(),
                                      tnorm_lukasiewicz()};
  for (auto& L : corpus::small_lattices(6)) {
    for (const auto& R : Rs) {
      auto sample = [&]() {
        std::vector<double> v(L->m);
        for (auto& t : v) {
          if (R.name == "maxplus") {
            double u = rng.next_double();
            t = u < 0.1 ? xr::neg_inf : (u > 0.9 ? xr::pos_inf : rng.next_double() * 6 - 3);
          } else {
            t = rng.next_double();
          }
        }
        return v;
      };
      auto f = sample();
      for (int t = 0; t < 25; ++t) {
        auto h = sample(), g = sample();
        auto conv = residuated_convolve(*L, R, h, f);
        auto adj = residuated_convolve_adjoint(*L, R, g, f);
        bool left = true, right = true;
        for (int x = 0; x < L->m; ++x) left = left && xr::approx_le(conv[x], g[x]);
        for (int y = 0; y < L->m; ++y) right = right && xr::approx_le(h[y], adj[y]);
        CHECK(left == right);
        // Triangle law: conv(adj(conv(h))) = conv(h) within tolerance.
        auto cac = residuated_convolve(*L, R, residuated_convolve_adjoint(*L, R, conv, f), f);
        for (int x = 0; x < L->m; ++x) CHECK(xr::approx_eq(cac[x], conv[x]));
      }
    }
  }
}

TEST_CASE("signal CSV round-trips, quotes labels, and accepts infinities") {
  auto L = powerset_lattice({"a", "b"});  // labels contain commas: quoting path
  Signal f = {0.5, xr::neg_inf, xr::pos_inf, -2.25};
  std::ostringstream out;
  write_signal_csv(out, *L, f);
  auto text = out.str();
  CHECK(text.find("element_label,value") == 0);
  CHECK(text.find("\"{a,b}\"") != std::string::npos);  // quoted label
  CHECK(text.find("-inf") != std::string::npos);
  std::istringstream in(text);
  auto back = read_signal_csv(in, *L);
  CHECK(back == f);
  // Order independence: shuffled rows bind by label.
  std::istringstream shuffled(
      "element_label,value\n\"{a,b}\",-2.25\n{b},inf\n{}[MARK]0.5\n{a},-inf\n");
  // Replace the marker with a comma (kept literal above for clarity).
  auto s = shuffled.str();
  s.replace(s.find("[MARK]"), 6, ",");
  std::istringstream in2(s);
  auto g = read_signal_csv(in2, *L);
  CHECK(g == f);
}

TEST_CASE("signal CSV rejects malformed input with diagnostics") {
  auto L = powerset_lattice(1);
  auto parse = [&](const std::string& text) {
    std::istringstream in(text);
    return read_signal_csv(in, *L);
  };
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("wrong,header\n{},0\n{0},1\n"), ParseError);
  CHECK_THROWS_AS(parse("element_label,value\n{},0\n"), ParseError);            // missing row
  CHECK_THROWS_AS(parse("element_label,value\n{},0\n{},1\n"), ParseError);      // duplicate
  CHECK_THROWS_AS(parse("element_label,value\n{},0\n{oops},1\n"), ParseError);  // unknown
  CHECK_THROWS_AS(parse("element_label,value\n{},zero\n{0},1\n"), ParseError);  // bad number
  CHECK_NOTHROW(parse("element_label,value\n{},0\n{0},1\n"));
}
