#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "corpus.hpp"
#include "latnet/dynamics.hpp"
#include "latnet/sheaf.hpp"

using namespace latnet;

// The enumeration kernels partition the index space across threads; every
// result must be bit-identical to the serial reference implementation.

TEST_CASE("parallel enumeration agrees with the serial reference") {
  SplitMix64 rng(77);
  for (int trial = 0; trial < 8; ++trial) {
    auto rks = corpus::random_kripke_sheaf(2 + int(rng.below(3)), 2 + int(rng.below(2)),
                                           0.8, 0.25, rng);
    const TarskiSheaf& s = rks.sheaf;

    CHECK(sections_bruteforce(s, Exec::serial) == sections_bruteforce(s, Exec::parallel));
    CHECK(h1_bruteforce(s, Exec::serial) == h1_bruteforce(s, Exec::parallel));

    auto hs = check_hodge_tarski(s, Exec::serial);
    auto hp = check_hodge_tarski(s, Exec::parallel);
    CHECK(hs.ok == hp.ok);
    CHECK(hs.section_count == hp.section_count);
    CHECK(hs.suffix_count == hp.suffix_count);
    CHECK(hs.fixed_count == hp.fixed_count);
    CHECK(hs.witness == hp.witness);

    auto cs = conjecture_report(s, Exec::serial);
    auto cp = conjecture_report(s, Exec::parallel);
    CHECK(cs.cochain_count == cp.cochain_count);
    CHECK(cs.prefix_count == cp.prefix_count);
    CHECK(cs.h1_count == cp.h1_count);
    CHECK(cs.equal == cp.equal);
    CHECK(cs.prefix_not_h1 == cp.prefix_not_h1);
    CHECK(cs.h1_not_prefix == cp.h1_not_prefix);
  }
}
