#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ciplab/extreal.hpp"

#include <vector>

using cip::ExtReal;

namespace {

// small deterministic generator for property checks
struct Mix {
  std::uint64_t s;
  std::uint64_t next() {
    std::uint64_t z = (s += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double real() { return (double(next() >> 11) * 0x1.0p-53 - 0.5) * 20.0; }
  ExtReal any() {
    switch (next() % 5) {
      case 0: return ExtReal::plus_inf();
      case 1: return ExtReal::minus_inf();
      default: return ExtReal::finite(real());
    }
  }
};

bool defined_sum(const ExtReal& a, const ExtReal& b) {
  return !((a.is_plus_inf() && b.is_minus_inf()) || (a.is_minus_inf() && b.is_plus_inf()));
}

}  // namespace

TEST_CASE("finite addition is exact") {
  CHECK(cip::ext_add(ExtReal::finite(2), ExtReal::finite(3)) == ExtReal::finite(5));
}

TEST_CASE("plus infinity absorbs finite values") {
  CHECK(cip::ext_add(ExtReal::plus_inf(), ExtReal::finite(-5)).is_plus_inf());
  CHECK(cip::ext_add(ExtReal::finite(-5), ExtReal::plus_inf()).is_plus_inf());
  CHECK(cip::ext_add(ExtReal::minus_inf(), ExtReal::finite(7)).is_minus_inf());
}

TEST_CASE("opposite infinities are a hard error") {
  CHECK_THROWS_AS(cip::ext_add(ExtReal::plus_inf(), ExtReal::minus_inf()), cip::IndeterminateSum);
  CHECK_THROWS_AS(cip::ext_add(ExtReal::minus_inf(), ExtReal::plus_inf()), cip::IndeterminateSum);
}

TEST_CASE("positive scaling") {
  CHECK(cip::ext_scale_pos(0.5, ExtReal::finite(-4)) == ExtReal::finite(-2));
  CHECK(cip::ext_scale_pos(2.0, ExtReal::plus_inf()).is_plus_inf());
  CHECK(cip::ext_scale_pos(2.0, ExtReal::minus_inf()).is_minus_inf());
}

TEST_CASE("zero or negative scale is rejected") {
  CHECK_THROWS_AS(cip::ext_scale_pos(0.0, ExtReal::plus_inf()), cip::NonPositiveScale);
  CHECK_THROWS_AS(cip::ext_scale_pos(-1.0, ExtReal::finite(1)), cip::NonPositiveScale);
}

TEST_CASE("sup of a sequence") {
  CHECK(cip::ext_sup({ExtReal::finite(1), ExtReal::finite(3), ExtReal::finite(-2)}) ==
        ExtReal::finite(3));
  CHECK(cip::ext_sup({ExtReal::finite(0), ExtReal::plus_inf()}).is_plus_inf());
  CHECK(cip::ext_sup({ExtReal::minus_inf(), ExtReal::minus_inf()}).is_minus_inf());
  CHECK_THROWS_AS(cip::ext_sup(std::vector<ExtReal>{}), cip::EmptySequence);
}

TEST_CASE("total order") {
  CHECK(ExtReal::minus_inf() < ExtReal::finite(-1e308));
  CHECK(ExtReal::finite(1e308) < ExtReal::plus_inf());
  CHECK(ExtReal::minus_inf() < ExtReal::plus_inf());
  CHECK(ExtReal::finite(1) < ExtReal::finite(2));
}

TEST_CASE("no NaN is representable") {
  CHECK_THROWS(ExtReal::finite(std::nan("")));
  CHECK_THROWS(ExtReal::finite(HUGE_VAL));
  // overflowing sums saturate instead of producing non-finite payloads
  CHECK(cip::ext_add(ExtReal::finite(1e308), ExtReal::finite(1e308)).is_plus_inf());
  CHECK(cip::ext_scale_pos(2.0, ExtReal::finite(-1e308)).is_minus_inf());
}

TEST_CASE("commutativity and associativity where defined") {
  Mix rng{7};
  for (int i = 0; i < 2000; ++i) {
    ExtReal a = rng.any(), b = rng.any(), c = rng.any();
    if (defined_sum(a, b)) CHECK(cip::ext_add(a, b) == cip::ext_add(b, a));
    bool left_ok = defined_sum(a, b) && defined_sum(cip::ext_add(a, b), c);
    bool right_ok = defined_sum(b, c) && defined_sum(a, cip::ext_add(b, c));
    if (left_ok && right_ok) {
      ExtReal l = cip::ext_add(cip::ext_add(a, b), c);
      ExtReal r = cip::ext_add(a, cip::ext_add(b, c));
      if (l.is_finite() && r.is_finite())
        CHECK(l.value() == doctest::Approx(r.value()).epsilon(1e-12));
      else
        CHECK(l == r);
    }
  }
}

TEST_CASE("scaling distributes over defined sums") {
  Mix rng{11};
  for (int i = 0; i < 2000; ++i) {
    ExtReal a = rng.any(), b = rng.any();
    if (!defined_sum(a, b)) continue;
    double c = 0.25 + 3.0 * (double(rng.next() >> 11) * 0x1.0p-53);
    ExtReal lhs = cip::ext_scale_pos(c, cip::ext_add(a, b));
    ExtReal rhs = cip::ext_add(cip::ext_scale_pos(c, a), cip::ext_scale_pos(c, b));
    if (lhs.is_finite() && rhs.is_finite())
      CHECK(lhs.value() == doctest::Approx(rhs.value()).epsilon(1e-12));
    else
      CHECK(lhs == rhs);
  }
}

TEST_CASE("order is compatible with addition") {
  Mix rng{13};
  for (int i = 0; i < 2000; ++i) {
    ExtReal a = rng.any(), b = rng.any(), c = rng.any();
    if (a > b) std::swap(a, b);
    if (!defined_sum(a, c) || !defined_sum(b, c)) continue;
    CHECK(cip::ext_add(a, c) <= cip::ext_add(b, c));
  }
}
