#include <doctest.h>

#include <fstream>
#include <sstream>

#include "glissando/errors.hpp"
#include "glissando/verify.hpp"

using namespace glissando;

namespace {

std::vector<std::string> table_lines() {
  std::ifstream f(std::string(GLISSANDO_TEST_DATA) + "/slopes_p2_q2_k2_23.txt");
  std::vector<std::string> out;
  for (std::string line; std::getline(f, line);)
    if (!line.empty()) out.push_back(line);
  return out;
}

std::optional<SlopeSegment> seg(Rational r, std::int64_t w) { return SlopeSegment{Slope(r), w}; }

}  // namespace

TEST_SUITE("verify") {

TEST_CASE("slope table rows") {
  const auto rows = slope_table(Params::make(2, 2), 2, 23);
  const auto expected = table_lines();
  REQUIRE(expected.size() == 22);
  REQUIRE(rows.size() == 22);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(std::to_string(rows[i].k) + ": " + rows[i].to_string() == expected[i]);
    std::int64_t width = 0;
    for (const auto& e : rows[i].entries) width += e.width;
    CHECK(width == rows[i].k - 1);
  }
  CHECK(rows[10].to_string() == "0^1, 1^1, 3^1, 4^1, 5^3, inf^4");
  CHECK(rows[0].to_string() == "0^1");
}

TEST_CASE("store memoizes and runs in parallel") {
  int calls = 0;
  std::mutex mu;
  SeriesStore store(Params::make(3, 3), kExact, [&](const Params& p, int k, std::size_t n) {
    std::lock_guard lock(mu);
    ++calls;
    return compute_u_series(p, k, n);
  });
  std::vector<int> ks;
  for (int k = 2; k <= 30; ++k) ks.push_back(k);
  store.prefetch(ks, 4);
  store.prefetch(ks, 4);
  (void)store.polygon(7);
  CHECK(calls == 29);
  SeriesStore serial(Params::make(3, 3));
  for (int k : ks) CHECK(*store.series(k) == *serial.series(k));
}

TEST_CASE("parallel_for propagates exceptions") {
  CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) { if (i == 7) throw ParameterError("x"); }),
                  ParameterError);
}

TEST_CASE("constant-slope comparison examples") {
  const Params pr = Params::make(2, 2);
  const GMReport a = check_gouvea_mazur(pr, 4, 2);
  CHECK(a.ok());
  std::vector<Rational> alphas;
  for (const auto& v : a.verdicts) alphas.push_back(v.alpha);
  CHECK(alphas == std::vector<Rational>{Rational(0), Rational(1)});

  const GMReport b = check_gouvea_mazur(pr, 2, 3);
  CHECK(b.ok());
  REQUIRE(b.verdicts.size() == 1);
  CHECK(b.verdicts[0].alpha == Rational(0));
  CHECK(b.verdicts[0].d_shifted == 1);

  const GMReport c = check_gouvea_mazur(pr, 5, 1);
  CHECK(c.ok());
  for (const auto& v : c.verdicts) CHECK(v.alpha <= Rational(1));
}

TEST_CASE("fixed alpha policy") {
  const GMReport r = check_gouvea_mazur(Params::make(2, 2), 8, 3, AlphaPolicy{std::vector<Rational>{0, 1, 2, 3}});
  CHECK(r.ok());
  CHECK(r.verdicts.size() == 4);
}

TEST_CASE("introductory form") {
  const Params pr = Params::make(2, 2);
  CHECK(check_theorem_intro_form(pr, 3, 11, 2));
  CHECK(check_theorem_intro_form(pr, 9, 9, 3));
  CHECK(check_theorem_intro_form(pr, 2, 18, 3));
  CHECK_THROWS_AS(check_theorem_intro_form(pr, 3, 12, 2), ParameterError);
}

TEST_CASE("periodicity of the third slope") {
  const std::vector<std::optional<SlopeSegment>> expected_cycle = {
      seg(2, 1), seg(Rational(5, 2), 2), seg(3, 3), seg(Rational(7, 2), 2),
      seg(2, 1), seg(4, 1),               seg(3, 1), seg(4, 1)};
  SeriesStore store(Params::make(2, 2));
  const PeriodReport window = explore_periodicity(store, 3, 10, 17);
  std::vector<std::optional<SlopeSegment>> seen;
  for (const auto& e : window.entries) seen.push_back(e.slope);
  CHECK(same_cycle(seen, expected_cycle));

  const PeriodReport wide = explore_periodicity(store, 3, 6, 41);
  REQUIRE(wide.period);
  CHECK(*wide.period == 8);
  CHECK(wide.cycle() == expected_cycle);
}

TEST_CASE("periodicity edge cases") {
  SeriesStore store(Params::make(2, 2));
  const PeriodReport first = explore_periodicity(store, 1, 2, 23);
  for (const auto& e : first.entries) CHECK(e.slope == seg(0, 1));
  REQUIRE(first.period);
  CHECK(*first.period == 1);

  const PeriodReport none = explore_periodicity(store, 50, 2, 12);
  CHECK(none.all_absent);
  CHECK_FALSE(none.period);
  CHECK_THROWS_AS(explore_periodicity(store, 0, 2, 12), ParameterError);
}

TEST_CASE("rotation helper") {
  std::vector<std::optional<SlopeSegment>> a = {seg(1, 1), seg(2, 1), seg(3, 1)};
  std::vector<std::optional<SlopeSegment>> b = {seg(3, 1), seg(1, 1), seg(2, 1)};
  CHECK(same_cycle(a, b));
  std::swap(b[0], b[1]);
  CHECK_FALSE(same_cycle(a, b));
  CHECK_FALSE(same_cycle(a, {seg(1, 1)}));
}

TEST_CASE("sweeps on a small grid") {
  SeriesStore store(Params::make(3, 9));
  const Grid grid{Params::make(3, 9), 2, 30, 1, 2, 2};
  for (auto fn : {sweep_glissando, sweep_ordinary, sweep_divisors, sweep_block, sweep_perturbation, sweep_window,
                  sweep_gouvea_mazur}) {
    const SweepReport r = fn(store, grid);
    CHECK_MESSAGE(r.ok(), r.target);
    CHECK(r.checks > 0);
  }
  const SweepReport obs = sweep_observations(store, grid);
  CHECK(obs.ok());
}

TEST_CASE("sweep report merging") {
  SweepReport a{"x", 3, {"f"}, {}, {"n"}};
  SweepReport b{"x", 2, {}, {"w"}, {}};
  a.merge(b);
  CHECK(a.checks == 5);
  CHECK(a.failures.size() == 1);
  CHECK(a.warnings.size() == 1);
  CHECK_FALSE(a.ok());
}

TEST_CASE("numeric sweep") {
  const SweepReport r = sweep_lemma_num({2, 3, 5}, 1, 6, 2, 10000);
  CHECK(r.ok());
  CHECK(r.checks == 3 * 6 * 9999);
}

}
