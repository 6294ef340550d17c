#include <doctest.h>

#include <random>

#include "santa/simplex.hpp"

using namespace santa;

namespace {

LinConstraint row(std::vector<std::pair<int, Rat>> terms, Rel rel, Rat rhs) {
  LinConstraint c;
  c.terms = std::move(terms);
  c.rel = rel;
  c.rhs = std::move(rhs);
  return c;
}

}  // namespace

TEST_CASE("two-variable optimum is exact") {
  // max x + y, x + 2y <= 4, 3x + y <= 6, x,y >= 0 -> (8/5, 6/5), value 14/5
  LinearProgram lp(2);
  lp.set_objective(0, Rat(1));
  lp.set_objective(1, Rat(1));
  lp.add_constraint(row({{0, Rat(1)}, {1, Rat(2)}}, Rel::Le, Rat(4)));
  lp.add_constraint(row({{0, Rat(3)}, {1, Rat(1)}}, Rel::Le, Rat(6)));
  LpResult res = solve_lp(lp);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.value == Rat(14, 5));
  CHECK(res.x[0] == Rat(8, 5));
  CHECK(res.x[1] == Rat(6, 5));
}

TEST_CASE("infeasible and unbounded cases") {
  LinearProgram bad(1);
  bad.add_constraint(row({{0, Rat(1)}}, Rel::Ge, Rat(2)));
  bad.add_constraint(row({{0, Rat(1)}}, Rel::Le, Rat(1)));
  CHECK(lp_feasible(bad).status == LpStatus::Infeasible);

  LinearProgram unb(1);
  unb.set_objective(0, Rat(1));
  unb.add_constraint(row({{0, Rat(-1)}}, Rel::Le, Rat(0)));
  CHECK(solve_lp(unb).status == LpStatus::Unbounded);
}

TEST_CASE("equality constraints and negative rhs normalize") {
  // x - y = -1, x + y >= 3, max -x -> x = 1, y = 2
  LinearProgram lp(2);
  lp.set_objective(0, Rat(-1));
  lp.add_constraint(row({{0, Rat(1)}, {1, Rat(-1)}}, Rel::Eq, Rat(-1)));
  lp.add_constraint(row({{0, Rat(1)}, {1, Rat(1)}}, Rel::Ge, Rat(3)));
  LpResult res = solve_lp(lp);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.x[0] == Rat(1));
  CHECK(res.x[1] == Rat(2));
}

TEST_CASE("feasibility decisions match interval reasoning on random boxes") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    // a <= x <= b with random integers; feasible iff a <= b (and b >= 0).
    const int a = static_cast<int>(rng() % 11) - 5;
    const int b = static_cast<int>(rng() % 11) - 5;
    LinearProgram lp(1);
    lp.add_constraint(row({{0, Rat(1)}}, Rel::Ge, Rat(a)));
    lp.add_constraint(row({{0, Rat(1)}}, Rel::Le, Rat(b)));
    const bool expect = a <= b && b >= 0;  // x >= 0 is implicit
    CHECK(lp_feasible(lp).status ==
          (expect ? LpStatus::Optimal : LpStatus::Infeasible));
  }
}

TEST_CASE("degenerate systems do not cycle") {
  // classic degeneracy: multiple tight constraints through the origin
  LinearProgram lp(3);
  lp.set_objective(0, Rat(3, 4));
  lp.set_objective(1, Rat(-150));
  lp.set_objective(2, Rat(1, 50));
  lp.add_constraint(
      row({{0, Rat(1, 4)}, {1, Rat(-60)}, {2, Rat(-1, 25)}}, Rel::Le, Rat(0)));
  lp.add_constraint(
      row({{0, Rat(1, 2)}, {1, Rat(-90)}, {2, Rat(-1, 50)}}, Rel::Le, Rat(0)));
  lp.add_constraint(row({{2, Rat(1)}}, Rel::Le, Rat(1)));
  LpResult res = solve_lp(lp);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.value == Rat(1, 20));
}
