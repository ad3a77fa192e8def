#include <cmath>
#include <cstring>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "rcsteer/array_model.hpp"
#include "rcsteer/compression.hpp"
#include "rcsteer/error.hpp"
#include "rcsteer/livg.hpp"

using namespace rcsteer;
using doctest::Approx;

namespace {

CVector as_vector(const CMatrix& m, Eigen::Index r) { return m.row(r).transpose(); }

bool bitwise_equal(const CVector& a, const CVector& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), static_cast<std::size_t>(a.size()) * sizeof(Complex)) == 0;
}

}  // namespace

TEST_CASE("selection rules") {
  const CMatrix id = CMatrix::Identity(4, 4);
  const std::vector<std::size_t> first_two{0, 1};
  const auto l = select_livg(id, first_two);
  CHECK(l.rank() == 2);
  CHECK(l.rows(1, 1) == Complex(1, 0));

  const std::vector<std::size_t> dup{1, 1};
  CHECK_THROWS_AS(select_livg(id, dup), SelectionError);
  const std::vector<std::size_t> out_of_range{0, 4};
  CHECK_THROWS_AS(select_livg(id, out_of_range), SelectionError);
  const std::vector<std::size_t> empty;
  CHECK_THROWS_AS(select_livg(id, empty), SelectionError);

  CMatrix degenerate = CMatrix::Zero(3, 3);
  degenerate.row(0) << Complex(1, 2), Complex(3, 0), Complex(0, -1);
  degenerate.row(2) = degenerate.row(0);
  const std::vector<std::size_t> twins{0, 2};
  try {
    select_livg(degenerate, twins);
    FAIL("expected a dependence error");
  } catch (const DependenceError& e) {
    CHECK(e.achieved_rank() == 1);
    CHECK(e.requested_rank() == 2);
  }
}

TEST_CASE("equally spaced indices") {
  CHECK(equally_spaced_indices(128, 16).front() == 0);
  CHECK(equally_spaced_indices(128, 16).back() == 127);
  CHECK(equally_spaced_indices(10, 1) == std::vector<std::size_t>{0});
  CHECK(equally_spaced_indices(5, 5) == std::vector<std::size_t>{0, 1, 2, 3, 4});
  const auto idx = equally_spaced_indices(128, 4);
  CHECK(idx == std::vector<std::size_t>{0, 42, 85, 127});
  CHECK_THROWS(equally_spaced_indices(3, 4));
}

TEST_CASE("sixteen equally spaced rows of a rank-16 truncated 128-element sweep are independent") {
  ScanPlan plan;
  plan.m_steps = 128;
  plan.theta_end_deg = 30;
  const auto a = build_weight_matrix(build_phase_matrix(ArrayGeometry::linear(128), plan)).values;
  const auto b = truncate(svd(a), FixedRank{16}).matrix;
  const auto l = select_livg(b, equally_spaced_indices(128, 16));
  CHECK(l.rank() == 16);
  CHECK(numerical_rank(l.rows) == 16);
}

TEST_CASE("K solving") {
  std::mt19937_64 rng(17);
  const CMatrix c = oracle::random_complex(4, 9, rng);
  const std::vector<std::size_t> all{0, 1, 2, 3};
  const auto l = select_livg(c, all);

  SUBCASE("a LIVG row maps to a unit vector") {
    const auto k = solve_k(l, as_vector(c, 2));
    for (Eigen::Index r = 0; r < 4; ++r)
      CHECK(std::abs(k.coefficients(r) - (r == 2 ? Complex(1, 0) : Complex(0, 0))) < 1e-12);
    CHECK(k.residual < 1e-12);
  }
  SUBCASE("forward synthesis is inverted") {
    const CVector k0 = oracle::random_complex(4, 1, rng);
    const CVector target = c.transpose() * k0;
    const auto k = solve_k(l, target);
    CHECK((k.coefficients - k0).norm() < 1e-9 * k0.norm());
    CHECK(k.residual <= 1e-9 * target.norm());
  }
  SUBCASE("a target orthogonal to an orthonormal LIVG leaves its whole norm as residual") {
    const CMatrix id = CMatrix::Identity(3, 5);
    const std::vector<std::size_t> three{0, 1, 2};
    const auto basis = select_livg(id, three);
    CVector t = CVector::Zero(5);
    t(3) = Complex(3, 4);
    const auto k = solve_k(basis, t);
    CHECK(k.residual == Approx(5.0).epsilon(1e-12));
    CHECK(k.coefficients.norm() < 1e-15);
  }
  SUBCASE("the residual matches the explicit least-squares projection") {
    const CVector t = oracle::random_complex(9, 1, rng);
    const auto k = solve_k(l, t);
    const CMatrix cc = c.transpose();
    const CVector normal = (cc.adjoint() * cc).ldlt().solve(cc.adjoint() * t);
    CHECK((k.coefficients - normal).norm() < 1e-9 * normal.norm());
    CHECK(k.residual == Approx((cc * normal - t).norm()).epsilon(1e-9));
  }
  CHECK_THROWS_AS(solve_k(l, CVector::Zero(5)), DimensionError);
}

TEST_CASE("reconstruction") {
  std::mt19937_64 rng(19);
  const CMatrix c = oracle::random_complex(3, 6, rng);
  const std::vector<std::size_t> all{0, 1, 2};
  const auto l = select_livg(c, all);

  KVector unit{CVector::Zero(3), 0.0};
  unit.coefficients(1) = 1.0;
  CHECK((reconstruct_row(l, unit) - as_vector(c, 1)).norm() == 0.0);

  KVector zero{CVector::Zero(3), 0.0};
  CHECK(reconstruct_row(l, zero).norm() == 0.0);

  const CVector p = c.transpose() * oracle::random_complex(3, 1, rng);
  CHECK((reconstruct_row(l, solve_k(l, p)) - p).cwiseAbs().maxCoeff() < 1e-9 * p.norm());

  KVector wrong{CVector::Zero(2), 0.0};
  CHECK_THROWS_AS(reconstruct_row(l, wrong), DimensionError);
}

TEST_CASE("max |K|") {
  KVector k{CVector::Zero(4), 0.0};
  CHECK(max_k_magnitude(k) == 0.0);
  k.coefficients(2) = Complex(0, 1);
  CHECK(max_k_magnitude(k) == 1.0);
  std::mt19937_64 rng(23);
  k.coefficients = oracle::random_complex(4, 1, rng) * 0.1;
  k.coefficients(3) = std::polar(25.0, 1.1);
  CHECK(max_k_magnitude(k) == Approx(25.0).epsilon(1e-14));
  CHECK(max_k_magnitude(k) >= 20.0);
}

TEST_CASE("property: span exactness for every row when the LIVG rank equals rank(B)") {
  std::mt19937_64 rng(29);
  for (std::size_t k = 1; k <= 6; ++k) {
    const CMatrix a = oracle::random_rank_k(30, 8, 8, rng);
    const auto b = truncate(svd(a), FixedRank{k}).matrix;
    // A random pick of k rows of a generic rank-k matrix is independent.
    std::vector<std::size_t> pick;
    for (std::size_t i = 0; i < k; ++i) pick.push_back(3 * i + 1);
    const auto l = select_livg(b, pick);
    const auto table = KSolver(l).solve_rows(b);
    for (Eigen::Index r = 0; r < b.rows(); ++r) {
      const CVector p = as_vector(b, r);
      CHECK(table[static_cast<std::size_t>(r)].residual <= 1e-9 * p.norm());
      CHECK((reconstruct_row(l, table[static_cast<std::size_t>(r)]) - p).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("property: solving is linear for in-span targets") {
  std::mt19937_64 rng(37);
  const CMatrix c = oracle::random_complex(5, 12, rng);
  const std::vector<std::size_t> all{0, 1, 2, 3, 4};
  const auto l = select_livg(c, all);
  for (int trial = 0; trial < 10; ++trial) {
    const CVector p = c.transpose() * oracle::random_complex(5, 1, rng);
    const CVector q = c.transpose() * oracle::random_complex(5, 1, rng);
    const Complex alpha(0.3, -1.2), beta(-2.0, 0.5);
    const CVector lhs = solve_k(l, alpha * p + beta * q).coefficients;
    const CVector rhs = alpha * solve_k(l, p).coefficients + beta * solve_k(l, q).coefficients;
    CHECK((lhs - rhs).norm() <= 1e-9 * rhs.norm());
  }
}

TEST_CASE("property: repeated solves agree bitwise, and the batch path matches single solves") {
  std::mt19937_64 rng(43);
  const CMatrix c = oracle::random_complex(4, 10, rng);
  const std::vector<std::size_t> all{0, 1, 2, 3};
  const auto l = select_livg(c, all);
  const CMatrix targets = oracle::random_complex(7, 10, rng);
  const KSolver solver(l);
  const auto batch = solver.solve_rows(targets);
  for (Eigen::Index r = 0; r < targets.rows(); ++r) {
    const auto once = solve_k(l, as_vector(targets, r));
    const auto twice = solve_k(l, as_vector(targets, r));
    CHECK(bitwise_equal(once.coefficients, twice.coefficients));
    CHECK(bitwise_equal(once.coefficients, batch[static_cast<std::size_t>(r)].coefficients));
    CHECK(once.residual == batch[static_cast<std::size_t>(r)].residual);
  }
}
