#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "rnm/error.hpp"
#include "rnm/truncnorm.hpp"

namespace rnm {
namespace {

// Reference masses evaluated at 1200-digit precision from the exact double
// inputs.
struct MassCase {
  double a, b, mean, variance, expected;
};

const std::vector<MassCase> kFrozenMasses = {
    {0, 1, 0.5, 0.01, 0.99999942669685624161},
    {0.2, 0.4, 0.3, 0.001, 0.99843459774199745109},
    {0, 0.2, 0.9, 0.0005, 1.9978315284826163364e-215},
    {0.8, 1.0, 0.1, 0.0005, 1.997831528482538626e-215},
    {0.4, 0.6, 0.5, 1e-06, 1.0},
    {0, 1, 0.0, 0.25, 0.4772498680518207928},
    {0.6, 0.8, 0.05, 0.001, 4.699838994969447878e-68},
    {0.25, 0.5, 0.375, 0.0625, 0.38292492254802620728},
    {-1, 0, 3, 1, 0.0013182267897969746054},
    {0.49, 0.51, 0.5, 0.01, 0.079655674554058032617},
    {0.9, 0.9000001, 0.1, 0.01, 5.0522508718463323108e-21},
    {0.5, 0.5000001, 0.5, 0.0005, 1.7841241152077398539e-6},
};

TEST(NormalMass, MatchesHighPrecisionValuesRelatively) {
  for (const auto& c : kFrozenMasses) {
    const double got = normal_mass(c.a, c.b, c.mean, c.variance);
    EXPECT_NEAR(got, c.expected, 1e-12 * c.expected)
        << "[" << c.a << ", " << c.b << "] mean " << c.mean << " var " << c.variance;
  }
}

TEST(NormalMass, AgreesWithDensityQuadrature) {
  for (double mean : {0.0, 0.13, 0.5, 0.77, 1.0}) {
    for (double variance : {5e-4, 0.004, 0.05}) {
      for (double a : {0.0, 0.2, 0.6}) {
        const double b = a + 0.2;
        EXPECT_NEAR(normal_mass(a, b, mean, variance),
                    oracle::normal_mass(a, b, mean, variance), 1e-13);
      }
    }
  }
}

TEST(NormalMass, Preconditions) {
  EXPECT_THROW(normal_mass(0.5, 0.4, 0.0, 1.0), ArgumentError);
  EXPECT_THROW(normal_mass(0.0, 1.0, 0.0, 0.0), ArgumentError);
  EXPECT_EQ(normal_mass(0.3, 0.3, 0.3, 1.0), 0.0);
}

TEST(StandardNormal, TailsKeepRelativeAccuracy) {
  EXPECT_NEAR(standard_normal_cdf(-10), 7.619853024160526066e-24, 1e-12 * 7.6e-24);
  EXPECT_NEAR(standard_normal_sf(8), 6.2209605742717841235e-16, 1e-12 * 6.2e-16);
  EXPECT_NEAR(standard_normal_cdf(-3), 0.0013498980316300945267, 1e-15);
  EXPECT_EQ(standard_normal_cdf(0), 0.5);
  EXPECT_NEAR(standard_normal_cdf(-1e-3) + standard_normal_sf(-1e-3), 1.0, 1e-16);
}

TEST(TnormMass, NormalizedOverUnitInterval) {
  EXPECT_NEAR(tnorm_mass(0.0, 1.0, 0.3, 0.04), 1.0, 1e-15);
  const double half = tnorm_mass(0.0, 0.5, 0.5, 0.01);
  EXPECT_NEAR(half, 0.5, 1e-15);
  EXPECT_THROW(tnorm_mass(-0.1, 0.5, 0.5, 0.01), ArgumentError);
  EXPECT_THROW(tnorm_mass(0.5, 1.1, 0.5, 0.01), ArgumentError);
}

TEST(TnormMass, UnderflowFallsBackToPointMass) {
  // Mean far outside [0, 1]: the untruncated mass of [0, 1] underflows.
  EXPECT_EQ(tnorm_mass(0.9, 1.0, 50.0, 1e-4), 1.0);
  EXPECT_EQ(tnorm_mass(0.0, 0.9, 50.0, 1e-4), 0.0);
}

TEST(PartitionMasses, MatchesHighPrecisionValues) {
  struct Case {
    int m;
    double mean, variance;
    std::vector<double> expected;
  };
  const std::vector<Case> cases = {
      {5, 0.3, 0.004,
       {0.056922158094485917716, 0.88615463309194624924, 0.056922158094485817395,
        1.05071908068342645e-6, 1.3322245944101981507e-15}},
      {4, 0.02, 0.0005,
       {1.0, 5.0073832903618329483e-25, 1.9765216905105132714e-102, 5.498827240577914593e-234}},
      {7, 0.61, 0.0025,
       {4.6884463500599345707e-21, 4.4156191608840119541e-11, 0.00014249690677086790554,
        0.22008397569618590918, 0.76127127154468070487, 0.018501870878722742208,
        3.8492948358422185044e-7}},
  };
  for (const auto& c : cases) {
    std::vector<double> out(static_cast<std::size_t>(c.m));
    partition_masses(c.m, c.mean, c.variance, out);
    for (int k = 0; k < c.m; ++k) {
      const double e = c.expected[static_cast<std::size_t>(k)];
      // Relative where the cell is well separated from its neighbours'
      // boundaries; the tiny cells come from differences of tails.
      EXPECT_NEAR(out[static_cast<std::size_t>(k)], e, 1e-12 * std::max(e, 1e-4)) << "m " << c.m << " k " << k;
    }
  }
}

TEST(PartitionMasses, SumsToOneAndMatchesTnormMass) {
  for (int m : {2, 3, 7, 20}) {
    for (double mean : {0.0, 0.31, 0.5, 0.99}) {
      for (double variance : {5e-4, 0.01, 0.25}) {
        std::vector<double> out(static_cast<std::size_t>(m));
        partition_masses(m, mean, variance, out);
        double total = 0.0;
        for (int k = 0; k < m; ++k) {
          total += out[static_cast<std::size_t>(k)];
          const auto hi = k + 1 == m ? 1.0 : static_cast<double>(k + 1) / m;
          EXPECT_NEAR(out[static_cast<std::size_t>(k)],
                      tnorm_mass(static_cast<double>(k) / m, hi, mean, variance), 1e-14);
        }
        EXPECT_NEAR(total, 1.0, 1e-14);
      }
    }
  }
}

TEST(PartitionMasses, AgreesWithDensityQuadrature) {
  for (double mean : {0.05, 0.45, 0.8}) {
    for (double variance : {5e-4, 0.01}) {
      std::vector<double> out(5);
      partition_masses(5, mean, variance, out);
      const auto expected = oracle::cell_masses(5, mean, variance);
      for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(out[k], expected[k], 1e-13);
    }
  }
}

TEST(PartitionMasses, CellPartitionIsIdentical) {
  const CellPartition partition(6, 0.003);
  std::vector<double> a(6);
  std::vector<double> b(6);
  for (double mean : {0.0, 0.2, 0.51, 1.0}) {
    partition.masses(mean, a);
    partition_masses(6, mean, 0.003, b);
    EXPECT_EQ(a, b);
  }
}

TEST(PartitionMasses, Preconditions) {
  std::vector<double> out(3);
  EXPECT_THROW(partition_masses(4, 0.5, 0.01, out), ArgumentError);
  EXPECT_THROW(partition_masses(3, 0.5, 0.0, out), ArgumentError);
}

}  // namespace
}  // namespace rnm
