#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nhsense/errors.hpp"
#include "nhsense/model.hpp"

using namespace nhsense;

TEST(DeriveParams, ZeroPairDriveIsReciprocal) {
  const ChainParams c = derive_params(3, 1.0, 0.0, 1.0);
  EXPECT_EQ(c.effective_hopping(), 1.0);
  EXPECT_EQ(c.amplification(), 0.0);
}

TEST(DeriveParams, QuarterValues) {
  // J = sqrt(1.25^2 - 0.75^2) = 1, A = ln(2 / 0.5) / 2 = ln 2
  const ChainParams c = derive_params(3, 1.25, 0.75, 1.0);
  EXPECT_NEAR(c.effective_hopping(), 1.0, 1e-15);
  EXPECT_NEAR(c.amplification(), std::numbers::ln2, 1e-15);
}

TEST(DeriveParams, Invariants) {
  for (double w : {1.0, 2.5, 7.0})
    for (double frac : {0.0, 0.3, 0.9, 0.999}) {
      const double d = frac * w;
      const ChainParams c = derive_params(5, w, d, 0.7);
      const double j = c.effective_hopping(), a = c.amplification();
      EXPECT_NEAR(j * j, w * w - d * d, 1e-13 * w * w);
      EXPECT_NEAR(std::exp(2 * a) * (w - d), w + d, 1e-14 * (w + d));
    }
}

TEST(DeriveParams, RejectsInvalid) {
  EXPECT_THROW(derive_params(4, 1.0, 0.5, 1.0), DomainError);
  EXPECT_THROW(derive_params(1, 1.0, 0.5, 1.0), DomainError);
  EXPECT_THROW(derive_params(3, 1.0, 1.0, 1.0), DomainError);
  EXPECT_THROW(derive_params(3, 1.0, 1.5, 1.0), DomainError);
  EXPECT_THROW(derive_params(3, 1.0, -0.1, 1.0), DomainError);
  EXPECT_THROW(derive_params(3, 1.0, 0.5, 0.0), DomainError);
  EXPECT_THROW(derive_params(3, 0.0, 0.0, 1.0), DomainError);
}

TEST(DeriveParams, OverflowGuard) {
  // 4 A (N - 1) = 600 exactly is allowed; beyond is not.
  EXPECT_NO_THROW(from_hopping(11, 1.0, 15.0, 1.0));
  EXPECT_THROW(from_hopping(11, 1.0, 15.01, 1.0), OverflowError);
  // w/delta giving A = 10 at N = 17: 4 * 10 * 16 = 640
  const double a = 10.0;
  EXPECT_THROW(derive_params(17, std::cosh(a), std::sinh(a), 1.0), OverflowError);
}

TEST(DeriveParams, Deterministic) {
  const ChainParams c1 = derive_params(7, 1.3, 0.4, 0.9);
  const ChainParams c2 = derive_params(7, 1.3, 0.4, 0.9);
  EXPECT_EQ(c1.effective_hopping(), c2.effective_hopping());
  EXPECT_EQ(c1.amplification(), c2.amplification());
}

TEST(DeriveParams, RoundTripThroughHopping) {
  for (double w : {1.0, 3.0})
    for (double frac : {0.0, 0.5, 0.95}) {
      const double d = frac * w;
      const ChainParams c = derive_params(9, w, d, 1.0);
      const double w2 = c.effective_hopping() * std::cosh(c.amplification());
      const double d2 = c.effective_hopping() * std::sinh(c.amplification());
      EXPECT_NEAR(w2, w, 1e-12 * w);
      EXPECT_NEAR(d2, d, 1e-12 * w);
      const ChainParams h = from_hopping(9, c.effective_hopping(), c.amplification(), 1.0);
      EXPECT_NEAR(h.hopping(), w, 1e-12 * w);
      EXPECT_NEAR(h.pair_drive(), d, 1e-12 * w);
    }
}

TEST(AmplificationEta, Values) {
  EXPECT_EQ(amplification_eta(from_hopping(5, 1.0, 0.0, 1.0)), 1.0);
  EXPECT_NEAR(amplification_eta(from_hopping(3, 1.0, std::numbers::ln2, 1.0)), 4.0, 1e-14);
  EXPECT_NEAR(amplification_eta(from_hopping(5, 1.0, 1.0, 1.0)), 54.598150033144236, 1e-12);
  for (int n : {3, 5, 7, 21}) EXPECT_EQ(amplification_eta(derive_params(n, 1.0, 0.0, 1.0)), 1.0);
}

TEST(DriveSpec, Validation) {
  EXPECT_NO_THROW(DriveSpec(1.0, 0.0, 1));
  EXPECT_THROW(DriveSpec(0.0, 0.0, 1), DomainError);
  EXPECT_THROW(DriveSpec(1.0, 0.0, 2), DomainError);
  EXPECT_THROW(DriveSpec(1.0, 0.0, 0), DomainError);
  EXPECT_THROW(DriveSpec(1.0, 0.0, 1, -1.0), DomainError);
  const ChainParams c = from_hopping(5, 1.0, 1.0, 1.0);
  EXPECT_NO_THROW(check_site(c, 5));
  EXPECT_THROW(check_site(c, 7), DomainError);
}

TEST(DriveSpec, ThetaWrapsModuloTwoPi) {
  const DriveSpec d(1.0, 2 * std::numbers::pi + 0.25, 1);
  EXPECT_NEAR(d.theta, 0.25, 1e-14);
  EXPECT_NEAR(DriveSpec(1.0, -0.5, 1).theta, 2 * std::numbers::pi - 0.5, 1e-14);
}

TEST(PerturbationSpec, LocalIgnoresPhase) {
  EXPECT_EQ(PerturbationSpec(PerturbationKind::LocalN, 0.1, 1.0).varphi, 0.0);
  EXPECT_NEAR(PerturbationSpec(PerturbationKind::Nhse, 0.1, 7.0).varphi,
              7.0 - 2 * std::numbers::pi, 1e-14);
  EXPECT_THROW(PerturbationSpec(PerturbationKind::Nhse, -0.1), DomainError);
  EXPECT_NO_THROW(PerturbationSpec(PerturbationKind::Nhse, 0.0));
}

TEST(HomodyneSpec, Validation) {
  EXPECT_NO_THROW(HomodyneSpec(0.0));
  EXPECT_NO_THROW(HomodyneSpec(std::numbers::pi / 2));
  EXPECT_THROW(HomodyneSpec(-1e-9), DomainError);
  EXPECT_THROW(HomodyneSpec(2.0), DomainError);
  EXPECT_THROW(HomodyneSpec(0.1, 0.0), DomainError);
}
