#include "lml/composite.hpp"

#include <cmath>
#include <optional>
#include <vector>

#include "doctest.h"
#include "lml/maximal.hpp"

using namespace lml;

namespace {

Quad root(long u_num, long u_den, long v_num, long v_den, long D) {
  return Quad(rat(u_num, u_den), rat(v_num, v_den), Int(D));
}

// Reference divergence decision for a threshold family: some rung of some
// ladder has an infinite inner sup, or the first-rung exponents e_n are
// positive for infinitely many n. Under the covering width rule those
// exponents are the exact rationals n*(w - omega) - n^2*(u - delta) + [open],
// a quadratic in n, so the tail sign is decided by the leading coefficients.
bool family_divergent(const ThresholdParams& tp,
                      const std::vector<LadderParams>& ladders, const Rat& u,
                      const Rat& w) {
  for (const auto& lp : ladders) {
    Rat s = Rat(lp.a) * w - Rat(lp.b) * u;
    if (slope_divergent(lp, Quad(s))) return true;
  }
  Rat lead = tp.delta - u;
  if (lead > 0) return true;
  if (lead < 0) return false;
  if (w != tp.omega) return w > tp.omega;
  return tp.rule == EdgeRule::open;
}

Space two_point(long w1, long w2) {
  Space s({Scalar::from_rat(w1), Scalar::from_rat(w2)}, {"a", "b"});
  s.set_dist(0, 1, rat(2));
  s.freeze();
  return s;
}

}  // namespace

TEST_SUITE("composite") {
  TEST_CASE("quadratic values compare exactly") {
    Quad z;
    CHECK(z.sign() == 0);
    CHECK(z.is_rational());

    Quad r2 = root(0, 1, 1, 1, 2);  // sqrt(2)
    CHECK(r2.sign() == 1);
    CHECK_FALSE(r2.is_rational());
    CHECK(r2.to_double() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

    // 3/2 > sqrt(2) but sqrt(2) + 1/10 > 3/2.
    CHECK(Quad(rat(3, 2)) > r2);
    CHECK((r2 + Quad(rat(1, 10))) > Quad(rat(3, 2)));
    CHECK(r2 > Quad(rat(707, 500)));
    CHECK(r2 < Quad(rat(708, 500)));

    // Mixed-sign cases hinge on the squared comparison.
    Quad tight = root(-17, 12, 1, 1, 2);  // sqrt(2) - 17/12 < 0
    CHECK(tight.sign() == -1);
    Quad loose = root(-7, 5, 1, 1, 2);  // sqrt(2) - 7/5 > 0
    CHECK(loose.sign() == 1);
    CHECK((loose - loose).sign() == 0);

    // Perfect squares fold to rationals: 1 + 3*sqrt(25) = 16.
    Quad folded = root(1, 1, 3, 1, 25);
    CHECK(folded.is_rational());
    CHECK(folded == Quad(rat(16)));
    CHECK(folded.str() == "16");
    CHECK(root(-1, 4, 1, 1, 2).str() == "-1/4 + sqrt(2)");

    CHECK_THROWS_AS(root(0, 1, 1, 1, 2) + root(0, 1, 1, 1, 3),
                    std::logic_error);
    // A rational side adopts the other radicand.
    CHECK((Quad(rat(1)) + r2) == root(1, 1, 1, 1, 2));
  }

  TEST_CASE("ladder rungs follow the geometric schedule") {
    LadderParams lp = make_ladder(rat(2), rat(0), 1, 1, Int(2), rat(1, 2));
    // a = b = 1 makes D = 2; width = sqrt(2)/2, so lambda_1 = 2^{3*sqrt(2)/2}.
    auto rungs = ladder_rungs(lp, 3);
    REQUIRE(rungs.size() == 3);
    CHECK(rungs[0].kappa == 2);
    CHECK(rungs[1].kappa == 4);
    CHECK(rungs[2].kappa == 8);
    CHECK(rungs[0].lambda_exp == root(0, 1, 3, 2, 2));
    CHECK_FALSE(rung_lambda_exact(rungs[0]).has_value());
    CHECK(rung_lambda_log2(rungs[0]) ==
          doctest::Approx(1.5 * std::sqrt(2.0)).epsilon(1e-12));

    // Rational width 1 (set directly): lambda_1 = R^{-gamma + 3} = 2^3 = 8.
    LadderParams flat{rat(2), Quad(rat(0)), 1, 1, Int(2), Quad(rat(1))};
    auto r1 = ladder_rungs(flat, 2);
    CHECK(r1[0].lambda_exp == Quad(rat(3)));
    auto lam = rung_lambda_exact(r1[0]);
    REQUIRE(lam.has_value());
    CHECK(lam->as_rat() == 8);
    CHECK(r1[1].lambda_exp == Quad(rat(4)));  // -2*0 + 4*1

    // R = 1 collapses everything.
    LadderParams one{rat(2), Quad(rat(5)), 2, 3, Int(1), Quad(rat(1))};
    auto rdeg = ladder_rungs(one, 4);
    for (const auto& rung : rdeg) {
      CHECK(rung.kappa == 1);
      CHECK(rung_lambda_exact(rung)->as_rat() == 1);
      CHECK(rung_lambda_log2(rung) == 0.0);
    }

    CHECK_THROWS_WITH_AS(ladder_rungs(lp, 0), "need at least one rung",
                         std::invalid_argument);
    LadderParams bad = lp;
    bad.width = Quad(rat(-1));
    CHECK_THROWS_WITH_AS(ladder_rungs(bad, 1), "band width must be positive",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(make_ladder(rat(1), rat(0), 1, 1, Int(2), rat(1)),
                         "p must exceed 1", std::invalid_argument);
    CHECK_THROWS_WITH_AS(make_ladder(rat(2), rat(0), 0, 1, Int(2), rat(1)),
                         "direction components must be positive",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(make_ladder(rat(2), rat(0), 1, 1, Int(0), rat(1)),
                         "ratio R must be at least 1", std::invalid_argument);
  }

  TEST_CASE("rungs materialize as scaled families") {
    // gamma = 0, width = 1, R = 2: rung 1 has kappa = 2, lambda = 8, and the
    // scaled family solves K^{-1/2} L^{1/2} = 8/2 = 4: L = 16, K = 1.
    LadderParams lp{rat(2), Quad(rat(0)), 1, 1, Int(2), Quad(rat(1))};
    auto rungs = ladder_rungs(lp, 2);
    TestSpaceParams params = rung_space_params(lp, rungs[0]);
    CHECK(params.seq.N == 2);
    CHECK(params.seq.M == 2);
    CHECK(params.seq.L == 16);
    CHECK(params.K.as_rat() == 1);

    // Rung 2: kappa = 4, lambda = 2^4, x = 4: L = 16, K = 1.
    TestSpaceParams p2 = rung_space_params(lp, rungs[1]);
    CHECK(p2.seq.N == 4);
    CHECK(p2.seq.M == 4);
    CHECK(p2.seq.L == 16);
    CHECK(p2.K.as_rat() == 1);

    // Irrational lambda rounds to the nearest power of two.
    LadderParams irr = make_ladder(rat(2), rat(0), 1, 1, Int(2), rat(1, 2));
    auto rung = ladder_rungs(irr, 1)[0];
    // lambda = 2^{1.5*sqrt(2)} = 2^{2.12..}, rounds to 4: x = 2, L = 4, K = 1.
    TestSpaceParams pr = rung_space_params(irr, rung);
    CHECK(pr.seq.L == 4);
    CHECK(pr.K.as_rat() == 1);

    LadderParams wide{rat(2), Quad(rat(0)), 1, 1, Int(1000000), Quad(rat(1))};
    auto far = ladder_rungs(wide, 4)[3];  // kappa = 10^24
    CHECK_THROWS_WITH_AS(rung_space_params(wide, far),
                         "rung kappa exceeds long range", std::domain_error);
  }

  TEST_CASE("slope and statement-level regimes") {
    CHECK(slope_value(1, 1, 2, 2) == 0);
    CHECK(slope_value(1, 2, 2, 4) == rat(-3, 4));
    CHECK(slope_value(3, 5, ExtRat::inf(), 2) == rat(3, 2));
    CHECK(slope_value(3, 5, ExtRat::inf(), ExtRat::inf()) == 0);
    CHECK_THROWS_WITH_AS(slope_value(1, 1, rat(1, 2), 1),
                         "indices must be at least 1", std::invalid_argument);

    // gamma = 0, width = 1: divergent at 0, band on (-2, -1),
    // bounded at and below -3, unspecified in the gaps and above the line.
    LadderParams lp{rat(2), Quad(rat(0)), 1, 1, Int(2), Quad(rat(1))};
    CHECK(slope_regime(lp, Quad(rat(0))) == Regime::divergent);
    CHECK(slope_regime(lp, Quad(rat(-3, 2))) == Regime::band);
    CHECK(slope_regime(lp, Quad(rat(-5))) == Regime::bounded);
    CHECK(slope_regime(lp, Quad(rat(-3))) == Regime::bounded);
    CHECK(slope_regime(lp, Quad(rat(-1))) == Regime::unspecified);
    CHECK(slope_regime(lp, Quad(rat(-2))) == Regime::unspecified);
    CHECK(slope_regime(lp, Quad(rat(-5, 2))) == Regime::unspecified);
    CHECK(slope_regime(lp, Quad(rat(1))) == Regime::unspecified);

    // Through the (q, r) wrapper: s = a/r - b/q.
    CHECK(model_regime(lp, 2, 2) == Regime::divergent);  // s = 0
    CHECK(model_regime(lp, 2, ExtRat::inf()) == Regime::unspecified);
    LadderParams steep{rat(2), Quad(rat(0)), 1, 6, Int(2), Quad(rat(1))};
    CHECK(model_regime(steep, 1, ExtRat::inf()) == Regime::bounded);  // s = -6
    LadderParams mid{rat(2), Quad(rat(0)), 1, 3, Int(2), Quad(rat(1))};
    CHECK(model_regime(mid, 2, ExtRat::inf()) == Regime::band);  // s = -3/2
    CHECK_THROWS_WITH_AS(model_regime(lp, 2, 1), "model needs q <= r",
                         std::invalid_argument);

    // Band boundaries resolve exactly when gamma carries a sqrt component:
    // gamma = sqrt(2), width = sqrt(2)/2 puts the band at (0, sqrt(2)/2).
    LadderParams qlp = make_ladder(rat(2), rat(0), 1, 1, Int(2), rat(1, 2));
    qlp.gamma = root(0, 1, 1, 1, 2);
    CHECK(slope_regime(qlp, Quad(rat(1, 2))) == Regime::band);
    CHECK(slope_regime(qlp, Quad(rat(0))) == Regime::unspecified);
    CHECK(slope_regime(qlp, root(0, 1, 1, 2, 2)) == Regime::unspecified);
    CHECK(slope_regime(qlp, root(0, 1, -1, 2, 2)) == Regime::bounded);
    CHECK(slope_regime(qlp, root(0, 1, 1, 1, 2)) == Regime::divergent);
  }

  TEST_CASE("divergence predicate and sup exponent") {
    LadderParams lp{rat(2), Quad(rat(0)), 1, 1, Int(2), Quad(rat(1))};
    // Divergent strictly above gamma - width = -1.
    CHECK(slope_divergent(lp, Quad(rat(0))));
    CHECK(slope_divergent(lp, Quad(rat(7))));
    CHECK(slope_divergent(lp, Quad(rat(-1, 2))));
    CHECK_FALSE(slope_divergent(lp, Quad(rat(-1))));
    CHECK_FALSE(slope_divergent(lp, Quad(rat(-2))));

    // Finite sup sits at the first rung: exponent s + 3.
    CHECK_FALSE(slope_sup_exponent(lp, Quad(rat(0))).has_value());
    CHECK(*slope_sup_exponent(lp, Quad(rat(-1))) == Quad(rat(2)));
    CHECK(*slope_sup_exponent(lp, Quad(rat(-4))) == Quad(rat(-1)));

    // On the line the rung exponents are (n + 2) * width, strictly rising.
    for (long n = 1; n < 6; ++n) {
      CHECK(rung_exponent(lp, Quad(rat(0)), n) == Quad(rat(n + 2)));
      CHECK(rung_exponent(lp, Quad(rat(0)), n + 1) >
            rung_exponent(lp, Quad(rat(0)), n));
    }
    // And max_{n <= t} log2(model) grows linearly with the depth there.
    CHECK(trunc_sup_log2(lp, Quad(rat(0)), 10) > 11.9);
    CHECK(trunc_sup_log2(lp, Quad(rat(0)), 20) >
          trunc_sup_log2(lp, Quad(rat(0)), 10) + 9.0);

    // Below the divergence threshold the depth stops mattering.
    CHECK(trunc_sup_log2(lp, Quad(rat(-2)), 3) ==
          doctest::Approx(trunc_sup_log2(lp, Quad(rat(-2)), 40)));

    // Flat ladder: model is identically 2.
    LadderParams one{rat(2), Quad(rat(0)), 1, 1, Int(1), Quad(rat(1))};
    CHECK_FALSE(slope_divergent(one, Quad(rat(10))));
    CHECK(*slope_sup_exponent(one, Quad(rat(10))) == Quad());
    CHECK(trunc_sup_log2(one, Quad(rat(10)), 5) == doctest::Approx(1.0));
  }

  TEST_CASE("threshold ladders pin the textbook examples") {
    // Closed rule, proportional widths, n = 1, delta = 1/2, omega = 1/4:
    // anchor = 1/4 - 1/2, width = sqrt(2)/3, gamma = -1/4 + sqrt(2).
    ThresholdParams tp{rat(2), rat(1, 2), rat(1, 4), EdgeRule::closed};
    auto lad = threshold_ladders(tp, 3, WidthRule::proportional);
    REQUIRE(lad.size() == 3);
    CHECK(lad[0].a == 1);
    CHECK(lad[0].b == 1);
    CHECK(lad[0].R == 1);
    CHECK(lad[0].gamma == root(-1, 4, 1, 1, 2));
    CHECK(lad[0].width == root(0, 1, 1, 3, 2));
    CHECK(lad[1].a == 2);
    CHECK(lad[1].b == 4);
    CHECK(lad[1].R == 4);
    CHECK(lad[2].R == 27);
    // Ladder 2 radicand: 4 + 16 = 20; width = sqrt(20)/6.
    CHECK(lad[1].width == root(0, 1, 1, 6, 20));
    // anchor_2 = 2*(1/4) - 4*(1/2) = -3/2.
    CHECK(lad[1].gamma == root(-3, 2, 1, 2, 20));

    // Covering widths are the rationals (n + 1)/2.
    auto cov = threshold_ladders(tp, 3, WidthRule::covering);
    CHECK(cov[0].width == Quad(rat(1)));
    CHECK(cov[1].width == Quad(rat(3, 2)));
    CHECK(cov[2].width == Quad(rat(2)));
    CHECK(cov[0].gamma == Quad(rat(11, 4)));  // -1/4 + 3*1
    // Open rule shifts the anchor down by one.
    ThresholdParams open_tp{rat(2), rat(1, 2), rat(1, 4), EdgeRule::open};
    auto ocov = threshold_ladders(open_tp, 1, WidthRule::covering);
    CHECK(ocov[0].gamma == Quad(rat(7, 4)));

    CHECK_THROWS_WITH_AS(
        threshold_ladders({rat(2), rat(2), rat(0), EdgeRule::closed}, 2),
        "threshold delta must lie in [0, 1]", std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        threshold_ladders({rat(2), rat(1, 2), rat(3, 4), EdgeRule::closed}, 2),
        "edge omega must lie in [0, delta]", std::invalid_argument);
    CHECK_THROWS_WITH_AS(threshold_ladders(tp, 0),
                         "ladder count out of range", std::invalid_argument);
  }

  TEST_CASE("edge anchor band membership under proportional widths") {
    // The open rule parks the anchor s = n*omega - n^2*delta - 1 at distance
    // 3*width - 1 below each gamma_n; with widths d_n/(3n) the band test
    // collapses to sqrt(1 + n^2)/3 in (1/2, 1), which holds only at n = 2.
    ThresholdParams tp{rat(2), rat(1, 2), rat(1, 2), EdgeRule::open};
    auto lad = threshold_ladders(tp, 8, WidthRule::proportional);
    for (const auto& lp : lad) {
      Rat anchor = Rat(lp.a) * tp.omega - Rat(lp.b) * tp.delta;
      Regime got = slope_regime(lp, Quad(anchor));
      if (lp.a == 2) {
        CHECK(got == Regime::band);
      } else {
        CHECK(got == Regime::unspecified);
      }
    }
  }

  TEST_CASE("claimed region matches ladder truth under covering widths") {
    std::vector<std::pair<Rat, Rat>> corners = {
        {rat(0), rat(0)},       {rat(1, 2), rat(0)},    {rat(1, 2), rat(1, 4)},
        {rat(1, 2), rat(1, 2)}, {rat(3, 4), rat(1, 4)}, {rat(1), rat(0)},
        {rat(1), rat(1)},       {rat(19, 20), rat(0)},  {rat(1, 3), rat(1, 3)}};
    for (EdgeRule rule : {EdgeRule::closed, EdgeRule::open}) {
      for (const auto& [delta, omega] : corners) {
        ThresholdParams tp{rat(2), delta, omega, rule};
        auto lad = threshold_ladders(tp, 24, WidthRule::covering);
        for (long ui = 0; ui <= 8; ++ui)
          for (long wi = 0; wi <= ui; ++wi) {  // w <= u keeps q <= r
            Rat u = rat(ui, 8), w = rat(wi, 8);
            bool claim = threshold_bounded(tp, u, w);
            bool div = family_divergent(tp, lad, u, w);
            CAPTURE(rat_str(delta));
            CAPTURE(rat_str(omega));
            CAPTURE(rat_str(u));
            CAPTURE(rat_str(w));
            CHECK(claim == !div);
          }
      }
    }
  }

  TEST_CASE("within-region truncated models stay small, outside they grow") {
    ThresholdParams tp{rat(2), rat(1, 2), rat(1, 4), EdgeRule::closed};
    auto family_log2 = [&](const Rat& u, const Rat& w, long n_ladders,
                           long depth) {
      double best = 0.0;
      for (const auto& lp : threshold_ladders(tp, n_ladders)) {
        Rat s = Rat(lp.a) * w - Rat(lp.b) * u;
        best = std::max(best, trunc_sup_log2(lp, Quad(s), depth));
      }
      return best;
    };
    // Inside: the threshold corner and a deep interior point stay flat no
    // matter how far the family or the rungs are pushed.
    CHECK(family_log2(rat(1, 2), rat(1, 4), 24, 12) ==
          doctest::Approx(family_log2(rat(1, 2), rat(1, 4), 6, 4)));
    CHECK(family_log2(rat(3, 4), rat(1, 4), 24, 12) < 2.0);
    // Left of the threshold some single ladder is divergent, so the signal
    // climbs steadily in the rung depth alone.
    double d4 = family_log2(rat(1, 4), rat(1, 8), 12, 4);
    double d8 = family_log2(rat(1, 4), rat(1, 8), 12, 8);
    double d12 = family_log2(rat(1, 4), rat(1, 8), 12, 12);
    CHECK(d8 > d4 + 1000.0);
    CHECK(d12 > d8 + 1000.0);
    // Straight above the corner every single ladder is finite and the
    // divergence lives across the family: first-rung exponents m/8 paired
    // with ratios m^m make the signal climb in the ladder count instead.
    double e6 = family_log2(rat(1, 2), rat(3, 8), 6, 4);
    double e12 = family_log2(rat(1, 2), rat(3, 8), 12, 4);
    double e24 = family_log2(rat(1, 2), rat(3, 8), 24, 4);
    CHECK(e12 > 2 * e6);
    CHECK(e24 > 2 * e12);
    CHECK(family_log2(rat(1, 2), rat(3, 8), 12, 12) ==
          doctest::Approx(e12));  // rung depth is inert here
  }

  TEST_CASE("proportional widths leak divergence past the threshold") {
    // delta - omega > 2/3 admits points right of the threshold where some
    // rung's inner sup is infinite: at delta = 19/20, u = w = 24/25 the
    // ladder with direction (20, 400) has slope 76/5 above gamma - width
    // since (76/5 + (2/3)*sqrt(401) midpoint algebra) reduces to
    // (114/5)^2 = 519.84 > 401.
    ThresholdParams tp{rat(2), rat(19, 20), rat(0), EdgeRule::closed};
    auto prop = threshold_ladders(tp, 24, WidthRule::proportional);
    Rat u = rat(24, 25), w = rat(24, 25);
    CHECK(threshold_bounded(tp, u, w));
    bool leak = false;
    for (const auto& lp : prop) {
      Rat s = Rat(lp.a) * w - Rat(lp.b) * u;
      if (slope_divergent(lp, Quad(s))) leak = true;
    }
    CHECK(leak);
    // The covering rule keeps the same point clean.
    auto cov = threshold_ladders(tp, 24, WidthRule::covering);
    for (const auto& lp : cov) {
      Rat s = Rat(lp.a) * w - Rat(lp.b) * u;
      CHECK_FALSE(slope_divergent(lp, Quad(s)));
    }
  }

  TEST_CASE("empty-region family diverges everywhere") {
    // Open rule with delta = 1, omega = 0: no (u, w) is bounded, and the
    // first-rung exponents n*w + n^2*(1 - u) + 1 >= 1 certify divergence at
    // every grid point.
    ThresholdParams tp{rat(2), rat(1), rat(0), EdgeRule::open};
    auto lad = threshold_ladders(tp, 16, WidthRule::covering);
    for (long ui = 0; ui <= 4; ++ui)
      for (long wi = 0; wi <= ui; ++wi) {
        Rat u = rat(ui, 4), w = rat(wi, 4);
        CHECK_FALSE(threshold_bounded(tp, u, w));
        CHECK(family_divergent(tp, lad, u, w));
      }
    // Concretely: at (1, 0) rung exponents are constant 1 while R_n = n^n
    // explodes, so the truncated signal grows without any divergent rung.
    double g4 = 0, g8 = 0;
    for (const auto& lp : lad) {
      Rat s = Rat(lp.a) * rat(0) - Rat(lp.b) * rat(1);
      CHECK_FALSE(slope_divergent(lp, Quad(s)));
      g4 = std::max(g4, trunc_sup_log2(lp, Quad(s), 4));
      g8 = std::max(g8, trunc_sup_log2(lp, Quad(s), 8));
    }
    CHECK(g4 > 7.0);   // ladder 4, rung 1: exponent 1, log2(R) = 8
    CHECK(g8 > 23.0);  // ladder 8: log2(8^8) = 24
  }

  TEST_CASE("combine glues hand-checkable spaces") {
    Space a({Scalar::from_rat(3)}, {"pt"});
    a.freeze();
    Space b({Scalar::from_rat(5)}, {"pt"});
    b.freeze();
    Space glued = combine({a, b}, 2);
    REQUIRE(glued.size() == 2);
    // c_2 is the smallest power of two with c*5 >= 4*3 = 12: c = 4.
    CHECK(glued.weight(0).as_rat() == 3);
    CHECK(glued.weight(1).as_rat() == 20);
    CHECK(glued.dist(0, 1) == 4);  // 2 + max(1, 2)
    CHECK(glued.label(0) == "1:pt");
    CHECK(glued.label(1) == "2:pt");

    // Maximal function by hand: at the second point the only balls are {b}
    // and (radius > 4) {a, b} with average 3/23 for f = (1, 0).
    Fn f = Fn::zero(2);
    f.values[0] = Scalar::one();
    Fn mf = maximal_fn(f, glued);
    CHECK(mf.values[0].as_rat() == 1);
    CHECK(mf.values[1].as_rat() == rat(3, 23));
  }

  TEST_CASE("combine dominance chain and ball locality") {
    std::vector<Space> parts = {two_point(1, 3), two_point(1, 1),
                                two_point(2, 4)};
    Space glued = combine(parts, 3);
    REQUIRE(glued.size() == 6);

    // Scale factors: c_1 = 1 (mu = 4), then c_2*2 >= 4*4 = 16: c_2 = 8
    // (mu = 16), then c_3*6 >= 8*(4 + 16) = 160: c_3 = 32 (mu = 192).
    CHECK(glued.weight(0).as_rat() == 1);
    CHECK(glued.weight(1).as_rat() == 3);
    CHECK(glued.weight(2).as_rat() == 8);
    CHECK(glued.weight(3).as_rat() == 8);
    CHECK(glued.weight(4).as_rat() == 64);
    CHECK(glued.weight(5).as_rat() == 128);

    // Each block dominates everything before it by the 2^n margin.
    Rat running = rat(4);
    std::vector<Rat> block_mass = {rat(16), rat(192)};
    for (size_t n = 0; n < block_mass.size(); ++n) {
      CHECK(block_mass[n] >=
            pow_rat(rat(2), static_cast<long>(n) + 2) * running);
      running += block_mass[n];
    }

    // Distances: intra-component ones survive, cross pairs sit at
    // 2 + max(one-based indices).
    CHECK(glued.dist(0, 1) == 2);
    CHECK(glued.dist(2, 3) == 2);
    CHECK(glued.dist(0, 2) == 4);
    CHECK(glued.dist(0, 4) == 5);
    CHECK(glued.dist(3, 5) == 5);

    // Balls of radius <= 2 never leave their component (balls are open, so
    // radius 2 keeps out even the partner point at distance 2).
    for (size_t i = 0; i < glued.size(); ++i) {
      auto ball = glued.ball(i, rat(2));
      for (size_t j : ball) CHECK(i / 2 == j / 2);
    }
    // Radius above the first cross distance reaches the neighbor component.
    CHECK(glued.ball(0, rat(9, 2)).size() == 4);

    CHECK(glued.find_label("2:a") == 2);
    CHECK(glued.find_label("3:b") == 5);

    // Truncation keeps a prefix.
    Space head = combine(parts, 1);
    CHECK(head.size() == 2);
    CHECK(head.label(0) == "1:a");
    CHECK(head.weight(1).as_rat() == 3);
  }

  TEST_CASE("combine rejects bad inputs") {
    std::vector<Space> parts = {two_point(1, 1), two_point(1, 1)};
    CHECK_THROWS_WITH_AS(combine(parts, 0),
                         "truncation must select between 1 and all components",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(combine(parts, 3),
                         "truncation must select between 1 and all components",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(combine(parts, 2, 3),
                         "combined space exceeds the point cap",
                         std::length_error);
    Space raw({Scalar::one()}, {"x"});
    std::vector<Space> unfrozen = {raw};
    CHECK_THROWS_WITH_AS(combine(unfrozen, 1),
                         "combine needs frozen components", std::logic_error);
  }

  TEST_CASE("combined sup preserves component witness ratios") {
    // Glue two explicit test spaces and check that a function supported on
    // one component still realizes that component's ratio up to the bounded
    // dilution allowed by the far-away mass of the other component.
    Rat p = rat(2);
    ExtRat q = rat(2), r = ExtRat::inf();
    TestSpaceParams small = scaled_family_params(p, rat(1), 1, 1, 2);
    TestSpaceParams big = scaled_family_params(p, rat(2), 1, 1, 2);
    ExplicitTestSpace xs = build_explicit(small);
    ExplicitTestSpace xb = build_explicit(big);

    Space glued = combine({xs.space, xb.space}, 2);
    REQUIRE(glued.size() == xs.space.size() + xb.space.size());

    auto ratio_on = [&](const Space& sp, const Fn& f) {
      Fn mf = maximal_fn(f, sp);
      Scalar num = lorentz_norm(mf, sp, p, r);
      Scalar den = lorentz_norm(f, sp, p, q);
      return num.log2() - den.log2();
    };

    for (const ExplicitTestSpace* part : {&xs, &xb}) {
      size_t offset = (part == &xs) ? 0 : xs.space.size();
      Fn local = part->indicator_ground(0);
      double local_ratio = ratio_on(part->space, local);

      Fn lifted = Fn::zero(glued.size());
      for (size_t i = 0; i < local.values.size(); ++i)
        lifted.values[offset + i] = local.values[i];
      double lifted_ratio = ratio_on(glued, lifted);

      // log2 of the allowed dilution factor 8 is 3.
      CHECK(lifted_ratio >= local_ratio - 3.0);
    }
  }
}
