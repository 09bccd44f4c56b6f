#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "quint/gauss_hermite.hpp"
#include "quint/neutron.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace quint;

namespace {
constexpr double pi = 3.141592653589793;

SlabLayer plain_slab(double optical, PureAxis axis, double attenuation = 0.0,
                     double transmission = 1.0) {
  return {{optical, attenuation, axis}, transmission};
}
}  // namespace

TEST_CASE("forward amplitude components") {
  // delta = 0, eta = 1: no interaction
  const Amplitude none = forward_amplitude({0.5, 0.0, 1.0});
  CHECK(none.magnitude == 0.0);
  CHECK(none.direction.q().w == 1.0);

  // delta = pi/4, eta = 1: (1 + i)/2k
  const double k = 0.25;
  const Amplitude f = forward_amplitude({k, pi / 4, 1.0});
  const Quaternion v = f.value();
  CHECK_THAT(v.w, WithinAbs(1.0 / (2.0 * k), 1e-12));
  CHECK_THAT(v.x, WithinAbs(1.0 / (2.0 * k), 1e-12));
  CHECK(v.y == 0.0);
  CHECK(v.z == 0.0);

  // frozen oracle at k=0.002, delta=0.3, eta=0.85
  const Amplitude g = forward_amplitude({0.002, 0.3, 0.85});
  const Quaternion gv = g.value();
  CHECK_THAT(gv.w, WithinRel(119.98652559644501, 1e-13));
  CHECK_THAT(gv.x, WithinRel(74.616181831693362, 1e-13));
  CHECK_THAT(g.magnitude, WithinRel(141.29522609007949, 1e-13));

  // off-axis material: same components along the requested axis
  const Amplitude h = forward_amplitude({0.002, 0.3, 0.85}, axis_j);
  CHECK_THAT(h.value().y, WithinRel(74.616181831693362, 1e-13));
  CHECK(h.value().x == 0.0);

  CHECK_THROWS_AS(forward_amplitude({-1.0, 0.1, 1.0}), ValueError);
  CHECK_THROWS_AS(forward_amplitude({1.0, 0.1, 1.5}), ValueError);
}

TEST_CASE("scattering and absorption cross sections") {
  const double k = 0.002;
  CHECK_THAT(scattering_xsec({k, 0.3, 0.85}),
             WithinRel(250879.30701994423, 1e-13));
  CHECK_THAT(absorption_xsec({k, 0.3, 0.85}),
             WithinRel(217947.99034279191, 1e-13));
  CHECK(absorption_xsec({k, 0.7, 1.0}) == 0.0);
  CHECK_THAT(absorption_xsec({k, 0.0, 0.0}), WithinRel(pi / (k * k), 1e-13));
  // ((1-eta)/2)^2 term alone at delta = 0
  CHECK_THAT(scattering_xsec({k, 0.0, 0.99}),
             WithinRel(4.0 * pi / (k * k) * 2.5e-5, 1e-12));
}

TEST_CASE("scattering cross section equals 4 pi |f|^2") {
  auto rng = testutil::make_rng(41);
  for (int it = 0; it < 10000; ++it) {
    NuclearChannel ch;
    ch.k = testutil::uniform(rng, 1e-4, 1.0);
    ch.delta = testutil::uniform(rng, -1.5, 1.5);
    ch.eta = testutil::uniform(rng, 0.0, 1.0);
    const Amplitude f = forward_amplitude(ch);
    const double sig = scattering_xsec(ch);
    CHECK_THAT(4.0 * pi * f.magnitude * f.magnitude,
               WithinAbs(sig, 1e-12 * (sig + 1.0)));
  }
}

TEST_CASE("optical theorem: total cross section from Im f") {
  auto rng = testutil::make_rng(42);
  for (int it = 0; it < 10000; ++it) {
    NuclearChannel ch;
    ch.k = testutil::uniform(rng, 1e-4, 1.0);
    ch.delta = testutil::uniform(rng, -1.5, 1.5);
    ch.eta = testutil::uniform(rng, 0.0, 1.0);
    const double total = scattering_xsec(ch) + absorption_xsec(ch);
    const double im_f = forward_amplitude(ch).value().x;
    CHECK_THAT(total, WithinAbs((4.0 * pi / ch.k) * im_f,
                                1e-12 * (total + 1.0)));
  }
}

TEST_CASE("elasticity from absorption and phase from scattering") {
  const double k = 3.5449077018110321e-4;  // 4 pi / k^2 = 1e8 barn
  CHECK_THAT(4.0 * pi / (k * k), WithinRel(1e8, 1e-12));

  const double eta = eta_from_absorption(1e4, k);
  CHECK_THAT(1.0 - eta, WithinRel(2.0002000400100028e-4, 1e-10));
  CHECK_THAT(1.0 - eta, WithinRel(2e-4, 0.01));

  const double delta = delta_from_scattering(1.0, k);
  CHECK_THAT(delta, WithinRel(1.0000000016666667e-4, 1e-10));
  CHECK_THAT(delta, WithinRel(1e-4, 0.01));

  CHECK_THROWS_AS(eta_from_absorption(pi / (k * k) * 1.0001, k),
                  UnphysicalAbsorption);

  auto rng = testutil::make_rng(43);
  for (int it = 0; it < 1000; ++it) {
    NuclearChannel ch;
    ch.k = testutil::uniform(rng, 1e-4, 1.0);
    ch.delta = testutil::uniform(rng, 0.0, 1.5);
    ch.eta = testutil::uniform(rng, 0.05, 1.0);
    CHECK_THAT(eta_from_absorption(absorption_xsec(ch), ch.k),
               WithinAbs(ch.eta, 1e-9));
    CHECK_THAT(delta_from_scattering(scattering_xsec(ch), ch.k, ch.eta),
               WithinAbs(ch.delta, 1e-9));
  }
}

TEST_CASE("slab phase splits into optical and attenuation parts") {
  SlabSpec vac;
  vac.channel = {0.004, 0.0, 1.0};
  vac.number_density = 3e-7;
  vac.thickness = 5e4;
  const SlabPhase none = slab_phase(vac);
  CHECK(none.optical == 0.0);
  CHECK(none.attenuation == 0.0);

  SlabSpec slab;
  slab.channel = {0.004, 0.2, 0.9};
  slab.number_density = 3e-7;
  slab.thickness = 5e4;
  slab.axis = axis_j;
  const SlabPhase p = slab_phase(slab);
  CHECK_THAT(p.optical, WithinRel(1032.2385215934137, 1e-13));
  CHECK_THAT(p.attenuation, WithinRel(503.76941863966359, 1e-13));
  CHECK(p.axis.y == 1.0);

  SlabSpec doubled = slab;
  doubled.thickness *= 2.0;
  const SlabPhase p2 = slab_phase(doubled);
  CHECK_THAT(p2.optical, WithinRel(2.0 * p.optical, 1e-14));
  CHECK_THAT(p2.attenuation, WithinRel(2.0 * p.attenuation, 1e-14));

  SlabSpec bad = slab;
  bad.thickness = 0.0;
  CHECK_THROWS_AS(slab_phase(bad), ValueError);
}

TEST_CASE("slab operator is T e^{-att} exp_pure(axis, optical)") {
  CHECK(slab_operator({0.0, 0.0, axis_i}, 1.0).w == 1.0);
  const Quaternion quarter = slab_operator({pi / 2, 0.0, axis_i}, 1.0);
  CHECK_THAT(quarter.x, WithinAbs(1.0, 1e-15));
  CHECK_THAT(quarter.w, WithinAbs(0.0, 1e-15));

  const Quaternion q = slab_operator({0.3, 0.1, axis_j}, 0.9);
  const double m = 0.9 * std::exp(-0.1);
  CHECK_THAT(q.w, WithinAbs(m * std::cos(0.3), 1e-14));
  CHECK_THAT(q.y, WithinAbs(m * std::sin(0.3), 1e-14));
  CHECK(q.x == 0.0);
  CHECK(q.z == 0.0);

  CHECK_THROWS_AS(slab_operator({0.3, 0.1, axis_j}, 0.0), ValueError);
  CHECK_THROWS_AS(slab_operator({0.3, 0.1, axis_j}, 1.5), ValueError);
  CHECK_THROWS_AS(slab_operator({0.3, -0.1, axis_j}, 1.0), ValueError);

  // norm never exceeds T for physical channels
  auto rng = testutil::make_rng(44);
  for (int it = 0; it < 1000; ++it) {
    SlabSpec spec;
    spec.channel = {testutil::uniform(rng, 1e-3, 1.0),
                    testutil::uniform(rng, -1.5, 1.5),
                    testutil::uniform(rng, 0.0, 1.0)};
    spec.number_density = testutil::uniform(rng, 1e-8, 1e-6);
    spec.thickness = testutil::uniform(rng, 1e3, 1e5);
    spec.transmission = testutil::uniform(rng, 0.1, 1.0);
    const Quaternion op =
        slab_operator(slab_phase(spec), spec.transmission);
    CHECK(norm(op) <= spec.transmission + 1e-12);
  }
}

TEST_CASE("slab composition follows beam order, first traversed rightmost") {
  const SlabLayer i90 = plain_slab(pi / 2, axis_i);
  const SlabLayer j90 = plain_slab(pi / 2, axis_j);

  // j90 after i90: exp(j pi/2) * exp(i pi/2) = j i = -k
  const std::vector<SlabLayer> ij{i90, j90};
  const Quaternion forward = compose_slabs(ij);
  CHECK_THAT(forward.z, WithinAbs(-1.0, 1e-15));
  const std::vector<SlabLayer> ji{j90, i90};
  const Quaternion backward = compose_slabs(ji);
  CHECK_THAT(backward.z, WithinAbs(1.0, 1e-15));

  const std::vector<SlabLayer> empty;
  CHECK(compose_slabs(empty).w == 1.0);

  // attenuations and transmissions multiply through
  const SlabLayer a = plain_slab(0.4, axis_i, 0.2, 0.9);
  const SlabLayer b = plain_slab(-1.1, axis_k, 0.3, 0.8);
  const std::vector<SlabLayer> ab{a, b};
  CHECK_THAT(norm(compose_slabs(ab)),
             WithinAbs(0.9 * 0.8 * std::exp(-0.5), 1e-13));

  // aligned axes commute and add phases
  auto rng = testutil::make_rng(45);
  for (int it = 0; it < 1000; ++it) {
    const PureAxis axis = testutil::random_axis(rng);
    const double p1 = testutil::uniform(rng, -20.0, 20.0);
    const double p2 = testutil::uniform(rng, -20.0, 20.0);
    const std::vector<SlabLayer> fwd{plain_slab(p1, axis),
                                     plain_slab(p2, axis)};
    const std::vector<SlabLayer> rev{plain_slab(p2, axis),
                                     plain_slab(p1, axis)};
    const Quaternion qf = compose_slabs(fwd);
    const Quaternion qr = compose_slabs(rev);
    const Quaternion sum = exp_pure(axis, p1 + p2).q();
    CHECK_THAT(qf.w, WithinAbs(qr.w, 1e-12));
    CHECK_THAT(qf.w, WithinAbs(sum.w, 1e-12));
    CHECK_THAT(dot4(qf, sum), WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("complex embedding reproduces scalar plate optics") {
  auto rng = testutil::make_rng(46);
  for (int it = 0; it < 1000; ++it) {
    const double d1 = testutil::uniform(rng, -30.0, 30.0);
    const double d2 = testutil::uniform(rng, -30.0, 30.0);
    const double t1 = testutil::uniform(rng, 0.2, 1.0);
    const double t2 = testutil::uniform(rng, 0.2, 1.0);
    const std::vector<SlabLayer> slabs{plain_slab(d1, axis_i, 0.0, t1),
                                       plain_slab(d2, axis_i, 0.0, t2)};
    const Quaternion q = compose_slabs(slabs);
    CHECK_THAT(q.w, WithinAbs(t1 * t2 * std::cos(d1 + d2), 1e-12));
    CHECK_THAT(q.x, WithinAbs(t1 * t2 * std::sin(d1 + d2), 1e-12));
  }
}

TEST_CASE("order discrepancy separates aligned from crossed axes") {
  const SlabLayer ti = plain_slab(9860.0 * pi / 180.0, axis_i);
  const SlabLayer al = plain_slab(-9980.0 * pi / 180.0, axis_i);
  CHECK_THAT(order_discrepancy(ti, al), WithinAbs(0.0, 1e-12));
  CHECK_THAT(order_discrepancy(ti, ti), WithinAbs(0.0, 1e-12));

  const SlabLayer i90 = plain_slab(pi / 2, axis_i);
  const SlabLayer j90 = plain_slab(pi / 2, axis_j);
  CHECK_THAT(order_discrepancy(i90, j90), WithinAbs(pi, 1e-12));

  auto rng = testutil::make_rng(47);
  for (int it = 0; it < 500; ++it) {
    const SlabLayer a = plain_slab(testutil::uniform(rng, -10.0, 10.0),
                                   testutil::random_axis(rng), 0.0,
                                   testutil::uniform(rng, 0.3, 1.0));
    const SlabLayer b = plain_slab(testutil::uniform(rng, -10.0, 10.0),
                                   testutil::random_axis(rng), 0.0,
                                   testutil::uniform(rng, 0.3, 1.0));
    CHECK_THAT(order_discrepancy(a, b),
               WithinAbs(order_discrepancy(b, a), 1e-12));
    // multiples of pi rotate to a central element, killing the order effect
    const SlabLayer half_turn = plain_slab(pi, testutil::random_axis(rng));
    CHECK_THAT(order_discrepancy(half_turn, b), WithinAbs(0.0, 1e-11));
  }

  const SlabLayer dead = plain_slab(0.1, axis_i, 800.0, 0.5);
  CHECK_THROWS_AS(order_discrepancy(dead, i90), DegenerateOperator);
}

TEST_CASE("Gauss-Hermite rules integrate Gaussian moments") {
  CHECK_THROWS_AS(gauss_hermite(0), ValueError);
  const GaussHermiteRule one = gauss_hermite(1);
  CHECK_THAT(one.nodes[0], WithinAbs(0.0, 1e-15));
  CHECK_THAT(one.weights[0], WithinAbs(std::sqrt(pi), 1e-14));

  for (int n : {5, 20, 64, 129}) {
    const GaussHermiteRule rule = gauss_hermite(n);
    REQUIRE(rule.nodes.size() == static_cast<std::size_t>(n));
    double m0 = 0.0, m2 = 0.0, m4 = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double x = rule.nodes[i], w = rule.weights[i];
      CHECK(w > 0.0);
      m0 += w;
      m2 += w * x * x;
      m4 += w * x * x * x * x;
      if (i > 0) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
      // symmetric about zero
      CHECK_THAT(x, WithinAbs(-rule.nodes[rule.nodes.size() - 1 - i], 1e-13));
    }
    const double rpi = std::sqrt(pi);
    CHECK_THAT(m0, WithinRel(rpi, 1e-12));
    CHECK_THAT(m2, WithinRel(rpi / 2.0, 1e-12));
    CHECK_THAT(m4, WithinRel(3.0 * rpi / 4.0, 1e-12));
  }
}

TEST_CASE("fringe visibility: monochromatic limit and frozen oracle") {
  const std::vector<SlabLayer> single{plain_slab(8.0, axis_i, 0.05, 0.95)};
  SpectralModel mono{2e-4, 0.0, 129};
  const FringeResult exact = fringe_visibility(single, mono);
  CHECK(exact.visibility == 1.0);
  CHECK_THAT(exact.phase, WithinAbs(8.0 - 2.0 * pi, 1e-12));

  // against an independent adaptive-quadrature evaluation
  SpectralModel spread{2e-4, 0.01, 129};
  const FringeResult fr = fringe_visibility(single, spread);
  CHECK_THAT(fr.visibility, WithinAbs(0.98726225456611227, 1e-9));
  CHECK_THAT(fr.phase, WithinAbs(1.7189939828653456, 1e-9));

  SpectralModel coarse{2e-4, 0.01, 63};
  CHECK_THROWS_AS(fringe_visibility(single, coarse), ValueError);
  SpectralModel negative{2e-4, -0.1, 129};
  CHECK_THROWS_AS(fringe_visibility(single, negative), ValueError);
  const std::vector<SlabLayer> none;
  CHECK_THROWS_AS(fringe_visibility(none, spread), ValueError);
}

TEST_CASE("fringe visibility decays with net phase and cancels back") {
  SpectralModel spectrum{2e-4, 0.01, 129};
  double last = 2.0;
  for (double phase = 0.0; phase <= 30.0; phase += 2.0) {
    const std::vector<SlabLayer> one{plain_slab(phase, axis_i)};
    const double v = fringe_visibility(one, spectrum).visibility;
    CHECK(v < last + 1e-12);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0 + 1e-12);
    last = v;
  }

  const double ti = 9860.0 * pi / 180.0;
  const double al = -9980.0 * pi / 180.0;
  const std::vector<SlabLayer> ti_only{plain_slab(ti, axis_i)};
  const std::vector<SlabLayer> ti_al{plain_slab(ti, axis_i),
                                     plain_slab(al, axis_i)};
  const std::vector<SlabLayer> net{plain_slab(ti + al, axis_i)};
  const double v_ti = fringe_visibility(ti_only, spectrum).visibility;
  const double v_pair = fringe_visibility(ti_al, spectrum).visibility;
  const double v_net = fringe_visibility(net, spectrum).visibility;
  CHECK_THAT(v_ti, WithinAbs(0.0028967849111368518, 1e-9));
  CHECK_THAT(v_pair, WithinAbs(0.99912164017807745, 1e-9));
  CHECK(v_ti < v_pair);
  CHECK_THAT(v_pair, WithinRel(v_net, 1e-12));
}
