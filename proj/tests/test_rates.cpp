#include "doctest.h"

#include <cmath>

#include "v2x/channel.hpp"
#include "v2x/config.hpp"
#include "v2x/rates.hpp"
#include "v2x/rng.hpp"

using namespace v2x;

namespace {

// Config whose derived BS power, per-RSU power and noise floor equal the
// given watt values exactly (up to dB round-trip error).
SystemConfig cfg_pq(double p_w, double q_w, double sigma2_w, double s,
                    double c_min) {
  SystemConfig cfg = reference_config();
  double total = p_w + 2.0 * q_w;
  cfg.total_power_budget_dbm = w_to_dbm(total);
  cfg.bs_budget_fraction = p_w / total;
  cfg.noise_density_dbm_per_hz =
      w_to_dbm(sigma2_w) - 10.0 * std::log10(cfg.bandwidth_hz);
  cfg.sigma_eps_sq = s;
  cfg.c_min = c_min;
  return cfg;
}

NetworkRealization bench_realization() {
  NetworkRealization r;
  r.g_bs_rsu = {2.0, 1.0};
  r.g_rsu_veh = {{{1.0, 0.5}, {0.8, 0.4}}};
  r.g_bd_veh = {{{0.3, 0.2}, {0.1, 0.1}}};
  r.g_rsu_bd = {0.5, 0.25};
  r.g_cross = {};
  return r;
}

PowerAllocation zero_alloc() { return PowerAllocation{}; }

}  // namespace

TEST_CASE("first-slot SINR worked example") {
  SystemConfig cfg = cfg_pq(10.0, 10.0, 1.0, 0.0, 0.5);
  NetworkRealization r = bench_realization();
  r.g_bs_rsu = {1.0, 1.0};
  PowerAllocation a;
  a.alpha = {0.2, 0.0};
  auto g = sinr_first_slot(r, a, cfg);
  CHECK(g[0] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(g[1] == 0.0);
}

TEST_CASE("first-slot SINR with estimation error in the denominator") {
  SystemConfig cfg = cfg_pq(10.0, 10.0, 1.0, 0.01, 0.5);
  NetworkRealization r = bench_realization();
  r.g_bs_rsu = {2.0, 1.0};
  PowerAllocation a;
  a.alpha = {0.3, 0.5};
  auto g = sinr_first_slot(r, a, cfg);
  // 1*10*0.5 / (1*10*0.3 + 10*0.01*0.8 + 1)
  CHECK(g[1] == doctest::Approx(5.0 / 4.08).epsilon(1e-9));
}

TEST_CASE("zero transmit power means zero SINR everywhere") {
  SystemConfig cfg = reference_config();
  Topology topo = sample_topology(cfg, 2);
  NetworkRealization r = sample_channels(topo, cfg, 2);
  PowerAllocation a = zero_alloc();
  auto g1 = sinr_first_slot(r, a, cfg);
  CHECK(g1[0] == 0.0);
  CHECK(g1[1] == 0.0);
  auto g2 = sinr_second_slot(r, a, cfg, CrossInterferenceMode::allocated);
  for (int m = 0; m < 2; ++m)
    for (int i = 0; i < 2; ++i) CHECK(g2[m][i] == 0.0);
}

TEST_CASE("second-slot SINR worked example with backscatter") {
  SystemConfig cfg = cfg_pq(10.0, 10.0, 1.0, 0.0, 0.5);
  NetworkRealization r = bench_realization();
  PowerAllocation a;
  a.beta = {{{0.3, 0.4}, {0.0, 0.0}}};
  a.xi = {0.4, 0.0};
  auto g = sinr_second_slot(r, a, cfg);
  // eff1 = 1 + 0.4*0.3*0.5 = 1.06; eff2 = 0.5 + 0.4*0.2*0.5 = 0.54
  CHECK(g[0][0] == doctest::Approx(3.18).epsilon(1e-9));
  CHECK(g[0][1] == doctest::Approx(2.16 / 2.62).epsilon(1e-9));
}

TEST_CASE("cross interference modes differ only through the neighbor power") {
  SystemConfig cfg = cfg_pq(10.0, 10.0, 1.0, 0.0, 0.5);
  NetworkRealization r = bench_realization();
  r.g_cross = {{{0.1, 0.1}, {0.1, 0.1}}};
  PowerAllocation a;
  a.beta = {{{0.3, 0.4}, {0.2, 0.1}}};
  a.xi = {0.4, 0.0};
  auto full = sinr_second_slot(r, a, cfg, CrossInterferenceMode::full_budget);
  auto part = sinr_second_slot(r, a, cfg, CrossInterferenceMode::allocated);
  // Neighbor radiates 0.3 of its budget, so allocated-mode SINR is higher.
  for (int i = 0; i < 2; ++i) CHECK(part[0][i] > full[0][i]);
  // With the neighbor at full budget the two modes agree.
  a.beta[1] = {0.5, 0.5};
  auto part2 = sinr_second_slot(r, a, cfg, CrossInterferenceMode::allocated);
  auto full2 = sinr_second_slot(r, a, cfg, CrossInterferenceMode::full_budget);
  CHECK(part2[0][0] == doctest::Approx(full2[0][0]).epsilon(1e-12));
}

TEST_CASE("rate function reference points") {
  CHECK(rate(0.0, 0.5) == 0.0);
  CHECK(rate(1.0, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rate(3.0, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rate(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("end-to-end rate is half the bottleneck hop") {
  SystemConfig cfg = reference_config();
  std::array<double, 2> c_rsu{2.0, 2.0};
  std::array<std::array<double, 2>, 2> c_veh{{{3.0, 3.0}, {3.0, 3.0}}};
  auto [e2e, sum] = end_to_end_and_sum(c_rsu, c_veh, cfg);
  for (int m = 0; m < 2; ++m)
    for (int i = 0; i < 2; ++i)
      CHECK(e2e[m][i] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sum == doctest::Approx(4e6).epsilon(1e-12));

  c_rsu = {1.0, 1.0};
  c_veh = {{{1.0, 1.0}, {1.0, 1.0}}};
  auto [e2, s2] = end_to_end_and_sum(c_rsu, c_veh, cfg);
  CHECK(e2[0][0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s2 == doctest::Approx(2e6).epsilon(1e-12));

  // Never above half of either hop.
  c_rsu = {0.7, 1.9};
  c_veh = {{{1.2, 0.1}, {0.4, 2.5}}};
  auto [e3, s3] = end_to_end_and_sum(c_rsu, c_veh, cfg);
  (void)s3;
  for (int m = 0; m < 2; ++m)
    for (int i = 0; i < 2; ++i) {
      CHECK(e3[m][i] <= 0.5 * c_rsu[m] + 1e-15);
      CHECK(e3[m][i] <= 0.5 * c_veh[m][i] + 1e-15);
    }
}

TEST_CASE("total power reference points") {
  SystemConfig cfg = cfg_pq(1.0, 1.0, 1.0, 0.0, 0.5);
  PowerAllocation a = zero_alloc();
  CHECK(total_power(a, cfg) == cfg.circuit_w());
  a.alpha = {0.5, 0.5};
  CHECK(total_power(a, cfg) ==
        doctest::Approx(1.0031622776601684).epsilon(1e-12));
  a.beta = {{{0.5, 0.5}, {0.5, 0.5}}};
  CHECK(total_power(a, cfg) ==
        doctest::Approx(1.0 + 2.0 + cfg.circuit_w()).epsilon(1e-12));
}

TEST_CASE("energy efficiency basics") {
  SystemConfig cfg = reference_config();
  Topology topo = sample_topology(cfg, 9);
  NetworkRealization r = sample_channels(topo, cfg, 9);
  CHECK(energy_efficiency(r, zero_alloc(), cfg) == 0.0);

  PowerAllocation a;
  a.alpha = {0.2, 0.3};
  a.beta = {{{0.2, 0.3}, {0.25, 0.25}}};
  a.xi = {0.5, 0.5};
  double ee1 = energy_efficiency(r, a, cfg);
  CHECK(ee1 > 0.0);

  // Doubling bandwidth at a fixed noise floor doubles the sum rate and
  // leaves powers alone.
  SystemConfig wide = cfg;
  wide.bandwidth_hz = 2e6;
  wide.noise_density_dbm_per_hz -= 10.0 * std::log10(2.0);
  CHECK(std::abs(wide.noise_w() - cfg.noise_w()) <= 1e-12 * cfg.noise_w());
  double ee2 = energy_efficiency(r, a, wide);
  CHECK(ee2 == doctest::Approx(2.0 * ee1).epsilon(1e-9));
}

TEST_CASE("estimation interference reference points") {
  SystemConfig perfect = cfg_pq(10.0, 10.0, 1.0, 0.0, 0.5);
  PowerAllocation a;
  a.alpha = {0.4, 0.6};
  a.beta = {{{0.25, 0.25}, {0.1, 0.1}}};
  a.xi = {0.5, 0.0};
  EstimationInterference none = estimation_interference(a, perfect);
  CHECK(none.bs_w == 0.0);
  CHECK(none.rsu_w[0] == 0.0);
  CHECK(none.rsu_w[1] == 0.0);
  CHECK(none.total_w == 0.0);

  SystemConfig cfg = cfg_pq(10.0, 10.0, 1.0, 0.01, 0.5);
  EstimationInterference est = estimation_interference(a, cfg);
  CHECK(est.bs_w == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(est.rsu_w[0] == doctest::Approx(0.055).epsilon(1e-9));
  CHECK(est.total_w ==
        doctest::Approx(est.bs_w + est.rsu_w[0] + est.rsu_w[1]).epsilon(1e-12));

  SystemConfig twice = cfg_pq(20.0, 10.0, 1.0, 0.01, 0.5);
  CHECK(estimation_interference(a, twice).bs_w ==
        doctest::Approx(0.2).epsilon(1e-9));
}

TEST_CASE("SINR monotonicity in the allocation") {
  SystemConfig cfg = reference_config();
  cfg.sigma_eps_sq = 0.005;
  Topology topo = sample_topology(cfg, 3);
  NetworkRealization r = sample_channels(topo, cfg, 3);

  PowerAllocation lo, hi;
  lo.alpha = {0.2, 0.3};
  hi.alpha = {0.4, 0.3};
  CHECK(sinr_first_slot(r, hi, cfg)[0] > sinr_first_slot(r, lo, cfg)[0]);
  // More power on the strong user hurts the weak one.
  CHECK(sinr_first_slot(r, hi, cfg)[1] < sinr_first_slot(r, lo, cfg)[1]);

  lo = PowerAllocation{};
  hi = PowerAllocation{};
  lo.beta = {{{0.2, 0.3}, {0.0, 0.0}}};
  hi.beta = {{{0.4, 0.3}, {0.0, 0.0}}};
  lo.xi = hi.xi = {0.5, 0.5};
  auto glo = sinr_second_slot(r, lo, cfg);
  auto ghi = sinr_second_slot(r, hi, cfg);
  CHECK(ghi[0][0] > glo[0][0]);
  CHECK(ghi[0][1] < glo[0][1]);
}

TEST_CASE("zero reflection removes the backscatter path entirely") {
  SystemConfig cfg = reference_config();
  Topology topo = sample_topology(cfg, 4);
  NetworkRealization r = sample_channels(topo, cfg, 4);
  PowerAllocation a;
  a.beta = {{{0.3, 0.2}, {0.2, 0.3}}};
  a.xi = {0.0, 0.0};
  auto base = sinr_second_slot(r, a, cfg);
  NetworkRealization mod = r;
  mod.g_bd_veh = {{{7.0, 8.0}, {9.0, 10.0}}};
  mod.g_rsu_bd = {11.0, 12.0};
  auto same = sinr_second_slot(mod, a, cfg);
  for (int m = 0; m < 2; ++m)
    for (int i = 0; i < 2; ++i) CHECK(base[m][i] == same[m][i]);
}

TEST_CASE("reflection strengthens the strong vehicle link under perfect CSI") {
  SystemConfig cfg = reference_config();
  Topology topo = sample_topology(cfg, 6);
  NetworkRealization r = sample_channels(topo, cfg, 6);
  r.g_cross = {};
  PowerAllocation lo, hi;
  lo.beta = hi.beta = {{{0.3, 0.2}, {0.3, 0.2}}};
  lo.xi = {0.1, 0.1};
  hi.xi = {0.8, 0.8};
  auto glo = sinr_second_slot(r, lo, cfg);
  auto ghi = sinr_second_slot(r, hi, cfg);
  CHECK(ghi[0][0] > glo[0][0]);
  CHECK(ghi[1][0] > glo[1][0]);
}

TEST_CASE("full evaluation is internally consistent") {
  SystemConfig cfg = reference_config();
  cfg.sigma_eps_sq = 0.0025;
  Rng rng(mix_seed(77, 0x7261746573ULL));
  for (int t = 0; t < 10; ++t) {
    std::uint64_t seed = 100 + t;
    Topology topo = sample_topology(cfg, seed);
    NetworkRealization r = sample_channels(topo, cfg, seed);
    PowerAllocation a;
    a.alpha = {rng.uniform(0.0, 0.5), rng.uniform(0.0, 0.5)};
    a.beta = {{{rng.uniform(0.0, 0.5), rng.uniform(0.0, 0.5)},
               {rng.uniform(0.0, 0.5), rng.uniform(0.0, 0.5)}}};
    a.xi = {rng.uniform(), rng.uniform()};
    RateReport rep = evaluate(r, a, cfg);
    for (int m = 0; m < 2; ++m) {
      CHECK(rep.c_rsu[m] == rate(rep.gamma_rsu[m], cfg.t1));
      for (int i = 0; i < 2; ++i) {
        CHECK(rep.c_veh[m][i] == rate(rep.gamma_veh[m][i], cfg.t2));
        CHECK(rep.e2e_rate[m][i] >= 0.0);
      }
    }
    CHECK(rep.total_power_w == total_power(a, cfg));
    CHECK(rep.ee_bits_per_joule ==
          doctest::Approx(rep.sum_rate_bps / rep.total_power_w)
              .epsilon(1e-15));
    CHECK(std::isfinite(rep.ee_bits_per_joule));
    CHECK(rep.ee_bits_per_joule >= 0.0);
  }
}

TEST_CASE("rate-floor slack sign agrees with the SINR threshold test") {
  SystemConfig cfg = reference_config();
  cfg.sigma_eps_sq = 0.0025;
  const double th = cfg.rate_threshold();
  Rng rng(mix_seed(88, 0x736c61636bULL));
  int checked = 0;
  for (int t = 0; t < 40; ++t) {
    std::uint64_t seed = 300 + t;
    Topology topo = sample_topology(cfg, seed);
    NetworkRealization r = sample_channels(topo, cfg, seed);
    PowerAllocation a;
    a.alpha = {rng.uniform(0.0, 0.5), rng.uniform(0.0, 0.5)};
    a.beta = {{{rng.uniform(0.0, 0.5), rng.uniform(0.0, 0.5)},
               {rng.uniform(0.0, 0.5), rng.uniform(0.0, 0.5)}}};
    a.xi = {rng.uniform(), rng.uniform()};
    auto g1 = sinr_first_slot(r, a, cfg);
    auto bs = bs_constraint_slacks(r, a, cfg);
    for (int i = 0; i < 2; ++i) {
      if (std::abs(g1[i] - th) < 1e-9) continue;
      CHECK((bs[i] > 0.0) == (g1[i] > th));
      ++checked;
    }
    auto g2 = sinr_second_slot(r, a, cfg);
    for (int m = 0; m < 2; ++m) {
      auto rs = rsu_constraint_slacks(r, a, cfg, m);
      for (int i = 0; i < 2; ++i) {
        if (std::abs(g2[m][i] - th) < 1e-9) continue;
        CHECK((rs[i] > 0.0) == (g2[m][i] > th));
        ++checked;
      }
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("budget and box slacks are plain affine expressions") {
  SystemConfig cfg = cfg_pq(10.0, 10.0, 1.0, 0.0, 0.5);
  NetworkRealization r = bench_realization();
  PowerAllocation a;
  a.alpha = {0.25, 0.35};
  a.beta = {{{0.2, 0.2}, {0.3, 0.3}}};
  a.xi = {0.4, 0.9};
  auto bs = bs_constraint_slacks(r, a, cfg);
  CHECK(bs[2] == doctest::Approx(cfg.p_max_w() * 0.4).epsilon(1e-9));
  CHECK(bs[3] == doctest::Approx(0.4).epsilon(1e-12));
  auto r0 = rsu_constraint_slacks(r, a, cfg, 0);
  CHECK(r0[2] == doctest::Approx(cfg.q_max_w() * 0.6).epsilon(1e-9));
  CHECK(r0[3] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(r0[4] == doctest::Approx(0.6).epsilon(1e-12));
  auto r1 = rsu_constraint_slacks(r, a, cfg, 1);
  CHECK(r1[4] == doctest::Approx(0.1).epsilon(1e-12));
}
