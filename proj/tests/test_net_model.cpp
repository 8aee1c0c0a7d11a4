#include <doctest.h>

#include <cmath>

#include "ecofl/context.hpp"
#include "ecofl/net_model.hpp"
#include "ecofl/rng.hpp"

using namespace ecofl;

namespace {

bool near(double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

} // namespace

TEST_CASE("path loss follows the log-distance law") {
    auto lte = net::default_lte_config();
    auto nr = net::default_nr_config();

    // Adding a decade of distance adds 10*n dB exactly.
    CHECK(near(net::path_loss_db(lte, 10.0) - net::path_loss_db(lte, 1.0),
               10.0 * lte.pathloss_exponent));
    CHECK(near(net::path_loss_db(nr, 10.0) - net::path_loss_db(nr, 1.0),
               10.0 * nr.pathloss_exponent));

    // 1 m anchors are the free-space losses; higher carrier loses more.
    CHECK(net::path_loss_db(lte, 1.0) < net::path_loss_db(nr, 1.0));
    // Independent link-budget script values.
    CHECK(near(net::path_loss_db(lte, 1.0), 30.509582961722245, 1e-9));
    CHECK(near(net::path_loss_db(nr, 1.0), 43.32914410888889, 1e-9));

    // Sub-metre distances clamp to the 1 m anchor.
    CHECK(net::path_loss_db(lte, 0.2) == net::path_loss_db(lte, 1.0));
    CHECK(net::path_loss_db(lte, 0.0) == net::path_loss_db(lte, 1.0));
}

TEST_CASE("SNR definition and distance scaling") {
    auto lte = net::default_lte_config();

    // Transmit power placed exactly at path loss + noise gives SNR 1.
    double noise_dbm = net::kThermalNoiseDbmPerHz + 10.0 * std::log10(net::kPrbBandwidthHz) +
                       lte.noise_figure_db;
    CHECK(near(noise_dbm, -114.44727494896694, 1e-9));
    double tx = net::path_loss_db(lte, 50.0) + noise_dbm;
    CHECK(near(net::snr_linear_tx(lte, tx, 50.0), 1.0));

    // Doubling distance with n=3.5 costs 35*log10(2) = 10.536 dB.
    double s1 = net::snr_linear_tx(lte, 20.0, 80.0);
    double s2 = net::snr_linear_tx(lte, 20.0, 160.0);
    CHECK(near(10.0 * std::log10(s1 / s2), 35.0 * std::log10(2.0), 1e-9));

    // Reference geometry: downlink SNR 100 m from the gNB (link-budget script).
    auto nr = net::default_nr_config();
    net::Client c;
    c.position = {nr.bs_position.x + 100.0, nr.bs_position.y};
    CHECK(near(10.0 * std::log10(net::snr_linear(nr, c)), 58.11813084007804, 1e-9));

    // The floor keeps hopeless links finite.
    CHECK(net::snr_linear_tx(lte, -400.0, 1e4) == net::kSnrFloor);
}

TEST_CASE("plan wattages convert to the expected dBm") {
    CHECK(near(net::watts_to_dbm(0.15), 21.760912590556813, 1e-9));
    CHECK(near(net::watts_to_dbm(0.30), 24.771212547196626, 1e-9));
    CHECK(near(net::watts_to_dbm(0.50), 26.989700043360187, 1e-9));
}

TEST_CASE("achievable rate: shape, slope, and cap") {
    auto lte = net::default_lte_config();
    CHECK(net::achievable_rate_bps(0.0, 123.0, lte) == 0.0);
    CHECK(near(net::achievable_rate_bps(1.0, 1.0, lte), 180000.0));
    // Extreme SNR hits the 7.4 bps/Hz cap: 1 PRB -> 1.332 Mbps.
    CHECK(near(net::achievable_rate_bps(1.0, 1e6, lte), 180000.0 * 7.4));
    // Monotone in PRBs.
    CHECK(net::achievable_rate_bps(3.0, 5.0, lte) > net::achievable_rate_bps(2.0, 5.0, lte));
}

TEST_CASE("latency arithmetic and starvation sentinel") {
    auto lte = net::default_lte_config();
    lte.base_latency_s = 0.01;
    CHECK(near(net::latency_s(1e6, lte, 1e4), 0.02));
    CHECK(std::isinf(net::latency_s(0.0, lte, 1e4)));

    // More PRBs -> higher rate -> strictly lower latency.
    double snr = 10.0;
    double prev = net::latency_s(net::achievable_rate_bps(1.0, snr, lte), lte, 77120.0);
    for (double prbs = 2.0; prbs <= 6.0; prbs += 1.0) {
        double lat = net::latency_s(net::achievable_rate_bps(prbs, snr, lte), lte, 77120.0);
        CHECK(lat < prev);
        prev = lat;
    }
}

TEST_CASE("outage thresholds are closed") {
    net::QosClass voice{net::QosClassId::Voice, 0.1e6, 0.100};
    net::QosClass embb{net::QosClassId::Embb, 10e6, 0.080};

    // Meeting a bound exactly passes.
    CHECK_FALSE(net::check_outage(0.1e6, 0.100, voice));
    CHECK(net::check_outage(0.1e6 - 1.0, 0.100, voice));
    CHECK(net::check_outage(0.1e6, 0.100 + 1e-9, voice));

    // A voice client at 0.2 Mbps / 50 ms is fine.
    CHECK_FALSE(net::check_outage(0.2e6, 0.050, voice));
    // An eMBB client at 9 Mbps / 10 ms misses its rate floor.
    CHECK(net::check_outage(9e6, 0.010, embb));
}

TEST_CASE("random waypoint mobility") {
    net::MobilityConfig mob;
    mob.arena_m = 500.0;

    net::NetworkState state;
    state.clients.resize(8);
    Rng init(7);
    for (int i = 0; i < 8; ++i) {
        auto& c = state.clients[static_cast<size_t>(i)];
        c.client_id = i;
        c.position = {init.uniform(0.0, 500.0), init.uniform(0.0, 500.0)};
        c.waypoint = {init.uniform(0.0, 500.0), init.uniform(0.0, 500.0)};
        c.speed_mps = init.uniform(1.0, 3.0);
    }

    SUBCASE("zero speed never moves") {
        state.clients[0].speed_mps = 0.0;
        auto before = state.clients[0].position;
        Rng rng(1);
        for (int t = 0; t < 50; ++t) net::move_clients(state, mob, rng);
        CHECK(state.clients[0].position.x == before.x);
        CHECK(state.clients[0].position.y == before.y);
    }

    SUBCASE("same seed gives the same trajectory") {
        auto a = state;
        auto b = state;
        Rng ra(42), rb(42);
        for (int t = 0; t < 200; ++t) {
            net::move_clients(a, mob, ra);
            net::move_clients(b, mob, rb);
        }
        CHECK(net::state_to_string(a) == net::state_to_string(b));
    }

    SUBCASE("positions stay inside the arena for 10000 steps") {
        Rng rng(3);
        for (int t = 0; t < 10000; ++t) {
            net::move_clients(state, mob, rng);
            for (const auto& c : state.clients) {
                CHECK(c.position.x >= 0.0);
                CHECK(c.position.x <= mob.arena_m);
                CHECK(c.position.y >= 0.0);
                CHECK(c.position.y <= mob.arena_m);
            }
        }
    }
}

TEST_CASE("offered load and per-RAT head counts") {
    net::QosClass voice{net::QosClassId::Voice, 0.1e6, 0.100};
    net::QosClass embb{net::QosClassId::Embb, 10e6, 0.080};

    net::NetworkState state;
    state.clients.resize(5);
    for (int i = 0; i < 5; ++i) state.clients[static_cast<size_t>(i)].client_id = i;
    // Two voice on LTE, one voice on NR, two eMBB on NR.
    state.clients[0].qos_class = net::QosClassId::Voice;
    state.clients[0].assigned_rat = net::RatId::LTE;
    state.clients[1].qos_class = net::QosClassId::Voice;
    state.clients[1].assigned_rat = net::RatId::LTE;
    state.clients[2].qos_class = net::QosClassId::Voice;
    state.clients[2].assigned_rat = net::RatId::NR;
    state.clients[3].qos_class = net::QosClassId::Embb;
    state.clients[3].assigned_rat = net::RatId::NR;
    state.clients[4].qos_class = net::QosClassId::Embb;
    state.clients[4].assigned_rat = net::RatId::NR;

    net::refresh_distribution(state, voice, embb);
    CHECK(near(state.offered_load_bps[0], 0.2e6));
    CHECK(near(state.offered_load_bps[1], 0.1e6 + 20e6));
    CHECK(state.users_per_rat_class[0][0] == 2);
    CHECK(state.users_per_rat_class[0][1] == 0);
    CHECK(state.users_per_rat_class[1][0] == 1);
    CHECK(state.users_per_rat_class[1][1] == 2);
    CHECK(state.count_on_rat(net::RatId::LTE) == 2);
    CHECK(state.count_on_rat(net::RatId::NR) == 3);
    CHECK(state.count_class(net::QosClassId::Voice) == 3);
}

TEST_CASE("cell capacity is PRBs times the PRB ceiling") {
    auto lte = net::default_lte_config();
    CHECK(near(lte.capacity_bps(), 50.0 * 180e3 * 7.4, 1e-6));
    auto nr = net::default_nr_config();
    CHECK(near(nr.capacity_bps(), 106.0 * 180e3 * 7.4, 1e-6));
}

TEST_CASE("config validation rejects nonsense") {
    auto lte = net::default_lte_config();
    lte.prb_count = 0;
    CHECK_THROWS(lte.validate());
    auto nr = net::default_nr_config();
    nr.pathloss_exponent = 0.5;
    CHECK_THROWS(nr.validate());
    net::QosClass q{net::QosClassId::Voice, 0.0, 0.1};
    CHECK_THROWS(q.validate());
}
