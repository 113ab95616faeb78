#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stellar/serialize.hpp"
#include "stellar/state_zoo.hpp"

using namespace stellar;

TEST_CASE("state JSON round trip is bit-exact") {
    FockState psi = make_superposition({{cplx(0.4, -0.2), 0}, {1.0, 2}, {cplx(0.0, 0.7), 5}}, 12);
    json j = state_to_json(psi);
    FockState back = state_from_json(j);
    CHECK(back.modes() == psi.modes());
    CHECK(back.cutoff() == psi.cutoff());
    REQUIRE(back.amps().size() == psi.amps().size());
    for (std::size_t i = 0; i < psi.amps().size(); ++i) {
        CHECK(back.amps()[i].real() == psi.amps()[i].real());
        CHECK(back.amps()[i].imag() == psi.amps()[i].imag());
    }
    CHECK(state_to_json(back).dump() == j.dump());

    FockState two = tensor(make_fock(1, 6), make_fock(2, 6));
    json j2 = state_to_json(two);
    CHECK(state_to_json(state_from_json(j2)).dump() == j2.dump());
}

TEST_CASE("state JSON validation") {
    CHECK_THROWS_AS(state_from_json(json{{"modes", 1}}), spec_error);
    json bad = state_to_json(make_fock(1, 4));
    bad["amps"][0] = json::array({1.0});
    CHECK_THROWS_AS(state_from_json(bad), spec_error);
}

TEST_CASE("circuit JSON round trip") {
    GaussianCircuit g = GaussianCircuit::identity(2);
    g.passive = {0.1, -0.2, 0.3, 0.4};
    g.alphas = {cplx(0.5, -0.6), cplx(-0.1, 0.0)};
    g.rs = {0.7, -0.3};
    json j = circuit_to_json(g);
    CHECK(j["mesh"] == "rect-givens-v1");
    GaussianCircuit back = circuit_from_json(j);
    CHECK(back.modes == g.modes);
    CHECK(back.passive == g.passive);
    CHECK(back.alphas == g.alphas);
    CHECK(back.rs == g.rs);
    CHECK(circuit_to_json(back).dump() == j.dump());

    json bad = j;
    bad["mesh"] = "something-else";
    CHECK_THROWS_AS(circuit_from_json(bad), spec_error);
    bad = j;
    bad["rs"] = std::vector<double>{9.0, 0.0};
    CHECK_THROWS_AS(circuit_from_json(bad), parameter_error);
}

TEST_CASE("profile JSON and CSV") {
    StellarProfile p;
    p.state_id = "fock:2";
    p.n_max = 2;
    p.values = {0.375, 0.5, 1.0};
    p.flags = {false, true, false};
    p.seed = 99;
    p.opts.seed = 99;
    p.opts.starts = 32;
    FidelityResult e;
    e.best = GaussianCircuit::identity(1);
    e.best.rs[0] = 0.25;
    e.spread = 1e-5;
    e.starts_used = 32;
    e.cutoff = 40;
    p.entries = {e, e, e};

    json j = profile_to_json(p);
    StellarProfile back = profile_from_json(j);
    CHECK(back.state_id == p.state_id);
    CHECK(back.values == p.values);
    CHECK(back.seed == p.seed);
    CHECK(back.opts.starts == 32);
    CHECK(back.entries[0].best.rs[0] == 0.25);
    CHECK(std::vector<bool>(back.flags.begin(), back.flags.end()) ==
          std::vector<bool>(p.flags.begin(), p.flags.end()));
    CHECK(profile_to_json(back).dump() == j.dump());

    CHECK(profile_csv(p) == "n,f_star\n0,0.375\n1,0.5\n2,1\n");
}

TEST_CASE("region JSON and boundary CSV") {
    NoGoRegion r;
    r.scenario.input_id = "fock:2";
    r.scenario.target_id = "fock:1^2";
    r.input_cap = 2;
    r.target_cap = 2;
    r.rectangles.push_back({0.0, 0.13, 0, 0, true});
    r.rectangles.push_back({0.5, 0.05, 1, 2, false});

    json j = region_to_json(r, {"profiles/in.json", "profiles/out.json"});
    CHECK(j["profile_refs"].size() == 2);
    CHECK(j["boundary"].size() == 1); // the second rectangle is dominated
    NoGoRegion back = region_from_json(j);
    REQUIRE(back.rectangles.size() == 2);
    CHECK(back.rectangles[0].delta_lt == 0.13);
    CHECK(back.rectangles[1].certified == false);
    CHECK(back.scenario.input_id == "fock:2");
    CHECK(region_to_json(back, {"profiles/in.json", "profiles/out.json"}).dump() == j.dump());

    CHECK(boundary_csv(r) == "p,delta\n0,0.13\n");

    NoGoRegion stepped;
    stepped.rectangles.push_back({0.0, 0.125, 0, 0, true});
    stepped.rectangles.push_back({0.25, 0.5, 1, 4, true});
    CHECK(boundary_csv(stepped) == "p,delta\n0,0.125\n0.25,0.5\n");
}

TEST_CASE("scenario flags") {
    ConversionScenario s;
    s.flavor = ConversionFlavor::subadditive;
    s.purity = Purity::mixed;
    s.input_copies = 3;
    json j = scenario_to_json(s);
    ConversionScenario back = scenario_from_json(j);
    CHECK(back.flavor == ConversionFlavor::subadditive);
    CHECK(back.purity == Purity::mixed);
    CHECK(back.input_copies == 3);
    json bad = j;
    bad["flavor"] = "telepathy";
    CHECK_THROWS_AS(scenario_from_json(bad), spec_error);
}
