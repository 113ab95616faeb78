#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "stellar/state_zoo.hpp"
#include "stellar/wigner.hpp"

using namespace stellar;

namespace {

double value_at(const WignerGrid& g, double x, double p) {
    const double h = g.step();
    const int i = static_cast<int>(std::lround((x + g.extent) / h));
    const int j = static_cast<int>(std::lround((p + g.extent) / h));
    return g.values(i, j);
}

} // namespace

TEST_CASE("vacuum Wigner function is the standard Gaussian") {
    WignerGrid g = wigner(FockState::vacuum(1, 10));
    CHECK(g.integral() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(g.integral(true) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(value_at(g, 0.0, 0.0) == doctest::Approx(1.0 / M_PI).epsilon(1e-9));
    const double h = g.step();
    const double xs = std::round(1.0 / h) * h, ps = std::round(0.5 / h) * h;
    CHECK(value_at(g, xs, ps) ==
          doctest::Approx(std::exp(-xs * xs - ps * ps) / M_PI).epsilon(1e-9));
    CHECK(wln(FockState::vacuum(1, 10)) <= 1e-4);
}

TEST_CASE("coherent-state Wigner function is a shifted Gaussian") {
    const cplx beta(0.7, -0.4);
    WignerGrid g = wigner(make_coherent(beta, 40));
    const double x0 = std::sqrt(2.0) * beta.real(), p0 = std::sqrt(2.0) * beta.imag();
    // Probe near the displaced center (snapped to the grid).
    const double h = g.step();
    const double xs = std::round(x0 / h) * h, ps = std::round(p0 / h) * h;
    const double expected =
        std::exp(-((xs - x0) * (xs - x0) + (ps - p0) * (ps - p0))) / M_PI;
    CHECK(value_at(g, xs, ps) == doctest::Approx(expected).epsilon(1e-8));
    CHECK(g.integral() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(wln(make_coherent(beta, 40)) <= 1e-4);
}

TEST_CASE("squeezed vacuum stays non-negative") {
    GaussianCircuit g = GaussianCircuit::identity(1);
    g.rs[0] = 0.8;
    FockState sq = apply_circuit(g, FockState::vacuum(1, 60), 1e-8);
    CHECK(wln(sq) <= 1e-4);
}

TEST_CASE("Fock-state Wigner values at the origin follow parity") {
    WignerGrid g1 = wigner(make_fock(1));
    CHECK(value_at(g1, 0.0, 0.0) == doctest::Approx(-1.0 / M_PI).epsilon(1e-9));
    CHECK(g1.integral() == doctest::Approx(1.0).epsilon(1e-6));
    WignerGrid g2 = wigner(make_fock(2));
    CHECK(value_at(g2, 0.0, 0.0) == doctest::Approx(1.0 / M_PI).epsilon(1e-9));
}

TEST_CASE("logarithmic negativity reference values") {
    const double w2 = wln(make_fock(2));
    CHECK(w2 == doctest::Approx(0.55).epsilon(0.01));
    // |1,1> via product additivity: twice the single-photon value.
    const double w11 = wln_product({make_fock(1), make_fock(1)});
    CHECK(w11 == doctest::Approx(0.71).epsilon(0.01));
    CHECK(w2 < w11);
}

TEST_CASE("rotation invariance of the negativity") {
    FockState psi = make_superposition({{1.0, 0}, {0.8, 1}, {cplx(0.0, -0.5), 3}}, 40);
    const double base = wln(psi);
    for (double phi : {0.4, 1.3, 2.2}) {
        GaussianCircuit g = GaussianCircuit::identity(1);
        g.passive[0] = phi;
        CHECK(std::abs(wln(apply_circuit(g, psi, 1e-10)) - base) < 1e-3);
    }
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(wigner(FockState::vacuum(2, 5)), dimension_error);
    WignerOptions o;
    o.resolution = 100;
    CHECK_THROWS_AS(wigner(FockState::vacuum(1, 5), o), parameter_error);
    CHECK_THROWS_AS(wln_product({}), dimension_error);
}
