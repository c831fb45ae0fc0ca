#include "lifa/dynamics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "lifa/rng.hpp"

using namespace lifa;

namespace {

NeuronParams quiet_neuron() {
    NeuronParams p;
    p.tau_n = 10.0;
    p.v_th_base = 2.0;
    p.v_spk = 3.0;
    p.v_idle = 0.0;
    return p;
}

// Closed-form solution of tau dv/dt = -v + I for constant input.
double leak_exact(double v0, double input, double tau, double t) {
    return input + (v0 - input) * std::exp(-t / tau);
}

TEST(StepNeuron, MatchesClosedFormDecay) {
    NeuronState s;
    s.v_n = 1.0;
    s.v_th = 2.0;
    auto r = step_neuron(s, quiet_neuron(), 0.0, 1.0);
    EXPECT_NEAR(r.state.v_n, 0.904837, 1e-6);
    EXPECT_FALSE(r.spiked);
}

TEST(StepNeuron, ZeroIsFixedPoint) {
    NeuronState s;
    s.v_n = 0.0;
    s.v_th = 2.0;
    auto r = step_neuron(s, quiet_neuron(), 0.0, 1.0);
    EXPECT_EQ(r.state.v_n, 0.0);
    EXPECT_FALSE(r.spiked);
}

TEST(StepNeuron, FiresAtThreshold) {
    NeuronParams p = quiet_neuron();
    p.refractory = 3;
    NeuronState s;
    s.v_n = p.v_th_base;
    s.v_th = p.v_th_base;
    auto r = step_neuron(s, p, 0.0, 1.0);
    EXPECT_TRUE(r.spiked);
    EXPECT_EQ(r.state.v_n, p.v_idle);
    EXPECT_EQ(r.state.refractory_left, 3);
}

TEST(StepNeuron, RefractoryHoldsMembrane) {
    NeuronParams p = quiet_neuron();
    p.refractory = 2;
    NeuronState s;
    s.v_n = p.v_th_base;
    s.v_th = p.v_th_base;
    auto r = step_neuron(s, p, 0.0, 1.0);
    ASSERT_TRUE(r.spiked);
    r = step_neuron(r.state, p, 5.0, 1.0);  // strong drive ignored while refractory
    EXPECT_FALSE(r.spiked);
    EXPECT_EQ(r.state.v_n, p.v_idle);
    EXPECT_EQ(r.state.refractory_left, 1);
    r = step_neuron(r.state, p, 5.0, 1.0);
    EXPECT_FALSE(r.spiked);
    EXPECT_EQ(r.state.refractory_left, 0);
}

TEST(StepNeuron, TrajectoryMatchesClosedFormPerStep) {
    const NeuronParams p = quiet_neuron();
    const double dt = 0.5;
    const double input = 1.3;
    NeuronState s;
    s.v_n = -0.4;
    s.v_th = 50.0;  // never fires
    double v = s.v_n;
    for (int k = 0; k < 200; ++k) {
        auto r = step_neuron(s, p, input, dt);
        v = leak_exact(v, input, p.tau_n, dt);
        ASSERT_NEAR(r.state.v_n, v, 1e-9);
        ASSERT_FALSE(r.spiked);
        s = r.state;
    }
}

TEST(StepNeuron, RejectsNonFiniteInput) {
    NeuronState s;
    s.v_th = 2.0;
    EXPECT_THROW(step_neuron(s, quiet_neuron(), std::numeric_limits<double>::quiet_NaN(), 1.0),
                 IntegrationError);
    s.v_n = std::numeric_limits<double>::infinity();
    EXPECT_THROW(step_neuron(s, quiet_neuron(), 0.0, 1.0), IntegrationError);
}

TEST(StepNeuron, ErrorCarriesIndex) {
    NeuronState s;
    s.v_n = std::numeric_limits<double>::quiet_NaN();
    try {
        step_neuron(s, quiet_neuron(), 0.0, 1.0, 17);
        FAIL() << "expected IntegrationError";
    } catch (const IntegrationError& e) {
        EXPECT_EQ(e.index(), 17);
    }
}

TEST(StepNeuron, RejectsOversizedStep) {
    NeuronState s;
    EXPECT_THROW(step_neuron(s, quiet_neuron(), 0.0, 11.0), ContractError);
    EXPECT_THROW(step_neuron(s, quiet_neuron(), 0.0, 0.0), ContractError);
}

TEST(StepAstrocyte, MatchesClosedFormDecay) {
    AstrocyteParams p;
    p.tau_ca = 100.0;
    AstrocyteState s;
    s.ca = 1.0;
    s = step_astrocyte(s, p, 0.0, 10.0);
    EXPECT_NEAR(s.ca, 0.904837, 1e-6);
}

TEST(StepAstrocyte, InputEqualsStateIsFixedPoint) {
    AstrocyteParams p;
    AstrocyteState s;
    s.ca = 0.5;
    s = step_astrocyte(s, p, 0.5, 1.0);
    EXPECT_DOUBLE_EQ(s.ca, 0.5);
}

TEST(StepAstrocyte, RejectsNaNInput) {
    AstrocyteParams p;
    AstrocyteState s;
    EXPECT_THROW(step_astrocyte(s, p, std::numeric_limits<double>::quiet_NaN(), 1.0),
                 IntegrationError);
}

TEST(StepGliotransmitter, ConvergesToRateFixedPoint) {
    AstrocyteParams p;
    p.release_gain = 2.0;
    p.tau_glio = 50.0;
    p.ca_threshold = 0.0;
    const double rate = 0.5;
    // g* = G r / (1 + G r) = 1/2 for G r = 1, from any g0 in [0, 1].
    for (double g0 : {0.0, 0.3, 1.0}) {
        AstrocyteState s;
        s.glio = g0;
        s.ca = 1.0;
        for (int k = 0; k < 2000; ++k) s = step_gliotransmitter(s, p, rate, 5.0);
        EXPECT_NEAR(s.glio, 0.5, 1e-4) << "g0=" << g0;
    }
}

TEST(StepGliotransmitter, ZeroRateZeroStateStaysZero) {
    AstrocyteParams p;
    AstrocyteState s;
    s = step_gliotransmitter(s, p, 0.0, 1.0);
    EXPECT_EQ(s.glio, 0.0);
}

TEST(StepGliotransmitter, CalciumGateBlocksRelease) {
    AstrocyteParams p;
    p.ca_threshold = 0.8;
    AstrocyteState below;
    below.ca = 0.5;
    below.glio = 0.25;
    AstrocyteState zero_rate = below;
    for (int k = 0; k < 50; ++k) {
        below = step_gliotransmitter(below, p, 1.0, 1.0);
        zero_rate = step_gliotransmitter(zero_rate, p, 0.0, 1.0);
        ASSERT_EQ(below.glio, zero_rate.glio);
    }
}

TEST(StepGliotransmitter, RejectsNegativeRate) {
    AstrocyteParams p;
    AstrocyteState s;
    EXPECT_THROW(step_gliotransmitter(s, p, -0.1, 1.0), ContractError);
}

TEST(StepReceptor, MatchesClosedFormDecay) {
    AstrocyteParams p;
    p.tau_glio = 50.0;
    AstrocyteState s;
    s.glio = 0.0;
    s.bound_fraction = 0.3;
    s = step_receptor(s, p, 5.0);
    EXPECT_NEAR(s.bound_fraction, 0.271451, 1e-6);
}

TEST(StepReceptor, ZeroStateStaysZero) {
    AstrocyteParams p;
    AstrocyteState s;
    s = step_receptor(s, p, 5.0);
    EXPECT_EQ(s.bound_fraction, 0.0);
}

TEST(StepReceptor, ConvergesToBindingFixedPoint) {
    AstrocyteParams p;
    p.binding_gain = 0.02;
    p.tau_glio = 50.0;
    AstrocyteState s;
    s.glio = 0.6;
    for (int k = 0; k < 4000; ++k) s = step_receptor(s, p, 2.0);
    const double k2 = p.binding_gain * s.glio * p.tau_glio;
    EXPECT_NEAR(s.bound_fraction, k2 / (1.0 + k2), 1e-4);
}

// g and gamma must stay inside [0, 1] on random trajectories for any
// dt <= min(tau_glio, tau_ca).
TEST(Bounds, GlioAndReceptorStayInUnitInterval) {
    Rng rng(20240517);
    for (int trial = 0; trial < 200; ++trial) {
        AstrocyteParams p;
        p.tau_ca = rng.uniform(5.0, 200.0);
        p.tau_glio = rng.uniform(5.0, 200.0);
        p.release_gain = rng.uniform(0.0, 5.0);
        p.binding_gain = rng.uniform(0.0, 0.2);
        p.ca_threshold = rng.uniform(0.0, 0.5);
        const double dt = rng.uniform(0.01, std::min(p.tau_glio, p.tau_ca));
        AstrocyteState s;
        s.glio = rng.uniform();
        s.bound_fraction = rng.uniform();
        for (int k = 0; k < 100; ++k) {
            s = step_astrocyte(s, p, rng.uniform(0.0, 2.0), dt);
            s = step_gliotransmitter(s, p, rng.uniform(0.0, 3.0), dt);
            s = step_receptor(s, p, dt);
            ASSERT_GE(s.glio, 0.0);
            ASSERT_LE(s.glio, 1.0);
            ASSERT_GE(s.bound_fraction, 0.0);
            ASSERT_LE(s.bound_fraction, 1.0);
        }
    }
}

TEST(EffectiveWeight, ZeroGlioPreservesBaseWeight) {
    AstrocyteParams p;
    p.release_scale = 1.0;
    p.base_activation = 0.5;
    p.astro_gain = 2.0;
    EXPECT_EQ(effective_weight(0.7, p, 0.0), 0.7);
}

TEST(EffectiveWeight, DirectEvaluation) {
    AstrocyteParams p;
    p.release_scale = 1.0;
    p.base_activation = 0.5;
    p.astro_gain = 2.0;
    EXPECT_DOUBLE_EQ(effective_weight(0.7, p, 0.25), 1.4);
}

TEST(EffectiveWeight, ZeroReleaseScaleIsConfigError) {
    AstrocyteParams p;
    p.release_scale = 0.0;
    p.base_activation = 0.5;
    p.astro_gain = 2.0;
    EXPECT_THROW(effective_weight(0.7, p, 0.1), ConfigError);
}

TEST(EffectiveWeight, MonotoneInGlio) {
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        AstrocyteParams p;
        p.base_activation = rng.uniform(0.05, 2.0);
        p.astro_gain = rng.uniform(0.0, 4.0);
        const double base = rng.uniform(0.0, 2.0);
        double prev = -1.0;
        for (double g = 0.0; g <= 1.0; g += 0.05) {
            const double w = effective_weight(base, p, g);
            ASSERT_GE(w, prev);
            prev = w;
        }
    }
}

TEST(IndirectPathway, StationaryReceptorReturnsDirectComponent) {
    EXPECT_EQ(indirect_pathway_weight(0.2, 5.0, 0.0, 50.0), 0.2);
}

TEST(IndirectPathway, DirectEvaluation) {
    EXPECT_NEAR(indirect_pathway_weight(0.2, 5.0, 0.01, 50.0), 0.201, 1e-12);
}

TEST(IndirectPathway, ZeroGainIgnoresReceptorRate) {
    EXPECT_EQ(indirect_pathway_weight(0.2, 0.0, 123.0, 50.0), 0.2);
}

} // namespace
