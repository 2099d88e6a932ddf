#include <doctest.h>

#include "qread/analysis.hpp"
#include "support.hpp"

using namespace qread;
using test::diag2;

TEST_CASE("synthesized_rate base cases") {
    const MemoryCell cell = ad_cell(0.1, 0.7, 0.4);
    const ProbeState probe(0.2, 0.0, -0.8);
    const SourceModel model{SourceKind::IidU, 0.4};
    CHECK(synthesized_rate(cell, probe, model, 1, 1) ==
          doctest::Approx(rate(cq_view(cell, probe))).epsilon(1e-10));

    const MemoryCell same = ad_cell(0.3, 0.3, 0.4);
    for (int i = 1; i <= 4; ++i) {
        CHECK(std::abs(synthesized_rate(same, probe, model, 4, i)) <= 1e-9);
    }

    const MemoryCell orth = ad_cell(0.0, 1.0, 0.5);
    const SourceModel uniform{SourceKind::IidU, 0.5};
    const ProbeState one(0, 0, -1);
    CHECK(synthesized_rate(orth, one, uniform, 2, 1) == doctest::Approx(1.0));
    CHECK(synthesized_rate(orth, one, uniform, 2, 2) == doctest::Approx(1.0));
}

TEST_CASE("synthesized_rate rejects incomplete coverage") {
    const MemoryCell cell = ad_cell(0.1, 0.7, 0.5);
    const ProbeState probe(0, 0, -1);
    const SourceModel model{SourceKind::IidU, 0.5};
    std::vector<SynthesizedChannelView> views;
    views.push_back(synthesize(cell, probe, model, 2, 2, {0}));
    CHECK_THROWS_AS(synthesized_rate(views), std::invalid_argument);
    views.push_back(synthesize(cell, probe, model, 2, 2, {1}));
    CHECK(synthesized_rate(views) >= 0.0);
}

TEST_CASE("synthesized_reliability") {
    const MemoryCell cell = ad_cell(0.05, 0.65, 0.5);
    const ProbeState probe(0.1, -0.2, -0.9);
    const SourceModel uniform{SourceKind::IidU, 0.5};
    const CqEnsemble e = cq_view(cell, probe);

    CHECK(synthesized_reliability(cell, probe, uniform, 1, 1) ==
          doctest::Approx(reliability(e)).epsilon(1e-10));

    const double f = fidelity(e.state0, e.state1);
    CHECK(synthesized_reliability(cell, probe, uniform, 2, 2) ==
          doctest::Approx(f * f).epsilon(1e-9));

    const MemoryCell same = ad_cell(0.3, 0.3, 0.5);
    CHECK(synthesized_reliability(same, probe, uniform, 2, 1) == doctest::Approx(1.0));
}

TEST_CASE("one_step_report laws") {
    SplitMix64 rng(103);
    for (int t = 0; t < 40; ++t) {
        const CqEnsemble e = random_cq_ensemble(rng, 2, 0.5, 0.5);
        const OneStepReport r = one_step_report(e);
        CHECK(std::abs(r.rate_minus + r.rate_plus - 2.0 * r.rate) <= 1e-9);
        CHECK(std::abs(r.z_plus - r.z * r.z) <= 1e-9);
        CHECK(r.z_minus <= 2.0 * r.z - r.z * r.z + 1e-9);
        CHECK(r.z_minus >= r.z_plus - 1e-9);
    }
    for (int t = 0; t < 40; ++t) {
        const CqEnsemble e = random_cq_ensemble(rng, 2);
        const OneStepReport r = one_step_report(e);
        CHECK(r.rate_plus >= r.rate - 1e-9);
        const double f = fidelity(e.state0, e.state1);
        CHECK(std::abs(r.z_plus - r.z * f) <= 1e-9);  // Z+ = 2 sqrt(p(1-p)) F^2
    }
}

TEST_CASE("holevo lower bound") {
    CHECK(holevo_lower_bound(CqEnsemble(0.5, test::ket0(), test::ket1())) ==
          doctest::Approx(1.0));
    CHECK(holevo_lower_bound(CqEnsemble(0.3, test::ket0(), test::ket0())) ==
          doctest::Approx(0.0));
    SplitMix64 rng(107);
    for (int t = 0; t < 50; ++t) {
        const CqEnsemble e = random_cq_ensemble(rng, 2);
        CHECK(holevo_lower_bound(e) <= rate(e) + 1e-9);
    }
}

TEST_CASE("roga upper bound") {
    for (double p : {0.2, 0.5, 0.8}) {
        CHECK(roga_upper_bound(p, 0.0) == doctest::Approx(test::binary_h(p)));
    }
    CHECK(roga_upper_bound(0.5, 1.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(roga_upper_bound(0.1, 0.9), std::invalid_argument);

    SplitMix64 rng(109);
    for (int t = 0; t < 50; ++t) {
        const CqEnsemble e = random_cq_ensemble(rng, 2);
        CHECK(rate(e) <= roga_upper_bound(e.prior_p, reliability(e)) + 1e-9);
    }
}

TEST_CASE("rate-reliability bounds") {
    const RateBounds a = rate_reliability_bounds(0.5, 0.0);
    CHECK(a.lower == doctest::Approx(1.0));
    CHECK(a.upper == doctest::Approx(1.0));
    const RateBounds b = rate_reliability_bounds(0.5, 1.0);
    CHECK(b.lower == doctest::Approx(0.0));
    CHECK(b.upper == doctest::Approx(0.0));
    CHECK_THROWS_AS(rate_reliability_bounds(0.1, 0.7), std::invalid_argument);

    SplitMix64 rng(113);
    for (int t = 0; t < 200; ++t) {
        const CqEnsemble e = random_cq_ensemble(rng, 2);
        const double z = reliability(e);
        const RateBounds rb = rate_reliability_bounds(e.prior_p, z);
        const double i = rate(e);
        CHECK(rb.lower - 1e-9 <= i);
        CHECK(i <= std::min(rb.upper, roga_upper_bound(e.prior_p, z)) + 1e-9);
    }
}

TEST_CASE("symmetric lift") {
    SplitMix64 rng(127);
    for (int t = 0; t < 30; ++t) {
        const CqEnsemble e = random_cq_ensemble(rng, 2);
        const SymmetricLift lift = symmetric_lift(e);
        const double h_xb = von_neumann_entropy(joint_state(e));
        const double h_b = detail::entropy_bits(
            Matrix(e.prior_p * e.state0.matrix() + (1 - e.prior_p) * e.state1.matrix()));
        CHECK(std::abs(rate(lift.lifted) - (1.0 - (h_xb - h_b))) <= 1e-9);
    }

    CHECK(rate(symmetric_lift(CqEnsemble(0.4, test::ket0(), test::ket1())).lifted) ==
          doctest::Approx(1.0));
    SplitMix64 rng2(131);
    const DensityOperator sigma = random_density(rng2, 2, 2);
    CHECK(rate(symmetric_lift(CqEnsemble(0.5, sigma, sigma)).lifted) ==
          doctest::Approx(0.0).epsilon(1e-9));

    // exactly two nonzero Z~ blocks per lifted input
    const SymmetricLift lift = symmetric_lift(CqEnsemble(0.3, test::ket0(), test::ket1()));
    const Matrix& l0 = lift.lifted.state0.matrix();
    CHECK(l0.block(0, 2, 2, 2).norm() == 0.0);
    CHECK(l0.block(2, 0, 2, 2).norm() == 0.0);
    CHECK(l0.block(0, 0, 2, 2).norm() > 0.0);
    CHECK(l0.block(2, 2, 2, 2).norm() > 0.0);
}

TEST_CASE("trace-out correspondence and Z equality") {
    const MemoryCell cell = ad_cell(0.2, 0.75, 0.3);
    const ProbeState probe(0.3, 0.2, -0.7);
    const SourceModel induced{SourceKind::InducedFromIidX, 0.3};
    for (int N : {1, 2, 4}) {
        for (int i = 1; i <= N; ++i) {
            const TraceOutReport rep = trace_out_correspondence(cell, probe, induced, N, i);
            CHECK(rep.max_relative_deviation <= 1e-9);
            CHECK(rep.constant == doctest::Approx(std::pow(2.0, -N)));
        }
    }
    const CqEnsemble e = cq_view(cell, probe);
    const SymmetricLift lift = symmetric_lift(e);
    const SourceModel uniform{SourceKind::IidU, 0.5};
    for (int N : {2, 4}) {
        for (int i = 1; i <= N; ++i) {
            const double za = synthesized_reliability_pair(e.state0.matrix(), e.state1.matrix(),
                                                           induced, N, i);
            const double zl =
                synthesized_reliability_pair(lift.lifted.state0.matrix(),
                                             lift.lifted.state1.matrix(), uniform, N, i);
            CHECK(std::abs(za - zl) <= 1e-9);
        }
    }

    const SourceModel iid_u_biased{SourceKind::IidU, 0.3};
    CHECK_THROWS_AS(trace_out_correspondence(cell, probe, iid_u_biased, 2, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(trace_out_correspondence(cell, probe, induced, 8, 1), std::invalid_argument);
}

TEST_CASE("source reliability") {
    const SourceModel uniform{SourceKind::IidU, 0.5};
    for (int i = 1; i <= 8; ++i) {
        CHECK(source_reliability(uniform, 8, i) == doctest::Approx(1.0));
    }
    const SourceModel ind{SourceKind::InducedFromIidX, 0.8};
    CHECK(source_reliability(ind, 2, 1) == doctest::Approx(0.9329523031752479));
    const SourceModel iid{SourceKind::IidU, 0.2};
    for (int i = 1; i <= 4; ++i) {
        CHECK(source_reliability(iid, 4, i) == doctest::Approx(2.0 * std::sqrt(0.2 * 0.8)));
    }
}

TEST_CASE("polarization profile extremes") {
    const ProbeState one(0, 0, -1);
    const SourceModel uniform{SourceKind::IidU, 0.5};

    const MemoryCell same = ad_cell(0.3, 0.3, 0.5);
    const PolarizationProfile ps = polarization_profile(same, one, uniform, 4, 0.49);
    for (const ProfileRow& row : ps.rows) {
        CHECK(std::abs(row.rate_bits) <= 1e-9);
        CHECK(row.z_reliability == doctest::Approx(1.0));
        CHECK(row.is_bad);
        CHECK_FALSE(row.is_good);
    }
    CHECK(ps.bad_count == 4);

    const MemoryCell orth = ad_cell(0.0, 1.0, 0.5);
    const PolarizationProfile po = polarization_profile(orth, one, uniform, 4, 0.49);
    for (const ProfileRow& row : po.rows) {
        CHECK(row.rate_bits == doctest::Approx(1.0));
        CHECK(std::abs(row.z_reliability) <= 1e-9);
        CHECK(row.is_good);
        CHECK_FALSE(row.is_bad);
    }
    CHECK(po.good_count == 4);

    CHECK_THROWS_AS(polarization_profile(orth, one, uniform, 4, 0.5), std::invalid_argument);
}

TEST_CASE("large-Z and small-Zsrc index sets stay disjoint") {
    // asymmetric instance: B = {Z_i >= 1-eps}, C = {Zsrc_i <= eps} disjoint
    const MemoryCell cell = ad_cell(0.1, 0.5, 0.25);
    const ProbeState one(0, 0, -1);
    const SourceModel induced{SourceKind::InducedFromIidX, 0.25};
    for (int N : {4, 8}) {
        const PolarizationProfile profile = polarization_profile(cell, one, induced, N, 0.49);
        const double eps = std::exp2(beta_threshold_log2(profile.block_length == 4 ? 2 : 3, 0.49));
        for (const ProfileRow& row : profile.rows) {
            const bool in_b = row.z_reliability >= 1.0 - eps;
            const bool in_c = row.z_source <= eps;
            const bool both = in_b && in_c;
            CHECK_FALSE(both);
        }
    }
}
