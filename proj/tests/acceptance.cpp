// Acceptance suite: each criterion runs at its full trial count and prints
// one pass/fail line.

#include <gtest/gtest.h>

#include <iostream>

#include "decflow/acceptance.hpp"

using namespace decflow;

namespace {

void report(const accept::Outcome& o) {
  std::cout << (o.pass ? "PASS" : "FAIL") << " " << o.name << ": " << o.detail << std::endl;
  EXPECT_TRUE(o.pass) << o.name << ": " << o.detail;
}

}  // namespace

TEST(Acceptance, SsspSandwich) { report(accept::sssp_sandwich()); }

TEST(Acceptance, EsExactness) { report(accept::es_exactness()); }

TEST(Acceptance, RobustCoreProperties) { report(accept::robust_core_properties()); }

TEST(Acceptance, CertifyCoreDichotomy) { report(accept::certify_core_dichotomy()); }

TEST(Acceptance, EmbedWitnessContracts) { report(accept::embed_witness_contracts()); }

TEST(Acceptance, MwuFeasibility) { report(accept::mwu_feasibility()); }

TEST(Acceptance, EstimatorStatistics) { report(accept::estimator_stats()); }

TEST(Acceptance, CapacityFitting) { report(accept::capacity_fitting()); }

TEST(Acceptance, EndToEndFlow) { report(accept::end_to_end_flow()); }

TEST(Acceptance, ReductionsRoundTrip) { report(accept::reductions_roundtrip()); }

TEST(Acceptance, Determinism) { report(accept::determinism()); }
