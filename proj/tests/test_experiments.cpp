#include <cmath>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "cvclone/experiments.hpp"

namespace cvclone {
namespace {

std::string first_data_line(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') return line;
  }
  return {};
}

// ---------------------------------------------------------------- compare

TEST(Compare, ShortLinkWideAlphabetFavoursLocalCloning) {
  // Omega_a threshold diverges as tau -> 0, so for small tau the local strategy wins
  const auto r = compare(2, 0.1, 0.0, 2.0);
  EXPECT_EQ(r.regime, Regime::A);
  EXPECT_NEAR(r.f_tele, 2.0 / 3.0, 1e-14);
  EXPECT_EQ(r.winner, Winner::Lcdt);
}

TEST(Compare, WinnerFlipsAtThreshold) {
  const double crossing = 2.0 * std::log(9.0 / 7.0);
  EXPECT_NEAR(omega_thresholds(2, crossing, 0.0).omega_a(), 2.0, 1e-12);
  EXPECT_EQ(compare(2, 0.9 * crossing, 0.0, 2.0).winner, Winner::Lcdt);
  EXPECT_EQ(compare(2, 1.1 * crossing, 0.0, 2.0).winner, Winner::Tele);
}

TEST(Compare, NoPropagationIsTie) {
  const auto r = compare(3, 0.0, 0.4, 1.5);
  EXPECT_NEAR(r.f_tele, 0.6, 1e-14);
  EXPECT_NEAR(r.f_lcdt, 0.6, 1e-14);
  EXPECT_EQ(r.winner, Winner::Tie);
}

TEST(Compare, ThresholdWidthGivesTie) {
  const double omega = omega_thresholds(2, 0.5, 0.0).omega_a();
  const auto r = compare(2, 0.5, 0.0, omega);
  EXPECT_NEAR(r.f_tele, r.f_lcdt, 1e-12);
}

TEST(Compare, WinnerConsistentWithFidelities) {
  for (double tau : {0.2, 0.9, 1.6, 2.8}) {
    for (double mu : {0.0, 0.3, 1.2}) {
      for (double omega : {0.0, 0.5, 1.5, 4.0}) {
        const auto r = compare(4, tau, mu, omega);
        if (std::abs(r.f_tele - r.f_lcdt) <= kTieBand) {
          EXPECT_EQ(r.winner, Winner::Tie);
        } else {
          EXPECT_EQ(r.winner, r.f_tele > r.f_lcdt ? Winner::Tele : Winner::Lcdt);
        }
      }
    }
  }
}

TEST(Compare, RejectsInvalidInputs) {
  EXPECT_THROW(compare(2, 1.0, 0.0, -1.0), DomainError);
  EXPECT_THROW(compare(1, 1.0, 0.0, 1.0), DomainError);
  EXPECT_THROW(compare(2, -1.0, 0.0, 1.0), DomainError);
}

// ---------------------------------------------------------------- CSV output

TEST(ReportCsv, ComparisonSchema) {
  const std::string csv = comparison_table(compare(2, 1.0, 0.2, 1.0)).to_csv();
  EXPECT_EQ(first_data_line(csv), "m,tau_tot,mu,omega,f_tele,regime,n_opt,tau0_opt,f_lcdt,winner");
  EXPECT_NE(csv.find("# generator: cvclone "), std::string::npos);
}

TEST(ReportCsv, SeventeenDigitsAndDeterminism) {
  EXPECT_EQ(format_number(2.0 / 3.0), "0.66666666666666663");
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
  const std::string a = comparison_table(compare(3, 1.3, 0.1, 0.7)).to_csv();
  const std::string b = comparison_table(compare(3, 1.3, 0.1, 0.7)).to_csv();
  EXPECT_EQ(a, b);
  EXPECT_DOUBLE_EQ(std::stod(format_number(0.1 + 0.2)), 0.1 + 0.2);
}

TEST(ReportCsv, RowWidthChecked) {
  ReportTable t({"a", "b"});
  EXPECT_THROW(t.add_row({1.0}), DomainError);
  EXPECT_THROW(t.column_index("c"), DomainError);
}

// ---------------------------------------------------------------- table

TEST(Table1, GridSizeAndClosedNumericAgreement) {
  const auto table = reproduce_table1();
  EXPECT_EQ(table.size(), 48u);
  for (std::size_t i = 0; i < table.size(); ++i) {
    EXPECT_LT(table.number(i, "dev_f"), 1e-6);
    EXPECT_EQ(table.text(i, "regime"), table.text(i, "regime_numeric"));
  }
}

TEST(Table1, OptimalCloningRow) {
  const auto table = reproduce_table1(Table1Grid{{2}, {0.0}, {0.3}});
  ASSERT_EQ(table.size(), 1u);
  EXPECT_EQ(table.text(0, "regime"), "A");
  EXPECT_NEAR(table.number(0, "f_max"), 2.0 / 3.0, 1e-14);
}

// ---------------------------------------------------------------- figures

TEST(Figures, ParseNames) {
  EXPECT_EQ(parse_figure("fig3b"), Figure::Fig3b);
  EXPECT_FALSE(parse_figure("fig5").has_value());
}

TEST(Figures, RowCounts) {
  for (auto f : {Figure::Fig2a, Figure::Fig2b, Figure::Fig3a, Figure::Fig3b}) {
    EXPECT_EQ(reproduce_figure(f).size(), 200u);
  }
  EXPECT_EQ(reproduce_figure(Figure::Fig4a).size(), 800u);
  EXPECT_EQ(reproduce_figure(Figure::Fig4b).size(), 800u);
}

TEST(Figures, NoiselessTelecloningFlatBelowLogM) {
  const auto table = reproduce_figure(Figure::Fig2a);
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table.number(i, "tau_tot") < std::log(2.0)) EXPECT_NEAR(table.number(i, "f_tele"), 2.0 / 3.0, 1e-12);
  }
}

TEST(Figures, LocalCurvesOrderedByWidth) {
  const auto table = reproduce_figure(Figure::Fig3a);
  for (std::size_t i = 0; i < table.size(); ++i) {
    EXPECT_GT(table.number(i, "f_lcdt_omega0"), table.number(i, "f_lcdt_omega1"));
    EXPECT_GT(table.number(i, "f_lcdt_omega1"), table.number(i, "f_lcdt_omega2"));
    EXPECT_GT(table.number(i, "f_lcdt_omega2"), table.number(i, "f_lcdt_omega3"));
  }
}

TEST(Figures, NoiselessThresholdsIncreaseWithM) {
  const auto table = reproduce_figure(Figure::Fig4a);
  const std::size_t per_tau = figure_threshold_ms().size();
  for (std::size_t i = 0; i < table.size(); i += per_tau) {
    for (std::size_t k = 1; k < per_tau; ++k) {
      EXPECT_GT(table.number(i + k, "omega_a_th"), table.number(i + k - 1, "omega_a_th"));
      const double prev = table.number(i + k - 1, "omega_th");
      const double next = table.number(i + k, "omega_th");
      if (!std::isnan(prev) && !std::isnan(next)) EXPECT_GT(next, prev);
    }
  }
}

// ---------------------------------------------------------------- sweeps

TEST(Sweep, OmegaSweep) {
  SweepSpec spec;
  spec.variable = SweepVariable::Omega;
  spec.start = 0.0;
  spec.stop = 2.0;
  spec.steps = 5;
  spec.fixed = {{"m", 2.0}, {"tau_tot", 1.0}, {"mu", 0.1}};
  const auto table = run_sweep(spec);
  ASSERT_EQ(table.size(), 5u);
  for (std::size_t i = 1; i < table.size(); ++i) {
    EXPECT_LT(table.number(i, "f_lcdt"), table.number(i - 1, "f_lcdt"));
    EXPECT_DOUBLE_EQ(table.number(i, "f_tele"), table.number(0, "f_tele"));
  }
  EXPECT_DOUBLE_EQ(table.number(4, "omega"), 2.0);
}

TEST(Sweep, NoiseSweepNonIncreasing) {
  SweepSpec spec;
  spec.variable = SweepVariable::Mu;
  spec.start = 0.0;
  spec.stop = 2.0;
  spec.steps = 21;
  spec.fixed = {{"m", 3.0}, {"tau_tot", 1.2}};
  const auto table = run_sweep(spec);
  for (std::size_t i = 1; i < table.size(); ++i) {
    EXPECT_LE(table.number(i, "f_tele"), table.number(i - 1, "f_tele") + 1e-15);
  }
}

TEST(Sweep, DescendingRangeIsSorted) {
  SweepSpec spec;
  spec.variable = SweepVariable::TauTot;
  spec.start = 2.0;
  spec.stop = 0.5;
  spec.steps = 4;
  const auto table = run_sweep(spec);
  for (std::size_t i = 1; i < table.size(); ++i) {
    EXPECT_GT(table.number(i, "tau_tot"), table.number(i - 1, "tau_tot"));
  }
}

TEST(Sweep, SingleStrategyLeavesOtherBlank) {
  SweepSpec spec;
  spec.lcdt = false;
  const auto table = run_sweep(spec);
  EXPECT_EQ(table.text(0, "f_lcdt"), "nan");
  EXPECT_EQ(table.text(0, "winner"), "none");
}

TEST(Sweep, ErrorsNameTheFailingStep) {
  SweepSpec spec;
  spec.variable = SweepVariable::Mu;
  spec.start = 0.5;
  spec.stop = -0.5;
  spec.steps = 3;
  try {
    run_sweep(spec);
    FAIL() << "expected a domain error";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("sweep step 2"), std::string::npos) << e.what();
  }
  spec.steps = 1;
  EXPECT_THROW(run_sweep(spec), DomainError);
}

TEST(Sweep, NonIntegerMRejected) {
  SweepSpec spec;
  spec.variable = SweepVariable::M;
  spec.start = 2.0;
  spec.stop = 3.0;
  spec.steps = 3;
  EXPECT_THROW(run_sweep(spec), DomainError);
  EXPECT_EQ(parse_sweep_variable("tau"), SweepVariable::TauTot);
  EXPECT_FALSE(parse_sweep_variable("x").has_value());
}

}  // namespace
}  // namespace cvclone
