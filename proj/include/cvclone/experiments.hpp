#pragma once

// Strategy comparison, parameter sweeps and the tabulated datasets behind the
// optimal-strategy table and the fidelity/threshold figures. Everything is
// emitted as CSV with a '#'-prefixed provenance header and 17 significant
// digits so that identical invocations give byte-identical files.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cvclone/errors.hpp"
#include "cvclone/lcdt.hpp"
#include "cvclone/telecloning.hpp"

namespace cvclone {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr double kTieBand = 1e-12;

enum class Winner { Tele, Lcdt, Tie, None };

inline const char* to_string(Winner w) {
  switch (w) {
    case Winner::Tele: return "tele";
    case Winner::Lcdt: return "lcdt";
    case Winner::Tie: return "tie";
    case Winner::None: return "none";
  }
  return "?";
}

inline Winner decide_winner(double f_tele, double f_lcdt) {
  if (std::isnan(f_tele) || std::isnan(f_lcdt)) return Winner::None;
  if (std::abs(f_tele - f_lcdt) <= kTieBand) return Winner::Tie;
  return f_tele > f_lcdt ? Winner::Tele : Winner::Lcdt;
}

struct ComparisonRecord {
  int m = 2;
  double tau_tot = 0.0;
  double mu = 0.0;
  double omega = 0.0;
  double f_tele = 0.0;
  Regime regime = Regime::A;
  double n_opt = 0.0;
  double tau0_opt = 0.0;
  double f_lcdt = 0.0;
  Winner winner = Winner::Tie;
};

/// Optimized telecloning against the alphabet-averaged local strategy with
/// the cloner at the sender.
inline ComparisonRecord compare(int m, double tau_tot, double mu, double omega) {
  detail::require(std::isfinite(omega) && omega >= 0.0, "alphabet width omega must be nonnegative");
  const auto tele = optimal_symmetric(m, tau_tot, mu);
  ComparisonRecord r;
  r.m = m;
  r.tau_tot = tau_tot;
  r.mu = mu;
  r.omega = omega;
  r.f_tele = tele.f_max;
  r.regime = tele.regime;
  r.n_opt = tele.n_opt;
  r.tau0_opt = tele.tau0_opt;
  r.f_lcdt = averaged_fidelity(m, tau_tot, mu, GaussianAlphabet{omega * omega});
  r.winner = decide_winner(r.f_tele, r.f_lcdt);
  return r;
}

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

/// Rectangular table of numeric or text cells plus a provenance block.
class ReportTable {
 public:
  using Cell = std::variant<double, std::string>;

  explicit ReportTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<Cell> row) {
    detail::require(row.size() == header_.size(), "row width does not match header");
    rows_.push_back(std::move(row));
  }
  void add_provenance(std::string key, std::string value) {
    provenance_.emplace_back(std::move(key), std::move(value));
  }

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  const std::vector<std::pair<std::string, std::string>>& provenance() const { return provenance_; }
  std::size_t size() const { return rows_.size(); }

  std::size_t column_index(const std::string& name) const {
    const auto it = std::find(header_.begin(), header_.end(), name);
    detail::require(it != header_.end(), "unknown column '" + name + "'");
    return static_cast<std::size_t>(it - header_.begin());
  }
  double number(std::size_t row, const std::string& column) const {
    return std::get<double>(rows_.at(row).at(column_index(column)));
  }
  std::string text(std::size_t row, const std::string& column) const {
    const auto& cell = rows_.at(row).at(column_index(column));
    if (const auto* s = std::get_if<std::string>(&cell)) return *s;
    return format_number(std::get<double>(cell));
  }

  void write_csv(std::ostream& os) const {
    for (const auto& [key, value] : provenance_) os << "# " << key << ": " << value << '\n';
    for (std::size_t c = 0; c < header_.size(); ++c) os << (c ? "," : "") << header_[c];
    os << '\n';
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      for (std::size_t c = 0; c < header_.size(); ++c) os << (c ? "," : "") << text(r, header_[c]);
      os << '\n';
    }
  }

  std::string to_csv() const {
    std::ostringstream os;
    write_csv(os);
    return os.str();
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
  std::vector<std::pair<std::string, std::string>> provenance_;
};

inline std::vector<std::string> comparison_header() {
  return {"m", "tau_tot", "mu", "omega", "f_tele", "regime", "n_opt", "tau0_opt", "f_lcdt", "winner"};
}

inline void append_record(ReportTable& table, const ComparisonRecord& r) {
  table.add_row({static_cast<double>(r.m), r.tau_tot, r.mu, r.omega, r.f_tele, std::string(to_string(r.regime)),
                 r.n_opt, r.tau0_opt, r.f_lcdt, std::string(to_string(r.winner))});
}

inline void add_standard_provenance(ReportTable& table, const std::string& what) {
  table.add_provenance("generator", std::string("cvclone ") + kVersion);
  table.add_provenance("dataset", what);
  table.add_provenance("tie_band", format_number(kTieBand));
}

inline ReportTable comparison_table(const ComparisonRecord& record) {
  ReportTable table(comparison_header());
  add_standard_provenance(table, "compare");
  append_record(table, record);
  return table;
}

// ---------------------------------------------------------------------------
// Optimal-strategy table

struct Table1Grid {
  std::vector<int> ms{2, 3, 5};
  std::vector<double> mus{0.0, 0.2, 0.5, 2.0};
  std::vector<double> taus{0.3, 1.0, 2.0, 3.0};
};

struct Table1Row {
  int m = 2;
  double mu = 0.0;
  double tau_tot = 0.0;
  OptimalStrategy closed;
  OptimalStrategy numeric;

  double dev_f() const { return std::abs(closed.f_max - numeric.f_max); }
  double dev_tau0_rel() const {
    return std::abs(closed.tau0_opt - numeric.tau0_opt) / std::max(1e-300, std::abs(closed.tau0_opt));
  }
  /// Relative photon-number deviation; zero when both are infinite, infinite
  /// when only one is.
  double dev_n_rel() const {
    if (closed.n_infinite() && numeric.n_infinite()) return 0.0;
    if (closed.n_infinite() != numeric.n_infinite()) return std::numeric_limits<double>::infinity();
    return std::abs(closed.n_opt - numeric.n_opt) / std::max(1e-300, std::abs(closed.n_opt));
  }
};

inline std::vector<Table1Row> table1_rows(const Table1Grid& grid) {
  detail::require(!grid.ms.empty() && !grid.mus.empty() && !grid.taus.empty(), "table grid must be nonempty");
  std::vector<Table1Row> rows;
  for (int m : grid.ms) {
    for (double mu : grid.mus) {
      for (double tau : grid.taus) {
        rows.push_back({m, mu, tau, optimal_symmetric(m, tau, mu), numeric_optimal(m, tau, mu)});
      }
    }
  }
  return rows;
}

inline ReportTable reproduce_table1(const Table1Grid& grid = {}) {
  ReportTable table({"m", "mu", "tau_tot", "regime", "n_opt", "tau0_opt", "f_max", "regime_numeric",
                     "n_opt_numeric", "tau0_opt_numeric", "f_max_numeric", "dev_f", "dev_tau0_rel", "dev_n_rel"});
  add_standard_provenance(table, "table1");
  for (const auto& r : table1_rows(grid)) {
    table.add_row({static_cast<double>(r.m), r.mu, r.tau_tot, std::string(to_string(r.closed.regime)), r.closed.n_opt,
                   r.closed.tau0_opt, r.closed.f_max, std::string(to_string(r.numeric.regime)), r.numeric.n_opt,
                   r.numeric.tau0_opt, r.numeric.f_max, r.dev_f(), r.dev_tau0_rel(), r.dev_n_rel()});
  }
  return table;
}

// ---------------------------------------------------------------------------
// Figures

enum class Figure { Fig2a, Fig2b, Fig3a, Fig3b, Fig4a, Fig4b };

inline std::optional<Figure> parse_figure(const std::string& name) {
  static const std::map<std::string, Figure> names{{"fig2a", Figure::Fig2a}, {"fig2b", Figure::Fig2b},
                                                   {"fig3a", Figure::Fig3a}, {"fig3b", Figure::Fig3b},
                                                   {"fig4a", Figure::Fig4a}, {"fig4b", Figure::Fig4b}};
  if (auto it = names.find(name); it != names.end()) return it->second;
  return std::nullopt;
}

inline const char* to_string(Figure f) {
  switch (f) {
    case Figure::Fig2a: return "fig2a";
    case Figure::Fig2b: return "fig2b";
    case Figure::Fig3a: return "fig3a";
    case Figure::Fig3b: return "fig3b";
    case Figure::Fig4a: return "fig4a";
    case Figure::Fig4b: return "fig4b";
  }
  return "?";
}

inline constexpr int kFigurePoints = 200;
inline constexpr double kFigureTauMax = 3.0;

/// tau grid (0, 3]: tau_i = 3 i / 200, i = 1..200.
inline std::vector<double> figure_tau_grid() {
  std::vector<double> taus;
  for (int i = 1; i <= kFigurePoints; ++i) taus.push_back(kFigureTauMax * i / kFigurePoints);
  return taus;
}

inline const std::vector<double>& figure_omegas() {
  static const std::vector<double> omegas{0.0, 1.0, 2.0, 3.0};
  return omegas;
}

inline const std::vector<int>& figure_threshold_ms() {
  static const std::vector<int> ms{2, 4, 8, 16};
  return ms;
}

/// Fidelity curves: columns tau_tot, f_tele, regime, f_lcdt_omega{0,1,2,3}.
/// Threshold curves: columns tau_tot, m, regime, omega_a_th, omega_c_th,
/// omega_th (the threshold of the regime in force; nan in regime B).
inline ReportTable reproduce_figure(Figure which) {
  const bool thresholds = which == Figure::Fig4a || which == Figure::Fig4b;
  if (!thresholds) {
    int m = 2;
    double mu = 0.0;
    switch (which) {
      case Figure::Fig2a: m = 2; mu = 0.0; break;
      case Figure::Fig2b: m = 5; mu = 0.0; break;
      case Figure::Fig3a: m = 2; mu = 0.4; break;
      case Figure::Fig3b: m = 3; mu = 0.4; break;
      default: break;
    }
    ReportTable table({"tau_tot", "f_tele", "regime", "f_lcdt_omega0", "f_lcdt_omega1", "f_lcdt_omega2",
                       "f_lcdt_omega3"});
    add_standard_provenance(table, to_string(which));
    table.add_provenance("m", format_number(m));
    table.add_provenance("mu", format_number(mu));
    table.add_provenance("marker_tau", format_number(std::log(static_cast<double>(m))));
    for (double tau : figure_tau_grid()) {
      const auto tele = optimal_symmetric(m, tau, mu);
      std::vector<ReportTable::Cell> row{tau, tele.f_max, std::string(to_string(tele.regime))};
      for (double omega : figure_omegas()) {
        row.emplace_back(averaged_fidelity(m, tau, mu, GaussianAlphabet{omega * omega}));
      }
      table.add_row(std::move(row));
    }
    return table;
  }

  const double mu = which == Figure::Fig4a ? 0.0 : 0.4;
  ReportTable table({"tau_tot", "m", "regime", "omega_a_th", "omega_c_th", "omega_th"});
  add_standard_provenance(table, to_string(which));
  table.add_provenance("mu", format_number(mu));
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (double tau : figure_tau_grid()) {
    for (int m : figure_threshold_ms()) {
      const auto th = omega_thresholds(m, tau, mu);
      const Regime regime = classify_regime(m, tau, mu);
      const double omega_c = th.omega_c() ? *th.omega_c() : nan;
      double applicable = nan;
      if (regime == Regime::A) applicable = th.omega_a();
      if (regime == Regime::C) applicable = omega_c;
      table.add_row({tau, static_cast<double>(m), std::string(to_string(regime)), th.omega_a(), omega_c, applicable});
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepVariable { TauTot, Mu, Omega, M };

inline std::optional<SweepVariable> parse_sweep_variable(const std::string& name) {
  if (name == "tau_tot" || name == "tau") return SweepVariable::TauTot;
  if (name == "mu") return SweepVariable::Mu;
  if (name == "omega") return SweepVariable::Omega;
  if (name == "m") return SweepVariable::M;
  return std::nullopt;
}

struct SweepSpec {
  SweepVariable variable = SweepVariable::TauTot;
  double start = 0.0;
  double stop = 1.0;
  int steps = 2;
  /// Values for the non-swept parameters: keys "m", "tau_tot", "mu", "omega".
  std::map<std::string, double> fixed;
  bool telecloning = true;
  bool lcdt = true;
};

inline ReportTable run_sweep(const SweepSpec& spec) {
  detail::require(spec.steps >= 2, "sweep needs at least 2 steps");
  detail::require(std::isfinite(spec.start) && std::isfinite(spec.stop), "sweep range must be finite");
  detail::require(spec.telecloning || spec.lcdt, "sweep needs at least one strategy");
  const auto fixed = [&](const char* key, double fallback) {
    const auto it = spec.fixed.find(key);
    return it == spec.fixed.end() ? fallback : it->second;
  };

  std::vector<std::pair<double, ComparisonRecord>> records;
  for (int i = 0; i < spec.steps; ++i) {
    const double value = spec.start + (spec.stop - spec.start) * i / (spec.steps - 1);
    double m_value = fixed("m", 2.0);
    double tau = fixed("tau_tot", 1.0);
    double mu = fixed("mu", 0.0);
    double omega = fixed("omega", 0.0);
    switch (spec.variable) {
      case SweepVariable::TauTot: tau = value; break;
      case SweepVariable::Mu: mu = value; break;
      case SweepVariable::Omega: omega = value; break;
      case SweepVariable::M: m_value = value; break;
    }
    try {
      const double rounded = std::round(m_value);
      detail::require(std::abs(m_value - rounded) < 1e-9, "m must be an integer");
      ComparisonRecord r = compare(static_cast<int>(rounded), tau, mu, omega);
      if (!spec.telecloning) r.f_tele = std::numeric_limits<double>::quiet_NaN();
      if (!spec.lcdt) r.f_lcdt = std::numeric_limits<double>::quiet_NaN();
      r.winner = decide_winner(r.f_tele, r.f_lcdt);
      records.emplace_back(value, r);
    } catch (const DomainError& e) {
      throw DomainError("sweep step " + std::to_string(i) + ": " + e.what());
    }
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  ReportTable table(comparison_header());
  add_standard_provenance(table, "sweep");
  for (const auto& [value, r] : records) append_record(table, r);
  return table;
}

}  // namespace cvclone
