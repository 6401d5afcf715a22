#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "constants.hpp"
#include "latticecount.hpp"
#include "rational.hpp"
#include "slicevol.hpp"

namespace mdep {

// Plain string table; every study converts into one for CSV/JSON output.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
      out += '\n';
    };
    line(columns);
    for (auto& r : rows) line(r);
    return out;
  }

  // Array of row objects; key order follows the column order.
  std::string to_json() const {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (auto& r : rows) {
      nlohmann::ordered_json obj = nlohmann::ordered_json::object();
      for (std::size_t i = 0; i < columns.size(); ++i) obj[columns[i]] = r[i];
      arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
  }
};

struct ConvergenceRow {
  std::int64_t H = 0;  // the grid variable (J for all-positive studies)
  std::uint64_t count = 0;
  Rational normalized, predicted, residual;
  std::string residual_scaled;
};

struct StudyOptions {
  unsigned threads = 1;
  double residual_exponent = 0.5;
};

namespace detail {

inline Rational ipow(std::int64_t base, int e) {
  Rational b = base;
  return e >= 0 ? rpow(b, unsigned(e)) : 1 / rpow(b, unsigned(-e));
}

inline void require_ascending(const std::vector<std::int64_t>& grid) {
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (grid[i] <= grid[i - 1]) throw std::domain_error("grid must be strictly ascending");
  for (auto h : grid)
    if (h < 1) throw std::domain_error("grid values must be positive");
}

inline std::string scaled_decimal(const Rational& r, std::int64_t H, double e) {
  using Dec = boost::multiprecision::cpp_dec_float_50;
  Dec v = Dec(numerator(r)) / Dec(denominator(r)) * boost::multiprecision::pow(Dec(H), Dec(e));
  if (v == 0) return "0";
  return v.str(12, std::ios_base::fmtflags(0));
}

}  // namespace detail

inline std::vector<ConvergenceRow> convergence_study(const HyperplaneSpec& spec, DomainKind kind,
                                                     const std::vector<std::int64_t>& grid,
                                                     const StudyOptions& opt = {}) {
  detail::require_ascending(grid);
  const auto& a = spec.alpha();
  const std::size_t n = spec.n();
  std::vector<ConvergenceRow> rows;
  const bool all_positive = std::all_of(a.begin(), a.end(), [](auto x) { return x > 0; });

  for (std::int64_t g : grid) {
    ConvergenceRow row;
    row.H = g;
    int e = 0;
    if (kind == DomainKind::signed_box) {
      ConstantBreakdown b = C_total(a, spec.J(), g);
      if (b.degenerate) throw RegimeError(b.regime);
      row.predicted = b.total;
      e = b.exponent;
      row.count = count_S(spec, {DomainKind::signed_box, g}, false, opt.threads).dependent_total;
    } else if (all_positive) {
      // the grid runs over J; every solution already has height <= J
      row.predicted = C_positive(a, g).total;
      e = int(n) - 2;
      row.count = count_S(HyperplaneSpec(a, g), {DomainKind::positive, g}, false, opt.threads).dependent_total;
    } else if (spec.nnz() == 1) {
      if (n < 3) throw RegimeError("k = 1 law needs n >= 3");
      const std::int64_t c = a[detail::nonzero_indices(a)[0]];
      if (spec.J() % c != 0 || spec.J() / c < 1) throw RegimeError("positive k = 1 law needs J / alpha_i >= 1");
      const std::int64_t Jr = spec.J() / c;
      if (Jr == 1) {
        row.predicted = 1;
        e = int(n) - 1;
      } else {
        row.predicted = C_e1(Jr, g, std::int64_t(n)) / detail::pow2(int(n) - 1);
        e = int(n) - 2;
      }
      row.count = count_S(spec, {DomainKind::positive, g}, false, opt.threads).dependent_total;
    } else {
      row.predicted = C_positive(a, spec.J()).total;
      e = int(n) - 2;
      row.count = count_S(spec, {DomainKind::positive, g}, false, opt.threads).dependent_total;
    }
    // normalization is always H^(n-2); laws of higher order move into predicted
    const int base = int(n) - 2;
    row.predicted *= detail::ipow(g, e - base);
    row.normalized = Rational(BigInt(row.count)) / detail::ipow(g, base);
    row.residual = row.normalized - row.predicted;
    row.residual_scaled = detail::scaled_decimal(row.residual, g, opt.residual_exponent);
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Table to_table(const std::vector<ConvergenceRow>& rows) {
  Table t{{"H", "count", "normalized", "predicted", "residual", "residual_scaled"}, {}};
  for (auto& r : rows)
    t.rows.push_back({std::to_string(r.H), std::to_string(r.count), to_decimal(r.normalized),
                      to_decimal(r.predicted), to_decimal(r.residual), r.residual_scaled});
  return t;
}

struct LatticeApproxRow {
  std::int64_t H = 0;
  std::uint64_t count = 0;
  Rational V, diff_scaled;  // diff_scaled = |count - V| / H^(n-2)
};

struct LatticeApproxTable {
  std::vector<LatticeApproxRow> rows;
  Rational fitted_constant = 0;  // max of diff_scaled
};

inline LatticeApproxTable verify_lattice_approx(const HyperplaneSpec& spec, const std::vector<std::int64_t>& grid) {
  detail::require_ascending(grid);
  if (spec.nnz() == 0) throw std::domain_error("alpha must be nonzero");
  const int n = int(spec.n());
  LatticeApproxTable out;
  for (std::int64_t H : grid) {
    LatticeApproxRow r;
    r.H = H;
    r.count = hyperplane_lattice_count(spec, Box(spec.n(), {-H, H}));
    // no lattice points at all when gcd(alpha) does not divide J
    if (spec.J() % gcd_vec(spec.alpha()) == 0)
      r.V = V_alpha(SliceQuery{spec.alpha(), BoxKind::scaled_symmetric, spec.J(), H});
    Rational d = Rational(BigInt(r.count)) - r.V;
    if (d < 0) d = -d;
    r.diff_scaled = d / detail::ipow(H, n - 2);
    out.fitted_constant = std::max(out.fitted_constant, r.diff_scaled);
    out.rows.push_back(std::move(r));
  }
  return out;
}

inline Table to_table(const LatticeApproxTable& t) {
  Table out{{"H", "count", "V", "diff_scaled"}, {}};
  for (auto& r : t.rows)
    out.rows.push_back({std::to_string(r.H), std::to_string(r.count), to_decimal(r.V), to_decimal(r.diff_scaled)});
  return out;
}

struct CurveBoundRow {
  std::int64_t H = 0;
  std::uint64_t count = 0, excluded = 0;
  double ratio = 0;  // count / (sqrt(H) (log H + 2))
};

struct CurveBoundTable {
  std::vector<CurveBoundRow> rows;
  double max_ratio = 0;
};

inline CurveBoundTable curve_bound_study(const CurveSystemSpec& sys, const std::vector<std::int64_t>& grid) {
  validate_curve_system(sys);
  detail::require_ascending(grid);
  CurveBoundTable out;
  for (std::int64_t H : grid) {
    CurveCount c = count_curve_system(sys, H);
    CurveBoundRow r{H, c.count, c.excluded, double(c.count) / (std::sqrt(double(H)) * (std::log(double(H)) + 2))};
    out.max_ratio = std::max(out.max_ratio, r.ratio);
    out.rows.push_back(r);
  }
  return out;
}

inline Table to_table(const CurveBoundTable& t) {
  Table out{{"H", "count", "excluded", "ratio"}, {}};
  for (auto& r : t.rows)
    out.rows.push_back({std::to_string(r.H), std::to_string(r.count), std::to_string(r.excluded), to_decimal(r.ratio)});
  return out;
}

}  // namespace mdep
