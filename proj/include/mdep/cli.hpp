#pragma once

#include <charconv>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "arith.hpp"
#include "constants.hpp"
#include "latticecount.hpp"
#include "multdep.hpp"
#include "rational.hpp"
#include "report.hpp"
#include "slicevol.hpp"

namespace mdep::cli {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline std::int64_t parse_int(const std::string& s, const char* what) {
  std::int64_t v = 0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (b != e && *b == '+') ++b;
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e || b == e) throw UsageError(std::string("bad integer for ") + what + ": '" + s + "'");
  return v;
}

inline std::vector<std::int64_t> parse_vector(const std::string& s, const char* what) {
  std::vector<std::int64_t> out;
  std::size_t start = 0;
  while (true) {
    std::size_t c = s.find(',', start);
    out.push_back(parse_int(s.substr(start, c == std::string::npos ? std::string::npos : c - start), what));
    if (c == std::string::npos) break;
    start = c + 1;
  }
  return out;
}

// "a:b:s" -> a, a+s, ..., <= b; a single integer is a one-point grid.
inline std::vector<std::int64_t> parse_grid(const std::string& s) {
  std::vector<std::int64_t> g;
  if (s.find(':') == std::string::npos) {
    if (s.find(',') != std::string::npos) return parse_vector(s, "--grid");
    return {parse_int(s, "--grid")};
  }
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t c = s.find(':', start);
    parts.push_back(s.substr(start, c == std::string::npos ? std::string::npos : c - start));
    if (c == std::string::npos) break;
    start = c + 1;
  }
  if (parts.size() != 3) throw UsageError("grid must be lo:hi:step");
  std::int64_t lo = parse_int(parts[0], "--grid"), hi = parse_int(parts[1], "--grid"),
               st = parse_int(parts[2], "--grid");
  if (st <= 0 || lo > hi) throw UsageError("grid needs lo <= hi and step > 0");
  for (std::int64_t h = lo; h <= hi; h += st) g.push_back(h);
  return g;
}

inline std::pair<std::int64_t, std::int64_t> parse_range(const std::string& s) {
  auto d = s.find("..");
  if (d == std::string::npos) throw UsageError("range must be lo..hi");
  return {parse_int(s.substr(0, d), "--range"), parse_int(s.substr(d + 2), "--range")};
}

inline std::string join(const std::vector<std::int64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

inline void print_breakdown(std::ostream& out, const ConstantBreakdown& b) {
  out << "k " << b.k << "\n";
  out << "c0 " << to_string(b.c0) << "\n";
  out << "c1 " << to_string(b.c1) << "\n";
  out << "c1_correction " << to_string(b.c1_correction) << "\n";
  out << "c2 " << to_string(b.c2) << "\n";
  if (b.log_floor) out << "log_floor " << *b.log_floor << "\n";
  if (b.k == 2) out << "s2prime_count " << b.s2prime_count << "\n";
  out << "total " << to_string(b.total) << "\n";
  out << "total_decimal " << to_decimal(b.total) << "\n";
  out << "exponent " << b.exponent << "\n";
  out << "variable " << b.variable << "\n";
  out << "regime " << b.regime << "\n";
  if (b.caveat) out << "caveat extra divisibility conditions for the rank-2 error bound do not hold\n";
}

inline void emit(std::ostream& out, const Table& t, const std::string& format) {
  if (format == "json")
    out << t.to_json();
  else
    out << t.to_csv();
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multiplicative dependence on hyperplanes: decisions, counts, constants"};
  app.require_subcommand(1);
  std::uint64_t sieve_limit = 0;
  app.add_option("--sieve-limit", sieve_limit, "smallest-prime-factor table size (default from MDEP_SIEVE_LIMIT)");

  std::string vec_s, alpha_s, grid_s, range_s, box_s = "half", r_s = "0", format = "text", variant_s, k_s;
  std::int64_t J = 0, H = 0, A = 1, B = 1, x = 0, y = 0, a1 = 0, a2 = 0;
  bool full_support = false, witness = false, positive = false, by_rank = false;
  unsigned threads = 1;

  auto* dep = app.add_subcommand("depcheck", "decide multiplicative dependence");
  dep->add_option("--vector", vec_s)->required();
  dep->add_flag("--full-support", full_support);
  dep->add_flag("--witness", witness);

  auto* rk = app.add_subcommand("rank", "multiplicative rank");
  rk->add_option("--vector", vec_s)->required();

  auto* cnt = app.add_subcommand("count", "count dependent vectors on alpha.v = J");
  cnt->add_option("--alpha", alpha_s)->required();
  cnt->add_option("--J", J)->required();
  cnt->add_option("--H", H)->required();
  cnt->add_flag("--positive", positive);
  cnt->add_flag("--by-rank", by_rank);
  cnt->add_option("--format", format)->check(CLI::IsMember({"text", "csv", "json"}));
  cnt->add_option("--threads", threads);

  auto* cst = app.add_subcommand("constant", "asymptotic main-term constant");
  cst->add_option("--alpha", alpha_s)->required();
  cst->add_option("--J", J)->required();
  auto* cst_h = cst->add_option("--H", H);
  cst->add_flag("--positive", positive);

  auto* vol = app.add_subcommand("volume", "hyperplane section of a cube, Q = Vol / ||alpha||");
  vol->add_option("--alpha", alpha_s)->required();
  vol->add_option("--box", box_s)->check(CLI::IsMember({"unit", "half"}));
  vol->add_option("--r", r_s);

  auto* cvg = app.add_subcommand("converge", "convergence study of count / H^e against the constant");
  cvg->add_option("--alpha", alpha_s)->required();
  cvg->add_option("--J", J)->required();
  cvg->add_option("--grid", grid_s)->required();
  cvg->add_flag("--positive", positive);
  cvg->add_option("--format", format)->check(CLI::IsMember({"text", "csv", "json"}));
  cvg->add_option("--threads", threads);

  auto* lat = app.add_subcommand("lattice", "lattice count versus V_alpha on [-H,H]^n");
  lat->add_option("--alpha", alpha_s)->required();
  lat->add_option("--J", J)->required();
  lat->add_option("--grid", grid_s)->required();
  lat->add_option("--format", format)->check(CLI::IsMember({"text", "csv", "json"}));

  auto* crv = app.add_subcommand("curve", "solutions of a curve system");
  crv->add_option("--variant", variant_s)->required()->check(CLI::IsMember({"2var-a", "2var-b", "3var", "4var"}));
  crv->add_option("--A", A);
  crv->add_option("--B", B);
  crv->add_option("--k", k_s)->required();
  crv->add_option("--alpha", alpha_s)->required();
  crv->add_option("--J", J)->required();
  auto* crv_h = crv->add_option("--H", H);
  crv->add_option("--grid", grid_s);
  crv->add_option("--format", format)->check(CLI::IsMember({"text", "csv", "json"}));

  auto* ps = app.add_subcommand("psi0", "count m <= x whose prime factors divide y");
  ps->add_option("--x", x)->required();
  ps->add_option("--y", y)->required();

  auto* fb = app.add_subcommand("fbase", "smallest B with A a power of B");
  fb->add_option("--A", A)->required();

  auto* ft = app.add_subcommand("fatal", "triples a<b<c, a+b+c=N, with a full-support relation");
  ft->add_option("--range", range_s)->required();

  auto* s2 = app.add_subcommand("s2prime", "dependent pairs on a1 x + a2 y = J with distinct |x|,|y| > 1");
  s2->add_option("--J", J)->required();
  s2->add_option("--a1", a1)->required();
  s2->add_option("--a2", a2)->required();

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sieve_limit) set_sieve_limit(sieve_limit);
    if (*dep) {
      IntVector v(parse_vector(vec_s, "--vector"));
      if (full_support) {
        auto w = full_support_witness(v);
        if (!w)
          out << "no full-support relation\n";
        else
          out << "full-support" << (witness ? " k=" + w->str() : "") << "\n";
      } else {
        auto r = relation(v);
        if (!r)
          out << "independent\n";
        else
          out << "dependent" << (witness ? " k=" + r->str() : "") << "\n";
      }
    } else if (*rk) {
      int r = mult_rank(IntVector(parse_vector(vec_s, "--vector")));
      out << "rank " << r << "\n";
    } else if (*cnt) {
      if (H < 1) throw UsageError("--H must be positive");
      HyperplaneSpec spec(parse_vector(alpha_s, "--alpha"), J);
      CountReport rep = count_S(spec, {positive ? DomainKind::positive : DomainKind::signed_box, H}, by_rank,
                                std::max(1u, threads));
      if (rep.degenerate) throw RegimeError("alpha = 0 with J != 0: the hyperplane has no points");
      if (format == "text") {
        out << "on_plane " << rep.total_on_plane << "\n";
        out << "total " << rep.dependent_total << "\n";
        for (auto [r, c] : rep.by_rank) out << "rank " << r << " " << c << "\n";
      } else {
        Table t{{"H", "on_plane", "total"}, {{std::to_string(H), std::to_string(rep.total_on_plane),
                                              std::to_string(rep.dependent_total)}}};
        if (by_rank)
          for (std::size_t r = 0; r < spec.n(); ++r) {
            t.columns.push_back("rank_" + std::to_string(r));
            auto it = rep.by_rank.find(int(r));
            t.rows[0].push_back(std::to_string(it == rep.by_rank.end() ? 0 : it->second));
          }
        emit(out, t, format);
      }
    } else if (*cst) {
      auto a = parse_vector(alpha_s, "--alpha");
      ConstantBreakdown b =
          positive ? C_positive(a, J) : C_total(a, J, cst_h->count() ? std::optional<std::int64_t>(H) : std::nullopt);
      if (b.degenerate) throw RegimeError(b.regime);
      print_breakdown(out, b);
    } else if (*vol) {
      auto a = parse_vector(alpha_s, "--alpha");
      Rational r;
      try {
        r = parse_rational(r_s);
      } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("bad rational for --r: ") + e.what());
      }
      Rational q = box_s == "unit" ? mm_unit_cube_Q(a, r) : mm_half_cube_Q(a, r);
      out << "Q " << to_string(q) << "\n";
    } else if (*cvg) {
      HyperplaneSpec spec(parse_vector(alpha_s, "--alpha"), J);
      auto rows = convergence_study(spec, positive ? DomainKind::positive : DomainKind::signed_box,
                                    parse_grid(grid_s), {std::max(1u, threads), 0.5});
      emit(out, to_table(rows), format);
    } else if (*lat) {
      HyperplaneSpec spec(parse_vector(alpha_s, "--alpha"), J);
      auto t = verify_lattice_approx(spec, parse_grid(grid_s));
      emit(out, to_table(t), format);
      if (format == "text") out << "fitted_constant " << to_decimal(t.fitted_constant) << "\n";
    } else if (*crv) {
      CurveSystemSpec s;
      s.variant = variant_s == "2var-a"   ? CurveVariant::two_var_a
                  : variant_s == "2var-b" ? CurveVariant::two_var_b
                  : variant_s == "3var"   ? CurveVariant::three_var
                                          : CurveVariant::four_var;
      s.A = A;
      s.B = B;
      s.k = parse_vector(k_s, "--k");
      s.alpha = parse_vector(alpha_s, "--alpha");
      s.J = J;
      if (!grid_s.empty()) {
        auto t = curve_bound_study(s, parse_grid(grid_s));
        emit(out, to_table(t), format);
        if (format == "text") out << "max_ratio " << to_decimal(t.max_ratio) << "\n";
      } else {
        if (!crv_h->count() || H < 1) throw UsageError("curve needs --H >= 1 or --grid");
        CurveCount c = count_curve_system(s, H);
        out << "count " << c.count << "\n";
        if (s.variant == CurveVariant::three_var) out << "excluded " << c.excluded << "\n";
      }
    } else if (*ps) {
      if (x < 1 || y < 1) throw UsageError("psi0 needs x >= 1 and y >= 1");
      out << psi0(std::uint64_t(x), std::uint64_t(y)) << "\n";
    } else if (*fb) {
      out << f_base(A) << "\n";
    } else if (*ft) {
      auto [lo, hi] = parse_range(range_s);
      if (lo > hi) throw UsageError("range needs lo <= hi");
      for (std::int64_t N = lo; N <= hi; ++N) {
        std::string found;
        for (std::int64_t a = 1; found.empty() && 3 * a + 3 <= N; ++a)
          for (std::int64_t b = a + 1; 2 * b < N - a; ++b) {
            IntVector v{a, b, N - a - b};
            if (auto w = full_support_witness(v)) {
              found = join(v.coords()) + " k=" + w->str();
              break;
            }
          }
        out << N << ": " << (found.empty() ? "none" : found) << "\n";
      }
    } else if (*s2) {
      auto pairs = S2prime(J, a1, a2);
      for (auto [px, py] : pairs) out << px << "," << py << "\n";
      out << "count " << pairs.size() << "\n";
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const RegimeError& e) {
    err << "regime error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace mdep::cli
