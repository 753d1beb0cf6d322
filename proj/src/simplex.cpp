#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "schedlift/lp.hpp"

namespace schedlift {
namespace {

struct EngineOverflow {};

// Exact rational on int64 (den > 0, reduced) with __int128 intermediates.
// Any reduced value leaving the int64 range throws EngineOverflow, which the
// driver turns into a retry on arbitrary-precision rationals.
struct R64 {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

__int128 gcd128(__int128 a, __int128 b) {
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a < 0 ? -a : a;
}

R64 make_r64(__int128 n, __int128 d) {
  if (d < 0) {
    n = -n;
    d = -d;
  }
  if (n == 0) return {0, 1};
  const __int128 g = gcd128(n < 0 ? -n : n, d);
  n /= g;
  d /= g;
  if (n > std::numeric_limits<std::int64_t>::max() ||
      n < std::numeric_limits<std::int64_t>::min() ||
      d > std::numeric_limits<std::int64_t>::max())
    throw EngineOverflow{};
  return {static_cast<std::int64_t>(n), static_cast<std::int64_t>(d)};
}

R64 operator+(R64 a, R64 b) {
  return make_r64(static_cast<__int128>(a.num) * b.den +
                      static_cast<__int128>(b.num) * a.den,
                  static_cast<__int128>(a.den) * b.den);
}
R64 operator-(R64 a, R64 b) {
  return make_r64(static_cast<__int128>(a.num) * b.den -
                      static_cast<__int128>(b.num) * a.den,
                  static_cast<__int128>(a.den) * b.den);
}
R64 operator*(R64 a, R64 b) {
  return make_r64(static_cast<__int128>(a.num) * b.num,
                  static_cast<__int128>(a.den) * b.den);
}
R64 operator/(R64 a, R64 b) {
  if (b.num == 0) throw std::logic_error("simplex: division by zero");
  return make_r64(static_cast<__int128>(a.num) * b.den,
                  static_cast<__int128>(a.den) * b.num);
}
bool operator==(R64 a, R64 b) { return a.num == b.num && a.den == b.den; }
bool operator!=(R64 a, R64 b) { return !(a == b); }
bool operator<(R64 a, R64 b) {
  return static_cast<__int128>(a.num) * b.den <
         static_cast<__int128>(b.num) * a.den;
}
bool operator>(R64 a, R64 b) { return b < a; }
bool operator<=(R64 a, R64 b) { return !(b < a); }
bool operator>=(R64 a, R64 b) { return !(a < b); }

template <class Num>
struct NumOps;

template <>
struct NumOps<R64> {
  static R64 zero() { return {0, 1}; }
  static R64 from(const Rational& r) {
    static const BigInt kMin{std::numeric_limits<std::int64_t>::min()};
    static const BigInt kMax{std::numeric_limits<std::int64_t>::max()};
    const BigInt n = numerator(r);
    const BigInt d = denominator(r);
    if (n < kMin || n > kMax || d > kMax) throw EngineOverflow{};
    return {n.convert_to<std::int64_t>(), d.convert_to<std::int64_t>()};
  }
  static Rational to(R64 v) { return Rational(v.num) / v.den; }
  static int sign(R64 v) { return (v.num > 0) - (v.num < 0); }
};

template <>
struct NumOps<Rational> {
  static Rational zero() { return Rational(0); }
  static const Rational& from(const Rational& r) { return r; }
  static const Rational& to(const Rational& v) { return v; }
  static int sign(const Rational& v) { return (v > 0) - (v < 0); }
};

// One row of the active subsystem, variables remapped to dense local indices
// and the relation normalized to LessEq or Equal.
struct ActiveRow {
  std::vector<std::pair<int, Rational>> coeffs;
  bool is_eq = false;
  Rational rhs;
};

struct ActiveSystem {
  int nvars = 0;
  std::vector<Rational> lo, hi;     // per local var, finite box
  std::vector<Rational> start;      // initial nonbasic value, at lo or hi
  std::vector<ActiveRow> rows;
};

struct EngineResult {
  bool feasible = false;
  std::vector<Rational> values;  // per local var
  long pivots = 0;
};

bool lp_stats_enabled() {
  static const bool on = std::getenv("SCHEDLIFT_LP_STATS") != nullptr;
  return on;
}

// Phase-1 bounded-variable simplex with Bland's rule on a dense tableau.
// Columns: structural vars, then one slack per inequality row, then one
// artificial per row that needs one. Minimizes the artificial sum.
template <class Num>
EngineResult run_simplex(const ActiveSystem& sys) {
  using Ops = NumOps<Num>;
  const Num kZero = Ops::zero();
  const int ns = sys.nvars;
  const int nrows = static_cast<int>(sys.rows.size());

  enum : char { kAtLo = 0, kAtHi = 1, kBasic = 2, kDead = 3 };

  std::vector<Num> lo, hi;
  std::vector<char> has_hi;
  std::vector<Num> xval;   // value of a nonbasic column (one of its bounds)
  std::vector<char> state;
  lo.reserve(ns);
  hi.reserve(ns);
  for (int v = 0; v < ns; ++v) {
    lo.push_back(Ops::from(sys.lo[v]));
    hi.push_back(Ops::from(sys.hi[v]));
    has_hi.push_back(1);
    const Num s = Ops::from(sys.start[v]);
    xval.push_back(s);
    state.push_back(s == lo[v] ? kAtLo : kAtHi);
  }

  int nslack = 0;
  for (const ActiveRow& row : sys.rows)
    if (!row.is_eq) ++nslack;

  // Row activities at the start point.
  std::vector<Num> act(nrows, kZero);
  for (int r = 0; r < nrows; ++r)
    for (const auto& [v, c] : sys.rows[r].coeffs)
      act[r] = act[r] + Ops::from(c) * xval[v];

  // Decide per row: slack column, artificial column, and a +-1 row scale so
  // the initial basic column has coefficient +1 and value >= 0.
  std::vector<int> slack_col(nrows, -1), art_col(nrows, -1);
  std::vector<int> scale(nrows, 1);
  std::vector<Num> beta(nrows, kZero);
  std::vector<int> basic(nrows, -1);
  int next_col = ns;
  for (int r = 0; r < nrows; ++r)
    if (!sys.rows[r].is_eq) slack_col[r] = next_col++;
  const int art_base = next_col;
  for (int r = 0; r < nrows; ++r) {
    const Num rhs = Ops::from(sys.rows[r].rhs);
    const Num resid = rhs - act[r];
    if (!sys.rows[r].is_eq && Ops::sign(resid) >= 0) {
      basic[r] = slack_col[r];  // slack absorbs the whole residual
      beta[r] = resid;
    } else {
      art_col[r] = next_col++;
      basic[r] = art_col[r];
      if (Ops::sign(resid) < 0) {
        scale[r] = -1;
        beta[r] = kZero - resid;
      } else {
        beta[r] = resid;
      }
    }
  }
  const int ncols = next_col;
  for (int c = ns; c < ncols; ++c) {
    lo.push_back(kZero);
    hi.push_back(kZero);
    has_hi.push_back(0);
    xval.push_back(kZero);
    state.push_back(kAtLo);
  }
  for (int r = 0; r < nrows; ++r) state[basic[r]] = kBasic;

  // Initial tableau equals the scaled constraint matrix; the starting basis
  // is an identity on its columns.
  std::vector<std::vector<Num>> tab(nrows, std::vector<Num>(ncols, kZero));
  for (int r = 0; r < nrows; ++r) {
    for (const auto& [v, c] : sys.rows[r].coeffs) {
      Num cv = Ops::from(c);
      if (scale[r] < 0) cv = kZero - cv;
      tab[r][v] = tab[r][v] + cv;
    }
    if (slack_col[r] >= 0) {
      Num one = Ops::from(Rational(1));
      tab[r][slack_col[r]] = scale[r] < 0 ? kZero - one : one;
    }
    if (art_col[r] >= 0) tab[r][art_col[r]] = Ops::from(Rational(1));
  }

  // Reduced costs for min(sum of artificials): d = c - sum over rows whose
  // basic column is an artificial.
  std::vector<Num> dcost(ncols, kZero);
  for (int c = art_base; c < ncols; ++c) dcost[c] = Ops::from(Rational(1));
  for (int r = 0; r < nrows; ++r)
    if (basic[r] >= art_base)
      for (int c = 0; c < ncols; ++c) dcost[c] = dcost[c] - tab[r][c];
  for (int r = 0; r < nrows; ++r) dcost[basic[r]] = kZero;

  long pivots = 0;
  // Dantzig's rule is fast but can cycle on degenerate vertices; after a run
  // of zero-length steps the scan falls back to Bland's rule, which provably
  // escapes, and switches back on the next improving step.
  const long stall_limit = 2L * (ncols + nrows) + 16;
  long stall = 0;
  for (;;) {
    int enter = -1, dir = 0;
    const bool bland = stall >= stall_limit;
    Num best = kZero;
    for (int c = 0; c < ncols; ++c) {
      if (state[c] == kBasic || state[c] == kDead) continue;
      if (has_hi[c] && lo[c] == hi[c]) continue;  // fixed, can never move
      const int s = Ops::sign(dcost[c]);
      int d = 0;
      if (state[c] == kAtLo && s < 0)
        d = 1;
      else if (state[c] == kAtHi && s > 0)
        d = -1;
      if (d == 0) continue;
      if (bland) {
        enter = c;
        dir = d;
        break;
      }
      Num gain = dcost[c];
      if (d > 0) gain = kZero - gain;
      if (enter < 0 || best < gain) {
        enter = c;
        dir = d;
        best = gain;
      }
    }
    if (enter < 0) break;  // phase-1 optimum reached

    // Ratio test. Candidates: each basic hitting a bound, or the entering
    // column flipping to its other bound. Ties break on the smallest
    // variable index (Bland).
    bool found = false;
    bool is_flip = false;
    bool to_upper = false;
    int leave_row = -1, leave_var = -1;
    Num delta = kZero;
    if (has_hi[enter]) {
      delta = hi[enter] - lo[enter];
      found = true;
      is_flip = true;
      leave_var = enter;
    }
    for (int r = 0; r < nrows; ++r) {
      const Num& a = tab[r][enter];
      const int sa = Ops::sign(a);
      if (sa == 0) continue;
      // Basic of row r moves by -dir*a per unit step.
      const int move = dir > 0 ? -sa : sa;
      Num cand;
      bool cand_upper;
      const int b = basic[r];
      Num denom = a;
      if (dir < 0) denom = kZero - denom;  // denom = dir * a
      if (move < 0) {
        cand = (beta[r] - lo[b]) / denom;
        cand_upper = false;
      } else {
        if (!has_hi[b]) continue;
        cand = (hi[b] - beta[r]) / (kZero - denom);
        cand_upper = true;
      }
      // Ties: Bland mode needs the smallest variable index; otherwise kick
      // artificials out first, which shortens phase 1.
      bool better = !found || cand < delta;
      if (!better && cand == delta) {
        if (bland) {
          better = b < leave_var;
        } else if (leave_var == enter) {
          better = true;  // a basic leave beats a bound flip
        } else {
          const bool b_art = b >= art_base;
          const bool l_art = leave_var >= art_base;
          better = b_art != l_art ? b_art : b < leave_var;
        }
      }
      if (better) {
        found = true;
        is_flip = false;
        delta = cand;
        leave_row = r;
        leave_var = b;
        to_upper = cand_upper;
      }
    }
    if (!found)
      throw std::logic_error("simplex: unbounded phase-1 direction");
    if (Ops::sign(delta) < 0)
      throw std::logic_error("simplex: negative ratio");
    ++pivots;
    if (Ops::sign(delta) > 0)
      stall = 0;
    else
      ++stall;

    if (Ops::sign(delta) > 0) {
      for (int r = 0; r < nrows; ++r) {
        const Num& a = tab[r][enter];
        if (Ops::sign(a) == 0) continue;
        Num step = a * delta;
        if (dir < 0) step = kZero - step;
        beta[r] = beta[r] - step;
      }
    }

    if (is_flip) {
      state[enter] = dir > 0 ? kAtHi : kAtLo;
      xval[enter] = dir > 0 ? hi[enter] : lo[enter];
      continue;
    }

    const int leave = basic[leave_row];
    const Num bound = to_upper ? hi[leave] : lo[leave];
    if (!(beta[leave_row] == bound))
      throw std::logic_error("simplex: leaving variable missed its bound");
    if (leave >= art_base) {
      state[leave] = kDead;  // artificials never re-enter
    } else {
      state[leave] = to_upper ? kAtHi : kAtLo;
    }
    xval[leave] = bound;

    Num enter_val = xval[enter];
    if (dir > 0)
      enter_val = enter_val + delta;
    else
      enter_val = enter_val - delta;

    const Num piv = tab[leave_row][enter];
    for (int c = 0; c < ncols; ++c)
      tab[leave_row][c] = tab[leave_row][c] / piv;
    for (int r = 0; r < nrows; ++r) {
      if (r == leave_row) continue;
      const Num f = tab[r][enter];
      if (Ops::sign(f) == 0) continue;
      for (int c = 0; c < ncols; ++c)
        tab[r][c] = tab[r][c] - f * tab[leave_row][c];
    }
    {
      const Num f = dcost[enter];
      if (Ops::sign(f) != 0)
        for (int c = 0; c < ncols; ++c)
          dcost[c] = dcost[c] - f * tab[leave_row][c];
    }
    basic[leave_row] = enter;
    state[enter] = kBasic;
    beta[leave_row] = enter_val;
  }

  Num infeas = kZero;
  for (int r = 0; r < nrows; ++r)
    if (basic[r] >= art_base) infeas = infeas + beta[r];
  if (Ops::sign(infeas) < 0)
    throw std::logic_error("simplex: negative infeasibility");
  EngineResult res;
  res.pivots = pivots;
  if (Ops::sign(infeas) > 0) return res;  // infeasible stays false

  res.feasible = true;
  res.values.assign(ns, Rational(0));
  std::vector<int> row_of(ncols, -1);
  for (int r = 0; r < nrows; ++r) row_of[basic[r]] = r;
  for (int v = 0; v < ns; ++v) {
    const Num val = row_of[v] >= 0 ? beta[row_of[v]] : xval[v];
    res.values[v] = Ops::to(val);
  }
  return res;
}

Rational eval_row(const LinearRow& row, const std::vector<Rational>& x) {
  Rational lhs = 0;
  for (const auto& [v, c] : row.coeffs) lhs += c * x[v];
  return lhs;
}

// Working-set management for the activation loop.
constexpr int kDeactivateRounds = 200;
constexpr std::size_t kActivateCap = 128;
constexpr std::size_t kDeactivateFloor = 384;

SolveResult solve_impl(const LinearProgram& lp,
                       const std::vector<Rational>* hint) {
  const int n = lp.varcount;
  if (hint && static_cast<int>(hint->size()) != n)
    throw std::invalid_argument("solve_feasibility: hint size mismatch");

  std::vector<Rational> lo(n, Rational(0)), hi(n, Rational(1));
  std::vector<const LinearRow*> general;
  for (const LinearRow& row : lp.rows) {
    int nnz = 0;
    int var = -1;
    Rational coef;
    for (const auto& [v, c] : row.coeffs) {
      if (c == 0) continue;
      if (v < 0 || v >= n)
        throw std::invalid_argument("solve_feasibility: variable out of range");
      ++nnz;
      var = v;
      coef = c;
    }
    if (nnz == 0) {
      Rational zero = 0;
      const bool ok = row.rel == Relation::LessEq  ? zero <= row.rhs
                      : row.rel == Relation::Equal ? zero == row.rhs
                                                   : zero >= row.rhs;
      if (!ok) return {};
      continue;
    }
    if (nnz == 1) {
      // Fold a*x rel b into the box.
      const Rational bound = row.rhs / coef;
      Relation rel = row.rel;
      if (coef < 0)
        rel = rel == Relation::LessEq    ? Relation::GreaterEq
              : rel == Relation::GreaterEq ? Relation::LessEq
                                           : Relation::Equal;
      if (rel != Relation::GreaterEq) hi[var] = std::min(hi[var], bound);
      if (rel != Relation::LessEq) lo[var] = std::max(lo[var], bound);
      continue;
    }
    general.push_back(&row);
  }
  for (int v = 0; v < n; ++v)
    if (lo[v] > hi[v]) return {};

  const auto base_value = [&](int v) {
    Rational h = hint ? (*hint)[v] : Rational(0);
    if (h < lo[v]) h = lo[v];
    if (h > hi[v]) h = hi[v];
    return h;
  };

  const std::size_t ng = general.size();
  std::vector<char> active(ng, 0);
  if (!hint) {
    // Equality rows are almost always binding; activating them up front
    // saves an activation round in the common cold-start case.
    for (std::size_t i = 0; i < ng; ++i)
      if (general[i]->rel == Relation::Equal) active[i] = 1;
  }

  // Current point, refined every round; inactive rows are checked against it
  // and nonbasic starts snap to the bound nearest to it.
  std::vector<Rational> x(n);
  for (int v = 0; v < n; ++v) x[v] = base_value(v);
  int round = 0;
  for (;;) {
    ++round;
    std::vector<int> local_of(n, -1);
    std::vector<int> global_of;
    ActiveSystem sys;
    for (std::size_t i = 0; i < ng; ++i) {
      if (!active[i]) continue;
      const LinearRow& row = *general[i];
      ActiveRow ar;
      ar.is_eq = row.rel == Relation::Equal;
      const bool flip = row.rel == Relation::GreaterEq;
      ar.rhs = flip ? -row.rhs : row.rhs;
      for (const auto& [v, c] : row.coeffs) {
        if (c == 0) continue;
        if (local_of[v] < 0) {
          local_of[v] = static_cast<int>(global_of.size());
          global_of.push_back(v);
        }
        ar.coeffs.emplace_back(local_of[v], flip ? -c : c);
      }
      sys.rows.push_back(std::move(ar));
    }
    sys.nvars = static_cast<int>(global_of.size());
    sys.lo.reserve(sys.nvars);
    sys.hi.reserve(sys.nvars);
    sys.start.reserve(sys.nvars);
    for (int v : global_of) {
      sys.lo.push_back(lo[v]);
      sys.hi.push_back(hi[v]);
      // Nonbasic columns must start on a bound; snap to the nearer one.
      const Rational& h = x[v];
      sys.start.push_back(h - lo[v] <= hi[v] - h ? lo[v] : hi[v]);
    }

    EngineResult er;
    const char* engine = "none";
    if (sys.rows.empty()) {
      er.feasible = true;
    } else {
      try {
        engine = "r64";
        er = run_simplex<R64>(sys);
      } catch (const EngineOverflow&) {
        engine = "mpq";
        er = run_simplex<Rational>(sys);
      }
    }
    if (!er.feasible) {
      if (lp_stats_enabled())
        std::fprintf(stderr,
                     "[lp] round=%d active=%zu vars=%d engine=%s pivots=%ld "
                     "infeasible\n",
                     round, sys.rows.size(), sys.nvars, engine, er.pivots);
      return {};
    }

    for (std::size_t l = 0; l < global_of.size(); ++l)
      x[global_of[l]] = er.values[l];

    // Signed violation: positive means the row fails at x.
    std::vector<std::size_t> violated;
    std::vector<Rational> excess(ng, Rational(0));
    for (std::size_t i = 0; i < ng; ++i) {
      const LinearRow& row = *general[i];
      const Rational lhs = eval_row(row, x);
      switch (row.rel) {
        case Relation::LessEq:
          excess[i] = lhs - row.rhs;
          break;
        case Relation::GreaterEq:
          excess[i] = row.rhs - lhs;
          break;
        case Relation::Equal:
          excess[i] = lhs > row.rhs ? lhs - row.rhs : row.rhs - lhs;
          break;
      }
      if (excess[i] > 0) violated.push_back(i);
    }
    if (lp_stats_enabled())
      std::fprintf(stderr,
                   "[lp] round=%d active=%zu vars=%d engine=%s pivots=%ld "
                   "violated=%zu\n",
                   round, sys.rows.size(), sys.nvars, engine, er.pivots,
                   violated.size());
    if (violated.empty()) {
      SolveResult out;
      out.feasible = true;
      out.point.values = x;
      if (!point_satisfies(lp, out.point))
        throw std::logic_error("solve_feasibility: verification failed");
      return out;
    }
    bool grew = false;
    // Once the working set is large, strictly slack rows leave it while fresh
    // violations take their place, keeping the tableau near the binding
    // structure. Past the round cutoff the set only grows, which forces
    // termination.
    std::size_t active_count = 0;
    for (std::size_t i = 0; i < ng; ++i) active_count += active[i];
    if (round < kDeactivateRounds && active_count > kDeactivateFloor) {
      for (std::size_t i = 0; i < ng; ++i)
        if (active[i] && general[i]->rel != Relation::Equal && excess[i] < 0)
          active[i] = 0;
    }
    std::sort(violated.begin(), violated.end(),
              [&](std::size_t a, std::size_t b) {
                if (excess[a] != excess[b]) return excess[b] < excess[a];
                return a < b;
              });
    std::size_t added = 0;
    for (std::size_t i : violated) {
      if (added >= kActivateCap) break;
      if (!active[i]) {
        active[i] = 1;
        grew = true;
        ++added;
      }
    }
    if (!grew)
      throw std::logic_error("solve_feasibility: active row violated");
  }
}

}  // namespace

SolveResult solve_feasibility(const LinearProgram& lp) {
  return solve_impl(lp, nullptr);
}

SolveResult solve_feasibility(const LinearProgram& lp,
                              const std::vector<Rational>& hint) {
  return solve_impl(lp, &hint);
}

}  // namespace schedlift
