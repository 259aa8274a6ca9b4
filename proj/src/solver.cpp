#include "mslift/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "mslift/errors.hpp"
#include "mslift/tolerances.hpp"

namespace mslift {

DirichletSpec::DirichletSpec(Domain domain, SbvFunction boundary)
    : domain_(domain), boundary_(std::move(boundary)) {
  if (!(boundary_.interval() == domain_.outer())) {
    throw DomainMismatchError("DirichletSpec: boundary function must live on the outer interval");
  }
}

namespace {

double simpson(double h, double f0, double fm, double f1) { return h * (f0 + 4.0 * fm + f1) / 6.0; }

/// P1 discretization of the regular energy on a uniform grid.
class Discretization {
 public:
  Discretization(const Measurement& g, double beta, double lo, double hi, std::size_t n,
                 std::optional<double> pin_left, std::optional<double> pin_right)
      : g_(g.function()), beta_(beta), pin_left_(pin_left), pin_right_(pin_right) {
    x_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      x_[k] = k + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
    }
    const auto gx = g_.breakpoints();
    load_.resize(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      cells_.push_back(subcells(k, gx));
      auto& [l0, l1] = load_[k];
      l0 = l1 = 0.0;
      const double h = x_[k + 1] - x_[k];
      for (const auto& c : cells_[k]) {
        const double m = 0.5 * (c.x0 + c.x1);
        const auto phi1 = [&](double x) { return (x - x_[k]) / h; };
        const auto phi0 = [&](double x) { return 1.0 - phi1(x); };
        l0 += simpson(c.x1 - c.x0, c.y0 * phi0(c.x0), c.at(m) * phi0(m), c.y1 * phi0(c.x1));
        l1 += simpson(c.x1 - c.x0, c.y0 * phi1(c.x0), c.at(m) * phi1(m), c.y1 * phi1(c.x1));
      }
    }
  }

  std::size_t nodes() const { return x_.size(); }
  const std::vector<double>& grid() const { return x_; }

  /// Minimizing values on nodes s..e and the regular energy they attain.
  std::pair<std::vector<double>, double> segment(std::size_t s, std::size_t e) const {
    const std::size_t m = e - s + 1;
    const bool pl = s == 0 && pin_left_.has_value();
    const bool pr = e + 1 == x_.size() && pin_right_.has_value();
    std::vector<double> u(m);
    if (beta_ == 0.0 && !pl && !pr) {
      // Every constant is optimal; the beta -> 0+ limit selects the mean of g.
      double mass = 0.0;
      for (std::size_t k = s; k < e; ++k) mass += load_[k].first + load_[k].second;
      std::fill(u.begin(), u.end(), mass / (x_[e] - x_[s]));
    } else {
      std::vector<double> lower(m, 0.0), diag(m, 0.0), upper(m, 0.0), rhs(m, 0.0);
      for (std::size_t k = s; k < e; ++k) {
        const std::size_t i = k - s;
        const double h = x_[k + 1] - x_[k];
        const double d = 1.0 / h + beta_ * h / 3.0;
        const double o = -1.0 / h + beta_ * h / 6.0;
        diag[i] += d;
        diag[i + 1] += d;
        upper[i] += o;
        lower[i + 1] += o;
        rhs[i] += beta_ * load_[k].first;
        rhs[i + 1] += beta_ * load_[k].second;
      }
      if (pl) {
        diag[0] = 1.0;
        upper[0] = 0.0;
        rhs[0] = *pin_left_;
      }
      if (pr) {
        diag[m - 1] = 1.0;
        lower[m - 1] = 0.0;
        rhs[m - 1] = *pin_right_;
      }
      // Thomas algorithm.
      for (std::size_t i = 1; i < m; ++i) {
        const double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
      }
      u[m - 1] = rhs[m - 1] / diag[m - 1];
      for (std::size_t i = m - 1; i-- > 0;) u[i] = (rhs[i] - upper[i] * u[i + 1]) / diag[i];
    }
    return {u, energy(s, u)};
  }

 private:
  std::vector<LinearSegment> subcells(std::size_t k, const std::vector<double>& gx) const {
    std::vector<double> cuts{x_[k]};
    for (double c : gx) {
      if (c > x_[k] + kAbscissaTol && c < x_[k + 1] - kAbscissaTol) cuts.push_back(c);
    }
    cuts.push_back(x_[k + 1]);
    std::vector<LinearSegment> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const LinearSegment seg = g_.segment_at(0.5 * (cuts[i] + cuts[i + 1]));
      out.push_back({cuts[i], cuts[i + 1], seg.at(cuts[i]), seg.at(cuts[i + 1])});
    }
    return out;
  }

  double energy(std::size_t s, const std::vector<double>& u) const {
    double e = 0.0;
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
      const std::size_t k = s + i;
      const double h = x_[k + 1] - x_[k];
      const double du = u[i + 1] - u[i];
      e += du * du / h;
      if (beta_ == 0.0) continue;
      const LinearSegment uk{x_[k], x_[k + 1], u[i], u[i + 1]};
      double fid = 0.0;
      for (const auto& c : cells_[k]) {
        const double m = 0.5 * (c.x0 + c.x1);
        const double d0 = uk.at(c.x0) - c.y0;
        const double dm = uk.at(m) - c.at(m);
        const double d1 = uk.at(c.x1) - c.y1;
        fid += simpson(c.x1 - c.x0, d0 * d0, dm * dm, d1 * d1);
      }
      e += beta_ * fid;
    }
    return e;
  }

  const SbvFunction& g_;
  double beta_;
  std::optional<double> pin_left_, pin_right_;
  std::vector<double> x_;
  std::vector<std::vector<LinearSegment>> cells_;
  std::vector<std::pair<double, double>> load_;
};

struct Setup {
  Interval iv;
  double lo;
  double hi;
  std::optional<double> pin_left;
  std::optional<double> pin_right;
};

Setup setup(const Measurement& g, const std::optional<DirichletSpec>& spec, std::size_t n) {
  if (n < 4) throw ValidationError("minimize: grid size n must be at least 4");
  const Interval iv = g.interval();
  if (!spec) return {iv, iv.a, iv.b, std::nullopt, std::nullopt};
  const Domain& d = spec->domain();
  if (!(d.outer() == iv)) throw DomainMismatchError("minimize: Dirichlet domain differs from g's interval");
  return {iv, d.inner_a(), d.inner_b(), spec->boundary().left_trace(d.inner_a()),
          spec->boundary().right_trace(d.inner_b())};
}

/// u on the grid from the sorted cut nodes, with the collar taken from the spec.
MinimizeResult assemble(const Discretization& disc, const std::vector<std::size_t>& cuts,
                        const Measurement& g, const MsParams& p, const std::optional<DirichletSpec>& spec) {
  const Interval iv = g.interval();
  std::vector<Piece> pieces;
  if (spec) pieces = spec->boundary().pieces_between(iv.a, spec->domain().inner_a());
  std::vector<std::size_t> ends{0};
  ends.insert(ends.end(), cuts.begin(), cuts.end());
  ends.push_back(disc.nodes() - 1);
  for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
    auto values = disc.segment(ends[i], ends[i + 1]).first;
    std::vector<double> nodes(disc.grid().begin() + static_cast<std::ptrdiff_t>(ends[i]),
                              disc.grid().begin() + static_cast<std::ptrdiff_t>(ends[i + 1]) + 1);
    pieces.push_back({std::move(nodes), std::move(values)});
  }
  if (spec) {
    auto tail = spec->boundary().pieces_between(spec->domain().inner_b(), iv.b);
    pieces.insert(pieces.end(), tail.begin(), tail.end());
  }
  MinimizeResult res{SbvFunction(iv, std::move(pieces)), 0.0, {}, 0.0};
  res.energy = ms_energy(res.u, g, p);
  for (const Jump& j : res.u.jumps()) res.jumps.push_back(j.x);
  return res;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

MinimizeResult minimize(const Measurement& g, const MsParams& p, const std::optional<DirichletSpec>& spec,
                        std::size_t n) {
  const auto start = std::chrono::steady_clock::now();
  const Setup su = setup(g, spec, n);
  const Discretization disc(g, p.beta, su.lo, su.hi, n, su.pin_left, su.pin_right);

  // State e: best cost of nodes 0..e with the last piece ending at e.
  struct State {
    double cost = std::numeric_limits<double>::infinity();
    std::size_t jumps = 0;
    std::size_t prev = 0;  ///< start node of the last piece
  };
  std::vector<State> best(n);
  for (std::size_t e = 1; e < n; ++e) {
    for (std::size_t s = 0; s < e; ++s) {
      const double base = s == 0 ? 0.0 : best[s].cost + p.alpha;
      const std::size_t jumps = s == 0 ? 0 : best[s].jumps + 1;
      const double cost = base + disc.segment(s, e).second;
      State& b = best[e];
      const double tie = 1e-12 * (1.0 + std::abs(cost));
      const bool better = cost < b.cost - tie || (std::abs(cost - b.cost) <= tie && jumps < b.jumps);
      if (better) b = {cost, jumps, s};
    }
  }
  std::vector<std::size_t> cuts;
  for (std::size_t e = n - 1; best[e].prev != 0; e = best[e].prev) cuts.push_back(best[e].prev);
  std::reverse(cuts.begin(), cuts.end());
  MinimizeResult res = assemble(disc, cuts, g, p, spec);
  res.runtime_ms = elapsed_ms(start);
  return res;
}

MinimizeResult brute_force_minimize(const Measurement& g, const MsParams& p,
                                    const std::optional<DirichletSpec>& spec, std::size_t n) {
  if (n > kBruteForceMaxNodes) {
    std::ostringstream os;
    os << "brute_force_minimize: n=" << n << " exceeds the limit of " << kBruteForceMaxNodes;
    throw SizeLimitError(os.str());
  }
  const auto start = std::chrono::steady_clock::now();
  const Setup su = setup(g, spec, n);
  const Discretization disc(g, p.beta, su.lo, su.hi, n, su.pin_left, su.pin_right);

  const std::size_t inner = n - 2;
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_cuts;
  for (std::uint32_t mask = 0; mask < (1u << inner); ++mask) {
    std::vector<std::size_t> cuts;
    for (std::size_t i = 0; i < inner; ++i) {
      if (mask & (1u << i)) cuts.push_back(i + 1);
    }
    double cost = p.alpha * static_cast<double>(cuts.size());
    std::size_t s = 0;
    for (std::size_t c : cuts) {
      cost += disc.segment(s, c).second;
      s = c;
    }
    cost += disc.segment(s, n - 1).second;
    if (cost < best) {
      best = cost;
      best_cuts = std::move(cuts);
    }
  }
  MinimizeResult res = assemble(disc, best_cuts, g, p, spec);
  res.runtime_ms = elapsed_ms(start);
  return res;
}

namespace {

class Perturber {
 public:
  Perturber(const SbvFunction& u, const Domain& d, std::uint64_t seed) : u_(u), d_(d), rng_(seed) {
    const auto inside = u.pieces_between(d.inner_a(), d.inner_b());
    lo_ = hi_ = inside.front().values.front();
    for (const auto& pc : inside) {
      for (double v : pc.values) {
        lo_ = std::min(lo_, v);
        hi_ = std::max(hi_, v);
      }
    }
    lo_ = std::floor(lo_) - 1.0;
    hi_ = std::ceil(hi_) + 1.0;
    start_ = u.right_trace(d.inner_a());
    end_ = u.left_trace(d.inner_b());
  }

  GraphCombination next() {
    std::size_t k = 1 + pick(4);
    const bool adjacency = uniform(0.0, 1.0) < 0.4;
    if (adjacency && k < 2) k = 2;
    std::vector<SbvFunction> funcs;
    if (adjacency) {
      const double x = column();
      double a = level(), b = level(), c = level();
      // Three distinct ordered traces; the pair then chains a -> b -> c.
      std::vector<double> v{a, b, c};
      std::sort(v.begin(), v.end());
      v[1] = std::max(v[1], v[0] + 0.25);
      v[2] = std::max(v[2], v[1] + 0.25);
      if (uniform(0.0, 1.0) < 0.5) std::reverse(v.begin(), v.end());
      funcs.push_back(embed(inside_with({{x, v[0], v[1]}})));
      funcs.push_back(embed(inside_with({{x, v[1], v[2]}})));
    }
    while (funcs.size() < k) funcs.push_back(embed(random_inside()));

    std::vector<double> w(k);
    for (double& x : w) x = uniform(0.1, 1.0);
    if (adjacency && uniform(0.0, 1.0) < 0.5) w[1] = w[0];
    double sum = 0.0;
    for (double x : w) sum += x;
    double acc = 0.0;
    std::vector<Term> terms;
    for (std::size_t i = 0; i < k; ++i) {
      const double wi = i + 1 == k ? 1.0 - acc : w[i] / sum;
      acc += wi;
      terms.push_back({wi, funcs[i]});
    }
    return GraphCombination(u_.interval(), std::move(terms));
  }

 private:
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  /// Quarter-integer level in the value range.
  double level() { return std::round(4.0 * uniform(lo_, hi_)) / 4.0; }

  /// One of 15 evenly spaced abscissae inside I', so columns are shared often.
  double column() {
    const double len = d_.inner_b() - d_.inner_a();
    return d_.inner_a() + len * static_cast<double>(1 + pick(15)) / 16.0;
  }

  /// Polyline from (x0, y0) to (x1, y1) through random values at the thirds.
  Piece polyline(double x0, double y0, double x1, double y1) {
    Piece pc;
    pc.nodes = {x0, x0 + (x1 - x0) / 3.0, x0 + 2.0 * (x1 - x0) / 3.0, x1};
    pc.values = {y0, uniform(lo_, hi_), uniform(lo_, hi_), y1};
    if (uniform(0.0, 1.0) < 0.5) {
      pc.values[1] = y0 + (y1 - y0) / 3.0;
      pc.values[2] = y0 + 2.0 * (y1 - y0) / 3.0;
    }
    return pc;
  }

  /// Inside pieces on [inner_a, inner_b] with the given jumps.
  std::vector<Piece> inside_with(std::vector<Jump> jumps) {
    std::sort(jumps.begin(), jumps.end(), [](const Jump& p, const Jump& q) { return p.x < q.x; });
    std::vector<Piece> pieces;
    double x = d_.inner_a();
    double y = start_;
    for (const Jump& j : jumps) {
      if (j.x <= x) continue;
      pieces.push_back(polyline(x, y, j.x, j.left));
      x = j.x;
      y = j.right;
    }
    pieces.push_back(polyline(x, y, d_.inner_b(), end_));
    return pieces;
  }

  std::vector<Piece> random_inside() {
    const double r = uniform(0.0, 1.0);
    if (r < 0.1) return u_.pieces_between(d_.inner_a(), d_.inner_b());
    if (r < 0.4) return jittered();
    if (r < 0.6) return inside_with({});  // every inside jump of u removed
    std::vector<Jump> jumps;
    const std::size_t m = 1 + pick(2);
    for (std::size_t i = 0; i < m; ++i) jumps.push_back({column(), level(), level()});
    std::sort(jumps.begin(), jumps.end(), [](const Jump& p, const Jump& q) { return p.x < q.x; });
    jumps.erase(std::unique(jumps.begin(), jumps.end(), [](const Jump& p, const Jump& q) { return p.x == q.x; }),
                jumps.end());
    return inside_with(std::move(jumps));
  }

  /// u's inside pieces with every node value moved, except the two ends.
  std::vector<Piece> jittered() {
    auto pieces = u_.pieces_between(d_.inner_a(), d_.inner_b());
    const double scale = 0.25 * (hi_ - lo_);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      auto& vals = pieces[i].values;
      for (std::size_t k = 0; k < vals.size(); ++k) {
        const bool pinned = (i == 0 && k == 0) || (i + 1 == pieces.size() && k + 1 == vals.size());
        if (!pinned) vals[k] += uniform(-scale, scale);
      }
    }
    return pieces;
  }

  SbvFunction embed(std::vector<Piece> inside) const {
    const Interval iv = u_.interval();
    auto pieces = u_.pieces_between(iv.a, d_.inner_a());
    pieces.insert(pieces.end(), inside.begin(), inside.end());
    auto tail = u_.pieces_between(d_.inner_b(), iv.b);
    pieces.insert(pieces.end(), tail.begin(), tail.end());
    return SbvFunction(iv, std::move(pieces));
  }

  const SbvFunction& u_;
  Domain d_;
  std::mt19937_64 rng_;
  double lo_ = 0.0, hi_ = 0.0, start_ = 0.0, end_ = 0.0;
};

}  // namespace

std::vector<GraphCombination> perturb_inside(const SbvFunction& u, const Domain& d, std::uint64_t seed,
                                             std::size_t count) {
  if (!(u.interval() == d.outer())) throw DomainMismatchError("perturb_inside: u and domain intervals differ");
  std::vector<GraphCombination> out;
  if (count == 0) return out;
  Perturber gen(u, d, seed);
  for (std::size_t i = 0; i < count; ++i) out.push_back(gen.next());
  return out;
}

}  // namespace mslift
