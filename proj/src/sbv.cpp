#include "mslift/sbv.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "mslift/errors.hpp"
#include "mslift/tolerances.hpp"

namespace mslift {
namespace {

std::string piece_label(std::size_t i) {
  std::ostringstream os;
  os << "piece " << i;
  return os.str();
}

bool collinear(double x0, double y0, double x1, double y1, double x2, double y2) {
  const double predicted = y0 + (y2 - y0) * (x1 - x0) / (x2 - x0);
  return std::abs(predicted - y1) <= kTraceMergeTol * (1.0 + std::abs(y1));
}

void drop_collinear_nodes(Piece& p) {
  if (p.nodes.size() <= 2) return;
  Piece out;
  out.nodes.push_back(p.nodes.front());
  out.values.push_back(p.values.front());
  for (std::size_t k = 1; k + 1 < p.nodes.size(); ++k) {
    if (collinear(out.nodes.back(), out.values.back(), p.nodes[k], p.values[k], p.nodes[k + 1],
                  p.values[k + 1])) {
      continue;
    }
    out.nodes.push_back(p.nodes[k]);
    out.values.push_back(p.values[k]);
  }
  out.nodes.push_back(p.nodes.back());
  out.values.push_back(p.values.back());
  p = std::move(out);
}

}  // namespace

Domain::Domain(double a, double b, double inner_a, double inner_b)
    : a_(a), b_(b), inner_a_(inner_a), inner_b_(inner_b) {
  if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(inner_a) && std::isfinite(inner_b))) {
    throw ValidationError("domain: endpoints must be finite");
  }
  if (!(a < inner_a && inner_a < inner_b && inner_b < b)) {
    throw ValidationError("domain: need a < inner_a < inner_b < b");
  }
}

bool Domain::in_collar(double x) const {
  return (a_ < x && x <= inner_a_) || (inner_b_ <= x && x < b_);
}

double Piece::at(double x) const {
  if (x <= nodes.front()) return values.front();
  if (x >= nodes.back()) return values.back();
  const auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
  const auto k = static_cast<std::size_t>(it - nodes.begin());
  const double t = (x - nodes[k - 1]) / (nodes[k] - nodes[k - 1]);
  return values[k - 1] + t * (values[k] - values[k - 1]);
}

double LinearSegment::at(double x) const {
  if (x == x0) return y0;
  if (x == x1) return y1;
  return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

SbvFunction::SbvFunction(Interval interval, std::vector<Piece> pieces) : interval_(interval) {
  if (!(std::isfinite(interval.a) && std::isfinite(interval.b) && interval.a < interval.b)) {
    throw ValidationError("domain: need finite a < b");
  }
  if (pieces.empty()) throw ValidationError("pieces: at least one piece is required");

  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const Piece& p = pieces[i];
    if (p.nodes.size() != p.values.size()) {
      throw ValidationError(piece_label(i) + ": nodes and values differ in length");
    }
    if (p.nodes.size() < 2) throw ValidationError(piece_label(i) + ": needs at least two nodes");
    for (std::size_t k = 0; k < p.nodes.size(); ++k) {
      if (!std::isfinite(p.nodes[k]) || !std::isfinite(p.values[k])) {
        throw ValidationError(piece_label(i) + ": non-finite node or value");
      }
      if (k > 0 && !(p.nodes[k - 1] < p.nodes[k])) {
        throw ValidationError(piece_label(i) + ": nodes must be strictly increasing");
      }
    }
  }

  if (std::abs(pieces.front().nodes.front() - interval.a) > kAbscissaTol) {
    throw ValidationError(piece_label(0) + ": must start at the domain's left endpoint");
  }
  pieces.front().nodes.front() = interval.a;
  if (std::abs(pieces.back().nodes.back() - interval.b) > kAbscissaTol) {
    throw ValidationError(piece_label(pieces.size() - 1) +
                          ": must end at the domain's right endpoint");
  }
  pieces.back().nodes.back() = interval.b;
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    if (std::abs(pieces[i].nodes.front() - pieces[i - 1].nodes.back()) > kAbscissaTol) {
      throw ValidationError(piece_label(i) + ": must start where " + piece_label(i - 1) + " ends");
    }
    pieces[i].nodes.front() = pieces[i - 1].nodes.back();
    if (pieces[i].nodes.size() > 1 && !(pieces[i].nodes[0] < pieces[i].nodes[1])) {
      throw ValidationError(piece_label(i) + ": nodes must be strictly increasing");
    }
  }

  // Equal traces are not a jump: merge.
  for (auto& p : pieces) {
    if (pieces_.empty() ||
        std::abs(pieces_.back().last_value() - p.first_value()) > kTraceMergeTol) {
      pieces_.push_back(std::move(p));
      continue;
    }
    Piece& prev = pieces_.back();
    prev.nodes.insert(prev.nodes.end(), p.nodes.begin() + 1, p.nodes.end());
    prev.values.insert(prev.values.end(), p.values.begin() + 1, p.values.end());
  }
  for (auto& p : pieces_) drop_collinear_nodes(p);
}

SbvFunction SbvFunction::constant(Interval interval, double c) {
  return SbvFunction(interval, {Piece{{interval.a, interval.b}, {c, c}}});
}

SbvFunction SbvFunction::linear(Interval interval, double value_a, double value_b) {
  return SbvFunction(interval, {Piece{{interval.a, interval.b}, {value_a, value_b}}});
}

SbvFunction SbvFunction::step(Interval interval, double x, double c_left, double c_right) {
  return SbvFunction(interval, {Piece{{interval.a, x}, {c_left, c_left}},
                                Piece{{x, interval.b}, {c_right, c_right}}});
}

std::vector<Jump> SbvFunction::jumps() const {
  std::vector<Jump> out;
  out.reserve(pieces_.size() - 1);
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
    out.push_back({pieces_[i].last_node(), pieces_[i].last_value(), pieces_[i + 1].first_value()});
  }
  return out;
}

std::optional<Jump> SbvFunction::jump_near(double x, double tol) const {
  // Boundaries are pieces_[i].last_node() for i < n - 1, sorted.
  std::size_t lo = 0;
  std::size_t hi = pieces_.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (pieces_[mid].last_node() < x - tol) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo + 1 < pieces_.size() && std::abs(pieces_[lo].last_node() - x) <= tol) {
    return Jump{pieces_[lo].last_node(), pieces_[lo].last_value(), pieces_[lo + 1].first_value()};
  }
  return std::nullopt;
}

std::size_t SbvFunction::piece_from_left(double x) const {
  // First piece whose last node is >= x.
  const auto it = std::lower_bound(pieces_.begin(), pieces_.end(), x,
                                   [](const Piece& p, double v) { return p.last_node() < v; });
  if (it == pieces_.end()) return pieces_.size() - 1;
  return static_cast<std::size_t>(it - pieces_.begin());
}

std::size_t SbvFunction::piece_from_right(double x) const {
  // First piece whose last node is > x.
  const auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                                   [](double v, const Piece& p) { return v < p.last_node(); });
  if (it == pieces_.end()) return pieces_.size() - 1;
  return static_cast<std::size_t>(it - pieces_.begin());
}

double SbvFunction::left_trace(double x) const {
  if (!(x > interval_.a && x <= interval_.b)) throw DomainError("left_trace: x outside (a, b]");
  return pieces_[piece_from_left(x)].at(x);
}

double SbvFunction::right_trace(double x) const {
  if (!(x >= interval_.a && x < interval_.b)) throw DomainError("right_trace: x outside [a, b)");
  return pieces_[piece_from_right(x)].at(x);
}

LinearSegment SbvFunction::segment_at(double x) const {
  const Piece& p = pieces_[piece_from_right(x)];
  auto it = std::upper_bound(p.nodes.begin(), p.nodes.end(), x);
  auto k = static_cast<std::size_t>(it - p.nodes.begin());
  k = std::clamp<std::size_t>(k, 1, p.nodes.size() - 1);
  return {p.nodes[k - 1], p.nodes[k], p.values[k - 1], p.values[k]};
}

std::vector<double> SbvFunction::breakpoints() const {
  std::vector<double> xs;
  for (const auto& p : pieces_) xs.insert(xs.end(), p.nodes.begin(), p.nodes.end());
  return unique_abscissae(std::move(xs));
}

std::vector<Piece> SbvFunction::pieces_between(double lo, double hi) const {
  if (!(interval_.a <= lo && lo < hi && hi <= interval_.b)) {
    throw DomainError("pieces_between: need a <= lo < hi <= b");
  }
  std::vector<Piece> out;
  for (const auto& p : pieces_) {
    if (p.last_node() <= lo || p.first_node() >= hi) continue;
    Piece q;
    const double start = std::max(p.first_node(), lo);
    const double end = std::min(p.last_node(), hi);
    q.nodes.push_back(start);
    q.values.push_back(p.at(start));
    for (std::size_t k = 0; k < p.nodes.size(); ++k) {
      if (p.nodes[k] > start && p.nodes[k] < end) {
        q.nodes.push_back(p.nodes[k]);
        q.values.push_back(p.values[k]);
      }
    }
    q.nodes.push_back(end);
    q.values.push_back(p.at(end));
    out.push_back(std::move(q));
  }
  return out;
}

SbvFunction splice(const SbvFunction& left, const SbvFunction& right, double x, bool join) {
  if (!(left.interval() == right.interval())) {
    throw DomainMismatchError("splice: functions live on different intervals");
  }
  const Interval iv = left.interval();
  if (!(iv.a < x && x < iv.b)) throw DomainError("splice: x must be interior");
  auto pieces = left.pieces_between(iv.a, x);
  auto tail = right.pieces_between(x, iv.b);
  if (join) tail.front().values.front() = pieces.back().values.back();
  pieces.insert(pieces.end(), std::make_move_iterator(tail.begin()),
                std::make_move_iterator(tail.end()));
  return SbvFunction(iv, std::move(pieces));
}

bool same_graph(const SbvFunction& u, const SbvFunction& v, double tol) {
  if (!(u.interval() == v.interval())) return false;
  auto xs = u.breakpoints();
  const auto vx = v.breakpoints();
  xs.insert(xs.end(), vx.begin(), vx.end());
  xs = unique_abscissae(std::move(xs));
  for (std::size_t c = 0; c + 1 < xs.size(); ++c) {
    const double mid = 0.5 * (xs[c] + xs[c + 1]);
    const LinearSegment su = u.segment_at(mid);
    const LinearSegment sv = v.segment_at(mid);
    if (std::abs(su.at(xs[c]) - sv.at(xs[c])) > tol) return false;
    if (std::abs(su.at(xs[c + 1]) - sv.at(xs[c + 1])) > tol) return false;
  }
  return true;
}

MsParams::MsParams(double alpha_, double beta_) : alpha(alpha_), beta(beta_) {
  if (!(std::isfinite(alpha) && alpha > 0.0)) throw ValidationError("alpha must be > 0");
  if (!(std::isfinite(beta) && beta >= 0.0)) throw ValidationError("beta must be >= 0");
}

double dirichlet_energy(const SbvFunction& u) {
  double e = 0.0;
  for (const auto& p : u.pieces()) {
    for (std::size_t k = 1; k < p.nodes.size(); ++k) {
      const double dv = p.values[k] - p.values[k - 1];
      e += dv * dv / (p.nodes[k] - p.nodes[k - 1]);
    }
  }
  return e;
}

double fidelity_energy(const SbvFunction& u, const Measurement& g) {
  if (!(u.interval() == g.interval())) {
    throw DomainMismatchError("fidelity_energy: u and g live on different intervals");
  }
  auto xs = u.breakpoints();
  const auto gx = g.function().breakpoints();
  xs.insert(xs.end(), gx.begin(), gx.end());
  xs = unique_abscissae(std::move(xs));

  double e = 0.0;
  for (std::size_t c = 0; c + 1 < xs.size(); ++c) {
    const double x0 = xs[c];
    const double x1 = xs[c + 1];
    const double mid = 0.5 * (x0 + x1);
    const LinearSegment su = u.segment_at(mid);
    const LinearSegment sg = g.function().segment_at(mid);
    const double d0 = su.at(x0) - sg.at(x0);
    const double d1 = su.at(x1) - sg.at(x1);
    e += (x1 - x0) * (d0 * d0 + d0 * d1 + d1 * d1) / 3.0;
  }
  return e;
}

double regular_energy(const SbvFunction& u, const Measurement& g, const MsParams& p) {
  if (!(u.interval() == g.interval())) {
    throw DomainMismatchError("regular_energy: u and g live on different intervals");
  }
  const double fidelity = p.beta == 0.0 ? 0.0 : p.beta * fidelity_energy(u, g);
  return dirichlet_energy(u) + fidelity;
}

double ms_energy(const SbvFunction& u, const Measurement& g, const MsParams& p) {
  return regular_energy(u, g, p) + p.alpha * static_cast<double>(u.pieces().size() - 1);
}

std::vector<Jump> jump_set(const SbvFunction& u) { return u.jumps(); }

std::vector<double> unique_abscissae(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) {
    if (out.empty() || x - out.back() > kAbscissaTol) out.push_back(x);
  }
  return out;
}

}  // namespace mslift
