#include "mslift/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>

#include "mslift/errors.hpp"
#include "mslift/tolerances.hpp"

namespace mslift {
namespace {

struct CancellingPair {
  std::size_t i;
  std::size_t j;
  std::vector<double> points;
  double overlap = 0.0;  ///< total overlap length over all points
};

std::optional<CancellingPair> first_cancelling_pair(const GraphCombination& t) {
  const auto& terms = t.terms();
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto ji = terms[i].func.jumps();
    if (ji.empty()) continue;
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      CancellingPair pair{i, j, {}, 0.0};
      for (const Jump& p : ji) {
        const auto q = terms[j].func.jump_near(p.x, kAbscissaTol);
        if (!q) continue;
        if (auto ov = cancellation_overlap(p, *q)) {
          pair.points.push_back(p.x);
          pair.overlap += ov->second - ov->first;
        }
      }
      if (!pair.points.empty()) return pair;
    }
  }
  return std::nullopt;
}

bool weights_equal(double a, double b) {
  return std::abs(a - b) <= kLayerWeightRelTol * std::max(std::abs(a), std::abs(b));
}

double weighted_jump_count(const GraphCombination& t, double x) {
  double w = 0.0;
  for (const auto& term : t.terms()) {
    if (term.func.jump_near(x, kAbscissaTol)) w += term.weight;
  }
  return w;
}

/// Merges terms with the same graph and drops weights lost to rounding.
GraphCombination merge_identical(const GraphCombination& t) {
  const double floor = 1e-14 * t.total_weight();
  std::vector<Term> out;
  for (const auto& term : t.terms()) {
    auto it = std::find_if(out.begin(), out.end(), [&](const Term& o) {
      return same_graph(o.func, term.func, kTraceMergeTol);
    });
    if (it != out.end()) {
      it->weight += term.weight;
    } else {
      out.push_back(term);
    }
  }
  std::erase_if(out, [&](const Term& o) { return o.weight <= floor; });
  return GraphCombination(t.interval(), std::move(out));
}

struct Half {
  std::size_t term;
  double value;
  double rest;
};

struct Coupling {
  std::size_t left;
  std::size_t right;
  double mass;
};

/// Transport plan between left and right halves at one column that joins
/// equal traces first. The remaining mass jumps and equals the positive
/// variation of the column.
std::vector<Coupling> couple_halves(std::vector<Half> lhs, std::vector<Half> rhs, double eps) {
  std::vector<Coupling> plan;
  const auto take = [&](Half& l, Half& r) {
    const double m = std::min(l.rest, r.rest);
    if (m <= eps) return;
    plan.push_back({l.term, r.term, m});
    l.rest -= m;
    r.rest -= m;
  };
  // Continuous terms stay whole.
  for (std::size_t k = 0; k < lhs.size(); ++k) {
    if (std::abs(lhs[k].value - rhs[k].value) <= kAdjacencyTol) take(lhs[k], rhs[k]);
  }
  // Equal traces, in value order.
  std::vector<std::size_t> lo(lhs.size()), ro(rhs.size());
  std::iota(lo.begin(), lo.end(), 0);
  std::iota(ro.begin(), ro.end(), 0);
  std::stable_sort(lo.begin(), lo.end(), [&](auto x, auto y) { return lhs[x].value < lhs[y].value; });
  std::stable_sort(ro.begin(), ro.end(), [&](auto x, auto y) { return rhs[x].value < rhs[y].value; });
  for (std::size_t li : lo) {
    for (std::size_t ri : ro) {
      if (lhs[li].rest <= eps) break;
      if (std::abs(lhs[li].value - rhs[ri].value) <= kAdjacencyTol) take(lhs[li], rhs[ri]);
    }
  }
  // A term's own leftovers, so as few functions as possible are cut.
  for (std::size_t k = 0; k < lhs.size(); ++k) take(lhs[k], rhs[k]);
  // Northwest corner for the rest.
  std::size_t li = 0;
  std::size_t ri = 0;
  while (li < lhs.size() && ri < rhs.size()) {
    if (lhs[li].rest <= eps) {
      ++li;
      continue;
    }
    if (rhs[ri].rest <= eps) {
      ++ri;
      continue;
    }
    take(lhs[li], rhs[ri]);
    if (lhs[li].rest <= eps) ++li;
    else ++ri;
  }
  return plan;
}

}  // namespace

std::string to_string(StepKind k) {
  switch (k) {
    case StepKind::kCancellationSwap:
      return "cancel-swap";
    case StepKind::kPeel:
      return "peel";
    case StepKind::kAdjacentSwap:
      return "adjacent-swap";
    case StepKind::kRematch:
      return "rematch";
  }
  return "unknown";
}

GraphCombination Decomposition::as_combination() const {
  std::vector<Term> terms;
  terms.reserve(parts.size());
  for (const auto& p : parts) terms.push_back({p.mu, p.w});
  return GraphCombination(interval, std::move(terms));
}

double Decomposition::weight_sum() const {
  double s = 0.0;
  for (const auto& p : parts) s += p.mu;
  return s;
}

std::size_t count_cancelling_pairs(const GraphCombination& t) {
  const auto& terms = t.terms();
  std::size_t count = 0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      for (const Jump& p : terms[i].func.jumps()) {
        const auto q = terms[j].func.jump_near(p.x, kAbscissaTol);
        if (q && cancellation_overlap(p, *q)) {
          ++count;
          break;
        }
      }
    }
  }
  return count;
}

namespace {

/// Vertical mass carried by the jumps of t at x minus the mass of the slice.
double column_cancelled_mass(const GraphCombination& t, double x) {
  double carried = 0.0;
  for (const auto& term : t.terms()) {
    if (auto j = term.func.jump_near(x, kAbscissaTol)) carried += term.weight * std::abs(j->right - j->left);
  }
  const ColumnProfile p = slice_profile(t, x);
  double net = 0.0;
  for (std::size_t i = 0; i < p.intervals(); ++i) net += std::abs(p.levels[i]) * p.width(i);
  return carried - net;
}

}  // namespace

double cancelled_vertical_mass(const GraphCombination& t) {
  double total = 0.0;
  for (double x : t.jump_abscissae()) total += column_cancelled_mass(t, x);
  return total;
}

bool has_cancellation(const GraphCombination& t) { return first_cancelling_pair(t).has_value(); }

GraphCombination remove_cancellation(const GraphCombination& t, std::vector<ProvenanceStep>* log) {
  struct Strand {
    double weight;
    std::size_t term;  ///< the input term whose tail the strand follows
    SbvFunction func;
  };
  const auto& in = t.terms();
  const double eps = 1e-14 * t.total_weight();
  std::vector<Strand> strands;
  for (std::size_t k = 0; k < in.size(); ++k) strands.push_back({in[k].weight, k, in[k].func});
  const auto combination = [&] {
    std::vector<Term> terms;
    for (const auto& s : strands) terms.push_back({s.weight, s.func});
    return GraphCombination(t.interval(), std::move(terms));
  };

  double potential = cancelled_vertical_mass(t);
  for (double x : t.jump_abscissae()) {
    std::optional<std::pair<std::size_t, std::size_t>> first;
    for (std::size_t i = 0; i < in.size() && !first; ++i) {
      const auto p = in[i].func.jump_near(x, kAbscissaTol);
      for (std::size_t j = i + 1; p && j < in.size() && !first; ++j) {
        const auto q = in[j].func.jump_near(x, kAbscissaTol);
        if (q && cancellation_overlap(*p, *q)) first = std::pair{i, j};
      }
    }
    if (!first) continue;

    // Left halves are the strands, right halves the input tails. Strands on
    // a term that is continuous at x keep it; the rest are coupled in value
    // order, which leaves no two jumps running against each other.
    std::vector<Half> lhs, rhs;
    for (std::size_t s = 0; s < strands.size(); ++s) lhs.push_back({s, strands[s].func.left_trace(x), strands[s].weight});
    for (std::size_t k = 0; k < in.size(); ++k) rhs.push_back({k, in[k].func.right_trace(x), in[k].weight});
    std::vector<Coupling> plan;
    const auto take = [&](Half& l, Half& r) {
      const double m = std::min(l.rest, r.rest);
      l.rest -= m;
      r.rest -= m;
      if (m > eps) plan.push_back({l.term, r.term, m});
    };
    for (auto& l : lhs) {
      if (!in[strands[l.term].term].func.jump_near(x, kAbscissaTol)) take(l, rhs[strands[l.term].term]);
    }
    const auto by_value = [](const Half& a, const Half& b) { return a.value < b.value; };
    std::stable_sort(lhs.begin(), lhs.end(), by_value);
    std::stable_sort(rhs.begin(), rhs.end(), by_value);
    for (std::size_t li = 0, ri = 0; li < lhs.size() && ri < rhs.size();) {
      if (lhs[li].rest <= eps) {
        ++li;
      } else if (rhs[ri].rest <= eps) {
        ++ri;
      } else {
        take(lhs[li], rhs[ri]);
      }
    }

    std::vector<Strand> next;
    for (const auto& c : plan) {
      const Strand& s = strands[c.left];
      next.push_back({c.mass, c.right, c.right == s.term ? s.func : splice(s.func, in[c.right].func, x)});
    }
    strands = std::move(next);

    const double lost = potential;
    potential = cancelled_vertical_mass(combination());
    const double expected = column_cancelled_mass(t, x);
    if (std::abs(lost - potential - expected) > 1e-9 * (1.0 + lost)) {
      std::ostringstream os;
      os << "remove_cancellation: cancelled mass went from " << lost << " to " << potential << " at x=" << x
         << ", expected a drop of " << expected;
      throw VerificationError(os.str(), lost - potential - expected);
    }
    if (log) log->push_back({StepKind::kCancellationSwap, 0, x, first->first, first->second, expected});
  }
  return combination();
}

GraphCombination swap_adjacent_block(const GraphCombination& t, std::vector<ProvenanceStep>* log,
                                     std::size_t layer) {
  const auto& in = t.terms();
  for (std::size_t k = 1; k < in.size(); ++k) {
    if (!weights_equal(in[k].weight, in[0].weight)) {
      throw PreconditionError("swap_adjacent_block: weights differ within the layer");
    }
  }
  if (auto pair = first_cancelling_pair(t)) {
    std::ostringstream os;
    os << "swap_adjacent_block: terms " << pair->i << " and " << pair->j << " cancel at x="
       << pair->points.front();
    throw PreconditionError(os.str());
  }

  std::vector<Term> terms = in;
  // Each swap removes one jump, so the total jump count bounds the loop.
  while (true) {
    bool swapped = false;
    for (std::size_t i = 0; i < terms.size() && !swapped; ++i) {
      for (const Jump& p : terms[i].func.jumps()) {
        for (std::size_t j = 0; j < terms.size() && !swapped; ++j) {
          if (j == i) continue;
          const auto q = terms[j].func.jump_near(p.x, kAbscissaTol);
          if (!q || std::abs(p.right - q->left) > kAdjacencyTol) continue;
          const SbvFunction ui = terms[i].func;
          const SbvFunction uj = terms[j].func;
          terms[i].func = splice(ui, uj, p.x);
          terms[j].func = splice(uj, ui, p.x, true);
          if (log) log->push_back({StepKind::kAdjacentSwap, layer, p.x, i, j, terms[i].weight});
          swapped = true;
        }
        if (swapped) break;
      }
    }
    if (!swapped) break;
  }
  return GraphCombination(t.interval(), std::move(terms));
}

std::vector<GraphCombination> peel_layers(const GraphCombination& t) {
  const auto& terms = t.terms();
  std::vector<std::size_t> order(terms.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](auto x, auto y) { return terms[x].weight < terms[y].weight; });

  // group[k]: rank of term k's weight class; level[g]: mean weight of class g.
  std::vector<std::size_t> group(terms.size());
  std::vector<double> level;
  std::vector<std::size_t> members;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const std::size_t k = order[pos];
    if (level.empty() || !weights_equal(terms[k].weight, terms[order[pos - 1]].weight)) {
      level.push_back(0.0);
      members.push_back(0);
    }
    group[k] = level.size() - 1;
    level.back() += terms[k].weight;
    ++members.back();
  }
  for (std::size_t g = 0; g < level.size(); ++g) level[g] /= static_cast<double>(members[g]);

  std::vector<GraphCombination> layers;
  for (std::size_t g = 0; g < level.size(); ++g) {
    const double delta = level[g] - (g == 0 ? 0.0 : level[g - 1]);
    std::vector<Term> layer;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      if (group[k] >= g) layer.push_back({delta, terms[k].func});
    }
    layers.emplace_back(t.interval(), std::move(layer));
  }
  return layers;
}

GraphCombination rematch_columns(const GraphCombination& t, std::vector<ProvenanceStep>* log) {
  if (t.empty()) return t;
  GraphCombination cur = t;
  const double total = t.total_weight();
  const double eps = 1e-14 * total;
  for (double x : t.jump_abscissae()) {
    const double jumping = weighted_jump_count(cur, x);
    const double posvar = positive_variation(slice_profile(cur, x));
    if (jumping <= posvar + 1e-12 * total) continue;

    const auto& terms = cur.terms();
    std::vector<Half> lhs, rhs;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      lhs.push_back({k, terms[k].func.left_trace(x), terms[k].weight});
      rhs.push_back({k, terms[k].func.right_trace(x), terms[k].weight});
    }
    std::vector<Term> next;
    for (const Coupling& c : couple_halves(lhs, rhs, eps)) {
      if (c.left == c.right) {
        next.push_back({c.mass, terms[c.left].func});
        continue;
      }
      const bool join = std::abs(lhs[c.left].value - rhs[c.right].value) <= kAdjacencyTol;
      next.push_back({c.mass, splice(terms[c.left].func, terms[c.right].func, x, join)});
      if (log) log->push_back({StepKind::kRematch, 0, x, c.left, c.right, c.mass});
    }
    cur = merge_identical(GraphCombination(cur.interval(), std::move(next)));
  }
  return cur;
}

Decomposition decompose(const GraphCombination& t, const LiftParams& params) {
  Decomposition out;
  out.interval = t.interval();
  const double lifted = evaluate(t, params).total;
  out.checks.lifted_energy = lifted;

  if (!t.empty()) {
    const GraphCombination clean = remove_cancellation(t, &out.provenance);
    const auto layers = peel_layers(clean);
    std::vector<Term> flat;
    for (std::size_t j = 0; j < layers.size(); ++j) {
      const double delta = layers[j].terms().front().weight;
      out.provenance.push_back({StepKind::kPeel, j, 0.0, layers[j].size(), 0, delta});
      const GraphCombination swapped = swap_adjacent_block(layers[j], &out.provenance, j);
      flat.insert(flat.end(), swapped.terms().begin(), swapped.terms().end());
    }
    GraphCombination merged =
        merge_identical(rematch_columns(GraphCombination(t.interval(), std::move(flat)), &out.provenance));
    for (const auto& term : merged.terms()) out.parts.push_back({term.weight, term.func});
  }

  const GraphCombination result = out.as_combination();
  double parts_energy = 0.0;
  for (const auto& p : out.parts) parts_energy += p.mu * ms_energy(p.w, params.g, params.ms);
  out.checks.parts_energy = parts_energy;
  out.checks.energy_gap = std::abs(lifted - parts_energy);
  out.checks.weight_gap = std::abs(out.weight_sum() - t.total_weight());
  out.checks.current_equal = current_equal(t, result, kEqualityTol);

  if (!out.checks.current_equal) {
    throw VerificationError("decompose: parts do not reproduce the current", out.checks.energy_gap);
  }
  if (out.checks.energy_gap > 1e-8 * (1.0 + lifted)) {
    std::ostringstream os;
    os << "decompose: lifted energy " << lifted << " differs from the parts' energy " << parts_energy;
    throw VerificationError(os.str(), out.checks.energy_gap);
  }
  if (out.checks.weight_gap > 1e-12 * std::max(1.0, t.total_weight())) {
    throw VerificationError("decompose: weights are not conserved", out.checks.weight_gap);
  }
  return out;
}

}  // namespace mslift
