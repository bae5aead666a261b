#include "hvec/surface_mc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <thread>
#include <unordered_map>

#include "hvec/closed_forms.hpp"
#include "hvec/rng.hpp"

namespace hvec {

namespace {

constexpr int kExactDefectCap = 14;

inline int manhattan(std::pair<int, int> a, std::pair<int, int> b) {
  return std::abs(a.first - b.first) + std::abs(a.second - b.second);
}

// Boundary pairs run along the column axis for the Z graph (left boundary
// crosses logical Z) and along the row axis for the X graph; both reduce to
// the same arithmetic on the coordinate that has cols entries.
struct BoundaryInfo {
  int dist;
  bool crossing;  // matched to the logical-crossing side
};

BoundaryInfo boundary(const SurfaceLayout::MatchGraph& g, int d, std::pair<int, int> coord) {
  // The graph is rows x cols with cols = d-1; the two boundaries sit on the
  // cols axis for z_graph (axis = second) and on the rows axis for x_graph.
  // Both graphs are built so the boundary axis is the one with d-1 entries.
  int axis = g.cols == d - 1 ? coord.second : coord.first;
  int near = axis + 1;
  int far = d - 1 - axis;
  if (near <= far) return {near, true};
  return {far, false};
}

}  // namespace

SurfaceLayout build_layout(int d) {
  if (d < 1 || d % 2 == 0) throw DomainError("surface code distance must be odd and >= 1");
  SurfaceLayout lay;
  lay.d = d;
  lay.n = d * d + (d - 1) * (d - 1);

  const int side = 2 * d - 1;
  std::vector<std::vector<int>> site_index(static_cast<size_t>(side),
                                           std::vector<int>(static_cast<size_t>(side), -1));
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c)
      if ((r + c) % 2 == 0) {
        site_index[static_cast<size_t>(r)][static_cast<size_t>(c)] =
            static_cast<int>(lay.data_qubits.size());
        lay.data_qubits.emplace_back(r, c);
      }

  auto neighbors = [&](int r, int c) {
    std::vector<int> out;
    for (auto [dr, dc] : {std::pair{-1, 0}, {1, 0}, {0, -1}, {0, 1}}) {
      int rr = r + dr, cc = c + dc;
      if (rr < 0 || cc < 0 || rr >= side || cc >= side) continue;
      out.push_back(site_index[static_cast<size_t>(rr)][static_cast<size_t>(cc)]);
    }
    return out;
  };

  lay.z_graph.rows = d;
  lay.z_graph.cols = d - 1;
  lay.x_graph.rows = d - 1;
  lay.x_graph.cols = d;
  lay.z_graph.qubit_checks.resize(static_cast<size_t>(lay.n));
  lay.x_graph.qubit_checks.resize(static_cast<size_t>(lay.n));
  lay.z_graph.on_logical.assign(static_cast<size_t>(lay.n), 0);
  lay.x_graph.on_logical.assign(static_cast<size_t>(lay.n), 0);

  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      if ((r + c) % 2 == 0) continue;
      bool z_type = r % 2 == 0;  // (even, odd) sites
      auto supp = neighbors(r, c);
      int idx;
      if (z_type) {
        idx = static_cast<int>(lay.z_checks.size());
        lay.z_checks.push_back(supp);
        lay.z_graph.check_coord.emplace_back(r / 2, (c - 1) / 2);
        for (int q : supp) lay.z_graph.qubit_checks[static_cast<size_t>(q)].push_back(idx);
      } else {
        idx = static_cast<int>(lay.x_checks.size());
        lay.x_checks.push_back(supp);
        lay.x_graph.check_coord.emplace_back((r - 1) / 2, c / 2);
        for (int q : supp) lay.x_graph.qubit_checks[static_cast<size_t>(q)].push_back(idx);
      }
    }
  }

  for (int r = 0; r < side; r += 2) {
    int q = site_index[static_cast<size_t>(r)][0];
    lay.logical_z.push_back(q);
    lay.z_graph.on_logical[static_cast<size_t>(q)] = 1;
  }
  for (int c = 0; c < side; c += 2) {
    int q = site_index[0][static_cast<size_t>(c)];
    lay.logical_x.push_back(q);
    lay.x_graph.on_logical[static_cast<size_t>(q)] = 1;
  }
  return lay;
}

DecodeOutcome decode_defects(const SurfaceLayout::MatchGraph& g, int d,
                             const std::vector<int>& defects) {
  DecodeOutcome out;
  int m = static_cast<int>(defects.size());
  if (m == 0) return out;

  std::vector<std::pair<int, int>> coord(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i)
    coord[static_cast<size_t>(i)] = g.check_coord[static_cast<size_t>(defects[static_cast<size_t>(i)])];

  if (m > kExactDefectCap) {
    // Greedy nearest-boundary fallback; flagged approximate.
    out.approximate = true;
    bool par = false;
    for (int i = 0; i < m; ++i) {
      auto b = boundary(g, d, coord[static_cast<size_t>(i)]);
      out.weight += b.dist;
      par ^= b.crossing;
    }
    out.crosses = par;
    return out;
  }

  // f(S) = (min cost, crossing parity) over matchings of the defect subset
  // S; ties resolved by the first option in a fixed order (boundary, then
  // pairs by ascending index).
  uint32_t full = (m == 32) ? ~uint32_t{0} : ((uint32_t{1} << m) - 1);
  std::vector<int> cost(static_cast<size_t>(full) + 1, 0);
  std::vector<uint8_t> par(static_cast<size_t>(full) + 1, 0);
  for (uint32_t s = 1; s <= full; ++s) {
    int v = std::countr_zero(s);
    uint32_t rest = s & (s - 1);
    auto b = boundary(g, d, coord[static_cast<size_t>(v)]);
    int best = cost[rest] + b.dist;
    uint8_t best_par = par[rest] ^ static_cast<uint8_t>(b.crossing);
    for (uint32_t bits = rest; bits; bits &= bits - 1) {
      int u = std::countr_zero(bits);
      uint32_t sub = rest & ~(uint32_t{1} << u);
      int c = cost[sub] + manhattan(coord[static_cast<size_t>(v)], coord[static_cast<size_t>(u)]);
      if (c < best) {
        best = c;
        best_par = par[sub];
      }
    }
    cost[s] = best;
    par[s] = best_par;
  }
  out.weight = cost[full];
  out.crosses = par[full];
  return out;
}

std::vector<int> decode_correction(const SurfaceLayout::MatchGraph& g, int d,
                                   const std::vector<int>& defects) {
  // Reconstructs one minimum matching with the same tie-break rule as
  // decode_defects, then lays L-shaped paths.
  int m = static_cast<int>(defects.size());
  std::vector<std::pair<int, int>> coord(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i)
    coord[static_cast<size_t>(i)] = g.check_coord[static_cast<size_t>(defects[static_cast<size_t>(i)])];

  // Coordinate -> qubit maps for path construction.
  bool z_graph = g.cols == d - 1;
  std::unordered_map<int64_t, int> site_to_qubit;
  {
    int side = 2 * d - 1, idx = 0;
    for (int r = 0; r < side; ++r)
      for (int c = 0; c < side; ++c)
        if ((r + c) % 2 == 0) site_to_qubit[static_cast<int64_t>(r) * 64 + c] = idx++;
  }
  auto site_qubit = [&](int r, int c) { return site_to_qubit.at(static_cast<int64_t>(r) * 64 + c); };

  // Walk between two check sites (or to a boundary), toggling data qubits.
  std::vector<uint8_t> pattern;
  pattern.assign(g.qubit_checks.size(), 0);
  auto toggle_between = [&](std::pair<int, int> a, std::pair<int, int> bsite) {
    // Both are graph coords; step one axis then the other; the data qubit
    // between two adjacent checks is the midpoint site.
    auto to_site = [&](std::pair<int, int> gc) {
      return z_graph ? std::pair{2 * gc.first, 2 * gc.second + 1}
                     : std::pair{2 * gc.first + 1, 2 * gc.second};
    };
    auto sa = to_site(a), sb = to_site(bsite);
    auto cur = sa;
    while (cur.first != sb.first) {
      int step = cur.first < sb.first ? 1 : -1;
      pattern[static_cast<size_t>(site_qubit(cur.first + step, cur.second))] ^= 1;
      cur.first += 2 * step;
    }
    while (cur.second != sb.second) {
      int step = cur.second < sb.second ? 1 : -1;
      pattern[static_cast<size_t>(site_qubit(cur.first, cur.second + step))] ^= 1;
      cur.second += 2 * step;
    }
  };
  auto toggle_to_boundary = [&](std::pair<int, int> a) {
    auto b = boundary(g, d, a);
    int axis = z_graph ? a.second : a.first;
    int target = b.crossing ? -1 : d - 1;  // virtual node past the edge
    // Step along the boundary axis.
    std::pair<int, int> cur = a;
    int steps = std::abs(target - axis);
    for (int i = 0; i < steps; ++i) {
      int stepdir = target > axis ? 1 : -1;
      auto to_site = [&](std::pair<int, int> gc) {
        return z_graph ? std::pair{2 * gc.first, 2 * gc.second + 1}
                       : std::pair{2 * gc.first + 1, 2 * gc.second};
      };
      auto s = to_site(cur);
      if (z_graph) {
        pattern[static_cast<size_t>(site_qubit(s.first, s.second + stepdir))] ^= 1;
        cur.second += stepdir;
      } else {
        pattern[static_cast<size_t>(site_qubit(s.first + stepdir, s.second))] ^= 1;
        cur.first += stepdir;
      }
    }
  };

  // Recompute the DP to extract the actual matching choices.
  if (m > kExactDefectCap) {
    for (int i = 0; i < m; ++i) toggle_to_boundary(coord[static_cast<size_t>(i)]);
  } else if (m > 0) {
    uint32_t full = (uint32_t{1} << m) - 1;
    std::vector<int> cost(static_cast<size_t>(full) + 1, 0);
    std::vector<int> choice(static_cast<size_t>(full) + 1, -1);  // -1 boundary, else u
    for (uint32_t s = 1; s <= full; ++s) {
      int v = std::countr_zero(s);
      uint32_t rest = s & (s - 1);
      auto b = boundary(g, d, coord[static_cast<size_t>(v)]);
      cost[s] = cost[rest] + b.dist;
      choice[s] = -1;
      for (uint32_t bits = rest; bits; bits &= bits - 1) {
        int u = std::countr_zero(bits);
        uint32_t sub = rest & ~(uint32_t{1} << u);
        int c = cost[sub] + manhattan(coord[static_cast<size_t>(v)], coord[static_cast<size_t>(u)]);
        if (c < cost[s]) {
          cost[s] = c;
          choice[s] = u;
        }
      }
    }
    uint32_t s = full;
    while (s) {
      int v = std::countr_zero(s);
      if (choice[s] < 0) {
        toggle_to_boundary(coord[static_cast<size_t>(v)]);
        s &= s - 1;
      } else {
        int u = choice[s];
        toggle_between(coord[static_cast<size_t>(v)], coord[static_cast<size_t>(u)]);
        s &= ~(uint32_t{1} << v);
        s &= ~(uint32_t{1} << u);
      }
    }
  }

  std::vector<int> out;
  for (size_t q = 0; q < pattern.size(); ++q)
    if (pattern[q]) out.push_back(static_cast<int>(q));
  return out;
}

namespace {

struct ShotOutcome {
  bool failed = false;
  bool approx = false;
};

ShotOutcome run_shot(const SurfaceLayout& lay, double p, Basis basis, uint64_t seed,
                     uint64_t shot) {
  CounterRng rng(seed, shot);
  const auto& g = basis == Basis::Z ? lay.z_graph : lay.x_graph;
  int nchecks = static_cast<int>(g.check_coord.size());
  std::vector<uint8_t> defect_parity(static_cast<size_t>(nchecks), 0);
  bool logical_parity = false;
  for (int q = 0; q < lay.n; ++q) {
    double u = rng.next_double();
    if (u >= p) continue;
    uint32_t kind = rng.next_below(3);  // 0 = X, 1 = Y, 2 = Z
    bool x_part = kind != 2, z_part = kind != 0;
    bool active = basis == Basis::Z ? x_part : z_part;
    if (!active) continue;
    for (int ck : g.qubit_checks[static_cast<size_t>(q)]) defect_parity[static_cast<size_t>(ck)] ^= 1;
    logical_parity ^= g.on_logical[static_cast<size_t>(q)];
  }
  std::vector<int> defects;
  for (int ck = 0; ck < nchecks; ++ck)
    if (defect_parity[static_cast<size_t>(ck)]) defects.push_back(ck);
  DecodeOutcome dec = decode_defects(g, lay.d, defects);
  return ShotOutcome{logical_parity != dec.crosses, dec.approximate};
}

}  // namespace

std::pair<double, double> likelihood_interval(uint64_t failures, uint64_t shots) {
  if (shots == 0) throw DomainError("likelihood interval requires shots >= 1");
  const double f = static_cast<double>(failures), s = static_cast<double>(shots);
  const double phat = f / s;
  auto loglik = [&](double q) {
    double v = 0.0;
    if (f > 0) v += f * std::log(q);
    if (f < s) v += (s - f) * std::log1p(-q);
    return v;
  };
  const double target = loglik(phat) - std::log(1000.0);
  // loglik rises towards phat on the left and falls past it on the right.
  auto bisect = [&](double lo, double hi, bool rising_side) {
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      if ((loglik(mid) >= target) == rising_side)
        hi = mid;
      else
        lo = mid;
    }
    return 0.5 * (lo + hi);
  };
  double lo = failures == 0 ? 0.0 : bisect(0.0, phat, true);
  double hi = failures == shots ? 1.0 : bisect(phat, 1.0, false);
  return {lo, hi};
}

McResult mc_logical_error(int d, double p, Basis basis, uint64_t shots, uint64_t seed,
                          int threads) {
  if (shots < 1) throw DomainError("mc_logical_error requires shots >= 1");
  if (p < 0.0 || p > 1.0) throw DomainError("physical error rate out of range");
  SurfaceLayout lay = build_layout(d);

  int nt = std::max(1, threads);
  std::vector<uint64_t> fail_acc(static_cast<size_t>(nt), 0);
  std::vector<uint64_t> approx_acc(static_cast<size_t>(nt), 0);
  auto worker = [&](int t) {
    uint64_t f = 0, a = 0;
    for (uint64_t shot = static_cast<uint64_t>(t); shot < shots; shot += static_cast<uint64_t>(nt)) {
      ShotOutcome o = run_shot(lay, p, basis, seed, shot);
      f += o.failed;
      a += o.approx;
    }
    fail_acc[static_cast<size_t>(t)] = f;
    approx_acc[static_cast<size_t>(t)] = a;
  };
  if (nt == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }

  McResult res;
  res.shots = shots;
  res.seed = seed;
  for (int t = 0; t < nt; ++t) {
    res.failures += fail_acc[static_cast<size_t>(t)];
    res.approx_shots += approx_acc[static_cast<size_t>(t)];
  }
  res.p_hat = static_cast<double>(res.failures) / static_cast<double>(shots);
  auto [lo, hi] = likelihood_interval(res.failures, shots);
  res.interval_lo = lo;
  res.interval_hi = hi;
  return res;
}

std::pair<double, double> exhaustive_logical_error(int d, double p, int max_weight,
                                                   Basis basis) {
  if (max_weight < 0) throw DomainError("max_weight must be >= 0");
  SurfaceLayout lay = build_layout(d);
  const auto& g = basis == Basis::Z ? lay.z_graph : lay.x_graph;
  const int n = lay.n;

  double work = 0.0;
  for (int w = 0; w <= max_weight; ++w)
    work += static_cast<double>(binomial(n, w)) * std::pow(3.0, w);
  if (work > 1e8) throw CapacityError("exhaustive enumeration exceeds the 1e8 pattern cap");

  // Decoding depends only on the active component; memoize by its bitmask.
  std::unordered_map<uint64_t, bool> memo;
  auto fails = [&](uint64_t active_mask) {
    auto it = memo.find(active_mask);
    if (it != memo.end()) return it->second;
    std::vector<uint8_t> defect_parity(g.check_coord.size(), 0);
    bool logical_parity = false;
    for (int q = 0; q < n; ++q) {
      if (!((active_mask >> q) & 1)) continue;
      for (int ck : g.qubit_checks[static_cast<size_t>(q)])
        defect_parity[static_cast<size_t>(ck)] ^= 1;
      logical_parity ^= g.on_logical[static_cast<size_t>(q)];
    }
    std::vector<int> defects;
    for (size_t ck = 0; ck < defect_parity.size(); ++ck)
      if (defect_parity[ck]) defects.push_back(static_cast<int>(ck));
    bool failed = logical_parity != decode_defects(g, lay.d, defects).crosses;
    memo.emplace(active_mask, failed);
    return failed;
  };

  double p_l = 0.0;
  std::vector<int> support;
  // Enumerates supports of the given weight, then Pauli assignments.
  std::function<void(int, int)> rec = [&](int start, int remaining) {
    if (remaining == 0) {
      int w = static_cast<int>(support.size());
      double base = std::pow(p / 3.0, w) * std::pow(1.0 - p, n - w);
      // Each qubit takes X, Y or Z; iterate in base 3.
      std::vector<int> assign(static_cast<size_t>(w), 0);
      while (true) {
        uint64_t active = 0;
        for (int i = 0; i < w; ++i) {
          int kind = assign[static_cast<size_t>(i)];  // 0 = X, 1 = Y, 2 = Z
          bool x_part = kind != 2, z_part = kind != 0;
          bool is_active = basis == Basis::Z ? x_part : z_part;
          if (is_active) active |= uint64_t{1} << support[static_cast<size_t>(i)];
        }
        if (fails(active)) p_l += base;
        int pos = 0;
        while (pos < w && assign[static_cast<size_t>(pos)] == 2) assign[static_cast<size_t>(pos++)] = 0;
        if (pos == w) break;
        ++assign[static_cast<size_t>(pos)];
      }
      return;
    }
    for (int q = start; q <= n - remaining; ++q) {
      support.push_back(q);
      rec(q + 1, remaining - 1);
      support.pop_back();
    }
  };
  for (int w = 0; w <= max_weight; ++w) rec(0, w);

  double covered = 0.0;
  for (int w = 0; w <= max_weight; ++w)
    covered += static_cast<double>(binomial(n, w)) * std::pow(p, w) * std::pow(1.0 - p, n - w);
  return {p_l, 1.0 - covered};
}

uint64_t a_d_count(int d) {
  if (d < 3 || d % 2 == 0) throw DomainError("a_d_count requires odd d >= 3");
  return static_cast<uint64_t>(5 * d - 4) * binomial(d, (d + 1) / 2);
}

}  // namespace hvec
