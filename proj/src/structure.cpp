#include <algorithm>
#include <sstream>
#include <vector>

#include "ergolab/kernel/ops.hpp"
#include "ergolab/kernel/structure.hpp"

namespace ergolab::kernel {
namespace {

std::vector<std::vector<int>> adjacency(const RateMatrix& gen) {
  const int n = gen.size();
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && gen.rate(i, j) > 0.0) adj[i].push_back(j);
  return adj;
}

// Iterative Tarjan; explicit stack frames keep large graphs off the call
// stack.
std::vector<std::vector<int>> tarjan(const std::vector<std::vector<int>>& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> index(n, -1), lowlink(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  std::vector<std::vector<int>> components;
  int next_index = 0;

  struct Frame {
    int v;
    std::size_t child;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = lowlink[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.child < adj[f.v].size()) {
        const int w = adj[f.v][f.child++];
        if (index[w] == -1) {
          index[w] = lowlink[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          lowlink[f.v] = std::min(lowlink[f.v], index[w]);
        }
      } else {
        if (lowlink[f.v] == index[f.v]) {
          std::vector<int> comp;
          int w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp.push_back(w);
          } while (w != f.v);
          std::sort(comp.begin(), comp.end());
          components.push_back(std::move(comp));
        }
        const int v = f.v;
        frames.pop_back();
        if (!frames.empty()) lowlink[frames.back().v] = std::min(lowlink[frames.back().v], lowlink[v]);
      }
    }
  }
  std::sort(components.begin(), components.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return components;
}

std::vector<bool> mask_of(const std::vector<int>& states, int n) {
  std::vector<bool> m(n, false);
  for (int s : states) m[s] = true;
  return m;
}

// Running intersection of the super-level sets {x : (R^k 1_C)(x) >= 1 - tol},
// stopped when stable; the fixed point is reached in at most n rounds.
std::pair<std::vector<int>, int> absorb_iterate(const StochasticKernel& r,
                                                const std::vector<bool>& target) {
  const int n = r.size();
  Vec m(n);
  for (int i = 0; i < n; ++i) m(i) = target[i] ? 1.0 : 0.0;
  std::vector<bool> b = target;
  int rounds = 0;
  for (int it = 0; it < n; ++it) {
    m = r.p() * m;
    std::vector<bool> next(n, false);
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      next[i] = b[i] && m(i) >= 1.0 - tol::absorbing_mass;
      if (next[i] != b[i]) changed = true;
    }
    b.swap(next);
    ++rounds;
    if (!changed) break;
  }
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (b[i]) out.push_back(i);
  return {out, rounds};
}

}  // namespace

std::vector<std::vector<int>> strongly_connected_components(const RateMatrix& gen) {
  return tarjan(adjacency(gen));
}

std::vector<std::vector<int>> closed_classes(const RateMatrix& gen) {
  const auto comps = strongly_connected_components(gen);
  std::vector<std::vector<int>> closed;
  for (const auto& comp : comps) {
    const auto in_comp = mask_of(comp, gen.size());
    bool leaks = false;
    for (int u : comp) {
      for (int v = 0; v < gen.size() && !leaks; ++v) {
        if (u != v && !in_comp[v] && gen.rate(u, v) > 0.0) leaks = true;
      }
      if (leaks) break;
    }
    if (!leaks) closed.push_back(comp);
  }
  return closed;
}

std::vector<int> reachable_from(const RateMatrix& gen, int x) {
  const int n = gen.size();
  if (x < 0 || x >= n) throw std::domain_error("state index out of range");
  std::vector<bool> seen(n, false);
  std::vector<int> queue{x};
  seen[x] = true;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int u = queue[head];
    for (int v = 0; v < n; ++v) {
      if (!seen[v] && u != v && gen.rate(u, v) > 0.0) {
        seen[v] = true;
        queue.push_back(v);
      }
    }
  }
  std::sort(queue.begin(), queue.end());
  return queue;
}

bool psi_irreducible(const RateMatrix& gen, const DiscreteMeasure& psi) {
  if (psi.size() != gen.size()) throw std::domain_error("psi/generator size mismatch");
  const auto targets = psi.support();
  if (targets.empty()) throw std::domain_error("psi must not be the zero measure");
  for (int x = 0; x < gen.size(); ++x) {
    const auto reach = reachable_from(gen, x);
    const auto reach_mask = mask_of(reach, gen.size());
    for (int y : targets) {
      if (!reach_mask[y]) return false;
    }
  }
  return true;
}

DominationCertificate domination_certificate(const RateMatrix& gen, const DiscreteMeasure& psi,
                                             double alpha, Exec exec) {
  if (psi.size() != gen.size()) throw std::domain_error("psi/generator size mismatch");
  const auto targets = psi.support();
  if (targets.empty()) throw std::domain_error("psi must not be the zero measure");

  DominationCertificate cert;
  cert.alpha = alpha;
  const StochasticKernel r = resolvent(gen, alpha, exec);
  cert.holds = true;
  for (int x = 0; x < gen.size() && cert.holds; ++x) {
    const double row_max = r.p().row(x).maxCoeff();
    for (int y : targets) {
      if (r(x, y) <= tol::support_eps * row_max) {
        cert.holds = false;
        cert.witness = {x, y};
        break;
      }
    }
  }
  if (cert.holds) {
    bool consequence = true;
    for (const auto& mu : invariant_measures(gen)) {
      const auto supp_mask = mask_of(mu.support(), gen.size());
      for (int y : targets) {
        if (!supp_mask[y]) {
          consequence = false;
          break;
        }
      }
      if (!consequence) break;
    }
    cert.support_consequence = consequence;
  }
  return cert;
}

UniquenessReport uniqueness_verdict(const RateMatrix& gen, const DiscreteMeasure& psi, double alpha,
                                    Exec exec) {
  UniquenessReport report;
  report.measures = invariant_measures(gen);
  report.invariant_dim = static_cast<int>(report.measures.size());
  report.irreducible = psi_irreducible(gen, psi);
  report.domination = domination_certificate(gen, psi, alpha, exec);
  if (report.invariant_dim == 1) {
    report.verdict = Verdict::unique;
  } else {
    // A conservative finite generator always carries at least one invariant
    // probability; dim == 0 cannot happen once invariant_measures succeeds.
    report.verdict = Verdict::multiple;
  }
  return report;
}

AbsorbingDecomposition absorbing_decomposition(const RateMatrix& gen, const DiscreteMeasure& mu_plus,
                                               const DiscreteMeasure& mu_minus, double alpha,
                                               Exec exec) {
  const int n = gen.size();
  if (mu_plus.size() != n || mu_minus.size() != n)
    throw std::domain_error("measure/generator size mismatch");
  for (const auto* mu : {&mu_plus, &mu_minus}) {
    if (!mu->normalized()) throw std::domain_error("absorbing decomposition needs probability measures");
    const Vec resid = gen.rates().transpose() * mu->weights();
    if (resid.cwiseAbs().maxCoeff() > 1e-8) {
      throw std::domain_error("absorbing decomposition needs invariant measures");
    }
  }
  const auto supp_plus = mu_plus.support();
  const auto supp_minus_mask = mask_of(mu_minus.support(), n);
  for (int s : supp_plus) {
    if (supp_minus_mask[s]) {
      std::ostringstream os;
      os << "measure supports overlap at state " << s;
      throw std::domain_error(os.str());
    }
  }

  const StochasticKernel r = resolvent(gen, alpha, exec);
  const auto c_mask = mask_of(supp_plus, n);
  std::vector<bool> c_complement(n);
  for (int i = 0; i < n; ++i) c_complement[i] = !c_mask[i];

  AbsorbingDecomposition dec;
  auto [bp, rp] = absorb_iterate(r, c_mask);
  auto [bm, rm] = absorb_iterate(r, c_complement);
  dec.b_plus = std::move(bp);
  dec.b_minus = std::move(bm);
  dec.iterations_plus = rp;
  dec.iterations_minus = rm;

  const auto bp_mask = mask_of(dec.b_plus, n);
  const auto bm_mask = mask_of(dec.b_minus, n);
  for (int i = 0; i < n; ++i) {
    if (bp_mask[i] && bm_mask[i]) throw numerical_error("absorbing sets overlap after iteration");
    if (!bp_mask[i] && !bm_mask[i]) dec.residual.push_back(i);
  }

  // Invariants promised to callers: each measure gives full mass to its set
  // and the resolvent cannot leave either set.
  if (mu_plus.mass_on(dec.b_plus) < 1.0 - 1e-8 || mu_minus.mass_on(dec.b_minus) < 1.0 - 1e-8)
    throw numerical_error("absorbing sets fail to carry their measures");
  for (const auto& [mask, name] :
       {std::pair{&bp_mask, "plus"}, std::pair{&bm_mask, "minus"}}) {
    for (int x = 0; x < n; ++x) {
      if (!(*mask)[x]) continue;
      double stay = 0.0;
      for (int y = 0; y < n; ++y)
        if ((*mask)[y]) stay += r(x, y);
      if (stay < 1.0 - 1e-7) {
        std::ostringstream os;
        os << "absorbing set (" << name << ") leaks mass from state " << x;
        throw numerical_error(os.str());
      }
    }
  }
  return dec;
}

}  // namespace ergolab::kernel
