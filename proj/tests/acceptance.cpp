// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include "ncpr/homology.hpp"
#include "ncpr/scenario.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>

using namespace ncpr;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void criterion(int number, const std::string& label, double time_limit_s,
               const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    auto t0 = Clock::now();
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
        ok = false;
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (time_limit_s > 0 && secs > time_limit_s) {
        ok = false;
        detail += (detail.empty() ? "" : "; ") + std::string("over time budget");
    }
    if (!ok) ++failures;
    std::printf("CRITERION %2d: %s  (%.2fs)  %s%s%s\n", number, ok ? "PASS" : "FAIL", secs,
                label.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
}

Quiver jordan_quiver() {
    Quiver q;
    q.vertices = {"1"};
    q.arrows = {{"x", "1", "1", 0, 1, false}};
    return q;
}

Quiver genus_quiver(int g) {
    Quiver q;
    q.vertices = {"1"};
    for (int a = 1; a <= g; ++a)
        q.arrows.push_back({"x" + std::to_string(a), "1", "1", 0, 1, false});
    return q;
}

Quiver star_quiver() {
    Quiver q;
    q.vertices = {"1", "2"};
    q.arrows = {{"a", "1", "2", 0, 1, false}};
    return q;
}

struct Cot {
    CtxPtr ctx;
    DGAPresentation base;
    HamiltonianData ham;
};

Cot cotangent_of(const Quiver& base) {
    auto ctx = AlgebraContext::make(double_quiver(base));
    return Cot{ctx, presentation(ctx, cotangent_table(ctx)), cotangent_moment(ctx)};
}

} // namespace

int main() {
    std::vector<Quiver> bases = {jordan_quiver(), genus_quiver(2), star_quiver()};

    criterion(1, "bracket axioms for cotangent tables (jordan, genus-2, star)", 1.0,
              [&](std::string& detail) {
                  for (const Quiver& q : bases) {
                      Cot c = cotangent_of(q);
                      std::vector<NCElement> gens;
                      for (int a = 0; a < c.ctx->arrow_count(); ++a)
                          gens.push_back(c.ctx->generator(a));
                      for (const auto& a : gens)
                          for (const auto& b : gens)
                              for (const auto& cc : gens)
                                  if (!triple_bracket(c.base.table.value(), a, b, cc).is_zero()) {
                                      detail = "double Jacobi fails";
                                      return false;
                                  }
                      AxiomReport rep = verify_axioms(*c.base.table, 2);
                      if (!rep.passed) {
                          detail = rep.issues[0].check + " on " + rep.issues[0].witness;
                          return false;
                      }
                  }
                  return true;
              });

    criterion(2, "hamiltonian identity for moment elements (incl. localized variants)", 1.0,
              [&](std::string& detail) {
                  for (const Quiver& q : bases) {
                      Cot c = cotangent_of(q);
                      if (!check_hamiltonian(*c.base.table, c.ham).passed) {
                          detail = "cotangent moment fails";
                          return false;
                      }
                  }
                  for (auto names : {std::vector<std::string>{"x"},
                                     std::vector<std::string>{"x", "x*"}}) {
                      Quiver q = localize(double_quiver(jordan_quiver()), names);
                      auto ctx = AlgebraContext::make(q);
                      BracketTable tbl = cotangent_table(ctx);
                      NCElement delta =
                          graded_commutator(ctx->generator("x"), ctx->generator("x*"));
                      if (!check_hamiltonian(tbl, moment_from_total(ctx, delta)).passed) {
                          detail = "localized moment fails";
                          return false;
                      }
                  }
                  return true;
              });

    criterion(3, "BRST charge: membership, differential formulas, d^2 = 0", 5.0,
              [&](std::string& detail) {
                  for (const Quiver& q : bases) {
                      Cot c = cotangent_of(q);
                      DGAPresentation b = brst(c.base, c.ham);  // asserts {γ,−} = d
                      NCElement sq =
                          single_bracket(*b.table, b.charge->gamma, b.charge->gamma);
                      if (!sq.is_zero() && !commutator_membership(sq, *sq.weight())) {
                          detail = "charge membership fails";
                          return false;
                      }
                      // Explicit differential formulas on every generator.
                      NCElement eta_sum(b.ctx);
                      for (int et : b.eta) eta_sum += b.ctx->generator(et);
                      for (const auto& arr : b.ctx->quiver().arrows) {
                          int g = b.ctx->quiver().arrow_index(arr.name);
                          NCElement gen = b.ctx->generator(g);
                          NCElement expect(b.ctx);
                          bool is_theta = false, is_eta = false;
                          for (size_t v = 0; v < b.theta.size(); ++v) {
                              if (b.theta[v] == g) {
                                  is_theta = true;
                                  NCElement ei = b.ctx->generator(b.eta[v]);
                                  expect = b.ham->delta_i[v] - graded_commutator(ei, gen);
                              }
                              if (b.eta[v] == g) {
                                  is_eta = true;
                                  expect = -(gen * gen);
                              }
                          }
                          if (!is_theta && !is_eta)
                              expect = -graded_commutator(eta_sum, gen);
                          if (b.diff.of_arrow(g) != expect) {
                              detail = "differential formula fails on " + arr.name;
                              return false;
                          }
                      }
                      for (const Word& w : words_up_to_length(b.ctx, 4))
                          if (!b.diff.apply(b.diff.apply(NCElement(b.ctx, w))).is_zero()) {
                              detail = "d^2 != 0 on a word of length <= 4";
                              return false;
                          }
                  }
                  return true;
              });

    criterion(4, "shafarevich contraction dh + hd = length", 1.0, [&](std::string& detail) {
        for (int verts = 1; verts <= 2; ++verts) {
            ContractionReport rep = contraction_check(verts, 4);
            if (!rep.passed) {
                detail = "fails at |I| = " + std::to_string(verts);
                return false;
            }
        }
        return true;
    });

    criterion(5, "representation laws for the jordan BRST complex at n = 1, 2", 30.0,
              [&](std::string& detail) {
                  Cot c = cotangent_of(jordan_quiver());
                  DGAPresentation b = brst(c.base, c.ham);
                  for (int n : {1, 2}) {
                      CommutativeDGA dga = rep_algebra(b, DimensionVector::make({n}));
                      RepLawReport rep = verify_rep_laws(b, dga, 50);
                      if (!rep.passed) {
                          detail = "n=" + std::to_string(n) + ": " + rep.issues[0].check;
                          return false;
                      }
                  }
                  return true;
              });

    criterion(6, "gauge bracket sanity on Sym(gl_2)", 10.0, [&](std::string& detail) {
        Quiver q;
        q.vertices = {"1"};
        q = adjoin_loops(q, "t", 0, 1);
        auto ctx = AlgebraContext::make(q);
        DGAPresentation g = presentation(ctx, gauge_table(ctx));
        CommutativeDGA dga = rep_algebra(g, DimensionVector::make({2}));
        NCElement t = ctx->generator(0);
        if (!dga.bracket(dga.trace(t * t), dga.trace(t * t * t)).is_zero()) {
            detail = "{tr t^2, tr t^3} != 0";
            return false;
        }
        for (int r = 0; r < 2; ++r)
            for (int s = 0; s < 2; ++s)
                for (int u = 0; u < 2; ++u)
                    for (int v = 0; v < 2; ++v) {
                        CPoly lhs = dga.bracket(
                            CPoly::variable(dga.vars, dga.vars->find(0, r, s)),
                            CPoly::variable(dga.vars, dga.vars->find(0, u, v)));
                        CPoly rhs(dga.vars);
                        if (r == v)
                            rhs += CPoly::variable(dga.vars, dga.vars->find(0, u, s));
                        if (u == s)
                            rhs -= CPoly::variable(dga.vars, dga.vars->find(0, r, v));
                        if (lhs != rhs) {
                            detail = "structure constants disagree";
                            return false;
                        }
                    }
        return true;
    });

    criterion(7, "decomposition theorem (jordan n=1 w<=6, n=2 w<=4; genus-2 n=2 w<=3)", 600.0,
              [&](std::string& detail) {
                  Cot cj = cotangent_of(jordan_quiver());
                  DecompositionReport r1 =
                      verify_decomposition(cj.base, cj.ham, DimensionVector::make({1}), 6, 4);
                  DecompositionReport r2 =
                      verify_decomposition(cj.base, cj.ham, DimensionVector::make({2}), 4, 4);
                  Cot cg = cotangent_of(genus_quiver(2));
                  DecompositionReport r3 =
                      verify_decomposition(cg.base, cg.ham, DimensionVector::make({2}), 3, 4);
                  if (!r1.passed) detail = "jordan n=1";
                  if (!r2.passed) detail = "jordan n=2";
                  if (!r3.passed) detail = "genus-2 n=2";
                  return r1.passed && r2.passed && r3.passed;
              });

    criterion(8, "n=1 jordan closed form for H(K_1) and H(B_1)", 10.0,
              [&](std::string& detail) {
                  Cot c = cotangent_of(jordan_quiver());
                  DGAPresentation sh = shafarevich(c.base, c.ham);
                  DGAPresentation b = brst(c.base, c.ham);
                  DimensionVector nv = DimensionVector::make({1});
                  CommutativeDGA K = rep_algebra(sh, nv);
                  CommutativeDGA B = rep_algebra(b, nv);
                  LieCohomologyProfile lie = lie_cohomology(nv);
                  if (lie.dim != std::map<int, long>{{-1, 1}, {0, 1}}) {
                      detail = "gl_1 profile is not (1,1)";
                      return false;
                  }
                  for (int w = 0; w <= 6; ++w) {
                      std::map<int, long> hk = betti(weight_slice(K, w));
                      long d0 = hk.count(0) ? hk[0] : 0;
                      long d1 = hk.count(1) ? hk[1] : 0;
                      if (d0 != w + 1 || d1 != std::max(w - 1, 0)) {
                          detail = "H(K_1) closed form fails at w=" + std::to_string(w);
                          return false;
                      }
                      std::map<int, long> hb = betti(weight_slice(B, w));
                      for (int k = -1; k <= 1; ++k) {
                          long expect = 0;
                          for (const auto& [j, cdim] : lie.dim) {
                              long hk_dim = hk.count(k - j) ? hk[k - j] : 0;
                              expect += hk_dim * cdim;
                          }
                          long got = hb.count(k) ? hb[k] : 0;
                          if (got != expect) {
                              detail = "H(B_1) tensor form fails at w=" + std::to_string(w) +
                                       " k=" + std::to_string(k);
                              return false;
                          }
                      }
                  }
                  return true;
              });

    criterion(9, "phi/psi relations and splitting at n=2, w<=4", 600.0,
              [&](std::string& detail) {
                  Cot c = cotangent_of(jordan_quiver());
                  PhiPsiReport rep = phi_psi(c.base, c.ham, DimensionVector::make({2}), 4, 4);
                  if (!rep.passed) {
                      detail = rep.issues[0].check + ": " + rep.issues[0].witness;
                      return false;
                  }
                  bool any = false;
                  for (const auto& sp : rep.splits) {
                      any = true;
                      if (sp.dim_h != sp.ker_phi + sp.im_psi) {
                          detail = "splitting fails";
                          return false;
                      }
                  }
                  return any;
              });

    criterion(10, "diagonal restriction: identity at n=1, betti agreement at n=2 w<=4", 600.0,
              [&](std::string& detail) {
                  Cot c = cotangent_of(jordan_quiver());
                  DiagonalReport r1 = diagonal_check(c.base, c.ham, 1, 4, 4);
                  if (!r1.agrees) {
                      detail = "n=1 map is not an isomorphism";
                      return false;
                  }
                  DiagonalReport r2 = diagonal_check(c.base, c.ham, 2, 4, 4);
                  detail = r2.agrees ? "FINDING: conjecture confirmed at n=2, w<=4"
                                     : "FINDING: betti tables disagree (reportable finding)";
                  return true;
              });

    std::printf("%d of 10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
