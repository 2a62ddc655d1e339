#pragma once
#include <optional>
#include <string>
#include <vector>

#include "fraisse/morphism.hpp"

namespace fraisse {

// a constructed tree together with its map onto the input tree
struct Built {
  GraphPtr tree;
  Morphism map;
};

Built double_split(const GraphPtr& t);
Built multiply_branches(const GraphPtr& t, int n);
// colors[v][i] colours children(v)[i]; an empty entry means a single colour
Built colored_add_branches(const GraphPtr& t, const std::vector<std::vector<int>>& colors, int n);

// materialization cap; FRAISSE_CAP overrides the default of 10^6 vertices
long long materialization_cap();
void set_materialization_cap(long long cap);
// sum_{i=0}^{3^{m-1}} (2^m)^i, saturating
long double projected_stage_size(int m);

GraphPtr fraisse_stage(int m);
Morphism fraisse_map(int m);             // f_m : A_{m+1} -> A_m
Morphism fraisse_bond(int n, int m);     // f^n_m : A_n -> A_m
Built fraisse_double(int m);             // d_m : d(A_m) -> A_m
Built fraisse_multiply(int m);           // u_m : A_{m+1} -> d(A_m)

struct Thresholds {
  std::vector<int> t, s;  // t_0..t_k, s_0..s_k
};
Thresholds internchar_thresholds(int m, int n);

struct InternCharReport {
  bool ok = false;
  Thresholds th;
  std::string failure;
};
InternCharReport verify_internchar(const Morphism& h, int m, int n);

struct Extension {
  int m = 0, n = 0;
  int beta_s = 0, beta_t = 0;  // largest s-t and t-s gaps over the branches
  long long gamma = 0;
  Morphism g1, g2;  // R -> S, A_n -> R
  Morphism g;       // A_n -> S with phi o g == f^n_m
};
// minimal admissible n for phi without building anything
int extension_degree(const Morphism& phi);
Extension extend_over(const Morphism& phi);

// for light f: B -> A and double splits dB, dA, the map d(B) -> d(A) that
// sends each subdivided edge of B onto the subdivided image edge
Morphism double_split_lift(const Morphism& f, const Morphism& dB, const Morphism& dA);

// A_{nk} for n <= k, with f^{n(k+1)}_{nk} and, for n < k, f^{(n+1)k}_{nk}
GraphPtr grid_tree(int n, int k);
Morphism grid_horizontal(int n, int k);  // A_{n(k+1)} -> A_{nk}
Morphism grid_vertical(int n, int k);    // A_{(n+1)k} -> A_{nk}, needs n < k

}  // namespace fraisse
