#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qdp/polymer.hpp"

namespace qdp {

// Ursell function phi(H) = (1/|V|!) sum over connected spanning edge subsets
// of (-1)^{|S|}. Two independent implementations; the recursion is the
// cross-check oracle for |V| <= 5.
Rational ursell(int vertices, const std::vector<std::pair<int, int>>& edges);
Rational ursell_recursive(int vertices,
                          const std::vector<std::pair<int, int>>& edges);

// One aggregated cluster term: a multiset of pool polymers together with the
// number of ordered tuples it represents. phi and the weight product are
// ordering-invariant.
struct ClusterTerm {
  std::vector<int> polymer_ids;  // non-decreasing indices into the pool
  u64 ordered_count = 0;         // n! / prod(multiplicities!)
  Rational ursell_value;
  Rational weight_product;  // prod omega(gamma_i)
  int total_size = 0;
  u64 support = 0;
  u32 span_mask = 0;

  Rational weight() const { return ursell_value * weight_product; }
};

struct ClusterEnumOptions {
  int max_total_size = 2;
  bool size_exact = false;  // keep only ||Gamma|| == max_total_size
  std::optional<u32> span_exact_mask;    // keep span(Gamma) == this set
  std::optional<u64> support_contains;   // keep v in S(Gamma)
};

// Enumerates clusters as polymer multisets (each with its ordered
// multiplicity) over the full polymer pool of (d, defects).
void for_each_cluster_term(int d, const DefectVector& defects,
                           const ModelParams& mp,
                           const ClusterEnumOptions& opt,
                           const std::function<void(const ClusterTerm&)>& f);

// sum of ordered-cluster weights omega(Gamma) under the given filter
Rational cluster_weight_sum(int d, const DefectVector& defects,
                            const ModelParams& mp,
                            const ClusterEnumOptions& opt);

// Truncated cluster-expansion series sum_{||Gamma|| <= order} omega(Gamma).
Rational truncated_log_Xi_direct(const ModelParams& mp,
                                 const DefectVector& defects, int order);
// Same value through vertex-transitivity: 2^{d-1} (g(even root) + g(odd
// root)) with g(v) = sum_{Gamma: v in S(Gamma)} omega(Gamma)/|S(Gamma)|.
Rational truncated_log_Xi_symmetric(const ModelParams& mp,
                                    const DefectVector& defects, int order);

// A_same / A_diff: closed forms and (for d <= 4) exact enumeration.
struct ASameDiff {
  Rational a_same, a_diff;
};
ASameDiff a_same_a_diff_closed(const ModelParams& mp);
ASameDiff a_same_a_diff_enumerated(const ModelParams& mp);

// sum_{Gamma in C_D : span(Gamma) = S, ||Gamma|| <= order} omega(Gamma);
// defect_even_mask encodes D (bit i set -> side of coordinate i is even).
Rational span_weight_sum(const ModelParams& mp, u32 defect_even_mask,
                         u32 span_mask, int order);

// Truncated k-th central moment as a sum over span sequences covering [k]:
// 2^{-k} sum_{D subset [k]} sum over sequences (S_1..S_n), |S_i| >= 2,
// union = [k], n <= k, of (1/n!) prod omega_trunc(S_i; D).
Rational central_moment_truncated(const ModelParams& mp, int order);

// Coefficient extraction: f_i with slice_i(d) = 2^d f_i(d) alpha_1^{id},
// recovered by exact rational Lagrange interpolation on d in {4,5,...}.
// Returns, for i = 1..order-1, the coefficients of f_i in the monomial basis
// (constant first). Degree of f_i is 2i-2.
std::vector<std::vector<Rational>> coefficient_polynomials(
    const Rational& lambda, const Rational& p, int order);

// Tail-style diagnostic: sum_{||Gamma|| <= order} |omega(Gamma)|
// e^{||Gamma|| d^{-3/2}} / (2^d alpha_1^d).
double cluster_tail_diagnostic(const ModelParams& mp,
                               const DefectVector& defects, int order);

// JSON report {order, terms:[{size,count,weight_sum}], total}.
std::string cluster_report_json(const ModelParams& mp,
                                const DefectVector& defects, int order);

}  // namespace qdp
