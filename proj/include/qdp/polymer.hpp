#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qdp/params.hpp"
#include "qdp/rational.hpp"
#include "qdp/vertex_set.hpp"

namespace qdp {

enum class Side : unsigned char { even = 0, odd = 1 };

inline Side side_of(u64 v) {
  return std::popcount(v) % 2 == 0 ? Side::even : Side::odd;
}

// Defect side vector D in {E,O}^k. Models with m and k-m even coordinates are
// isomorphic, so m_canonical() identifies the truly distinct models.
struct DefectVector {
  std::vector<Side> sides;

  static DefectVector all_even(int k) {
    return {std::vector<Side>(k, Side::even)};
  }
  // first m coordinates even, the rest odd
  static DefectVector with_even_count(int k, int m) {
    DefectVector dv;
    dv.sides.assign(k, Side::odd);
    for (int i = 0; i < m; ++i) dv.sides[i] = Side::even;
    return dv;
  }
  int k() const { return (int)sides.size(); }
  int m_even() const {
    int m = 0;
    for (Side s : sides) m += s == Side::even;
    return m;
  }
  int m_canonical() const { return std::min(m_even(), k() - m_even()); }
  std::string to_string() const {
    std::string s;
    for (Side x : sides) s += (x == Side::even ? 'E' : 'O');
    return s;
  }
  friend bool operator==(const DefectVector&, const DefectVector&) = default;
};

// Polymer gamma = (A_1,...,A_k): component vertex sets as 64-bit masks over
// the vertices of Q_d (d <= 6). Weight functions accept any shape; validity
// (sides, closure bound, H_gamma connectivity) is what enumeration enforces.
struct Polymer {
  int d = 0;
  DefectVector defects;
  std::vector<u64> comps;

  int k() const { return defects.k(); }
  u64 support() const {
    u64 s = 0;
    for (u64 c : comps) s |= c;
    return s;
  }
  int size() const {  // ||gamma||
    int s = 0;
    for (u64 c : comps) s += std::popcount(c);
    return s;
  }
  std::vector<int> span() const {
    std::vector<int> sp;
    for (int i = 0; i < k(); ++i)
      if (comps[i]) sp.push_back(i);
    return sp;
  }
  friend bool operator==(const Polymer&, const Polymer&) = default;
  std::string to_json() const;
};

// Neighborhood of a vertex mask in Q_d, as a mask.
u64 qd_neighborhood_mask(int d, u64 mask);
// Closure [A] of a mask (largest set with the same neighborhood).
u64 qd_closure_mask(int d, u64 mask);

int polymer_nbhd_size(const Polymer& g);  // ||N(gamma)|| = sum |N(A_i)|
bool polymer_H_connected(const Polymer& g);
bool polymer_is_valid(const Polymer& g);  // sides + closure bound + H

// All valid polymers with ||gamma|| <= max_size; with `root` set, exactly
// those whose support minimum equals root. Output canonically sorted.
std::vector<Polymer> enumerate_polymers(int d, const DefectVector& defects,
                                        int max_size,
                                        std::optional<u64> root = {});

// omega(gamma): two exact routes plus closed forms and an upper bound.
Rational polymer_weight_bruteforce(const Polymer& g, const ModelParams& mp);
Rational polymer_weight_factorized(const Polymer& g, const ModelParams& mp);

enum class Scenario { I, II, III, IV };
// Closed forms for four elementary polymer shapes. Scenario III
// uses mp.k; the others are k-independent shapes.
Rational closed_form_weight(Scenario sc, const ModelParams& mp);

bool incompatible(const Polymer& a, const Polymer& b);

// lambda^{||gamma||} * alpha_k^{||N(gamma)||/k}, numeric.
double weight_upper_bound(const Polymer& g, const ModelParams& mp);
// Exact form of the same inequality: omega^k <= lambda^{k||gamma||} alpha_k^{||N||}.
bool weight_upper_bound_holds_exact(const Polymer& g, const ModelParams& mp);

// alpha_ell and delta_ell as exact rationals.
Rational alpha_int(int ell, const Rational& lambda, const Rational& p);
Rational delta_int(int ell, const Rational& lambda, const Rational& p);

}  // namespace qdp
