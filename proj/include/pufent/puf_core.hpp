#pragma once

// Delay-PUF kernel: a PUF of size n with weights w answers challenge
// c in {-1,+1}^n with sign(c . w). Two PUFs with the same Chow parameters
// are the same function, and the group of coordinate permutations and sign
// flips acts on weights and Chow parameters alike, so every PUF has a unique
// canonical representative with sorted non-negative Chow parameters.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pufent/errors.hpp"

namespace pufent {

inline constexpr int kMaxN = 24;

/// Realization of the n delay differences.
using WeightVector = std::vector<double>;

/// Chow parameters: componentwise sum of the challenges mapped to +1.
using ChowVector = std::vector<std::int64_t>;

/// Canonical Chow parameters, p_1 >= ... >= p_n >= 0. Identifies a class.
using ClassKey = ChowVector;

/// Exact class sizes. 2^24 * 24! is about 1.04e31, well inside 128 bits.
__extension__ typedef unsigned __int128 OrbitCount;

std::string to_string(OrbitCount value);
double to_double(OrbitCount value);

/// Challenge c in {-1,+1}^n. Bit i of the word encodes c_{i+1}; a clear bit
/// is +1, a set bit is -1.
class Challenge {
 public:
  Challenge(int n, std::uint32_t bits);
  static Challenge from_signs(std::span<const int> signs);

  int size() const { return n_; }
  std::uint32_t bits() const { return bits_; }
  int operator[](int i) const { return ((bits_ >> i) & 1u) != 0 ? -1 : +1; }
  Challenge complement() const;

 private:
  int n_;
  std::uint32_t bits_;
};

/// Truth table of a PUF over all 2^n challenges, indexed by the challenge
/// word. A set bit means f(c) = +1.
class ResponseVector {
 public:
  explicit ResponseVector(int n);

  int size() const { return n_; }
  std::uint64_t num_challenges() const { return std::uint64_t{1} << n_; }

  bool bit(std::uint64_t challenge) const {
    return ((words_[challenge >> 6] >> (challenge & 63)) & 1u) != 0;
  }
  int value(std::uint64_t challenge) const { return bit(challenge) ? +1 : -1; }
  void set(std::uint64_t challenge, bool positive);

  /// f(-c) = -f(c) for every challenge.
  bool is_self_dual() const;

  std::span<const std::uint64_t> words() const { return words_; }

  friend bool operator==(const ResponseVector&, const ResponseVector&) = default;

 private:
  int n_;
  std::vector<std::uint64_t> words_;
};

/// Element (sigma, s) of S_n x {-1,+1}^n, stored 0-based. Acts on vectors by
/// (g . v)_i = s_i * v_{sigma(i)}.
class GroupElement {
 public:
  GroupElement(std::vector<int> sigma, std::vector<int> signs);
  static GroupElement identity(int n);

  int size() const { return static_cast<int>(sigma_.size()); }
  const std::vector<int>& sigma() const { return sigma_; }
  const std::vector<int>& signs() const { return signs_; }

  /// Product such that (a * b) . v == a . (b . v): the permutation is
  /// i -> b.sigma(a.sigma(i)) and the signs are a.s_i * b.s_{a.sigma(i)}.
  friend GroupElement operator*(const GroupElement& a, const GroupElement& b);
  friend bool operator==(const GroupElement&, const GroupElement&) = default;

 private:
  std::vector<int> sigma_;
  std::vector<int> signs_;
};

/// Throws std::invalid_argument unless 1 <= n <= kMaxN and every entry is
/// finite.
void validate_weights(std::span<const double> w);

/// sign(c . w), summing in index order. Throws ZeroDotProduct on an exact 0.
int eval(std::span<const double> w, const Challenge& c);

/// All 2^n responses, each evaluated directly.
ResponseVector response_vector(std::span<const double> w);

/// Chow parameters by a Gray-code walk over the half-space c_1 = +1.
ChowVector chow(std::span<const double> w);

/// Chow parameters by the defining sum over every challenge; the reference
/// path for chow().
ChowVector chow_naive(std::span<const double> w);

ChowVector chow_from_response(const ResponseVector& rv);

/// Absolute values sorted non-increasing.
WeightVector canonicalize_weights(std::span<const double> w);

WeightVector act(const GroupElement& g, std::span<const double> w);
ChowVector act_chow(const GroupElement& g, std::span<const std::int64_t> p);

bool is_canonical(std::span<const std::int64_t> p);

/// Canonical representative of the class of p: absolute values sorted
/// non-increasing.
ClassKey canonical_form(std::span<const std::int64_t> p);

/// Entries even for n >= 2 and |p_i| <= 2^(n-1).
bool satisfies_chow_invariants(std::span<const std::int64_t> p);

/// 2^n n! / (2^{m(0)} prod_k m(k)!) where m(k) counts entries equal to k.
OrbitCount orbit_size(std::span<const std::int64_t> key);

/// (2^(n-1), 0, ..., 0), the class of the 2n PUFs f(c) = +-c_i.
ClassKey dictator_key(int n);

/// Reusable Chow evaluator for hot loops; holds the half-space response bits.
/// Not thread-safe; use one per thread.
class ChowKernel {
 public:
  /// Writes p into `out` (size n). Returns false instead of throwing when a
  /// challenge has zero dot product.
  bool compute(std::span<const double> w, std::span<std::int64_t> out);

 private:
  std::vector<std::uint64_t> positive_;
};

}  // namespace pufent
