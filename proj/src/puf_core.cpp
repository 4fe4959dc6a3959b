#include "pufent/puf_core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace pufent {

namespace {

// Direct dot product in index order. Every rounding of the fast paths is
// measured against this sum.
double direct_dot(std::span<const double> w, std::uint64_t challenge) {
  double dot = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    dot += ((challenge >> i) & 1u) != 0 ? -w[i] : w[i];
  }
  return dot;
}

// Bit j of the half-space index set, for j < 6, within one 64-bit word.
constexpr std::uint64_t kLowBitMasks[6] = {
    0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
    0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull,
};

void check_n(int n) {
  if (n < 1 || n > kMaxN) {
    throw std::invalid_argument("PUF size must be in [1, " + std::to_string(kMaxN) +
                                "], got " + std::to_string(n));
  }
}

}  // namespace

std::string to_string(OrbitCount value) {
  if (value == 0) return "0";
  std::string digits;
  while (value != 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

double to_double(OrbitCount value) { return static_cast<double>(value); }

// ---------------------------------------------------------------------------
// Challenge / ResponseVector / GroupElement

Challenge::Challenge(int n, std::uint32_t bits) : n_(n), bits_(bits) {
  check_n(n);
  if (n < 32 && (bits >> n) != 0) {
    throw std::invalid_argument("challenge word has bits beyond n");
  }
}

Challenge Challenge::from_signs(std::span<const int> signs) {
  std::uint32_t bits = 0;
  for (std::size_t i = 0; i < signs.size(); ++i) {
    if (signs[i] == -1) {
      bits |= std::uint32_t{1} << i;
    } else if (signs[i] != 1) {
      throw std::invalid_argument("challenge entries must be +1 or -1");
    }
  }
  return Challenge(static_cast<int>(signs.size()), bits);
}

Challenge Challenge::complement() const {
  const std::uint32_t mask = (std::uint32_t{1} << n_) - 1;
  return Challenge(n_, ~bits_ & mask);
}

ResponseVector::ResponseVector(int n) : n_(n) {
  check_n(n);
  words_.assign(std::max<std::uint64_t>(1, num_challenges() / 64), 0);
}

void ResponseVector::set(std::uint64_t challenge, bool positive) {
  const std::uint64_t mask = std::uint64_t{1} << (challenge & 63);
  if (positive) {
    words_[challenge >> 6] |= mask;
  } else {
    words_[challenge >> 6] &= ~mask;
  }
}

bool ResponseVector::is_self_dual() const {
  const std::uint64_t all = num_challenges() - 1;
  for (std::uint64_t c = 0; c <= all / 2; ++c) {
    if (bit(c) == bit(all ^ c)) return false;
  }
  return true;
}

GroupElement::GroupElement(std::vector<int> sigma, std::vector<int> signs)
    : sigma_(std::move(sigma)), signs_(std::move(signs)) {
  if (sigma_.size() != signs_.size()) {
    throw std::invalid_argument("permutation and sign vector differ in length");
  }
  std::vector<bool> seen(sigma_.size(), false);
  for (int image : sigma_) {
    if (image < 0 || image >= size() || seen[image]) {
      throw std::invalid_argument("sigma is not a permutation");
    }
    seen[image] = true;
  }
  for (int s : signs_) {
    if (s != 1 && s != -1) throw std::invalid_argument("signs must be +1 or -1");
  }
}

GroupElement GroupElement::identity(int n) {
  std::vector<int> sigma(n);
  for (int i = 0; i < n; ++i) sigma[i] = i;
  return GroupElement(std::move(sigma), std::vector<int>(n, 1));
}

GroupElement operator*(const GroupElement& a, const GroupElement& b) {
  if (a.size() != b.size()) throw std::invalid_argument("group elements differ in size");
  const int n = a.size();
  std::vector<int> sigma(n);
  std::vector<int> signs(n);
  for (int i = 0; i < n; ++i) {
    sigma[i] = b.sigma_[a.sigma_[i]];
    signs[i] = a.signs_[i] * b.signs_[a.sigma_[i]];
  }
  return GroupElement(std::move(sigma), std::move(signs));
}

// ---------------------------------------------------------------------------
// Evaluation and Chow parameters

void validate_weights(std::span<const double> w) {
  check_n(static_cast<int>(w.size()));
  for (double x : w) {
    if (!std::isfinite(x)) throw std::invalid_argument("weights must be finite");
  }
}

int eval(std::span<const double> w, const Challenge& c) {
  if (static_cast<int>(w.size()) != c.size()) {
    throw std::invalid_argument("challenge and weight sizes differ");
  }
  validate_weights(w);
  const double dot = direct_dot(w, c.bits());
  if (dot == 0.0) throw ZeroDotProduct();
  return dot > 0.0 ? +1 : -1;
}

ResponseVector response_vector(std::span<const double> w) {
  validate_weights(w);
  const int n = static_cast<int>(w.size());
  ResponseVector rv(n);
  for (std::uint64_t c = 0; c < rv.num_challenges(); ++c) {
    const double dot = direct_dot(w, c);
    if (dot == 0.0) throw ZeroDotProduct();
    if (dot > 0.0) rv.set(c, true);
  }
  return rv;
}

bool ChowKernel::compute(std::span<const double> w, std::span<std::int64_t> out) {
  const int n = static_cast<int>(w.size());
  const std::uint64_t half = std::uint64_t{1} << (n - 1);
  const std::size_t num_words = static_cast<std::size_t>((half + 63) / 64);
  positive_.assign(num_words, 0);

  double dot = 0.0;
  double scale = 0.0;
  for (double x : w) {
    dot += x;
    scale += std::abs(x);
  }
  // Each Gray step adds at most 3 * eps * scale of rounding to the running
  // sum; outside this band its sign agrees with direct_dot.
  const double tolerance = static_cast<double>(3 * half + n + 1) *
                           std::numeric_limits<double>::epsilon() * scale;

  // Half-space index h is the challenge word shifted right by one: bit j of
  // h encodes c_{j+2}, and c_1 = +1 throughout.
  std::uint64_t h = 0;
  for (std::uint64_t step = 0;; ++step) {
    double sign_source = dot;
    if (std::abs(dot) <= tolerance) {
      sign_source = direct_dot(w, h << 1);
      if (sign_source == 0.0) return false;
    }
    if (sign_source > 0.0) positive_[h >> 6] |= std::uint64_t{1} << (h & 63);

    if (step + 1 == half) break;
    const int j = std::countr_zero(step + 1);
    h ^= std::uint64_t{1} << j;
    const double delta = 2.0 * w[j + 1];
    dot = ((h >> j) & 1u) != 0 ? dot - delta : dot + delta;
  }

  // With F the set of positive half-space challenges and B_i the challenges
  // with c_i = -1: p_1 = 2|F| - 2^(n-1) and p_i = 2|F| - 4|F & B_i|, using
  // f(-c) = -f(c) for the other half.
  std::int64_t total = 0;
  for (std::uint64_t word : positive_) total += std::popcount(word);
  out[0] = 2 * total - static_cast<std::int64_t>(half);
  for (int i = 1; i < n; ++i) {
    const int j = i - 1;
    std::int64_t in_b = 0;
    if (j < 6) {
      for (std::uint64_t word : positive_) in_b += std::popcount(word & kLowBitMasks[j]);
    } else {
      for (std::size_t k = 0; k < num_words; ++k) {
        if (((k >> (j - 6)) & 1u) != 0) in_b += std::popcount(positive_[k]);
      }
    }
    out[i] = 2 * total - 4 * in_b;
  }
  return true;
}

ChowVector chow(std::span<const double> w) {
  validate_weights(w);
  ChowVector p(w.size());
  ChowKernel kernel;
  if (!kernel.compute(w, p)) throw ZeroDotProduct();
  return p;
}

ChowVector chow_naive(std::span<const double> w) {
  return chow_from_response(response_vector(w));
}

ChowVector chow_from_response(const ResponseVector& rv) {
  const int n = rv.size();
  ChowVector p(n, 0);
  for (std::uint64_t c = 0; c < rv.num_challenges(); ++c) {
    if (!rv.bit(c)) continue;
    for (int i = 0; i < n; ++i) p[i] += ((c >> i) & 1u) != 0 ? -1 : 1;
  }
  return p;
}

// ---------------------------------------------------------------------------
// Group action and canonical forms

WeightVector canonicalize_weights(std::span<const double> w) {
  WeightVector out(w.size());
  std::transform(w.begin(), w.end(), out.begin(), [](double x) { return std::abs(x); });
  std::stable_sort(out.begin(), out.end(), std::greater<>());
  return out;
}

WeightVector act(const GroupElement& g, std::span<const double> w) {
  if (static_cast<int>(w.size()) != g.size()) {
    throw std::invalid_argument("group element and weights differ in size");
  }
  WeightVector out(w.size());
  for (int i = 0; i < g.size(); ++i) out[i] = g.signs()[i] * w[g.sigma()[i]];
  return out;
}

ChowVector act_chow(const GroupElement& g, std::span<const std::int64_t> p) {
  if (static_cast<int>(p.size()) != g.size()) {
    throw std::invalid_argument("group element and Chow vector differ in size");
  }
  ChowVector out(p.size());
  for (int i = 0; i < g.size(); ++i) out[i] = g.signs()[i] * p[g.sigma()[i]];
  return out;
}

bool is_canonical(std::span<const std::int64_t> p) {
  if (p.empty()) return false;
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (p[i] > p[i - 1]) return false;
  }
  return p.back() >= 0;
}

ClassKey canonical_form(std::span<const std::int64_t> p) {
  ClassKey key(p.size());
  std::transform(p.begin(), p.end(), key.begin(),
                 [](std::int64_t x) { return x < 0 ? -x : x; });
  std::sort(key.begin(), key.end(), std::greater<>());
  return key;
}

bool satisfies_chow_invariants(std::span<const std::int64_t> p) {
  const int n = static_cast<int>(p.size());
  if (n < 1 || n > kMaxN) return false;
  const std::int64_t bound = std::int64_t{1} << (n - 1);
  for (std::int64_t x : p) {
    if (x > bound || x < -bound) return false;
    if (n >= 2 && x % 2 != 0) return false;
  }
  return true;
}

OrbitCount orbit_size(std::span<const std::int64_t> key) {
  const int n = static_cast<int>(key.size());
  check_n(n);
  OrbitCount group = OrbitCount{1} << n;
  for (int k = 2; k <= n; ++k) group *= static_cast<unsigned>(k);

  std::map<std::int64_t, int> multiplicity;
  for (std::int64_t x : key) ++multiplicity[x];
  OrbitCount stabilizer = 1;
  for (const auto& [value, m] : multiplicity) {
    for (int k = 2; k <= m; ++k) stabilizer *= static_cast<unsigned>(k);
    if (value == 0) stabilizer <<= m;
  }
  return group / stabilizer;
}

ClassKey dictator_key(int n) {
  check_n(n);
  ClassKey key(n, 0);
  key[0] = std::int64_t{1} << (n - 1);
  return key;
}

}  // namespace pufent
