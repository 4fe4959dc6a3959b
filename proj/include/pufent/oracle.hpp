#pragma once

// Ground truth at small n: exhaustive census of all PUFs by exact linear
// programming, and exact Gaussian class probabilities for n = 3.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "pufent/puf_core.hpp"
#include "pufent/sampler.hpp"

namespace pufent {

inline constexpr int kMaxCensusN = 5;

struct CensusEntry {
  ClassKey key;
  OrbitCount orbit_size = 0;
  /// Number of enumerated PUFs that reduced to `key`; equals orbit_size.
  std::uint64_t members = 0;
  /// The class member whose Chow parameters are `key`.
  ResponseVector representative{1};
};

/// Every self-dual threshold function of n inputs, grouped by canonical
/// class, keys in descending order. Throws UnsupportedN outside [1, 5].
std::vector<CensusEntry> enumerate_pufs(int n);

/// Weights w with f(c) (c . w) > 0 for every challenge, or nullopt when `rv`
/// is not a threshold function. Decided by exact rational LP: maximize t
/// subject to f(c) (c . w) >= t and |w_i| <= 1; threshold iff t > 0.
/// `rv` must be self-dual.
std::optional<WeightVector> threshold_witness(const ResponseVector& rv);

/// threshold_witness() without the unateness screen and perceptron fast
/// path: the LP alone decides.
std::optional<WeightVector> threshold_witness_lp(const ResponseVector& rv);

bool is_threshold(const ResponseVector& rv);

/// Every enumerated PUF of size n, in enumeration order (n <= 4 for the
/// injectivity check, up to 5 supported).
std::vector<ResponseVector> all_pufs(int n);

/// True iff distinct PUFs of size n have distinct Chow parameters.
bool verify_chow_injectivity(int n);

/// Exact class probabilities for n = 3 under i.i.d. N(0,1) weights:
/// the dictator class has probability 6 P(X1 > |X2| + |X3|), integrated
/// numerically to 1e-9; the majority class (2,2,2) takes the rest.
std::map<ClassKey, double, std::greater<>> exact_class_probabilities_n3();

/// sum_f P(f)^2 for class probabilities q_k over classes of size s_k.
double exact_power_sum(const std::map<ClassKey, double, std::greater<>>& classes);

/// Census as a ClassMap whose counts are the class sizes, flagged exact.
ClassMap census_map(int n, const std::vector<CensusEntry>& census);

}  // namespace pufent
